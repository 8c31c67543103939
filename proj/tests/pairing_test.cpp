#include "snrkit/pairing.hpp"

#include <gtest/gtest.h>

namespace snr {
namespace {

// Inverse by search over pair(), independent of the closed-form unpair.
std::pair<Natural, Natural> unpair_by_search(const Natural& z) {
  for (Natural s = 0; s <= z; ++s) {
    for (Natural y = 0; y <= s; ++y) {
      if (pair(s - y, y) == z) return {s - y, y};
    }
  }
  ADD_FAILURE() << "no preimage for " << z;
  return {0, 0};
}

TEST(Pairing, Examples) {
  EXPECT_EQ(pair(0, 0), 0);
  EXPECT_EQ(pair(0, 1), 2);
  EXPECT_EQ(unpair_by_search(4), std::make_pair(Natural(1), Natural(1)));
  EXPECT_EQ(unpair(4), std::make_pair(Natural(1), Natural(1)));
}

TEST(Pairing, ClosedFormMatchesSearch) {
  for (int z = 0; z < 300; ++z) EXPECT_EQ(unpair(z), unpair_by_search(z)) << z;
}

TEST(Pairing, BijectionUpTo10k) {
  for (int z = 0; z <= 10000; ++z) {
    auto [x, y] = unpair(z);
    ASSERT_EQ(pair(x, y), z);
  }
}

TEST(Pairing, MonotoneInEachArgument) {
  for (int x = 0; x < 40; ++x) {
    for (int y = 0; y < 40; ++y) {
      EXPECT_LT(pair(x, y), pair(x + 1, y));
      EXPECT_LT(pair(x, y), pair(x, y + 1));
    }
  }
}

TEST(Pairing, LargeValuesRoundTrip) {
  Natural x = Natural(1) << 300;
  Natural y = (Natural(1) << 257) + 12345;
  auto [a, b] = unpair(pair(x, y));
  EXPECT_EQ(a, x);
  EXPECT_EQ(b, y);
}

TEST(Tupling, Examples) {
  EXPECT_EQ(tuple_decode(1, 7), std::vector<Natural>{7});
  EXPECT_EQ(tuple_decode(3, 0), (std::vector<Natural>{0, 0, 0}));
  // pair(1,1) = 4, confirmed by the search inverse.
  EXPECT_EQ(unpair_by_search(4), std::make_pair(Natural(1), Natural(1)));
  EXPECT_EQ(tuple_encode(2, std::vector<Natural>{1, 1}), 4);
}

TEST(Tupling, BijectionLaws) {
  for (std::size_t n = 1; n <= 4; ++n) {
    for (int m = 0; m <= 1000; ++m) {
      auto t = tuple_decode(n, m);
      ASSERT_EQ(t.size(), n);
      ASSERT_EQ(tuple_encode(n, t), m) << "n=" << n << " m=" << m;
      for (std::size_t i = 0; i < n; ++i) ASSERT_EQ(project(n, i, m), t[i]);
    }
  }
}

TEST(Tupling, RecursiveShape) {
  for (int m = 0; m < 200; ++m) {
    auto [a, b] = unpair(m);
    auto t3 = tuple_decode(3, m);
    auto t2 = tuple_decode(2, b);
    EXPECT_EQ(t3[0], a);
    EXPECT_EQ(t3[1], t2[0]);
    EXPECT_EQ(t3[2], t2[1]);
  }
}

TEST(Tupling, RejectsBadArity) {
  EXPECT_THROW(tuple_decode(0, 5), std::invalid_argument);
  EXPECT_THROW(tuple_encode(0, std::vector<Natural>{}), std::invalid_argument);
  EXPECT_THROW(project(3, 3, 5), std::invalid_argument);
  EXPECT_THROW(tuple_encode(2, std::vector<Natural>{1}), std::invalid_argument);
}

}  // namespace
}  // namespace snr
