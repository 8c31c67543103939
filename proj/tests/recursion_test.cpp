#include "snrkit/recursion.hpp"

#include <gtest/gtest.h>

namespace snr {
namespace {

constexpr std::uint64_t kBudget = 100000;

TEST(Fix, ConstantTransformerToSuccessor) {
  auto succ = encode_program(programs::successor());
  auto t = encode_program(programs::constant(succ.value));
  auto n = fix(t);
  for (int x = 0; x < 5; ++x) {
    auto r = eval(n, {Natural(x)}, kBudget);
    ASSERT_TRUE(r.halted());
    EXPECT_EQ(r.value, x + 1);
  }
  auto check = check_fixed_point(t, n, {{0}, {1}, {2}, {3}, {4}}, kBudget);
  EXPECT_EQ(check.verdict, FixedPointVerdict::Agree);
  EXPECT_EQ(check.compared, 5u);
}

TEST(Fix, IdentityTransformerIsWellDefined) {
  auto t = encode_program(programs::first_argument());
  auto n = fix(t);
  auto check = check_fixed_point(t, n, {{0}, {3}}, 2000);
  EXPECT_EQ(check.verdict, FixedPointVerdict::Agree);
  EXPECT_EQ(check.transformed, n);
}

TEST(Fix, Quine) {
  auto n = fix(constant_index_transformer());
  auto r = eval(n, {}, kBudget);
  ASSERT_TRUE(r.halted());
  EXPECT_EQ(r.value, n.value);
}

TEST(Fix, ExhaustedTransformerReported) {
  auto t = encode_program(programs::diverge());
  auto check = check_fixed_point(t, fix(t), {{0}}, 500);
  EXPECT_EQ(check.verdict, FixedPointVerdict::ExhaustedTransformer);
}

TEST(Fix, MultiArgumentFixedPoint) {
  auto add = encode_program(programs::add());
  auto t = encode_program(programs::constant(add.value));
  auto n = fix(t);
  auto r = eval(n, {Natural(20), Natural(22)}, kBudget);
  ASSERT_TRUE(r.halted());
  EXPECT_EQ(r.value, 42);
}

}  // namespace
}  // namespace snr
