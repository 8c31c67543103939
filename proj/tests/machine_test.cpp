#include "snrkit/diagonal.hpp"
#include "snrkit/enumeration.hpp"
#include "snrkit/machine.hpp"
#include "snrkit/order_function.hpp"
#include "snrkit/programs.hpp"
#include "snrkit/specialize.hpp"

#include <gtest/gtest.h>

#include <random>

namespace snr {
namespace {

ProgramIndex idx(const Program& p) { return encode_program(p); }

TEST(Eval, SpecExamples) {
  auto one = eval(idx({S(0)}), {}, 10);
  ASSERT_TRUE(one.halted());
  EXPECT_EQ(one.value, 1);
  EXPECT_EQ(one.steps_used, 1u);

  auto loop = eval(idx({J(0, 0, 0)}), {}, 100);
  EXPECT_FALSE(loop.halted());
  EXPECT_EQ(loop.steps_used, 100u);

  // tau(3) = 8 with 0-based positions.
  auto q = eval(idx({O(1, 0)}), {Natural(3)}, 10, Oracle::string({5, 6, 7, 8}));
  ASSERT_TRUE(q.halted());
  EXPECT_EQ(q.value, 8);
}

TEST(Eval, EmptyProgramOutputsZero) {
  auto r = eval(ProgramIndex{0}, {Natural(42)}, 0);
  ASSERT_TRUE(r.halted());
  EXPECT_EQ(r.value, 0);
  EXPECT_EQ(r.steps_used, 0u);
}

TEST(Eval, OracleOutOfRangeBlocks) {
  auto r = eval(idx({O(1, 0)}), {Natural(4)}, 10, Oracle::string({5, 6, 7, 8}));
  EXPECT_FALSE(r.halted());
  EXPECT_EQ(r.steps_used, 10u);
  EXPECT_FALSE(eval(idx({O(1, 0)}), {Natural(0)}, 10).halted());
}

TEST(Eval, OracleIgnoredWithoutQueries) {
  auto a = eval(idx(programs::add()), {Natural(3), Natural(4)}, 1000);
  auto b = eval(idx(programs::add()), {Natural(3), Natural(4)}, 1000, Oracle::string({1, 2}));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.value, 7);
}

TEST(Eval, JumpPastEndHalts) {
  auto r = eval(idx({S(0), J(0, 0, 99), S(0)}), {}, 10);
  ASSERT_TRUE(r.halted());
  EXPECT_EQ(r.value, 1);
}

TEST(Eval, UniversalCallAndTranspose) {
  auto add = idx(programs::add());
  auto u = idx(programs::universal());
  auto r = eval(u, {add.value, Natural(5), Natural(6)}, 1000);
  ASSERT_TRUE(r.halted());
  EXPECT_EQ(r.value, 11);

  auto succ = idx(programs::successor());
  auto ut = idx(programs::universal_transpose());
  auto t = eval(ut, {Natural(9), succ.value}, 100);
  ASSERT_TRUE(t.halted());
  EXPECT_EQ(t.value, 10);
}

TEST(Eval, CalleeDivergenceExhaustsCaller) {
  auto r = eval(idx(programs::universal()), {idx(programs::diverge()).value}, 500);
  EXPECT_FALSE(r.halted());
  EXPECT_EQ(r.steps_used, 500u);
}

TEST(Eval, CallsSeeTheOracle) {
  auto reader = idx({O(1, 0)});
  auto r = eval(idx(programs::universal()), {reader.value, Natural(1)}, 100, Oracle::string({4, 9}));
  ASSERT_TRUE(r.halted());
  EXPECT_EQ(r.value, 9);
}

TEST(Eval, BudgetMonotonicity) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> pick(0, 20000);
  for (int i = 0; i < 400; ++i) {
    ProgramIndex e{pick(rng)};
    Natural x = i % 7;
    auto small = eval(e, {x}, 50);
    if (!small.halted()) {
      EXPECT_EQ(small.steps_used, 50u);
      continue;
    }
    EXPECT_LE(small.steps_used, 50u);
    for (std::uint64_t b : {51u, 200u, 5000u}) EXPECT_EQ(eval(e, {x}, b), small) << e.value;
  }
}

TEST(Smn, SpecExamples) {
  auto add = idx(programs::add());
  auto r = eval(smn(add, {Natural(3)}), {Natural(4)}, 1000);
  ASSERT_TRUE(r.halted());
  EXPECT_EQ(r.value, 7);

  auto plain = eval(add, {Natural(2), Natural(5)}, 1000);
  auto empty = eval(smn(add, std::span<const Natural>{}), {Natural(2), Natural(5)}, 1000 + kSmnPrefix);
  ASSERT_TRUE(empty.halted());
  EXPECT_EQ(empty.value, plain.value);
  EXPECT_EQ(empty.steps_used, plain.steps_used + kSmnPrefix);

  // r(x) = smn(u, (x)) with phi_u(x, e) = phi_e(x).
  auto u = idx(programs::universal_transpose());
  auto r5 = smn(u, {Natural(5)});
  auto succ = idx(programs::successor());
  auto lhs = eval(r5, {succ.value}, 1000);
  auto rhs = eval(succ, {Natural(5)}, 1000);
  ASSERT_TRUE(lhs.halted());
  EXPECT_EQ(lhs.value, rhs.value);
}

TEST(Smn, LawOnCorpus) {
  std::vector<ProgramIndex> corpus{idx(programs::add()), idx(programs::successor()),
                                   idx(programs::first_argument()), idx(programs::halt_on_evens()),
                                   idx(programs::universal_transpose())};
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> pick(0, 30000);
  for (int i = 0; i < 60; ++i) corpus.push_back(ProgramIndex{pick(rng)});
  std::uniform_int_distribution<int> val(0, 9);
  std::uniform_int_distribution<int> count(0, 3);
  int triples = 0;
  for (const auto& e : corpus) {
    for (int rep = 0; rep < 3; ++rep) {
      std::vector<Natural> fixed(count(rng)), rest(count(rng));
      for (auto& v : fixed) v = val(rng);
      for (auto& v : rest) v = val(rng);
      std::vector<Natural> all = fixed;
      all.insert(all.end(), rest.begin(), rest.end());
      const std::uint64_t budget = 3000;
      auto direct = eval(e, all, budget);
      auto special = eval(smn(e, fixed), rest, budget + kSmnPrefix);
      ++triples;
      ASSERT_EQ(direct.halted(), special.halted()) << e.value;
      if (direct.halted()) {
        EXPECT_EQ(direct.value, special.value);
        EXPECT_EQ(direct.steps_used + kSmnPrefix, special.steps_used);
      }
    }
  }
  EXPECT_GE(triples, 100);
}

TEST(Smn, NativeInstructionMatchesLibrary) {
  auto add = idx(programs::add());
  auto r = eval(idx({M(1, 0)}), {add.value, Natural(12)}, 10);
  ASSERT_TRUE(r.halted());
  EXPECT_EQ(r.value, smn(add, {Natural(12)}).value);
}

TEST(Enumeration, Examples) {
  EXPECT_TRUE(we_enumerate(idx(programs::diverge()), 1000).empty());
  auto all = we_enumerate(ProgramIndex{0}, 12);
  ASSERT_EQ(all.size(), 13u);
  for (std::uint64_t x = 0; x <= 12; ++x) EXPECT_EQ(all[x], x);

  auto evens = idx(programs::halt_on_evens());
  // Entry order by direct simulation of each input.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> oracle;
  for (std::uint64_t x = 0; x <= 60; ++x) {
    auto r = eval(evens, {Natural(x)}, 60);
    if (r.halted()) oracle.emplace_back(std::max(x, r.steps_used), x);
  }
  std::sort(oracle.begin(), oracle.end());
  auto first3 = we_truncate(evens, 60, 2);
  ASSERT_EQ(first3.size(), 3u);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(first3[i], oracle[i].second);
  for (auto x : we_enumerate(evens, 60)) EXPECT_EQ(x % 2, 0u);
}

TEST(Enumeration, StagesArePrefixes) {
  for (int e : {0, 7, 33, 120, 911, 4242}) {
    auto prev = we_enumerate(ProgramIndex{e}, 0);
    for (std::uint64_t s = 1; s < 40; ++s) {
      auto next = we_enumerate(ProgramIndex{e}, s);
      ASSERT_GE(next.size(), prev.size());
      ASSERT_TRUE(std::equal(prev.begin(), prev.end(), next.begin())) << e << " at " << s;
      prev = std::move(next);
    }
  }
  auto evens = idx(programs::halt_on_evens());
  auto prev = we_enumerate(evens, 0);
  for (std::uint64_t s = 1; s < 60; ++s) {
    auto next = we_enumerate(evens, s);
    ASSERT_TRUE(std::equal(prev.begin(), prev.end(), next.begin()));
    prev = std::move(next);
  }
}

TEST(OrderValidate, Examples) {
  auto lin = order_validate(OrderFunction::linear(1, 2), 100);
  EXPECT_TRUE(lin.ok);
  EXPECT_EQ(lin.max_value, 102);
  EXPECT_TRUE(lin.increased);

  auto flat = order_validate(OrderFunction::constant(2), 100);
  EXPECT_TRUE(flat.ok);
  EXPECT_FALSE(flat.increased);
  EXPECT_EQ(flat.reason, "no increase on horizon");

  auto low = order_validate(OrderFunction::table({1, 5, 6}), 10);
  EXPECT_FALSE(low.ok);
  EXPECT_EQ(low.failing_n, 0u);

  auto dip = order_validate(OrderFunction::table({2, 3, 9, 4}), 10);
  EXPECT_FALSE(dip.ok);
  EXPECT_EQ(dip.failing_n, 2u);
}

TEST(OrderFunction, ParsesSpecs) {
  EXPECT_EQ(OrderFunction::parse("const:3")(100), 3);
  EXPECT_EQ(OrderFunction::parse("linear:2,2")(5), 12);
  EXPECT_EQ(OrderFunction::parse("log2:2")(0), 2);
  EXPECT_EQ(OrderFunction::parse("log2:2")(7), 5);
  EXPECT_EQ(OrderFunction::parse("table:2,4")(9), 4);
  auto succ = idx(programs::successor());
  EXPECT_EQ(OrderFunction::parse("program:" + succ.value.str() + ":100")(41), 42);
  EXPECT_THROW(OrderFunction::parse("cubic:1"), std::invalid_argument);
  EXPECT_THROW(OrderFunction::parse("const"), std::invalid_argument);
  EXPECT_THROW(OrderFunction::parse("program:" + idx(programs::diverge()).value.str() + ":10")(0),
               std::runtime_error);
}

TEST(DiagChecks, ZeroFunctionAgainstEnumeration) {
  const std::uint64_t horizon = 300, budget = 200;
  FunctionOracle zero([](const Natural&) { return Natural(0); });
  std::vector<std::uint64_t> expected;
  for (std::uint64_t n = 0; n <= horizon; ++n) {
    auto r = eval(ProgramIndex{n}, {Natural(n)}, budget);
    if (r.halted() && r.value == 0) expected.push_back(n);
  }
  EXPECT_EQ(dnr_violations(zero, horizon, budget), expected);
}

TEST(DiagChecks, ExplicitDiagonalizationIsClean) {
  const std::uint64_t budget = 300;
  FunctionOracle diag([&](const Natural& n) {
    auto r = eval(ProgramIndex{n}, {n}, budget);
    return r.halted() ? Natural(r.value + 1) : Natural(0);
  });
  EXPECT_TRUE(dnr_violations(diag, 500, budget).empty());
}

TEST(DiagChecks, IdentityAgreesEverywhere) {
  FunctionOracle id([](const Natural& n) { return n; });
  auto g = idx(programs::first_argument());
  auto v = agreement_violations(id, {g}, 20, 100);
  ASSERT_EQ(v.size(), 21u);
  for (std::uint64_t n = 0; n <= 20; ++n) EXPECT_EQ(v[n].n, n);
}

TEST(FunctionOracle, LogsUseAndMemoizes) {
  int calls = 0;
  FunctionOracle f([&](const Natural& x) {
    ++calls;
    return x * 2;
  });
  EXPECT_EQ(f(3), 6);
  EXPECT_EQ(f(3), 6);
  EXPECT_EQ(f(10), 20);
  EXPECT_EQ(calls, 2);
  EXPECT_EQ(f.queries(), (std::set<Natural>{3, 10}));
}

}  // namespace
}  // namespace snr
