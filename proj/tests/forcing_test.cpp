#include "snrkit/forcing.hpp"

#include <gtest/gtest.h>

namespace snr::forcing {
namespace {

bool has_oracle_instruction(const ProgramIndex& q) {
  for (const auto& ins : decode_program(q))
    if (ins.op == Op::Oracle) return true;
  return false;
}

TEST(QIndex, SelfReferenceAboveStem) {
  const BoundedString sigma{1, 0, 2};
  const auto id = encode_program(programs::first_argument());
  const auto q = q_index(sigma, id.value, 2);
  EXPECT_TRUE(has_oracle_instruction(q));
  auto r = eval(q, {}, 100000, Oracle::string(std::vector<Natural>{1, 0, 2, 5}));
  ASSERT_TRUE(r.halted());
  EXPECT_EQ(r.value, q.value);
  EXPECT_FALSE(eval(q, {}, 100000, Oracle::string(std::vector<Natural>{1, 1, 2})).halted());
  EXPECT_FALSE(eval(q, {}, 100000, Oracle::string(std::vector<Natural>{1, 0})).halted());
  EXPECT_FALSE(eval(q, {}, 100000).halted());
}

TEST(QIndex, DistinctParameters) {
  EXPECT_NE(q_index({0}, 1, 2), q_index({1}, 1, 2));
  EXPECT_NE(q_index({0}, 1, 2), q_index({0}, 2, 2));
  EXPECT_NE(q_index({0}, 1, 2), q_index({0}, 1, 3));
}

TEST(Pi, BaseCaseAndMonotone) {
  auto h = OrderFunction::linear(2, 2);
  EXPECT_EQ(compute_pi(h, 0, 1000), q_index({}, 0, 0).value);
  Natural prev = 0;
  for (std::uint64_t n = 0; n <= 3; ++n) {
    auto p = compute_pi(h, n, 1000);
    EXPECT_GE(p, prev) << n;
    prev = p;
  }
  EXPECT_THROW(compute_pi(h, 4, 100), std::length_error);
}

ForcingConfig base() {
  ForcingConfig cfg;
  cfg.h = OrderFunction::linear(2, 2);
  cfg.g = OrderFunction::constant(2);
  cfg.stages = 6;
  cfg.oracle_budget = 1000;
  return cfg;
}

void expect_invariants(const ForcingConfig& cfg, const ForcingTranscript& t) {
  ASSERT_FALSE(t.aborted) << *t.aborted;
  ASSERT_EQ(t.stages.size(), cfg.stages);
  for (const auto& st : t.stages) EXPECT_TRUE(st.certificate_ok);
  auto check = verify_transcript(cfg, t);
  EXPECT_TRUE(check.ok()) << (check.problems.empty() ? "" : check.problems.front());
}

TEST(Forcing, DefaultRun) {
  auto cfg = base();
  auto t = forcing_run(cfg);
  expect_invariants(cfg, t);
  EXPECT_EQ(t.stages[0].sigma.size(), 2u);
}

TEST(Forcing, ZeroBudgetTakesOtherwise) {
  auto cfg = base();
  cfg.oracle_budget = 0;
  auto t = forcing_run(cfg);
  expect_invariants(cfg, t);
  for (const auto& st : t.stages) {
    EXPECT_EQ(st.branch, "otherwise");
    EXPECT_EQ(st.condition, st.sigma);
  }
  EXPECT_EQ(t.components.size(), cfg.stages);
}

TEST(Forcing, OracleReadingMachines) {
  auto cfg = base();
  // Phi(x) = tau(x), and Phi(x) = tau(tau(0)).
  cfg.machines = {encode_program({O(1, 0)}), encode_program({O(0, 2), O(2, 0)})};
  auto t = forcing_run(cfg);
  expect_invariants(cfg, t);
  for (const auto& st : t.stages) {
    for (std::size_t i = 0; i < st.condition.size(); ++i) EXPECT_LT(st.condition[i], 2 * i + 2);
  }
}

TEST(Forcing, UniverseCapAborts) {
  auto cfg = base();
  cfg.use_depth = 3;
  cfg.universe_cap = 50;
  auto t = forcing_run(cfg);
  ASSERT_TRUE(t.aborted);
  EXPECT_NE(t.aborted->find("universe cap"), std::string::npos);
}

TEST(Forcing, TamperedTranscriptFails) {
  auto cfg = base();
  cfg.stages = 3;
  auto t = forcing_run(cfg);
  ASSERT_FALSE(t.aborted);
  auto bad = t;
  bad.stages[1].condition = {};
  EXPECT_FALSE(verify_transcript(cfg, bad).extension_chain);
  bad = t;
  bad.stages[2].certificate.digest ^= 1;
  EXPECT_FALSE(verify_transcript(cfg, bad).certified_smallness);
}

}  // namespace
}  // namespace snr::forcing
