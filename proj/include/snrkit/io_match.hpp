#pragma once

#include "snrkit/assembler.hpp"
#include "snrkit/function_oracle.hpp"
#include "snrkit/machine.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace snr {

// psi(x)[s] converges when x <= s and psi halts on x within s steps, the same
// convention as W_{e,s}.

struct MatchStage {
  std::uint64_t n;
  std::uint64_t h_esc;                 // hEsc(n), clamped to the step cap
  std::optional<std::uint64_t> g;      // g(n), if defined within the table
  std::vector<std::uint64_t> added;    // dom(A)
  std::uint64_t pad;                   // y, mapped to 0
  std::uint64_t domain_size;           // |dom(j_{n+1})|
  std::uint64_t matches;               // |{x in table : j_{n+1}(x) = f(x)}|
};

struct MatchTrace {
  std::vector<MatchStage> stages;
  std::map<std::uint64_t, Natural> j;  // final j_N
};

/// Builds j_0 = {} and j_{n+1} = j_n u A u {(y, 0)} for n < stages, where
/// A = {(x, psi(x)) : x not in dom(j_n), psi(x)[hEsc(n)] converges} and y is
/// the least number outside dom(j_n u A). g(n) is the least s with at least
/// n+1 table points x having psi(x)[s] = f(x). Stage sizes are capped at
/// step_cap, which also bounds the x scanned.
inline MatchTrace io_match_construct(const std::vector<Natural>& f, const ProgramIndex& psi,
                                   const FunctionOracle& h_esc, std::uint64_t stages, std::uint64_t step_cap) {
  // Convergence stage of psi(x): max(x, steps), or none within the cap.
  std::vector<std::optional<std::uint64_t>> at(step_cap + 1);
  std::vector<Natural> value(step_cap + 1);
  for (std::uint64_t x = 0; x <= step_cap; ++x) {
    auto r = eval(psi, {Natural(x)}, step_cap);
    if (r.halted() && std::max(x, r.steps_used) <= step_cap) {
      at[x] = std::max(x, r.steps_used);
      value[x] = r.value;
    }
  }
  std::vector<std::uint64_t> match_stages;
  for (std::uint64_t x = 0; x < f.size() && x <= step_cap; ++x) {
    if (at[x] && value[x] == f[x]) match_stages.push_back(*at[x]);
  }
  std::sort(match_stages.begin(), match_stages.end());

  MatchTrace trace;
  auto& j = trace.j;
  for (std::uint64_t n = 0; n < stages; ++n) {
    MatchStage st{n, clamp_u64(h_esc(n)), std::nullopt, {}, 0, 0, 0};
    st.h_esc = std::min(st.h_esc, step_cap);
    if (n < match_stages.size()) st.g = match_stages[n];
    for (std::uint64_t x = 0; x <= st.h_esc; ++x) {
      if (!j.contains(x) && at[x] && *at[x] <= st.h_esc) st.added.push_back(x);
    }
    for (auto x : st.added) j.emplace(x, value[x]);
    std::uint64_t y = 0;
    while (j.contains(y)) ++y;
    st.pad = y;
    j.emplace(y, 0);
    st.domain_size = j.size();
    for (std::uint64_t x = 0; x < f.size(); ++x) {
      auto it = j.find(x);
      if (it != j.end() && it->second == f[x]) ++st.matches;
    }
    trace.stages.push_back(std::move(st));
  }
  return trace;
}

struct MatchViolation {
  std::uint64_t n;
  bool domain_not_growing;
  bool too_few_matches;
};

/// Stages where dom(j) fails to grow, or where hEsc(n) >= g(n) but j_{n+1}
/// matches f at fewer than n+1 points.
inline std::vector<MatchViolation> match_violations(const MatchTrace& trace) {
  std::vector<MatchViolation> out;
  std::uint64_t prev = 0;
  for (const auto& st : trace.stages) {
    MatchViolation v{st.n, st.domain_size <= prev, st.g && st.h_esc >= *st.g && st.matches < st.n + 1};
    if (v.domain_not_growing || v.too_few_matches) out.push_back(v);
    prev = st.domain_size;
  }
  return out;
}

/// psi that computes the table in time independent of x (every entry is
/// compared on every run); 0 beyond the table.
inline Program table_scan_program(const std::vector<Natural>& table) {
  constexpr unsigned kI = 10, kOut = 11;
  Assembler p;
  p.zero(kOut).zero(kI);
  for (const auto& v : table) {
    auto skip = p.label(), hit = p.label();
    p.jump_eq(kI, 1, hit).jump(skip);
    p.bind(hit).load(kOut, v);
    p.bind(skip).succ(kI);
  }
  p.copy(kOut, 0);
  return p.finish();
}

}  // namespace snr
