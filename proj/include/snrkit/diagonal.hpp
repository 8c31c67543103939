#pragma once

#include "snrkit/function_oracle.hpp"
#include "snrkit/machine.hpp"

#include <cstdint>
#include <vector>

namespace snr {

/// n <= horizon where phi_n(n) halts within budget at the value f(n).
/// A clean list is necessary, never sufficient, for f being DNR.
inline std::vector<std::uint64_t> dnr_violations(const FunctionOracle& f, std::uint64_t horizon,
                                                 std::uint64_t budget) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = 0; n <= horizon; ++n) {
    auto r = eval(ProgramIndex{n}, {Natural(n)}, budget);
    if (r.halted() && r.value == f(n)) out.push_back(n);
  }
  return out;
}

struct Agreement {
  ProgramIndex index;
  std::uint64_t n;
  friend bool operator==(const Agreement&, const Agreement&) = default;
};

/// Pairs (g, n), n <= horizon, where phi_g(n) halts within budget at f(n).
/// Covers both the SNR (g total) and SNPR (g partial) readings.
inline std::vector<Agreement> agreement_violations(const FunctionOracle& f, const std::vector<ProgramIndex>& gs,
                                                   std::uint64_t horizon, std::uint64_t budget) {
  std::vector<Agreement> out;
  for (const auto& g : gs) {
    for (std::uint64_t n = 0; n <= horizon; ++n) {
      auto r = eval(g, {Natural(n)}, budget);
      if (r.halted() && r.value == f(n)) out.push_back({g, n});
    }
  }
  return out;
}

}  // namespace snr
