#pragma once

#include "snrkit/program.hpp"

#include <span>
#include <stdexcept>

namespace snr {

/// Number of instructions smn prepends; eval budgets shift by this much.
inline constexpr std::size_t kSmnPrefix = kCallArity;

/// s-m-n specialization by code prepending. The prefix shifts R1..R_{8-j} up
/// by j, loads the fixed values into R1..Rj, and the original body follows
/// with jump targets relocated. The prefix always has kSmnPrefix instructions
/// and its first instruction determines j, so smn is injective in (e, fixed).
inline ProgramIndex smn(const ProgramIndex& e, std::span<const Natural> fixed) {
  const std::size_t j = fixed.size();
  if (j > kCallArity) throw std::invalid_argument("smn: too many fixed arguments");
  Program out;
  out.reserve(kSmnPrefix);
  for (std::size_t i = kCallArity - j; i >= 1; --i) out.push_back(T(i, i + j));
  for (std::size_t t = 0; t < j; ++t) out.push_back(C(t + 1, fixed[t]));
  for (auto ins : decode_program(e)) {
    if (ins.op == Op::Jump) ins.arg[2] += kSmnPrefix;
    out.push_back(std::move(ins));
  }
  return encode_program(out);
}

inline ProgramIndex smn(const ProgramIndex& e, std::initializer_list<Natural> fixed) {
  return smn(e, std::span<const Natural>(fixed.begin(), fixed.size()));
}

}  // namespace snr
