#pragma once

#include "snrkit/machine.hpp"
#include "snrkit/programs.hpp"
#include "snrkit/specialize.hpp"

#include <cstdint>
#include <vector>

namespace snr {

namespace detail {

/// (x, y1..y7) |-> phi_{phi_t(phi_x(x))}(y1..y7).
inline Program fixed_point_body(const ProgramIndex& t) {
  Program p{T(1, 20), T(1, 21), U(20, 30)};
  p.insert(p.end(), {C(40, t.value), T(30, 41), U(40, 50)});
  p.push_back(T(50, 60));
  for (unsigned i = 2; i <= kCallArity; ++i) p.push_back(T(i, 59 + i));
  p.push_back(U(60, 0));
  return p;
}

/// Program computing x |-> smn(body, (x)).
inline Program specializer_of(const ProgramIndex& body) {
  return {C(10, body.value), T(1, 11), M(10, 0)};
}

}  // namespace detail

/// Kleene fixed point of the total transformer with index t: the returned n
/// satisfies phi_n = phi_{phi_t(n)}. Built as n = s(v) where
/// s(x) = smn(a, (x)), v is an index for s, and a(x, y) runs
/// phi_{phi_t(phi_x(x))}(y).
inline ProgramIndex fix(const ProgramIndex& t) {
  const ProgramIndex body = encode_program(detail::fixed_point_body(t));
  const ProgramIndex s = encode_program(detail::specializer_of(body));
  return smn(body, {s.value});
}

/// Diagonal form of the recursion theorem: an index q such that running q
/// runs `body` on the caller's arguments with q itself loaded in `self_reg`.
/// Built as q = smn(d, (d)) where d first rebuilds smn(d, (d)) natively, then
/// undoes the argument shift and falls into the body. The body may take at
/// most 7 arguments and must leave `self_reg` and R1..R7 to itself.
inline ProgramIndex self_referential(const Program& body, const Natural& self_reg) {
  Assembler d;
  d.copy(1, 10).copy(1, 11).specialize(10, self_reg);
  for (unsigned i = 1; i < kCallArity; ++i) d.copy(i + 1, i);
  d.zero(kCallArity);
  d.append(body);
  const ProgramIndex di = encode_program(d.finish());
  return smn(di, {di.value});
}

/// Index of the transformer x |-> (index of the constant-x function).
inline ProgramIndex constant_index_transformer() {
  return encode_program(detail::specializer_of(encode_program(programs::first_argument())));
}

enum class FixedPointVerdict { Agree, Disagree, ExhaustedTransformer };

struct FixedPointCheck {
  FixedPointVerdict verdict = FixedPointVerdict::Agree;
  ProgramIndex transformed{0};  // phi_t(n) when the transformer halted
  std::size_t compared = 0;     // samples where both sides halted
};

/// Checks phi_n(x) = phi_{phi_t(n)}(x) on the sampled argument tuples. Samples
/// where either side fails to halt within budget are skipped.
inline FixedPointCheck check_fixed_point(const ProgramIndex& t, const ProgramIndex& n,
                                         const std::vector<std::vector<Natural>>& samples,
                                         std::uint64_t budget) {
  FixedPointCheck out;
  auto tn = eval(t, {n.value}, budget);
  if (!tn.halted()) {
    out.verdict = FixedPointVerdict::ExhaustedTransformer;
    return out;
  }
  out.transformed = ProgramIndex{tn.value};
  for (const auto& x : samples) {
    auto lhs = eval(n, x, budget);
    auto rhs = eval(out.transformed, x, budget);
    if (!lhs.halted() || !rhs.halted()) continue;
    ++out.compared;
    if (lhs.value != rhs.value) {
      out.verdict = FixedPointVerdict::Disagree;
      return out;
    }
  }
  return out;
}

}  // namespace snr
