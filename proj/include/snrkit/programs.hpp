#pragma once

#include "snrkit/assembler.hpp"
#include "snrkit/program.hpp"

namespace snr::programs {

/// x |-> x (returns R1).
inline Program first_argument() { return {T(1, 0)}; }

inline Program constant(Natural k) { return {C(0, std::move(k))}; }

inline Program successor() { return {T(1, 0), S(0)}; }

/// (x, y) |-> x + y.
inline Program add() {
  Assembler a;
  auto loop = a.label();
  auto done = a.label();
  a.copy(1, 0).zero(3);
  a.bind(loop).jump_eq(3, 2, done).succ(0).succ(3).jump(loop);
  a.bind(done);
  return a.finish();
}

inline Program diverge() { return {J(0, 0, 0)}; }

/// Halts with 0 on even inputs, diverges on odd ones.
inline Program halt_on_evens() {
  Assembler a;
  auto loop = a.label();
  a.zero(2);
  a.bind(loop);
  auto even = a.label();
  a.jump_eq(2, 1, even).succ(2);
  auto odd = a.label();
  a.jump_eq(2, 1, odd).succ(2).jump(loop);
  a.bind(odd).diverge();
  a.bind(even).zero(0);
  return a.finish();
}

/// 1 on even inputs, 0 on odd ones; about 2x steps.
inline Program evens_decider() {
  Assembler a;
  auto loop = a.label(), even = a.label(), odd = a.label();
  a.zero(2);
  a.bind(loop).jump_eq(2, 1, even).succ(2).jump_eq(2, 1, odd).succ(2).jump(loop);
  a.bind(odd).zero(0).halt();
  a.bind(even).zero(0).succ(0);
  return a.finish();
}

/// evens_decider after a delay of about 3 * width * (x + 1) steps.
inline Program slow_evens_decider(std::uint64_t width) {
  Assembler a;
  auto outer = a.label(), inner = a.label(), go = a.label(), next = a.label();
  a.zero(3).load(5, width);
  a.bind(outer).zero(4);
  a.bind(inner).jump_eq(4, 5, next).succ(4).jump(inner);
  a.bind(next).jump_eq(3, 1, go).succ(3).jump(outer);
  a.bind(go).append(evens_decider());
  return a.finish();
}

/// (x, e) |-> phi_e(x); specializing x gives the transpose index r(x) with
/// phi_{r(x)}(e) = phi_e(x).
inline Program universal_transpose() { return {T(2, 10), T(1, 11), U(10, 0)}; }

/// (e, x1..x7) |-> phi_e(x1..x7).
inline Program universal() {
  Program p{T(1, 20)};
  for (unsigned i = 2; i <= kCallArity; ++i) p.push_back(T(i, 19 + i));
  p.push_back(U(20, 0));
  return p;
}

}  // namespace snr::programs
