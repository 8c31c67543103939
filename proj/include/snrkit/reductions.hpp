#pragma once

#include "snrkit/assembler.hpp"
#include "snrkit/function_oracle.hpp"
#include "snrkit/machine.hpp"
#include "snrkit/order_function.hpp"
#include "snrkit/pairing.hpp"
#include "snrkit/programs.hpp"
#include "snrkit/specialize.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace snr {

/// A Turing reduction with an explicit use: apply consults the oracle only at
/// arguments in use(input).
struct Reduction {
  std::string name;
  std::function<Natural(const FunctionOracle&, const Natural&)> apply;
  std::function<std::set<Natural>(const Natural&)> use;
  std::map<std::string, std::string> metadata;
};

/// Raised when an oracle answer breaks the bound a reduction relies on.
class OracleContractError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Seeded oracles for property runs.
// ---------------------------------------------------------------------------

/// Deterministic 64-bit hash of (seed, x).
inline std::uint64_t seeded_hash(std::uint64_t seed, const Natural& x) {
  std::uint64_t h = 1469598103934665603ull ^ seed;
  for (char ch : x.str()) {
    h ^= static_cast<unsigned char>(ch);
    h *= 1099511628211ull;
  }
  // splitmix64 finalizer
  h += 0x9e3779b97f4a7c15ull;
  h = (h ^ (h >> 30)) * 0xbf58476d1ce4e5b9ull;
  h = (h ^ (h >> 27)) * 0x94d049bb133111ebull;
  return h ^ (h >> 31);
}

/// eval(e, (x), budget) memoized process-wide. Property runs re-ask the same
/// diagonal questions under many seeds.
inline EvalOutcome memo_eval(const Natural& e, const Natural& x, std::uint64_t budget) {
  static std::mutex mu;
  static std::map<std::tuple<Natural, Natural, std::uint64_t>, EvalOutcome> memo;
  auto key = std::make_tuple(e, x, budget);
  {
    std::lock_guard lock(mu);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
  }
  auto out = eval(ProgramIndex{e}, {x}, budget);
  std::lock_guard lock(mu);
  if (memo.size() > (1u << 16)) memo.clear();
  memo.emplace(std::move(key), out);
  return out;
}

/// Pseudo-random f with f(i) < bound(i), uniform given the seed.
inline FunctionOracle random_bounded_oracle(std::uint64_t seed, std::function<Natural(const Natural&)> bound) {
  return FunctionOracle([seed, bound = std::move(bound)](const Natural& i) {
    Natural b = bound(i);
    if (b == 0) return Natural(0);
    return Natural(seeded_hash(seed, i)) % b;
  });
}

/// Pseudo-random f with f(i) < bound(i) and f(i) != phi_i(i) whenever that
/// halts within check_budget (and bound(i) >= 2 leaves room).
inline FunctionOracle random_dnr_oracle(std::uint64_t seed, std::function<Natural(const Natural&)> bound,
                                        std::uint64_t check_budget) {
  return FunctionOracle([seed, bound = std::move(bound), check_budget](const Natural& i) {
    Natural b = bound(i);
    if (b == 0) return Natural(0);
    auto diag = memo_eval(i, i, check_budget);
    Natural r(seeded_hash(seed, i));
    if (!diag.halted() || diag.value >= b || b < 2) return Natural(r % b);
    Natural v = r % (b - 1);
    return v >= diag.value ? Natural(v + 1) : v;
  });
}

// ---------------------------------------------------------------------------
// Avoiding several values at once.
// ---------------------------------------------------------------------------

namespace detail {

/// (e, _) |-> base-a digit x of phi_e(x) when phi_e(x) < a^c, else 0.
/// The value is located by counting up with a c-digit odometer, so the cost
/// after the call is O(c * a^c) steps.
inline Program digit_program(std::uint64_t a, std::uint64_t c, std::uint64_t x) {
  constexpr unsigned kE = 10, kV = 20, kK = 21, kCap = 22, kA = 23, kD = 30;
  Natural cap = ipow(Natural(a), c);
  Assembler p;
  p.copy(1, kE).load(kE + 1, x).call(kE, kV);
  p.load(kCap, cap).load(kA, a).zero(kK);
  for (std::uint64_t i = 0; i < c; ++i) p.zero(kD + i);
  auto loop = p.label(), done = p.label(), big = p.label();
  p.bind(loop).jump_eq(kK, kV, done).jump_eq(kK, kCap, big).succ(kK);
  for (std::uint64_t i = 0; i < c; ++i) {
    auto carry = p.label();
    p.succ(kD + i).jump_eq(kD + i, kA, carry).jump(loop);
    p.bind(carry).zero(kD + i);
  }
  p.jump(loop);
  p.bind(done).copy(kD + x, 0).halt();
  p.bind(big).zero(0);
  return p.finish();
}


}  // namespace detail

/// Index s(e, x) of the constant function returning base-a digit x of phi_e(x).
class AvoidMultiple {
 public:
  AvoidMultiple(std::uint64_t a, std::uint64_t c) : a_(a), c_(c) {
    if (a < 2) throw std::invalid_argument("avoid_multiple: a must be >= 2");
    if (c == 0) throw std::invalid_argument("avoid_multiple: c must be > 0");
    if (c > 64) throw std::invalid_argument("avoid_multiple: c too large");
    for (std::uint64_t x = 0; x < c; ++x) digit_.push_back(encode_program(detail::digit_program(a, c, x)));
  }

  std::uint64_t a() const { return a_; }
  std::uint64_t c() const { return c_; }
  Natural output_bound() const { return ipow(Natural(a_), c_); }

  ProgramIndex s(const Natural& e, std::uint64_t x) const {
    std::lock_guard lock(cache_->mu);
    auto key = std::make_pair(e, x);
    if (auto it = cache_->s.find(key); it != cache_->s.end()) return it->second;
    return cache_->s.emplace(key, smn(digit_.at(x), {e})).first->second;
  }

  std::set<Natural> use(const Natural& e) const {
    std::set<Natural> out;
    for (std::uint64_t x = 0; x < c_; ++x) out.insert(s(e, x).value);
    return out;
  }

  /// g(e) = sum_x f(s(e,x)) * a^x.
  Natural apply(const FunctionOracle& f, const Natural& e) const {
    Natural g = 0, place = 1;
    for (std::uint64_t x = 0; x < c_; ++x) {
      const auto idx = s(e, x).value;
      Natural d = f(idx);
      if (d >= a_) {
        throw OracleContractError("oracle value " + d.str() + " >= " + std::to_string(a_) + " at a queried index");
      }
      g += d * place;
      place *= a_;
    }
    return g;
  }

  /// Steps phi_{s(e,x)}(s(e,x)) needs beyond those of phi_e(x).
  std::uint64_t overhead_steps() const {
    return 64 + 4 * c_ + (4 + 3 * c_) * clamp_u64(output_bound());
  }

  Reduction reduction() const {
    auto self = std::make_shared<AvoidMultiple>(*this);
    Reduction r;
    r.name = "avoid_multiple";
    r.apply = [self](const FunctionOracle& f, const Natural& e) { return self->apply(f, e); };
    r.use = [self](const Natural& e) { return self->use(e); };
    r.metadata = {{"a", std::to_string(a_)}, {"c", std::to_string(c_)}, {"output_bound", output_bound().str()}};
    return r;
  }

 private:
  struct Cache {
    std::mutex mu;
    std::map<std::pair<Natural, std::uint64_t>, ProgramIndex> s;
  };
  std::uint64_t a_, c_;
  std::vector<ProgramIndex> digit_;
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

inline Reduction avoid_multiple(std::uint64_t a, std::uint64_t c) { return AvoidMultiple(a, c).reduction(); }

struct AvoidanceFailure {
  Natural e;
  std::uint64_t x;
  Natural value;
};

/// x < c where phi_e(x) halts within budget at exactly g(e).
inline std::vector<AvoidanceFailure> avoidance_failures(const AvoidMultiple& am, const FunctionOracle& f,
                                                        const Natural& e, std::uint64_t budget) {
  std::vector<AvoidanceFailure> out;
  const Natural g = am.apply(f, e);
  for (std::uint64_t x = 0; x < am.c(); ++x) {
    auto r = memo_eval(e, x, budget);
    if (r.halted() && r.value == g) out.push_back({e, x, r.value});
  }
  return out;
}

// ---------------------------------------------------------------------------
// DNR_g computes SNPR_h, given h.
// ---------------------------------------------------------------------------

struct Interval {
  std::uint64_t n;
  std::uint64_t lo, hi;  // x in [lo, hi]
  Natural m;             // max use over the interval
};

struct SnprFromH {
  OrderFunction g;
  Reduction F;
  std::vector<Interval> intervals;
  std::vector<Natural> thresholds;  // running max of m_n
};

/// Required bound for interval n: avoiding n values with n-bounded digits.
inline Natural interval_requirement(std::uint64_t n) { return ipow(Natural(n), n); }

/// Transpose index r(x) with phi_{r(x)}(e) = phi_e(x).
inline ProgramIndex transpose_index(const Natural& x) {
  static const ProgramIndex u = encode_program(programs::universal_transpose());
  static std::mutex mu;
  static std::map<Natural, ProgramIndex> memo;
  std::lock_guard lock(mu);
  if (auto it = memo.find(x); it != memo.end()) return it->second;
  return memo.emplace(x, smn(u, {x})).first->second;
}

inline SnprFromH dnr_to_snpr_given_h(const OrderFunction& h, std::uint64_t horizon) {
  // x_n for n >= 2 while it stays within the horizon.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> starts;  // (n, x_n)
  std::uint64_t x = 0;
  for (std::uint64_t n = 2;; ++n) {
    const Natural need = interval_requirement(n);
    while (x <= horizon && h(x) < need) ++x;
    if (x > horizon) break;
    starts.push_back({n, x});
  }
  if (starts.empty()) {
    throw std::invalid_argument("horizon " + std::to_string(horizon) + " too small to define x_2 (needs h(x) >= 4)");
  }

  auto ams = std::make_shared<std::map<std::uint64_t, AvoidMultiple>>();
  SnprFromH out{OrderFunction::constant(2), {}, {}, {}};
  Natural running = 0;
  for (std::size_t i = 0; i < starts.size(); ++i) {
    const auto [n, lo] = starts[i];
    const std::uint64_t hi = i + 1 < starts.size() ? starts[i + 1].second - 1 : horizon;
    if (hi < lo) continue;  // empty interval: h jumped past several requirements
    auto& am = ams->try_emplace(n, n, n).first->second;
    Natural m = 0;
    for (std::uint64_t y = lo; y <= hi; ++y) {
      for (const auto& q : am.use(transpose_index(y).value)) m = std::max(m, q);
    }
    running = std::max(running, m);
    out.intervals.push_back({n, lo, hi, m});
    out.thresholds.push_back(running);
  }

  auto intervals = std::make_shared<std::vector<Interval>>(out.intervals);
  auto thresholds = std::make_shared<std::vector<Natural>>(out.thresholds);
  auto locate = [intervals](const Natural& y) -> const Interval* {
    for (const auto& iv : *intervals) {
      if (y >= iv.lo && y <= iv.hi) return &iv;
    }
    return nullptr;
  };

  // g(y) = n on (M_{n-1}, M_n], 2 up to the first threshold, and one more
  // than the last interval beyond the last threshold.
  std::string gname = "step:h=" + h.name() + ",horizon=" + std::to_string(horizon);
  out.g = OrderFunction(gname, [intervals, thresholds](const Natural& y) {
    for (std::size_t i = 0; i < thresholds->size(); ++i) {
      if (y <= (*thresholds)[i]) return Natural(std::max<std::uint64_t>(2, (*intervals)[i].n));
    }
    return Natural(intervals->back().n + 1);
  });

  out.F.name = "dnr_to_snpr_given_h";
  out.F.apply = [ams, locate](const FunctionOracle& f, const Natural& y) -> Natural {
    const Interval* iv = locate(y);
    if (!iv) return 0;
    return ams->at(iv->n).apply(f, transpose_index(y).value);
  };
  out.F.use = [ams, locate](const Natural& y) -> std::set<Natural> {
    const Interval* iv = locate(y);
    if (!iv) return {};
    return ams->at(iv->n).use(transpose_index(y).value);
  };
  out.F.metadata = {{"h", h.name()},
                    {"horizon", std::to_string(horizon)},
                    {"interval_bound", "n^n"},
                    {"intervals", std::to_string(out.intervals.size())}};
  return out;
}

// ---------------------------------------------------------------------------
// DNR_g computes SNPR_h, given g.
// ---------------------------------------------------------------------------

namespace detail {

/// Emits (a, b) = unpair(R_src) into R_a, R_b by walking the Cantor diagonals
/// (d = a + b, b) from code 0; uses R_scratch .. R_scratch+2.
inline void emit_unpair(Assembler& p, unsigned src, unsigned a, unsigned b, unsigned scratch) {
  const unsigned d = scratch, k = scratch + 1, t = scratch + 2;
  auto walk = p.label(), next = p.label(), fin = p.label(), sub = p.label(), out = p.label();
  p.zero(d).zero(b).zero(k);
  p.bind(walk).jump_eq(k, src, fin).succ(k).jump_eq(b, d, next).succ(b).jump(walk);
  p.bind(next).succ(d).zero(b).jump(walk);
  p.bind(fin).zero(a).copy(b, t);
  p.bind(sub).jump_eq(t, d, out).succ(t).succ(a).jump(sub);
  p.bind(out);
}

/// (e, n, _) |-> pi^n_e(tau_n(phi_e(n))).
inline Program projection_program() {
  constexpr unsigned kV = 20, kC = 30, kE1 = 32, kA = 40, kB = 41, kScratch = 50;
  Assembler p;
  p.copy(1, 10).copy(2, 11).call(10, kV);
  auto loop = p.label(), after = p.label(), last = p.label();
  p.zero(kC);
  p.bind(loop).jump_eq(kC, 1, after);
  emit_unpair(p, kV, kA, kB, kScratch);
  p.copy(kB, kV).succ(kC).jump(loop);
  p.bind(after).copy(1, kE1).succ(kE1).jump_eq(kE1, 2, last);
  emit_unpair(p, kV, kA, kB, kScratch);
  p.copy(kA, 0).halt();
  p.bind(last).copy(kV, 0);
  return p.finish();
}

}  // namespace detail

/// r(e, n): index of the function that, on any input, outputs
/// pi^n_e(tau_n(phi_e(n))).
inline ProgramIndex projection_index(const Natural& e, const Natural& n) {
  static const ProgramIndex p = encode_program(detail::projection_program());
  static std::mutex mu;
  static std::map<std::pair<Natural, Natural>, ProgramIndex> memo;
  std::lock_guard lock(mu);
  auto key = std::make_pair(e, n);
  if (auto it = memo.find(key); it != memo.end()) return it->second;
  return memo.emplace(key, smn(p, {e, n})).first->second;
}

struct SnprFromG {
  OrderFunction h;
  Reduction j;
  std::vector<Natural> h_raw;  // index n, n <= horizon (h_raw[0] = 0)
};

inline SnprFromG dnr_to_snpr_given_g(const OrderFunction& g, std::uint64_t horizon) {
  SnprFromG out{OrderFunction::constant(2), {}, {}};
  out.h_raw.push_back(0);
  std::vector<Natural> emitted{2};
  for (std::uint64_t n = 1; n <= horizon; ++n) {
    std::vector<Natural> top;
    for (std::uint64_t k = 0; k < n; ++k) {
      Natural bound = g(projection_index(k, n).value);
      if (bound == 0) throw std::invalid_argument("g is zero at r(k, n)");
      top.push_back(bound - 1);
    }
    // tau_n^{-1} is monotone in every coordinate, so the max is at the corner.
    out.h_raw.push_back(tuple_encode(n, top));
    emitted.push_back(std::max(emitted.back(), std::max(Natural(2), out.h_raw.back())));
  }
  out.h = OrderFunction::table(emitted);

  out.j.name = "dnr_to_snpr_given_g";
  out.j.apply = [](const FunctionOracle& f, const Natural& n) -> Natural {
    if (n == 0) return 0;
    const std::uint64_t arity = to_u64(n);
    std::vector<Natural> vals;
    for (std::uint64_t k = 0; k < arity; ++k) vals.push_back(f(projection_index(k, n).value));
    return tuple_encode(arity, vals);
  };
  out.j.use = [](const Natural& n) {
    std::set<Natural> u;
    for (std::uint64_t k = 0; k < to_u64(n); ++k) u.insert(projection_index(k, n).value);
    return u;
  };
  out.j.metadata = {{"g", g.name()}, {"horizon", std::to_string(horizon)}, {"coordinates", "i_0..i_{n-1}"}};
  return out;
}

struct Collision {
  std::uint64_t n;
  std::uint64_t e;
  Natural value;           // j(n) = phi_e(n)
  bool identity_holds;     // f(r(e,n)) = phi_{r(e,n)}(r(e,n))
  bool identity_decided;   // phi_{r(e,n)}(r(e,n)) halted within the derived budget
};

/// Every e < n <= horizon with phi_e(n)[budget] = j(n), together with the
/// check of f(r(e,n)) = phi_{r(e,n)}(r(e,n)). The second run gets the budget
/// of the first plus the cost of the projection loops.
inline std::vector<Collision> snpr_collisions(const SnprFromG& red, const FunctionOracle& f,
                                                  std::uint64_t horizon, std::uint64_t budget) {
  std::vector<Collision> out;
  for (std::uint64_t n = 1; n <= horizon; ++n) {
    const Natural jn = red.j.apply(f, n);
    for (std::uint64_t e = 0; e < n; ++e) {
      auto run = eval(ProgramIndex{e}, {Natural(n)}, budget);
      if (!run.halted() || run.value != jn) continue;
      Collision c{n, e, jn, false, false};
      if (jn < Natural(1) << 32) {
        const std::uint64_t extra = 256 + 16 * (n + 1) * (jn.convert_to<std::uint64_t>() + 2);
        const auto r = projection_index(e, n);
        auto back = eval(r, {r.value}, budget + extra);
        c.identity_decided = back.halted();
        c.identity_holds = back.halted() && back.value == f(r.value);
      }
      out.push_back(c);
    }
  }
  return out;
}

}  // namespace snr
