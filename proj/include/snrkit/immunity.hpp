#pragma once

#include "snrkit/enumeration.hpp"
#include "snrkit/function_oracle.hpp"
#include "snrkit/machine.hpp"
#include "snrkit/order_function.hpp"
#include "snrkit/pairing.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace snr {

using FiniteSet = std::vector<std::uint64_t>;  // sorted, no repeats

/// Decidable set of naturals. A decision may be unavailable (budget ran out
/// or outside a finite table's range), reported as nullopt.
class SetPredicate {
 public:
  using Fn = std::function<std::optional<bool>(std::uint64_t)>;

  SetPredicate(std::string name, Fn fn) : name_(std::move(name)), fn_(std::move(fn)) {}

  std::optional<bool> contains(std::uint64_t x) const { return fn_(x); }
  const std::string& name() const { return name_; }

  static SetPredicate all() {
    return {"all", [](std::uint64_t) { return std::optional<bool>(true); }};
  }
  static SetPredicate none() {
    return {"none", [](std::uint64_t) { return std::optional<bool>(false); }};
  }
  static SetPredicate multiples(std::uint64_t m) {
    if (m == 0) throw std::invalid_argument("multiples of 0");
    return {"multiples:" + std::to_string(m), [m](std::uint64_t x) { return std::optional<bool>(x % m == 0); }};
  }
  static SetPredicate evens() { return multiples(2); }

  /// Exactly the listed members among x <= decided_up_to; undetermined above.
  static SetPredicate table(FiniteSet members, std::uint64_t decided_up_to) {
    auto data = std::make_shared<const FiniteSet>(std::move(members));
    return {"table", [data, decided_up_to](std::uint64_t x) -> std::optional<bool> {
              if (x > decided_up_to) return std::nullopt;
              return std::binary_search(data->begin(), data->end(), x);
            }};
  }

  /// x is a member iff phi_e(x) halts within budget at a nonzero value.
  static SetPredicate program(ProgramIndex e, std::uint64_t budget) {
    std::string name = "program:" + e.value.str() + ":" + std::to_string(budget);
    return {name, [e = std::move(e), budget](std::uint64_t x) -> std::optional<bool> {
              auto r = eval(e, {Natural(x)}, budget);
              if (!r.halted()) return std::nullopt;
              return r.value != 0;
            }};
  }

  /// The first `count` members in increasing order, scanning x < search_cap.
  /// nullopt when the scan runs out or meets an undetermined x first.
  std::optional<FiniteSet> first_elements(std::uint64_t count, std::uint64_t search_cap) const {
    FiniteSet out;
    for (std::uint64_t x = 0; x < search_cap && out.size() < count; ++x) {
      auto in = contains(x);
      if (!in) return std::nullopt;
      if (*in) out.push_back(x);
    }
    if (out.size() < count) return std::nullopt;
    return out;
  }

 private:
  std::string name_;
  Fn fn_;
};

/// Canonical list of all finite sets: D_k = positions of the 1-bits of k.
inline FiniteSet canonical_finite_set(std::uint64_t k) {
  FiniteSet out;
  for (std::uint64_t i = 0; k; ++i, k >>= 1) {
    if (k & 1u) out.push_back(i);
  }
  return out;
}

/// A numbering of finite sets with a separate cardinality function. Either
/// may be unavailable at a given index (nullopt), never silently guessed.
class Numbering {
 public:
  using Entries = std::function<std::optional<FiniteSet>(std::uint64_t)>;
  using Card = std::function<std::optional<std::uint64_t>(std::uint64_t)>;

  Numbering(std::string name, Entries entries, Card card)
      : name_(std::move(name)), entries_(std::move(entries)), card_(std::move(card)) {}

  /// Card taken as the size of the entry.
  Numbering(std::string name, Entries entries) : name_(std::move(name)), entries_(std::move(entries)) {
    card_ = [entries = entries_](std::uint64_t e) -> std::optional<std::uint64_t> {
      auto s = entries(e);
      if (!s) return std::nullopt;
      return s->size();
    };
  }

  const std::string& name() const { return name_; }
  std::optional<FiniteSet> entries(std::uint64_t e) const { return entries_(e); }
  std::optional<std::uint64_t> card(std::uint64_t e) const { return card_(e); }
  std::optional<bool> member(std::uint64_t e, std::uint64_t x) const {
    auto s = entries(e);
    if (!s) return std::nullopt;
    return std::binary_search(s->begin(), s->end(), x);
  }

  static Numbering from_table(std::string name, std::vector<FiniteSet> table) {
    auto data = std::make_shared<const std::vector<FiniteSet>>(std::move(table));
    return Numbering(std::move(name), [data](std::uint64_t e) -> std::optional<FiniteSet> {
      if (e >= data->size()) return FiniteSet{};
      return (*data)[e];
    });
  }

  static Numbering canonical() {
    return Numbering("canonical", [](std::uint64_t e) -> std::optional<FiniteSet> { return canonical_finite_set(e); });
  }

 private:
  std::string name_;
  Entries entries_;
  Card card_;
};

/// e <= horizon where card(e) disagrees with the entry size, or either is
/// unavailable.
inline std::vector<std::uint64_t> card_mismatches(const Numbering& d, std::uint64_t horizon) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t e = 0; e <= horizon; ++e) {
    auto s = d.entries(e);
    auto c = d.card(e);
    if (!s || !c || *c != s->size()) out.push_back(e);
  }
  return out;
}

/// Whether D_e is a subset of R; nullopt when some member is undetermined.
inline std::optional<bool> subset_of(const FiniteSet& s, const SetPredicate& r) {
  bool undetermined = false;
  for (auto x : s) {
    auto in = r.contains(x);
    if (!in) {
      undetermined = true;
    } else if (!*in) {
      return false;
    }
  }
  if (undetermined) return std::nullopt;
  return true;
}

struct CiReport {
  std::vector<std::uint64_t> violations;    // D_e inside R with card(e) > h(e)
  std::vector<std::uint64_t> undetermined;  // entry, card or membership unavailable
};

inline CiReport ci_violations(const SetPredicate& r, const OrderFunction& h, const Numbering& d, std::uint64_t horizon) {
  CiReport out;
  for (std::uint64_t e = 0; e <= horizon; ++e) {
    auto s = d.entries(e);
    auto c = d.card(e);
    if (!s || !c) {
      out.undetermined.push_back(e);
      continue;
    }
    auto inside = subset_of(*s, r);
    if (!inside) {
      out.undetermined.push_back(e);
    } else if (*inside && Natural(*c) > h(e)) {
      out.violations.push_back(e);
    }
  }
  return out;
}

/// D_{2n} = the first h(2n)+1 elements of R, D_{2n+1} = canonical(n). card is
/// h(2n)+1 on even indices, computed from h alone. Throws when R does not
/// yield enough elements below search_cap for some 2n <= horizon.
inline Numbering defeat_ci_numbering(const SetPredicate& r, const OrderFunction& h, std::uint64_t horizon,
                                     std::uint64_t search_cap = 1u << 20) {
  auto evens = std::make_shared<std::vector<FiniteSet>>();
  for (std::uint64_t e = 0; e <= horizon; e += 2) {
    const std::uint64_t want = clamp_u64(h(e)) + 1;
    auto got = r.first_elements(want, search_cap);
    if (!got) {
      throw std::runtime_error("R yields fewer than " + std::to_string(want) + " elements below " +
                               std::to_string(search_cap) + " for n = " + std::to_string(e / 2));
    }
    evens->push_back(std::move(*got));
  }
  auto entries = [evens, r, h, search_cap](std::uint64_t e) -> std::optional<FiniteSet> {
    if (e % 2) return canonical_finite_set(e / 2);
    if (e / 2 < evens->size()) return (*evens)[e / 2];
    return r.first_elements(clamp_u64(h(e)) + 1, search_cap);
  };
  auto card = [h](std::uint64_t e) -> std::optional<std::uint64_t> {
    if (e % 2) return canonical_finite_set(e / 2).size();
    return clamp_u64(h(e)) + 1;
  };
  return Numbering("defeat_ci:" + r.name() + ":" + h.name(), entries, card);
}

// ---------------------------------------------------------------------------
// Schnorr test layers.
// ---------------------------------------------------------------------------

using Rational = boost::multiprecision::cpp_rational;

struct SchnorrLayer {
  std::uint64_t c = 0;
  std::vector<std::uint64_t> conditions;  // e with c < e <= horizon and card(e) >= 2e
  Rational measure_bound = 0;             // sum of 2^-card(e)
  Rational limit = 0;                     // 2^-c
  std::vector<std::uint64_t> undetermined;

  bool holds() const { return measure_bound <= limit; }
};

inline Rational pow2_inverse(std::uint64_t k) {
  return Rational(1, boost::multiprecision::cpp_int(1) << static_cast<unsigned>(k));
}

inline SchnorrLayer schnorr_layer(const Numbering& d, std::uint64_t c, std::uint64_t horizon) {
  if (c == 0) throw std::invalid_argument("schnorr_layer: c must be >= 1");
  SchnorrLayer out;
  out.c = c;
  out.limit = pow2_inverse(c);
  for (std::uint64_t e = c + 1; e <= horizon; ++e) {
    auto k = d.card(e);
    if (!k) {
      out.undetermined.push_back(e);
      continue;
    }
    if (*k >= 2 * e) {
      out.conditions.push_back(e);
      out.measure_bound += pow2_inverse(*k);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Effective-immunity witness numbering.
// ---------------------------------------------------------------------------

struct PairIndex {
  std::uint64_t e, d;
  friend bool operator==(const PairIndex&, const PairIndex&) = default;
};

/// The pairs (e, d) with d <= e <= g(d), in increasing Cantor code <e, d>.
/// Every d contributes at least (d, d), so the list never runs dry.
inline std::vector<PairIndex> ei_domain(const FunctionOracle& g, std::uint64_t count) {
  std::vector<PairIndex> out;
  for (Natural z = 0; out.size() < count; ++z) {
    auto [e, d] = unpair(z);
    if (d <= e && e <= g(d)) out.push_back({to_u64(e), to_u64(d)});
  }
  return out;
}

struct EiNumbering {
  Numbering numbering;
  OrderFunction bound;  // h~: h(d) at index 2k for the k-th pair, 0 at odd indices
  std::vector<PairIndex> pairs;
};

/// D_{2k} = W_{e, g(d)}#h(d) for the k-th pair (e, d); D_{2k+1} = canonical(k).
/// card runs the same bounded enumeration.
inline EiNumbering ei_witness_numbering(const OrderFunction& h, const FunctionOracle& g, std::uint64_t horizon) {
  auto pairs = std::make_shared<std::vector<PairIndex>>(ei_domain(g, horizon / 2 + 1));
  auto entry = [pairs, h, g](std::uint64_t i) -> std::optional<FiniteSet> {
    if (i % 2) return canonical_finite_set(i / 2);
    if (i / 2 >= pairs->size()) *pairs = ei_domain(g, i / 2 + 1);
    const auto [e, d] = (*pairs)[i / 2];
    auto xs = we_truncate(ProgramIndex{e}, clamp_u64(g(d)), clamp_u64(h(d)));
    std::sort(xs.begin(), xs.end());
    return xs;
  };
  auto bound = OrderFunction("ei_bound:" + h.name(), [pairs, h, g](const Natural& i) -> Natural {
    const auto k = to_u64(i);
    if (k % 2) return 0;
    if (k / 2 >= pairs->size()) *pairs = ei_domain(g, k / 2 + 1);
    return h((*pairs)[k / 2].d);
  });
  return {Numbering("ei_witness:" + h.name(), entry), bound, *pairs};
}

}  // namespace snr
