#pragma once

#include "snrkit/order_function.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace snr::bushy {

/// Element of h^{<omega}.
using BoundedString = std::vector<std::uint32_t>;
using StringSet = std::set<BoundedString>;

/// Per-position alphabet sizes h(0), h(1), ... cached from an order function.
class Alphabet {
 public:
  explicit Alphabet(OrderFunction h) : h_(std::move(h)) {}

  static Alphabet uniform(std::uint32_t k) { return Alphabet(OrderFunction::constant(k)); }

  std::uint32_t operator()(std::size_t position) const {
    while (cache_.size() <= position) {
      auto v = h_.bound_at(cache_.size());
      if (v > UINT32_MAX) throw std::out_of_range("alphabet bound exceeds 32 bits");
      cache_.push_back(static_cast<std::uint32_t>(v));
    }
    return cache_[position];
  }

  const OrderFunction& function() const { return h_; }

  bool admits(const BoundedString& s) const {
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] >= (*this)(i)) return false;
    }
    return true;
  }

 private:
  OrderFunction h_;
  mutable std::vector<std::uint32_t> cache_;
};

inline bool is_prefix(const BoundedString& a, const BoundedString& b) {
  return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
}

inline bool comparable(const BoundedString& a, const BoundedString& b) {
  return is_prefix(a, b) || is_prefix(b, a);
}

inline std::size_t max_length(const StringSet& s) {
  std::size_t L = 0;
  for (const auto& x : s) L = std::max(L, x.size());
  return L;
}

inline std::string format_string(const BoundedString& s) {
  std::string out = "<";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out + ">";
}

/// StringSet literal: one string per line as comma-separated naturals; an
/// empty line is the empty string.
inline StringSet parse_string_set(const std::string& text) {
  StringSet out;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    BoundedString s;
    if (!line.empty()) {
      std::stringstream ss(line);
      std::string tok;
      while (std::getline(ss, tok, ',')) {
        tok.erase(0, tok.find_first_not_of(' '));
        tok.erase(tok.find_last_not_of(' ') + 1);
        auto v = parse_natural(tok);
        if (!fits_u64(v) || v > UINT32_MAX) throw std::invalid_argument("string entry too large: " + tok);
        s.push_back(v.convert_to<std::uint32_t>());
      }
    }
    out.insert(std::move(s));
    start = end + 1;
  }
  return out;
}

inline std::string format_string_set(const StringSet& set) {
  std::string out;
  for (const auto& s : set) {
    for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Trees.
// ---------------------------------------------------------------------------

/// Finite tree above a stem. Members are comparable with the stem; those
/// strictly below it form the prefix chain down to the stem, and those above
/// it are closed under parents back to the stem.
struct WitnessTree {
  BoundedString stem;
  StringSet nodes;
};

inline std::size_t child_count(const StringSet& nodes, const BoundedString& t) {
  std::size_t c = 0;
  auto it = nodes.upper_bound(t);
  for (; it != nodes.end() && is_prefix(t, *it); ++it) {
    if (it->size() == t.size() + 1) ++c;
  }
  return c;
}

inline std::vector<BoundedString> leaves(const StringSet& nodes) {
  std::vector<BoundedString> out;
  for (const auto& t : nodes) {
    if (child_count(nodes, t) == 0) out.push_back(t);
  }
  return out;
}

/// True iff T is a tree above sigma and every non-leaf extending sigma has at
/// least n immediate extensions in T.
inline bool is_bushy(const WitnessTree& tree, std::size_t n, const BoundedString& sigma) {
  const auto& T = tree.nodes;
  if (!T.contains(sigma)) return false;
  for (const auto& t : T) {
    if (!comparable(t, sigma)) return false;
    if (t.size() < sigma.size()) {
      BoundedString next(sigma.begin(), sigma.begin() + static_cast<std::ptrdiff_t>(t.size() + 1));
      if (!T.contains(next)) return false;
    } else if (t.size() > sigma.size()) {
      BoundedString parent(t.begin(), t.end() - 1);
      if (!T.contains(parent)) return false;
    }
  }
  for (const auto& t : T) {
    if (t.size() < sigma.size()) continue;
    const auto c = child_count(T, t);
    if (c != 0 && c < n) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Bigness.
// ---------------------------------------------------------------------------

using Membership = std::function<bool(const BoundedString&)>;

inline Membership member_of(const StringSet& set) {
  return [&set](const BoundedString& s) { return set.contains(s); };
}

/// Smallness certificate: a set U of strings containing the stem, disjoint
/// from B, such that every member of U shorter than the depth cap has fewer
/// than n children outside U. No n-bushy tree with leaves in B can then
/// exist above the stem: every node of such a tree inside U would need a
/// child inside U, forever.
struct SmallnessCertificate {
  std::vector<BoundedString> unmarked;
};

struct BigDecision {
  bool big = false;
  std::optional<WitnessTree> witness;
  std::optional<SmallnessCertificate> certificate;
};

namespace detail {

struct MarkSearch {
  const Membership& in_b;
  std::size_t n;
  const Alphabet& h;
  std::size_t depth;
  std::map<BoundedString, bool> marks;
  std::vector<BoundedString> unmarked;

  // Backward induction: tau is marked iff tau in B, or |tau| < depth and at
  // least n children are marked. Stops scanning children once n are marked.
  bool mark(BoundedString& tau) {
    bool m = false;
    if (in_b(tau)) {
      m = true;
    } else if (tau.size() < depth) {
      std::size_t marked = 0;
      const std::uint32_t width = h(tau.size());
      tau.push_back(0);
      for (std::uint32_t a = 0; a < width && marked < n; ++a) {
        tau.back() = a;
        if (mark(tau)) ++marked;
      }
      tau.pop_back();
      m = marked >= n;
    }
    marks.emplace(tau, m);
    if (!m) unmarked.push_back(tau);
    return m;
  }

  void build_witness(const BoundedString& tau, StringSet& out) const {
    out.insert(tau);
    if (in_b(tau)) return;
    std::size_t taken = 0;
    BoundedString child = tau;
    child.push_back(0);
    for (std::uint32_t a = 0; a < h(tau.size()) && taken < n; ++a) {
      child.back() = a;
      auto it = marks.find(child);
      if (it != marks.end() && it->second) {
        build_witness(child, out);
        ++taken;
      }
    }
  }
};

}  // namespace detail

/// Decides whether B is n-big above sigma, searching trees whose nodes have
/// length at most `depth` (for an explicit set, its maximum member length).
/// Returns a minimal witness tree when big and a certificate when small.
inline BigDecision big_decision(const Membership& in_b, std::size_t n, const BoundedString& sigma,
                                const Alphabet& h, std::size_t depth) {
  if (n == 0) throw std::invalid_argument("bushiness parameter must be >= 1");
  detail::MarkSearch search{in_b, n, h, depth, {}, {}};
  BoundedString tau = sigma;
  BigDecision out;
  out.big = search.mark(tau);
  if (out.big) {
    WitnessTree w{sigma, {}};
    search.build_witness(sigma, w.nodes);
    out.witness = std::move(w);
  } else {
    std::sort(search.unmarked.begin(), search.unmarked.end());
    out.certificate = SmallnessCertificate{std::move(search.unmarked)};
  }
  return out;
}

inline BigDecision big_decision(const StringSet& b, std::size_t n, const BoundedString& sigma, const Alphabet& h) {
  return big_decision(member_of(b), n, sigma, h, max_length(b));
}

inline bool is_big(const Membership& in_b, std::size_t n, const BoundedString& sigma, const Alphabet& h,
                   std::size_t depth) {
  return big_decision(in_b, n, sigma, h, depth).big;
}

/// Re-checks a certificate against B without re-running the search.
inline bool verify_certificate(const SmallnessCertificate& cert, const Membership& in_b, std::size_t n,
                               const BoundedString& sigma, const Alphabet& h, std::size_t depth) {
  const std::set<BoundedString> u(cert.unmarked.begin(), cert.unmarked.end());
  if (!u.contains(sigma)) return false;
  for (const auto& tau : u) {
    if (in_b(tau)) return false;
    if (tau.size() >= depth) continue;
    std::size_t outside = 0;
    BoundedString child = tau;
    child.push_back(0);
    for (std::uint32_t a = 0; a < h(tau.size()); ++a) {
      child.back() = a;
      if (!u.contains(child)) ++outside;
    }
    if (outside >= n) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Finite universes and the closure operator.
// ---------------------------------------------------------------------------

/// All h-bounded strings of length <= L, in (length, lexicographic) order,
/// with child links. Sets over the universe are bit vectors.
class Universe {
 public:
  Universe(const Alphabet& h, std::size_t max_len) : max_len_(max_len) {
    nodes_.push_back({});
    parent_.push_back(-1);
    for (std::size_t start = 0; start < nodes_.size(); ++start) {
      if (nodes_[start].size() >= max_len) continue;
      if (nodes_.size() > kHardCap) throw std::length_error("universe exceeds hard cap");
      const std::uint32_t width = h(nodes_[start].size());
      for (std::uint32_t a = 0; a < width; ++a) {
        auto child = nodes_[start];
        child.push_back(a);
        nodes_.push_back(std::move(child));
        parent_.push_back(static_cast<int>(start));
      }
    }
    children_.resize(nodes_.size());
    for (std::size_t i = 1; i < nodes_.size(); ++i) children_[parent_[i]].push_back(i);
    for (std::size_t i = 0; i < nodes_.size(); ++i) index_.emplace(nodes_[i], i);
  }

  /// Number of strings without building them.
  static std::uint64_t count(const Alphabet& h, std::size_t max_len) {
    std::uint64_t total = 1, level = 1;
    for (std::size_t i = 0; i < max_len; ++i) {
      level *= h(i);
      total += level;
    }
    return total;
  }

  std::size_t size() const { return nodes_.size(); }
  std::size_t max_length() const { return max_len_; }
  const BoundedString& at(std::size_t i) const { return nodes_[i]; }
  const std::vector<std::size_t>& children(std::size_t i) const { return children_[i]; }
  std::optional<std::size_t> find(const BoundedString& s) const {
    auto it = index_.find(s);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  using Mask = std::vector<bool>;

  Mask mask_of(const StringSet& s) const {
    Mask m(size(), false);
    for (const auto& x : s) {
      auto i = find(x);
      if (!i) throw std::invalid_argument("string " + format_string(x) + " is outside the universe");
      m[*i] = true;
    }
    return m;
  }

  StringSet set_of(const Mask& m) const {
    StringSet s;
    for (std::size_t i = 0; i < size(); ++i) {
      if (m[i]) s.insert(nodes_[i]);
    }
    return s;
  }

  /// marks[i] == (B is n-big above node i), for every node at once.
  Mask big_marks(const Mask& b, std::size_t n) const {
    if (n == 0) throw std::invalid_argument("bushiness parameter must be >= 1");
    Mask marks(size(), false);
    for (std::size_t i = size(); i-- > 0;) {
      if (b[i]) {
        marks[i] = true;
        continue;
      }
      std::size_t c = 0;
      for (auto ch : children_[i]) c += marks[ch];
      marks[i] = c >= n;
    }
    return marks;
  }

 private:
  static constexpr std::size_t kHardCap = 1u << 22;
  std::size_t max_len_;
  std::vector<BoundedString> nodes_;
  std::vector<int> parent_;
  std::vector<std::vector<std::size_t>> children_;
  std::map<BoundedString, std::size_t> index_;
};

/// C = {tau in universe : B is n-big above tau}.
inline StringSet closure_set(const StringSet& b, std::size_t n, const Universe& universe) {
  return universe.set_of(universe.big_marks(universe.mask_of(b), n));
}

// ---------------------------------------------------------------------------
// Exhaustive lemma verification.
// ---------------------------------------------------------------------------

struct LemmaReport {
  std::string lemma;
  std::string parameters;
  std::uint64_t checked = 0;
  bool refused = false;
  std::uint64_t size_estimate = 0;  // universe size, or work estimate when refused
  std::optional<std::string> counterexample;

  bool passed() const { return !refused && !counterexample; }
};

inline LemmaReport make_report(std::string lemma, std::string parameters) {
  LemmaReport r;
  r.lemma = std::move(lemma);
  r.parameters = std::move(parameters);
  return r;
}

namespace detail {

inline std::string describe(const Universe& u, const Universe::Mask& m) {
  std::string out = "{";
  bool first = true;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!m[i]) continue;
    out += (first ? "" : " ") + format_string(u.at(i));
    first = false;
  }
  return out + "}";
}

inline Universe::Mask mask_from_bits(std::uint64_t bits, std::size_t n) {
  Universe::Mask m(n);
  for (std::size_t i = 0; i < n; ++i) m[i] = (bits >> i) & 1u;
  return m;
}

inline Universe::Mask unite(const Universe::Mask& a, const Universe::Mask& b) {
  Universe::Mask m(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) m[i] = a[i] || b[i];
  return m;
}

// Checks one (B, C) pair for all n, m, sigma. Returns a counterexample text.
inline std::optional<std::string> union_counterexample(const Universe& u, const Universe::Mask& b,
                                                       const Universe::Mask& c, std::size_t n_max,
                                                       std::size_t m_max, std::uint64_t& checked) {
  std::vector<Universe::Mask> mb(n_max + 1), mc(m_max + 1), mu(n_max + m_max);
  const auto bc = unite(b, c);
  for (std::size_t n = 1; n <= n_max; ++n) mb[n] = u.big_marks(b, n);
  for (std::size_t m = 1; m <= m_max; ++m) mc[m] = u.big_marks(c, m);
  for (std::size_t k = 1; k < n_max + m_max; ++k) mu[k] = u.big_marks(bc, k);
  for (std::size_t n = 1; n <= n_max; ++n) {
    for (std::size_t m = 1; m <= m_max; ++m) {
      for (std::size_t s = 0; s < u.size(); ++s) {
        ++checked;
        if (!mb[n][s] && !mc[m][s] && mu[n + m - 1][s]) {
          return "B=" + describe(u, b) + " C=" + describe(u, c) + " n=" + std::to_string(n) +
                 " m=" + std::to_string(m) + " sigma=" + format_string(u.at(s));
        }
      }
    }
  }
  return std::nullopt;
}

inline std::optional<std::string> closure_counterexample(const Universe& u, const Universe::Mask& b,
                                                         std::size_t n_max, std::uint64_t& checked) {
  for (std::size_t n = 1; n <= n_max; ++n) {
    const auto closure = u.big_marks(b, n);
    const auto closure_big = u.big_marks(closure, n);
    for (std::size_t s = 0; s < u.size(); ++s) {
      ++checked;
      // (i) B small above sigma => C small above sigma.
      if (!closure[s] && closure_big[s]) {
        return "B=" + describe(u, b) + " n=" + std::to_string(n) + " sigma=" + format_string(u.at(s)) +
               ": closure is big above a point where B is small";
      }
      // (ii) C big above rho => rho in C. closure[s] is exactly "rho in C".
      if (closure_big[s] && !closure[s]) {
        return "B=" + describe(u, b) + " n=" + std::to_string(n) + " rho=" + format_string(u.at(s)) +
               ": closure is not n-closed";
      }
    }
  }
  return std::nullopt;
}


}  // namespace detail

/// Exhaustively checks: B n-small and C m-small above sigma implies B u C is
/// (n+m-1)-small above sigma, over all B, C subsets of the universe. Refuses
/// when the universe has more than `max_universe` strings (4^N pairs).
inline LemmaReport verify_smallness_union(const Alphabet& h, std::size_t L, std::size_t n_max, std::size_t m_max,
                                          std::size_t max_universe = 8) {
  LemmaReport r = make_report("smallness_union", "h=" + h.function().name() + " L=" + std::to_string(L) +
                                       " n_max=" + std::to_string(n_max) + " m_max=" + std::to_string(m_max));
  const auto n_strings = Universe::count(h, L);
  r.size_estimate = n_strings;
  if (n_strings > max_universe || n_strings > 31) {
    r.refused = true;
    return r;
  }
  Universe u(h, L);
  const std::uint64_t subsets = 1ull << u.size();
  std::vector<Universe::Mask> masks;
  for (std::uint64_t bits = 0; bits < subsets; ++bits) masks.push_back(detail::mask_from_bits(bits, u.size()));
  for (const auto& b : masks) {
    for (const auto& c : masks) {
      if (auto ce = detail::union_counterexample(u, b, c, n_max, m_max, r.checked)) {
        r.counterexample = ce;
        return r;
      }
    }
  }
  return r;
}

/// Randomized variant for universes too large to enumerate: each trial draws
/// B and C with independent membership probability 1/2.
inline LemmaReport verify_smallness_union_random(const Alphabet& h, std::size_t L, std::size_t n_max,
                                                 std::size_t m_max, std::uint64_t trials, std::uint64_t seed) {
  LemmaReport r = make_report("smallness_union_random", "h=" + h.function().name() + " L=" + std::to_string(L) +
                                              " n_max=" + std::to_string(n_max) + " m_max=" +
                                              std::to_string(m_max) + " trials=" + std::to_string(trials) +
                                              " seed=" + std::to_string(seed));
  Universe u(h, L);
  r.size_estimate = u.size();
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  for (std::uint64_t t = 0; t < trials; ++t) {
    Universe::Mask b(u.size()), c(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
      b[i] = coin(rng);
      c[i] = coin(rng);
    }
    if (auto ce = detail::union_counterexample(u, b, c, n_max, m_max, r.checked)) {
      r.counterexample = ce;
      return r;
    }
  }
  return r;
}

/// Exhaustively checks the closure lemma over all B subsets of the universe:
/// (i) B n-small above sigma implies its closure is n-small above sigma;
/// (ii) the closure is n-closed.
inline LemmaReport verify_closure(const Alphabet& h, std::size_t L, std::size_t n_max,
                                  std::size_t max_universe = 20) {
  LemmaReport r = make_report("closure", "h=" + h.function().name() + " L=" + std::to_string(L) +
                               " n_max=" + std::to_string(n_max));
  const auto n_strings = Universe::count(h, L);
  r.size_estimate = n_strings;
  if (n_strings > max_universe || n_strings > 31) {
    r.refused = true;
    return r;
  }
  Universe u(h, L);
  for (std::uint64_t bits = 0; bits < (1ull << u.size()); ++bits) {
    if (auto ce = detail::closure_counterexample(u, detail::mask_from_bits(bits, u.size()), n_max, r.checked)) {
      r.counterexample = ce;
      return r;
    }
  }
  return r;
}

inline LemmaReport verify_closure_random(const Alphabet& h, std::size_t L, std::size_t n_max, std::uint64_t trials,
                                         std::uint64_t seed) {
  LemmaReport r = make_report("closure_random", "h=" + h.function().name() + " L=" + std::to_string(L) + " n_max=" +
                                      std::to_string(n_max) + " trials=" + std::to_string(trials) +
                                      " seed=" + std::to_string(seed));
  Universe u(h, L);
  r.size_estimate = u.size();
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  for (std::uint64_t t = 0; t < trials; ++t) {
    Universe::Mask b(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) b[i] = coin(rng);
    if (auto ce = detail::closure_counterexample(u, b, n_max, r.checked)) {
      r.counterexample = ce;
      return r;
    }
  }
  return r;
}

}  // namespace snr::bushy
