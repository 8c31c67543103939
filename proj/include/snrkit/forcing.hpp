#pragma once

#include "snrkit/bushy.hpp"
#include "snrkit/machine.hpp"
#include "snrkit/order_function.hpp"
#include "snrkit/recursion.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace snr::forcing {

using bushy::Alphabet;
using bushy::BoundedString;

// ---------------------------------------------------------------------------
// The q(sigma, e, k) programs and pi.
// ---------------------------------------------------------------------------

namespace detail {

inline constexpr unsigned kSelf = 90;

/// Body of q: diverge unless the oracle extends sigma, then output
/// Phi_e^oracle(q). The search over k-big sets that makes q converge
/// unrelativized is carried out by the host (see forcing_run).
inline Program q_body(const BoundedString& sigma, const Natural& e, std::uint64_t k) {
  Assembler p;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    auto ok = p.label();
    p.load(91, i).query(91, 92).load(93, sigma[i]).jump_eq(92, 93, ok).diverge();
    p.bind(ok);
  }
  p.load(94, k).load(95, e).copy(kSelf, 96).call(95, 0);
  return p.finish();
}

}  // namespace detail

/// Self-referential index q(sigma, e, k): relative to any oracle extending
/// sigma it computes Phi_e(q(sigma, e, k)); it diverges on other oracles.
inline ProgramIndex q_index(const BoundedString& sigma, const Natural& e, std::uint64_t k) {
  return self_referential(detail::q_body(sigma, e, k), detail::kSelf);
}

/// pi(n) = max{q(sigma, e, k) : sigma in h^n, e, k <= n}. Refuses (length_error)
/// when h^n has more than `cap` strings.
inline Natural compute_pi(const OrderFunction& h, std::uint64_t n, std::uint64_t cap) {
  Alphabet alpha(h);
  std::uint64_t count = 1;
  for (std::uint64_t i = 0; i < n; ++i) {
    count *= alpha(i);
    if (count > cap) throw std::length_error("h^" + std::to_string(n) + " exceeds cap " + std::to_string(cap));
  }
  Natural best = 0;
  BoundedString sigma(n, 0);
  for (std::uint64_t c = 0; c < count; ++c) {
    for (std::uint64_t e = 0; e <= n; ++e) {
      for (std::uint64_t k = 0; k <= n; ++k) best = std::max(best, q_index(sigma, e, k).value);
    }
    for (std::size_t i = n; i-- > 0;) {  // odometer, last position fastest
      if (++sigma[i] < alpha(i)) break;
      sigma[i] = 0;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Forcing simulation.
// ---------------------------------------------------------------------------

struct ForcingConfig {
  OrderFunction h = OrderFunction::linear(2, 2);
  OrderFunction g = OrderFunction::constant(2);
  std::uint64_t stages = 6;
  std::uint64_t oracle_budget = 1000;  // step budget for every convergence question
  std::size_t use_depth = 1;           // oracle queries reach |stem| + use_depth positions
  std::uint64_t universe_cap = 2'000'000;
  std::uint64_t pi_cap = 100'000;
  std::uint64_t max_g_value = 64;      // g(x) larger than this aborts a stage
  std::vector<ProgramIndex> machines;  // Phi_e = machines[e mod size]; empty: Phi_e = phi_e
};

/// One upward-closed piece of a bad set: strings tau extending `stem` on which
/// Phi_machine^(tau restricted to cap)(input) converges within the budget to
/// a value below `below` (any value when unset).
struct Component {
  enum class Kind { ValuesBelow, Converges };
  Kind kind;
  BoundedString stem;
  ProgramIndex machine;
  Natural input;
  std::optional<Natural> below;
  std::optional<Natural> exactly;
  std::size_t cap;
};

struct CertificateRecord {
  bool small = false;
  std::uint64_t parameter = 0;
  std::size_t depth = 0;
  std::uint64_t unmarked = 0;
  std::uint64_t digest = 0;
};

struct StageRecord {
  std::uint64_t stage;
  std::uint64_t e;
  std::uint64_t k;
  std::string branch;  // "hit" or "otherwise"
  std::optional<Natural> value;
  BoundedString sigma;
  BoundedString condition;  // f_{s+1}
  std::string x;            // q index (even stages) as decimal
  std::size_t components;   // components of B_{s+1}
  std::uint64_t bad_set_size;
  CertificateRecord certificate;
  bool certificate_ok = false;
};

struct ForcingTranscript {
  std::vector<StageRecord> stages;
  std::vector<Component> components;  // in order of addition
  std::optional<std::string> aborted;
};

class ForcingAbort : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad-set membership and bigness machinery shared by forcing_run and the
/// post-hoc checker.
class Sets {
 public:
  explicit Sets(const ForcingConfig& cfg) : cfg_(cfg), alpha_(cfg.h) {}

  const Alphabet& alphabet() const { return alpha_; }

  bool converges(const ProgramIndex& m, const Natural& input, const BoundedString& tau,
                 std::optional<Natural>* value = nullptr) const {
    if (cfg_.oracle_budget == 0) return false;
    std::vector<Natural> oracle(tau.begin(), tau.end());
    auto r = eval(m, {input}, cfg_.oracle_budget, Oracle::string(std::move(oracle)));
    if (r.halted() && value) *value = r.value;
    return r.halted();
  }

  /// phi_j(j) within the budget, if below h(j).
  std::optional<std::uint32_t> bad_value(std::size_t j) const {
    while (bad_.size() <= j) {
      const std::size_t i = bad_.size();
      std::optional<Natural> v;
      bool halted = cfg_.oracle_budget > 0 && [&] {
        auto r = eval(ProgramIndex{i}, {Natural(i)}, cfg_.oracle_budget);
        if (r.halted()) v = r.value;
        return r.halted();
      }();
      bad_.push_back(halted && *v < alpha_(i) ? std::optional<std::uint32_t>(v->convert_to<std::uint32_t>())
                                              : std::nullopt);
    }
    return bad_[j];
  }

  bool non_dnr(const BoundedString& tau) const {
    for (std::size_t i = 0; i < tau.size(); ++i) {
      if (auto b = bad_value(i); b && *b == tau[i]) return true;
    }
    return false;
  }

  bool in_component(const Component& c, const BoundedString& tau) const {
    if (!bushy::is_prefix(c.stem, tau)) return false;
    BoundedString key(tau.begin(), tau.begin() + static_cast<std::ptrdiff_t>(std::min(tau.size(), c.cap)));
    auto& memo = memo_[identity(c)];
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::optional<Natural> v;
    bool in = converges(c.machine, c.input, key, &v);
    if (in && c.kind == Component::Kind::ValuesBelow) {
      if (c.below) in = *v < *c.below;
      if (c.exactly) in = in && *v == *c.exactly;
    }
    memo.emplace(std::move(key), in);
    return in;
  }

  bushy::Membership bad_set(const std::vector<Component>& comps, std::size_t count) const {
    return [this, &comps, count](const BoundedString& tau) {
      if (non_dnr(tau)) return true;
      for (std::size_t i = 0; i < count; ++i) {
        if (in_component(comps[i], tau)) return true;
      }
      return false;
    };
  }

  bushy::Membership component_set(const Component& c) const {
    return [this, &c](const BoundedString& tau) { return in_component(c, tau); };
  }

  /// Search depth above nu: beyond it every relevant component is decided by
  /// a prefix, and the non-DNR part has at most one bad value per position,
  /// so for n >= 2 bigness there equals membership.
  static std::size_t depth_above(const BoundedString& nu, const std::vector<Component>& comps, std::size_t count) {
    std::size_t depth = nu.size();
    for (std::size_t i = 0; i < count; ++i) {
      if (bushy::comparable(comps[i].stem, nu)) depth = std::max(depth, comps[i].cap);
    }
    return depth;
  }

  void check_window(const BoundedString& nu, std::size_t depth) const {
    std::uint64_t total = 1, level = 1;
    for (std::size_t i = nu.size(); i < depth; ++i) {
      level *= alpha_(i);
      total += level;
      if (total > cfg_.universe_cap) {
        throw ForcingAbort("bigness window above " + bushy::format_string(nu) + " to depth " + std::to_string(depth) +
                           " exceeds universe cap " + std::to_string(cfg_.universe_cap));
      }
    }
  }

  bool big(const bushy::Membership& set, std::uint64_t n, const BoundedString& nu, std::size_t depth) const {
    check_window(nu, depth);
    return bushy::big_decision(set, n, nu, alpha_, depth).big;
  }

 private:
  const ForcingConfig& cfg_;
  Alphabet alpha_;
  mutable std::vector<std::optional<std::uint32_t>> bad_;
  using Identity = std::tuple<int, BoundedString, Natural, Natural, Natural, Natural, std::size_t>;
  static Identity identity(const Component& c) {
    // below/exactly are shifted by one so that "unset" is 0
    return {static_cast<int>(c.kind), c.stem, c.machine.value, c.input, c.below ? *c.below + 1 : Natural(0),
            c.exactly ? *c.exactly + 1 : Natural(0), c.cap};
  }
  mutable std::map<Identity, std::map<BoundedString, bool>> memo_;
};

namespace detail {

inline std::uint64_t digest(const std::vector<BoundedString>& xs) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::uint64_t v) {
    h ^= v;
    h *= 1099511628211ull;
  };
  for (const auto& s : xs) {
    mix(s.size());
    for (auto a : s) mix(a);
  }
  return h;
}

inline CertificateRecord certify(const Sets& sets, const std::vector<Component>& comps, std::size_t count,
                                 const BoundedString& f, std::uint64_t parameter) {
  CertificateRecord rec;
  rec.parameter = parameter;
  rec.depth = Sets::depth_above(f, comps, count);
  sets.check_window(f, rec.depth);
  auto member = sets.bad_set(comps, count);
  auto d = bushy::big_decision(member, parameter, f, sets.alphabet(), rec.depth);
  rec.small = !d.big;
  if (rec.small) {
    rec.unmarked = d.certificate->unmarked.size();
    rec.digest = digest(d.certificate->unmarked);
    if (!bushy::verify_certificate(*d.certificate, member, parameter, f, sets.alphabet(), rec.depth)) {
      throw std::logic_error("smallness certificate failed its own check");
    }
  }
  return rec;
}

/// Members of the bad set among strings extending f of length <= depth.
inline std::uint64_t window_count(const Sets& sets, const bushy::Membership& member, BoundedString& nu,
                                  std::size_t depth) {
  std::uint64_t c = member(nu) ? 1 : 0;
  if (nu.size() < depth) {
    nu.push_back(0);
    for (std::uint32_t a = 0; a < sets.alphabet()(nu.size() - 1); ++a) {
      nu.back() = a;
      c += window_count(sets, member, nu, depth);
    }
    nu.pop_back();
  }
  return c;
}

}  // namespace detail

/// Budgeted simulation of the finite-extension construction of a low DNR_h
/// function computing no DNR_g function. Every convergence question is
/// answered by a run within oracle_budget steps and every bigness question by
/// exact backward induction over the relevant window; the result is an
/// approximation at that budget, never a claim about the real jump.
inline ForcingTranscript forcing_run(const ForcingConfig& cfg) {
  Sets sets(cfg);
  ForcingTranscript out;
  BoundedString f;
  const auto& alpha = sets.alphabet();

  auto machine = [&cfg](std::uint64_t e) {
    return cfg.machines.empty() ? ProgramIndex{e} : cfg.machines[e % cfg.machines.size()];
  };
  // Extends nu one child at a time through children above which B stays
  // k-small, until done(nu).
  auto walk = [&](BoundedString nu, std::uint64_t k, auto done) {
    const auto& comps = out.components;
    const std::size_t count = comps.size();
    auto member = sets.bad_set(comps, count);
    while (!done(nu)) {
      bool moved = false;
      nu.push_back(0);
      for (std::uint32_t a = 0; a < alpha(nu.size() - 1); ++a) {
        nu.back() = a;
        if (!sets.big(member, k, nu, Sets::depth_above(nu, comps, count))) {
          moved = true;
          break;
        }
      }
      if (!moved) throw std::logic_error("no child keeps the bad set small above " + bushy::format_string(nu));
    }
    return nu;
  };
  // From sigma, with target k-big above sigma, finds tau in target above which
  // B is k-small.
  auto land = [&](BoundedString nu, const Component& target, std::uint64_t k) {
    const auto& comps = out.components;
    const std::size_t count = comps.size();
    auto member = sets.bad_set(comps, count);
    auto in_target = sets.component_set(target);
    while (!in_target(nu)) {
      bool moved = false;
      nu.push_back(0);
      for (std::uint32_t a = 0; a < alpha(nu.size() - 1); ++a) {
        nu.back() = a;
        if (sets.big(in_target, k, nu, std::max(nu.size(), target.cap)) &&
            !sets.big(member, k, nu, Sets::depth_above(nu, comps, count))) {
          moved = true;
          break;
        }
      }
      if (!moved) throw std::logic_error("target big and bad set small, yet no child keeps both");
    }
    return nu;
  };

  try {
    for (std::uint64_t s = 0; s < cfg.stages; ++s) {
      const std::uint64_t e = s / 2;
      const std::uint64_t k = alpha(f.size());
      StageRecord rec{s, e, k, "", std::nullopt, {}, {}, "", 0, 0, {}, false};
      std::optional<Component> candidate;

      if (s % 2 == 0) {
        // n >= k, e least with h(n) >= k (g(pi(n)) + 1).
        std::uint64_t n = std::max<std::uint64_t>({k, e, f.size()});
        for (;; ++n) {
          if (n > f.size() + 100000) throw ForcingAbort("no suitable length n found");
          Natural gp = cfg.g.constant_value() ? *cfg.g.constant_value() : cfg.g(compute_pi(cfg.h, n, cfg.pi_cap));
          if (Natural(alpha(n)) >= Natural(k) * (gp + 1)) break;
        }
        rec.sigma = walk(f, k, [n](const BoundedString& nu) { return nu.size() >= n; });
        const ProgramIndex x = q_index(rec.sigma, e, k);
        rec.x = x.value.str();
        const Natural gx = cfg.g(x.value);
        if (gx > cfg.max_g_value) throw ForcingAbort("g(x) = " + gx.str() + " exceeds max_g_value");
        const std::size_t cap = rec.sigma.size() + cfg.use_depth;
        for (Natural i = 0; i < gx && !candidate; ++i) {
          Component a{Component::Kind::ValuesBelow, rec.sigma, machine(e), x.value, std::nullopt, i, cap};
          if (sets.big(sets.component_set(a), k, rec.sigma, cap)) {
            candidate = a;
            rec.value = i;
          }
        }
        if (candidate) {
          rec.branch = "hit";
          f = land(rec.sigma, *candidate, k);
        } else {
          rec.branch = "otherwise";
          out.components.push_back({Component::Kind::ValuesBelow, rec.sigma, machine(e), x.value, gx, std::nullopt, cap});
          f = rec.sigma;
        }
      } else {
        rec.sigma = walk(f, k, [&](const BoundedString& nu) { return alpha(nu.size()) >= 2 * k; });
        const std::size_t cap = rec.sigma.size() + cfg.use_depth;
        Component fe{Component::Kind::Converges, rec.sigma, machine(e), Natural(e), std::nullopt, std::nullopt, cap};
        if (sets.big(sets.component_set(fe), k, rec.sigma, cap)) {
          rec.branch = "hit";
          f = land(rec.sigma, fe, k);
        } else {
          rec.branch = "otherwise";
          out.components.push_back(fe);
          f = rec.sigma;
        }
      }

      rec.condition = f;
      rec.components = out.components.size();
      rec.certificate = detail::certify(sets, out.components, out.components.size(), f, alpha(f.size()));
      rec.certificate_ok = rec.certificate.small;
      if (!rec.certificate_ok) {
        throw std::logic_error("stage " + std::to_string(s) + ": bad set is big above the new condition");
      }
      BoundedString nu = f;
      rec.bad_set_size =
          detail::window_count(sets, sets.bad_set(out.components, out.components.size()), nu, rec.certificate.depth);
      out.stages.push_back(std::move(rec));
    }
  } catch (const ForcingAbort& err) {
    out.aborted = err.what();
  }
  return out;
}

struct ForcingCheck {
  bool extension_chain = true;
  bool monotone_bad_sets = true;
  bool certified_smallness = true;
  bool within_alphabet = true;
  std::vector<std::string> problems;

  bool ok() const { return extension_chain && monotone_bad_sets && certified_smallness && within_alphabet; }
};

/// Re-checks a transcript from scratch: f_s is a prefix of f_{s+1}, bad sets
/// only gain components, entries respect h, and every stored certificate is
/// reproduced by a fresh bigness decision and passes verify_certificate.
inline ForcingCheck verify_transcript(const ForcingConfig& cfg, const ForcingTranscript& t) {
  ForcingCheck out;
  Sets sets(cfg);
  BoundedString prev;
  std::size_t prev_components = 0;
  for (const auto& st : t.stages) {
    const auto tag = "stage " + std::to_string(st.stage) + ": ";
    if (!bushy::is_prefix(prev, st.condition)) {
      out.extension_chain = false;
      out.problems.push_back(tag + "condition does not extend the previous one");
    }
    if (st.components < prev_components || st.components > t.components.size()) {
      out.monotone_bad_sets = false;
      out.problems.push_back(tag + "bad set lost components");
    }
    if (!sets.alphabet().admits(st.condition)) {
      out.within_alphabet = false;
      out.problems.push_back(tag + "condition leaves h^{<omega}");
    }
    const std::uint64_t param = sets.alphabet()(st.condition.size());
    auto rec = detail::certify(sets, t.components, st.components, st.condition, param);
    if (!rec.small || rec.digest != st.certificate.digest || rec.unmarked != st.certificate.unmarked ||
        param != st.certificate.parameter) {
      out.certified_smallness = false;
      out.problems.push_back(tag + "certificate not reproduced");
    }
    prev = st.condition;
    prev_components = st.components;
  }
  return out;
}

}  // namespace snr::forcing
