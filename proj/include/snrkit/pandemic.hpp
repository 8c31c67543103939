#pragma once

#include "snrkit/immunity.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace snr {

struct EndemicWitness {
  std::uint64_t e;
  FiniteSet set;
  std::uint64_t size;
};

struct EndemicReport {
  std::vector<EndemicWitness> witnesses;  // |D_e| >= h(e) and D_e inside R
  std::vector<std::uint64_t> undetermined;
};

inline EndemicReport endemic_check(const Numbering& d, const OrderFunction& h, const SetPredicate& r,
                                   std::uint64_t horizon) {
  EndemicReport out;
  for (std::uint64_t e = 0; e <= horizon; ++e) {
    auto s = d.entries(e);
    auto c = d.card(e);
    if (!s || !c) {
      out.undetermined.push_back(e);
      continue;
    }
    if (Natural(*c) < h(e)) continue;
    auto inside = subset_of(*s, r);
    if (!inside) {
      out.undetermined.push_back(e);
    } else if (*inside) {
      out.witnesses.push_back({e, *s, *c});
    }
  }
  return out;
}

/// A numbering together with a recursive bound b(e) >= max D_e. The
/// constructor is explicit: a bare Numbering does not carry one.
class BoundedNumbering {
 public:
  using Bound = std::function<std::uint64_t(std::uint64_t)>;

  explicit BoundedNumbering(Numbering d, Bound b) : d_(std::move(d)), b_(std::move(b)) {}

  const Numbering& numbering() const { return d_; }
  std::uint64_t bound(std::uint64_t e) const { return b_(e); }

 private:
  Numbering d_;
  Bound b_;
};

struct PandemicSet {
  std::vector<std::uint64_t> elements;  // r_0 < r_1 < ...
  std::vector<std::uint64_t> stages;    // e_d for each r_d
  std::uint64_t decided_up_to = 0;      // membership is exact for x <= this
  std::uint64_t stem = 0;               // indices from here on carry the guarantee
  std::optional<std::string> cutoff;    // why the table stops
  SetPredicate predicate = SetPredicate::none();
};

/// R = {r_0 < r_1 < ...} with r_d entering once h(e_d) > d + 1 and
/// r_d = max(r_{d-1} + 1, 1 + max{b(k) : k <= e_d}). Then for every e,
/// D_e meets R only in the r_d with e_d < e, of which there are at most
/// h(e-1) - 1 < h(e), so no D_e inside R has h(e) elements.
inline PandemicSet defeat_pandemic_set(const BoundedNumbering& d, const OrderFunction& h, std::uint64_t horizon) {
  PandemicSet out;
  std::uint64_t max_b = 0;
  std::uint64_t e = 0;
  std::optional<std::uint64_t> last;
  for (std::uint64_t dd = 0;; ++dd) {
    while (e <= horizon && h(e) <= Natural(dd + 1)) {
      max_b = std::max(max_b, d.bound(e));
      ++e;
    }
    if (e > horizon) {
      out.cutoff = "h(e) <= " + std::to_string(dd + 1) + " for all e <= horizon " + std::to_string(horizon);
      break;
    }
    max_b = std::max(max_b, d.bound(e));
    std::uint64_t r = max_b + 1;
    if (last) r = std::max(r, *last + 1);
    out.elements.push_back(r);
    out.stages.push_back(e);
    last = r;
  }
  // Any later element exceeds every b(k), k <= horizon.
  for (std::uint64_t k = 0; k <= horizon; ++k) max_b = std::max(max_b, d.bound(k));
  out.decided_up_to = std::max(max_b, last.value_or(0));
  out.predicate = SetPredicate::table(out.elements, out.decided_up_to);
  return out;
}

struct PandemicNumbering {
  Numbering numbering;  // index pair(e, k); empty when k is outside the family
  std::function<FiniteSet(std::uint64_t e, std::uint64_t k)> entry;
};

/// D_<e,k> = the first h(<e,k>) elements x < f(e), in increasing x, with
/// phi_{family[k]}(x) = 1 within f(e) steps. entry() throws for k outside the
/// family.
inline PandemicNumbering build_pandemic_numbering(const FunctionOracle& f, const OrderFunction& h,
                                                  std::vector<ProgramIndex> family) {
  auto fam = std::make_shared<const std::vector<ProgramIndex>>(std::move(family));
  auto entry = [f, h, fam](std::uint64_t e, std::uint64_t k) -> FiniteSet {
    if (k >= fam->size()) {
      throw std::invalid_argument("family index " + std::to_string(k) + " outside family of " +
                                  std::to_string(fam->size()));
    }
    const std::uint64_t budget = clamp_u64(f(e));
    const std::uint64_t want = clamp_u64(h(pair(e, k)));
    FiniteSet out;
    for (std::uint64_t x = 0; x < budget && out.size() < want; ++x) {
      auto r = eval((*fam)[k], {Natural(x)}, budget);
      if (r.halted() && r.value == 1) out.push_back(x);
    }
    return out;
  };
  Numbering d("pandemic", [entry, fam](std::uint64_t i) -> std::optional<FiniteSet> {
    auto [e, k] = unpair(i);
    if (k >= fam->size()) return FiniteSet{};
    return entry(to_u64(e), to_u64(k));
  });
  return {d, entry};
}

/// t_k(e): least T such that at least `want` of the x < T have
/// phi_{decider}(x) = 1 within T steps; nullopt if none within measure_cap.
/// Measured by running every x < measure_cap once.
class FullEntryTimes {
 public:
  FullEntryTimes(const ProgramIndex& decider, std::uint64_t measure_cap) {
    for (std::uint64_t x = 0; x < measure_cap; ++x) {
      auto r = eval(decider, {Natural(x)}, measure_cap);
      if (r.halted() && r.value == 1) {
        const std::uint64_t t = std::max(x + 1, r.steps_used);
        if (t <= measure_cap) ready_.push_back(t);
      }
    }
    std::sort(ready_.begin(), ready_.end());
  }

  std::optional<std::uint64_t> time_for(std::uint64_t want) const {
    if (want == 0) return 0;
    if (want > ready_.size()) return std::nullopt;
    return ready_[want - 1];
  }

 private:
  std::vector<std::uint64_t> ready_;
};

}  // namespace snr
