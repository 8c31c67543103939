#pragma once

// Brute-force bigness oracle: enumerates every subset of a small universe as
// a candidate tree, keeps the n-bushy ones above sigma, and records their leaf
// sets. B is n-big above sigma iff it contains one of those leaf sets.

#include <cstdint>
#include <vector>

namespace snr::testing {

struct TinyUniverse {
  std::vector<std::vector<std::uint32_t>> strings;  // strings[i]
  std::vector<int> parent;                          // -1 for the root
};

inline bool prefix_of(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
  if (a.size() > b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return false;
  return true;
}

inline TinyUniverse tiny_universe(const std::vector<std::uint32_t>& widths) {
  TinyUniverse u;
  u.strings.push_back({});
  u.parent.push_back(-1);
  for (std::size_t i = 0; i < u.strings.size(); ++i) {
    auto depth = u.strings[i].size();
    if (depth >= widths.size()) continue;
    for (std::uint32_t a = 0; a < widths[depth]; ++a) {
      auto s = u.strings[i];
      s.push_back(a);
      u.strings.push_back(s);
      u.parent.push_back(static_cast<int>(i));
    }
  }
  return u;
}

// big[n][sigma][mask]: subset `mask` of the universe is n-big above sigma.
inline std::vector<std::vector<std::vector<bool>>> brute_force_bigness(const TinyUniverse& u, unsigned n_max) {
  const std::size_t N = u.strings.size();
  const std::uint32_t subsets = 1u << N;
  std::vector<std::vector<std::vector<bool>>> big(n_max + 1,
                                                  std::vector<std::vector<bool>>(N, std::vector<bool>(subsets)));
  for (std::size_t s = 0; s < N; ++s) {
    const auto& sigma = u.strings[s];
    for (std::uint32_t tree = 0; tree < subsets; ++tree) {
      if (!((tree >> s) & 1u)) continue;
      bool ok = true;
      for (std::size_t i = 0; i < N && ok; ++i) {
        if (!((tree >> i) & 1u)) continue;
        const auto& t = u.strings[i];
        if (!prefix_of(t, sigma) && !prefix_of(sigma, t)) ok = false;
        // members strictly above sigma need their parent
        if (t.size() > sigma.size() && !((tree >> u.parent[i]) & 1u)) ok = false;
      }
      if (!ok) continue;
      std::uint32_t leaf_mask = 0;
      unsigned min_branch = ~0u;
      for (std::size_t i = 0; i < N && ok; ++i) {
        if (!((tree >> i) & 1u)) continue;
        unsigned kids = 0;
        for (std::size_t j = 0; j < N; ++j)
          if (((tree >> j) & 1u) && u.parent[j] == static_cast<int>(i)) ++kids;
        if (kids == 0) {
          if (!prefix_of(sigma, u.strings[i])) ok = false;
          leaf_mask |= 1u << i;
        } else if (u.strings[i].size() >= sigma.size()) {
          min_branch = std::min(min_branch, kids);
        }
      }
      if (!ok) continue;
      for (unsigned n = 1; n <= n_max; ++n)
        if (min_branch >= n) big[n][s][leaf_mask] = true;
    }
    // Superset closure over the leaf sets.
    for (unsigned n = 1; n <= n_max; ++n) {
      auto& f = big[n][s];
      for (std::size_t bit = 0; bit < N; ++bit)
        for (std::uint32_t m = 0; m < subsets; ++m)
          if ((m >> bit) & 1u && f[m ^ (1u << bit)]) f[m] = true;
    }
  }
  return big;
}

}  // namespace snr::testing
