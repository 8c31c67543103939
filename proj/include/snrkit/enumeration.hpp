#pragma once

#include "snrkit/machine.hpp"

#include <algorithm>
#include <cstdint>
#include <vector>

namespace snr {

/// W_{e,s}: the x <= s on which phi_e halts within s steps, in entry order.
/// x enters at stage max(x, halting steps); ties go to the smaller x. Under
/// this order W_{e,s} is a prefix of W_{e,s+1}.
inline std::vector<std::uint64_t> we_enumerate(const ProgramIndex& e, std::uint64_t stage) {
  struct Entry {
    std::uint64_t at;
    std::uint64_t x;
  };
  std::vector<Entry> entries;
  for (std::uint64_t x = 0; x <= stage; ++x) {
    auto out = eval(e, {Natural(x)}, stage);
    if (out.halted()) entries.push_back({std::max(x, out.steps_used), x});
  }
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.at != b.at ? a.at < b.at : a.x < b.x; });
  std::vector<std::uint64_t> xs;
  xs.reserve(entries.size());
  for (const auto& en : entries) xs.push_back(en.x);
  return xs;
}

/// W_{e,s}#u: the first u+1 entrants.
inline std::vector<std::uint64_t> we_truncate(const ProgramIndex& e, std::uint64_t stage, std::uint64_t u) {
  auto xs = we_enumerate(e, stage);
  if (xs.size() > u + 1) xs.resize(u + 1);
  return xs;
}

}  // namespace snr
