#pragma once

#include "snrkit/natural.hpp"

#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace snr {

/// Cantor pairing: (x+y)(x+y+1)/2 + y.
inline Natural pair(const Natural& x, const Natural& y) {
  Natural s = x + y;
  return s * (s + 1) / 2 + y;
}

inline std::pair<Natural, Natural> unpair(const Natural& z) {
  if (z < 0) throw std::invalid_argument("unpair of negative value");
  Natural w = (boost::multiprecision::sqrt(Natural(8 * z + 1)) - 1) / 2;
  Natural t = w * (w + 1) / 2;
  Natural y = z - t;
  return {w - y, y};
}

/// Inverse of the arity-n tupling bijection tau_n : N -> N^n, where tau_1 is
/// the identity and tau_{n+1}(m) = (a, tau_n(b)) for (a, b) = unpair(m).
inline Natural tuple_encode(std::size_t arity, std::span<const Natural> t) {
  if (arity == 0) throw std::invalid_argument("tuple arity must be >= 1");
  if (t.size() != arity) throw std::invalid_argument("tuple size does not match arity");
  Natural acc = t[arity - 1];
  for (std::size_t i = arity - 1; i-- > 0;) acc = pair(t[i], acc);
  return acc;
}

inline Natural tuple_encode(std::size_t arity, const std::vector<Natural>& t) {
  return tuple_encode(arity, std::span<const Natural>(t));
}

inline std::vector<Natural> tuple_decode(std::size_t arity, Natural m) {
  if (arity == 0) throw std::invalid_argument("tuple arity must be >= 1");
  std::vector<Natural> out;
  out.reserve(arity);
  for (std::size_t i = 0; i + 1 < arity; ++i) {
    auto [a, b] = unpair(m);
    out.push_back(std::move(a));
    m = std::move(b);
  }
  out.push_back(std::move(m));
  return out;
}

/// i-th coordinate of tau_n(m).
inline Natural project(std::size_t arity, std::size_t i, Natural m) {
  if (arity == 0) throw std::invalid_argument("tuple arity must be >= 1");
  if (i >= arity) throw std::invalid_argument("projection index out of range");
  for (std::size_t k = 0; k < i; ++k) m = unpair(m).second;
  return i + 1 < arity ? unpair(m).first : m;
}

}  // namespace snr
