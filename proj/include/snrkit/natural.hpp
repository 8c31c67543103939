#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace snr {

/// Arbitrary-precision natural number. Program indices and register contents
/// routinely exceed 64 bits.
using Natural = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                              boost::multiprecision::et_off>;

inline bool fits_u64(const Natural& v) {
  return v >= 0 && v <= std::numeric_limits<std::uint64_t>::max();
}

inline std::uint64_t to_u64(const Natural& v) {
  if (!fits_u64(v)) {
    throw std::out_of_range("natural does not fit in 64 bits");
  }
  return v.convert_to<std::uint64_t>();
}

/// Saturating conversion, for quantities used only as sizes or positions.
inline std::uint64_t clamp_u64(const Natural& v) {
  if (v <= 0) return 0;
  if (!fits_u64(v)) return std::numeric_limits<std::uint64_t>::max();
  return v.convert_to<std::uint64_t>();
}

inline std::string to_string(const Natural& v) { return v.str(); }

inline Natural parse_natural(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty natural");
  for (char c : text) {
    if (c < '0' || c > '9') {
      throw std::invalid_argument("not a decimal natural: '" + text + "'");
    }
  }
  return Natural(text);
}

inline Natural ipow(const Natural& base, std::uint64_t exp) {
  Natural result = 1;
  for (std::uint64_t i = 0; i < exp; ++i) result *= base;
  return result;
}

}  // namespace snr
