#pragma once

#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "circlift/error.hpp"

namespace circlift {

// Coefficients grow under scaling and Smith normal form elimination, so all
// integer (co)chains use arbitrary precision.
using Integer = boost::multiprecision::cpp_int;

inline std::string to_decimal(const Integer& z) { return z.str(); }

inline Integer parse_integer(const std::string& text) {
  if (text.empty()) throw Error(ErrorCode::FormatError, "empty integer literal");
  std::size_t start = (text[0] == '-' || text[0] == '+') ? 1 : 0;
  if (start == text.size()) throw Error(ErrorCode::FormatError, "bad integer literal '" + text + "'");
  for (std::size_t i = start; i < text.size(); ++i) {
    if (text[i] < '0' || text[i] > '9')
      throw Error(ErrorCode::FormatError, "bad integer literal '" + text + "'");
  }
  Integer z(text[0] == '+' ? text.substr(1) : text);
  return z;
}

inline Integer abs(const Integer& z) { return z < 0 ? Integer(-z) : z; }

/// Residue of z modulo m in [0, m).
inline std::uint64_t mod_u64(const Integer& z, std::uint64_t m) {
  Integer r = z % m;
  if (r < 0) r += m;
  return static_cast<std::uint64_t>(r);
}

}  // namespace circlift
