#pragma once

#include <bit>
#include <cstdint>
#include <string>

#include "qcsc/errors.hpp"

namespace qcsc {

// A measurement outcome over `width` sites. Site i is bit i of the mask, and
// character i of the printed form, so "1100" means sites 0 and 1 occupied.
using Bitstring = std::uint64_t;

inline int hamming_weight(Bitstring x) { return std::popcount(x); }

inline std::string bitstring_to_string(Bitstring x, int width) {
  std::string s(static_cast<std::size_t>(width), '0');
  for (int i = 0; i < width; ++i) {
    if ((x >> i) & 1u) s[static_cast<std::size_t>(i)] = '1';
  }
  return s;
}

inline Bitstring bitstring_from_string(const std::string& s) {
  if (s.size() > 64) raise(ErrorCode::ParseError, "bitstring too wide");
  Bitstring x = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '1') {
      x |= Bitstring{1} << i;
    } else if (s[i] != '0') {
      raise(ErrorCode::ParseError, "bitstring must be 0/1: '" + s + "'");
    }
  }
  return x;
}

}  // namespace qcsc
