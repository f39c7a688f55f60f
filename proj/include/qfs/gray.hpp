#pragma once

#include <bit>
#include <cstdint>
#include <string>

namespace qfs {

// Gray code of b: adjacent integers map to words differing in exactly one
// bit (e.g. binary 1011 ↦ 1110, decimal 15 = 1111 ↦ 1000).
inline std::uint64_t to_gray(std::uint64_t b) { return b ^ (b >> 1); }

// Inverse mapping (prefix-XOR of the bits from the top down).
inline std::uint64_t from_gray(std::uint64_t g) {
  std::uint64_t b = g;
  for (int shift = 1; shift < 64; shift <<= 1) b ^= b >> shift;
  return b;
}

// Bitwise dot product modulo 2: parity of the AND of the two words.
inline int gray_dot(std::uint64_t a, std::uint64_t b) {
  return static_cast<int>(std::popcount(a & b) & 1);
}

// Fixed-width binary rendering, most significant bit first.
inline std::string to_bits(std::uint64_t value, int width) {
  std::string s(width, '0');
  for (int i = 0; i < width; ++i) {
    if ((value >> (width - 1 - i)) & 1ULL) s[i] = '1';
  }
  return s;
}

}  // namespace qfs
