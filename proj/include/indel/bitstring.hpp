#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace indel {

// Mask with the low `len` bits set; valid for len in [0, 64].
constexpr std::uint64_t low_mask(int len) {
  return len >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << len) - 1;
}

// Reverses the order of the low `len` bits.
constexpr std::uint64_t reverse_bits(std::uint64_t bits, int len) {
  if (len == 0) return 0;
  std::uint64_t v = bits;
  v = ((v >> 1) & 0x5555555555555555ULL) | ((v & 0x5555555555555555ULL) << 1);
  v = ((v >> 2) & 0x3333333333333333ULL) | ((v & 0x3333333333333333ULL) << 2);
  v = ((v >> 4) & 0x0F0F0F0F0F0F0F0FULL) | ((v & 0x0F0F0F0F0F0F0F0FULL) << 4);
  v = ((v >> 8) & 0x00FF00FF00FF00FFULL) | ((v & 0x00FF00FF00FF00FFULL) << 8);
  v = ((v >> 16) & 0x0000FFFF0000FFFFULL) | ((v & 0x0000FFFF0000FFFFULL) << 16);
  v = (v >> 32) | (v << 32);
  return v >> (64 - len);
}

/// Binary word of length 0..64. Symbol i (0-based) is stored in bit i, so the
/// first transmitted symbol is the least significant bit.
class BitString {
 public:
  static constexpr int kMaxLength = 64;

  constexpr BitString() = default;
  // Throws InvalidArgument when len is out of range or bits has stray high bits.
  BitString(int len, std::uint64_t bits);

  // Parses a string of '0'/'1' characters, first character = first symbol.
  static BitString parse(std::string_view text);

  constexpr int size() const { return len_; }
  constexpr bool empty() const { return len_ == 0; }
  constexpr std::uint64_t bits() const { return bits_; }
  constexpr int operator[](int i) const { return static_cast<int>((bits_ >> i) & 1U); }

  BitString reversed() const { return {len_, reverse_bits(bits_, len_), Unchecked{}}; }
  BitString complemented() const { return {len_, ~bits_ & low_mask(len_), Unchecked{}}; }

  std::string str() const;

  // Orders by length, then by packed value.
  friend constexpr auto operator<=>(const BitString&, const BitString&) = default;

 private:
  struct Unchecked {};
  constexpr BitString(int len, std::uint64_t bits, Unchecked) : len_(len), bits_(bits) {}

  int len_ = 0;
  std::uint64_t bits_ = 0;
};

}  // namespace indel
