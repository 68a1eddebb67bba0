#include "indel/bitstring.hpp"

#include "indel/error.hpp"

namespace indel {

BitString::BitString(int len, std::uint64_t bits) : len_(len), bits_(bits) {
  if (len < 0 || len > kMaxLength) {
    throw InvalidArgument("BitString length " + std::to_string(len) + " outside [0, 64]");
  }
  if ((bits & ~low_mask(len)) != 0) {
    throw InvalidArgument("BitString has bits set at or above length " + std::to_string(len));
  }
}

BitString BitString::parse(std::string_view text) {
  if (text.size() > kMaxLength) throw InvalidArgument("BitString literal longer than 64 symbols");
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '1') {
      bits |= std::uint64_t{1} << i;
    } else if (text[i] != '0') {
      throw InvalidArgument("BitString literal contains '" + std::string(1, text[i]) + "'");
    }
  }
  return {static_cast<int>(text.size()), bits};
}

std::string BitString::str() const {
  std::string s(static_cast<std::size_t>(len_), '0');
  for (int i = 0; i < len_; ++i) {
    if ((*this)[i]) s[static_cast<std::size_t>(i)] = '1';
  }
  return s;
}

}  // namespace indel
