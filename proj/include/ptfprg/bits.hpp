#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ptfprg {

/// Fixed-length bit string. Bit b lives in word b/64 at position b%64.
/// Bits past `size()` in the last word are always zero.
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::size_t bits);
  BitString(std::vector<std::uint64_t> words, std::size_t bits);

  std::size_t size() const noexcept { return bits_; }
  const std::vector<std::uint64_t>& words() const noexcept { return words_; }
  std::vector<std::uint64_t>& mutable_words() noexcept { return words_; }

  bool bit(std::size_t b) const;
  void set_bit(std::size_t b, bool value);

  /// Reads `len` <= 64 bits starting at `offset`, least significant first.
  std::uint64_t extract(std::size_t offset, unsigned len) const;
  void deposit(std::size_t offset, unsigned len, std::uint64_t value);

  /// Clears stray bits above size() in the last word.
  void normalize() noexcept;

  /// Hex text: byte i is hex digits [2i, 2i+2); byte i holds bits 8i..8i+7
  /// with bit 8i as its least significant bit.
  static BitString from_hex(std::string_view hex, std::size_t bits);
  std::string to_hex() const;

  friend bool operator==(const BitString&, const BitString&) = default;

 private:
  std::vector<std::uint64_t> words_;
  std::size_t bits_ = 0;
};

}  // namespace ptfprg
