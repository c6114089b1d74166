#include "ptfprg/bits.hpp"

#include <cctype>

#include "ptfprg/error.hpp"

namespace ptfprg {

namespace {

std::size_t word_count(std::size_t bits) { return (bits + 63) / 64; }

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  const int lower = std::tolower(static_cast<unsigned char>(c));
  if (lower >= 'a' && lower <= 'f') return lower - 'a' + 10;
  return -1;
}

}  // namespace

BitString::BitString(std::size_t bits) : words_(word_count(bits), 0), bits_(bits) {}

BitString::BitString(std::vector<std::uint64_t> words, std::size_t bits)
    : words_(std::move(words)), bits_(bits) {
  if (words_.size() != word_count(bits)) {
    fail(ErrorKind::input_size, "bit string: " + std::to_string(words_.size()) +
                                    " words cannot hold exactly " + std::to_string(bits) +
                                    " bits");
  }
  normalize();
}

void BitString::normalize() noexcept {
  const unsigned tail = bits_ % 64;
  if (tail != 0 && !words_.empty()) words_.back() &= (std::uint64_t{1} << tail) - 1;
}

bool BitString::bit(std::size_t b) const {
  if (b >= bits_) fail(ErrorKind::input_size, "bit index out of range");
  return (words_[b / 64] >> (b % 64)) & 1U;
}

void BitString::set_bit(std::size_t b, bool value) {
  if (b >= bits_) fail(ErrorKind::input_size, "bit index out of range");
  const std::uint64_t mask = std::uint64_t{1} << (b % 64);
  if (value) {
    words_[b / 64] |= mask;
  } else {
    words_[b / 64] &= ~mask;
  }
}

std::uint64_t BitString::extract(std::size_t offset, unsigned len) const {
  if (len == 0) return 0;
  if (len > 64 || offset + len > bits_) {
    fail(ErrorKind::input_size, "bit range out of bounds");
  }
  const std::size_t w = offset / 64;
  const unsigned s = offset % 64;
  std::uint64_t value = words_[w] >> s;
  if (s != 0 && s + len > 64) value |= words_[w + 1] << (64 - s);
  if (len < 64) value &= (std::uint64_t{1} << len) - 1;
  return value;
}

void BitString::deposit(std::size_t offset, unsigned len, std::uint64_t value) {
  for (unsigned i = 0; i < len; ++i) set_bit(offset + i, (value >> i) & 1U);
}

BitString BitString::from_hex(std::string_view hex, std::size_t bits) {
  if (hex.starts_with("0x") || hex.starts_with("0X")) hex.remove_prefix(2);
  if (bits % 8 != 0) fail(ErrorKind::input_size, "hex seeds need a whole number of bytes");
  if (hex.size() != bits / 4) {
    fail(ErrorKind::input_size, "seed has " + std::to_string(hex.size() * 4) +
                                    " bits of hex, expected exactly " + std::to_string(bits));
  }
  BitString out(bits);
  for (std::size_t i = 0; i < bits / 8; ++i) {
    const int hi = hex_value(hex[2 * i]);
    const int lo = hex_value(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) fail(ErrorKind::parse, "seed contains a non-hex character");
    const auto byte = static_cast<std::uint64_t>(hi * 16 + lo);
    out.words_[i / 8] |= byte << (8 * (i % 8));
  }
  return out;
}

std::string BitString::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bits_ / 4 + 2);
  for (std::size_t i = 0; i < (bits_ + 7) / 8; ++i) {
    const auto byte = static_cast<unsigned>((words_[i / 8] >> (8 * (i % 8))) & 0xFF);
    out.push_back(kDigits[byte >> 4]);
    out.push_back(kDigits[byte & 0xF]);
  }
  return out;
}

}  // namespace ptfprg
