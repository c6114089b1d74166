#include "ptfprg/gf_kwise.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <utility>
#include <string>

#include "ptfprg/error.hpp"

namespace ptfprg {

FieldSpec FieldSpec::standard(unsigned width) {
  switch (width) {
    case 4: return {4, 0x3};
    case 8: return {8, 0x1B};
    case 16: return {16, 0x2B};
    case 32: return {32, 0x8D};
    case 64: return {64, 0x1B};
    default:
      fail(ErrorKind::parameter,
           "field width must be one of 4, 8, 16, 32, 64 (got " + std::to_string(width) + ")");
  }
}

unsigned __int128 clmul(std::uint64_t a, std::uint64_t b) noexcept {
  unsigned __int128 acc = 0;
  while (b != 0) {
    acc ^= static_cast<unsigned __int128>(a) << std::countr_zero(b);
    b &= b - 1;
  }
  return acc;
}

FieldElement gf_mul(const FieldSpec& spec, FieldElement a, FieldElement b) {
  if (!spec.contains(a) || !spec.contains(b)) {
    fail(ErrorKind::domain, "gf_mul operand is not an element of GF(2^" +
                                std::to_string(spec.width) + ")");
  }
  unsigned __int128 product = clmul(a, b);
  const unsigned __int128 low_mask = spec.mask();
  // x^w = reduction, so fold the high part down until it vanishes.
  for (;;) {
    const auto high = static_cast<std::uint64_t>(product >> spec.width);
    if (high == 0) break;
    product = (product & low_mask) ^ clmul(high, spec.reduction);
  }
  return static_cast<FieldElement>(product);
}

double GridPoint::unit() const noexcept {
  return std::ldexp(static_cast<double>(top_bits) + 1.0, -static_cast<int>(precision));
}

KWiseFamily::KWiseFamily(const FieldSpec& spec, std::vector<FieldElement> coeffs)
    : spec_(spec), coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) fail(ErrorKind::parameter, "k-wise family needs k >= 1");
  for (FieldElement c : coeffs_) {
    if (!spec_.contains(c)) fail(ErrorKind::domain, "coefficient is not a field element");
  }
}

KWiseFamily KWiseFamily::from_seed(const FieldSpec& spec, unsigned k, const BitString& seed) {
  const std::size_t expected = std::size_t{k} * spec.width;
  if (seed.size() != expected) {
    fail(ErrorKind::input_size, "k-wise seed must be exactly k*w = " + std::to_string(expected) +
                                    " bits (got " + std::to_string(seed.size()) + ")");
  }
  return from_bits(spec, k, seed, 0);
}

KWiseFamily KWiseFamily::from_bits(const FieldSpec& spec, unsigned k, const BitString& seed,
                                   std::size_t offset) {
  if (k == 0) fail(ErrorKind::parameter, "k-wise family needs k >= 1");
  if (offset + std::size_t{k} * spec.width > seed.size()) {
    fail(ErrorKind::input_size, "seed too short for k-wise family");
  }
  std::vector<FieldElement> coeffs(k);
  for (unsigned i = 0; i < k; ++i) coeffs[i] = seed.extract(offset + std::size_t{i} * spec.width, spec.width);
  return KWiseFamily(spec, std::move(coeffs));
}

FieldElement KWiseFamily::eval(std::uint64_t index) const {
  if (!spec_.contains(index)) {
    fail(ErrorKind::position_overflow, "position " + std::to_string(index) +
                                           " does not fit in GF(2^" +
                                           std::to_string(spec_.width) + ")");
  }
  FieldElement acc = 0;
  for (FieldElement c : coeffs_) acc = gf_mul(spec_, acc, index) ^ c;
  return acc;
}

GridPoint KWiseFamily::uniform(std::uint64_t index, unsigned precision) const {
  if (precision == 0 || precision > spec_.width) {
    fail(ErrorKind::precision, "precision M=" + std::to_string(precision) +
                                   " must lie in [1, w=" + std::to_string(spec_.width) + "]");
  }
  return {eval(index) >> (spec_.width - precision), precision};
}

namespace {

// a * x in GF(2^64) for x < 256: at most 7 bits spill past x^63, and one
// fold with x^4+x^3+x+1 lands them below bit 12.
inline FieldElement mul_small64(FieldElement a, unsigned x) noexcept {
  FieldElement lo = 0;
  FieldElement hi = 0;
  for (unsigned b = 0; x != 0; ++b, x >>= 1) {
    const FieldElement m = FieldElement{0} - (x & 1U);
    lo ^= (a << b) & m;
    if (b != 0) hi ^= (a >> (64 - b)) & m;
  }
  return lo ^ hi ^ (hi << 1) ^ (hi << 3) ^ (hi << 4);
}

// Same product with x fixed at compile time, so the bit loop unrolls into
// straight shifts and xors.
template <unsigned X>
inline FieldElement mul_const64(FieldElement a) noexcept {
  if constexpr (X == 0) {
    return 0;
  } else if constexpr (X == 1) {
    return a;
  } else {
    FieldElement lo = 0;
    FieldElement hi = 0;
    [&]<unsigned... B>(std::integer_sequence<unsigned, B...>) {
      ((((X >> B) & 1U) ? (lo ^= a << B, hi ^= B != 0 ? a >> ((64 - B) & 63) : 0) : 0), ...);
    }(std::make_integer_sequence<unsigned, std::bit_width(X)>{});
    return lo ^ hi ^ (hi << 1) ^ (hi << 3) ^ (hi << 4);
  }
}

// Eight lanes at once: lane j holds the Horner accumulator for the point j,
// and multiplication by j is a masked sum of acc, acc<<1, acc<<2.
using Lanes8 = FieldElement __attribute__((vector_size(64)));

#if defined(__GNUC__) && !defined(__clang__) && defined(__x86_64__)
__attribute__((target_clones("avx512f", "avx2", "default")))
#endif
void horner_points8(std::span<const FieldElement> coeffs, std::span<FieldElement> out) {
  const Lanes8 m0 = {0, ~0ULL, 0, ~0ULL, 0, ~0ULL, 0, ~0ULL};
  const Lanes8 m1 = {0, 0, ~0ULL, ~0ULL, 0, 0, ~0ULL, ~0ULL};
  const Lanes8 m2 = {0, 0, 0, 0, ~0ULL, ~0ULL, ~0ULL, ~0ULL};
  Lanes8 acc = {};
  for (FieldElement c : coeffs) {
    const Lanes8 lo = (acc & m0) ^ ((acc << 1) & m1) ^ ((acc << 2) & m2);
    const Lanes8 hi = ((acc >> 63) & m1) ^ ((acc >> 62) & m2);
    acc = lo ^ hi ^ (hi << 1) ^ (hi << 3) ^ (hi << 4) ^ c;
  }
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = acc[j];
}

template <unsigned Bits>
void horner_points(std::span<const FieldElement> coeffs, std::span<FieldElement> out) {
  constexpr unsigned kPoints = 1U << Bits;
  FieldElement acc[kPoints] = {};
  [&]<unsigned... J>(std::integer_sequence<unsigned, J...>) {
    for (FieldElement c : coeffs) ((acc[J] = mul_const64<J>(acc[J]) ^ c), ...);
  }(std::make_integer_sequence<unsigned, kPoints>{});
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = acc[j];
}

}  // namespace

void eval_prefix_points64(std::span<const FieldElement> coeffs, std::span<FieldElement> out) {
  const std::size_t n = out.size();
  if (n == 0) return;
  if (n <= 2) {
    // p(0) is the constant term, p(1) the XOR of all coefficients.
    FieldElement sum = 0;
    for (FieldElement c : coeffs) sum ^= c;
    out[0] = coeffs.back();
    if (n == 2) out[1] = sum;
    return;
  }
  if (n <= 8) return horner_points8(coeffs, out);
  if (n <= 16) return horner_points<4>(coeffs, out);
  if (n <= 256) {
    std::vector<FieldElement> acc(n, 0);
    for (FieldElement c : coeffs) {
      for (std::size_t j = 0; j < n; ++j) acc[j] = mul_small64(acc[j], static_cast<unsigned>(j)) ^ c;
    }
    std::copy(acc.begin(), acc.end(), out.begin());
    return;
  }
  const FieldSpec spec = FieldSpec::standard(64);
  for (std::size_t j = 0; j < n; ++j) {
    FieldElement acc = 0;
    for (FieldElement c : coeffs) acc = gf_mul(spec, acc, j) ^ c;
    out[j] = acc;
  }
}

}  // namespace ptfprg
