#pragma once

// Exact k-wise independent families of w-bit strings: a uniformly random
// polynomial of degree k-1 over GF(2^w), evaluated at distinct points.

#include <cstdint>
#include <span>
#include <vector>

#include "ptfprg/bits.hpp"

namespace ptfprg {

using FieldElement = std::uint64_t;

/// Binary field GF(2^w). `reduction` holds the low w bits of the monic
/// irreducible modulus; the x^w term is implicit.
struct FieldSpec {
  unsigned width = 64;
  std::uint64_t reduction = 0x1B;

  /// Pinned moduli: w=4 x^4+x+1, w=8 x^8+x^4+x^3+x+1, w=16 x^16+x^5+x^3+x+1,
  /// w=32 x^32+x^7+x^3+x^2+1, w=64 x^64+x^4+x^3+x+1.
  static FieldSpec standard(unsigned width);

  std::uint64_t mask() const noexcept {
    return width == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width) - 1;
  }
  bool contains(std::uint64_t value) const noexcept { return (value & ~mask()) == 0; }

  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;
};

/// Carry-less 64x64 -> 128 bit product.
unsigned __int128 clmul(std::uint64_t a, std::uint64_t b) noexcept;

/// Product in GF(2^w). Operands must already be field elements.
FieldElement gf_mul(const FieldSpec& spec, FieldElement a, FieldElement b);

/// Value of a k-wise uniform coordinate on the grid {2^-M, 2*2^-M, ..., 1}:
/// the grid point is (top_bits + 1) / 2^M, rounded up so it is never zero.
struct GridPoint {
  std::uint64_t top_bits = 0;
  unsigned precision = 0;

  double unit() const noexcept;
};

class KWiseFamily {
 public:
  /// Coefficients come from consecutive w-bit chunks of `seed`,
  /// highest degree first. The seed must hold exactly k*w bits.
  static KWiseFamily from_seed(const FieldSpec& spec, unsigned k, const BitString& seed);

  /// As above, reading k*w bits of a longer seed starting at `offset`.
  static KWiseFamily from_bits(const FieldSpec& spec, unsigned k, const BitString& seed,
                               std::size_t offset);

  KWiseFamily(const FieldSpec& spec, std::vector<FieldElement> coeffs);

  const FieldSpec& field() const noexcept { return spec_; }
  unsigned k() const noexcept { return static_cast<unsigned>(coeffs_.size()); }
  std::span<const FieldElement> coeffs() const noexcept { return coeffs_; }

  /// Horner evaluation at the field element whose bit pattern is `index`.
  FieldElement eval(std::uint64_t index) const;

  /// Top M bits of eval(index) as a grid point.
  GridPoint uniform(std::uint64_t index, unsigned precision) const;

 private:
  FieldSpec spec_;
  std::vector<FieldElement> coeffs_;
};

/// Evaluates the polynomial with `coeffs` (highest degree first) at the points
/// 0, 1, ..., out.size()-1 of GF(2^64) simultaneously.
void eval_prefix_points64(std::span<const FieldElement> coeffs, std::span<FieldElement> out);

}  // namespace ptfprg
