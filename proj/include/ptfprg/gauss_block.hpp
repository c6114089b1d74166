#pragma once

#include <cstddef>
#include <span>

#include "ptfprg/gf_kwise.hpp"

namespace ptfprg {

/// sqrt(-2 ln u) * cos(2 pi v) for u, v in (0, 1].
double box_muller(double u, double v);

/// One block Z_i: n discretized Gaussians built from two independently
/// seeded k-wise families (u side, v side) rounded to M bits.
class GaussianBlock {
 public:
  GaussianBlock(KWiseFamily u_family, KWiseFamily v_family, std::size_t n, unsigned precision);

  std::size_t n() const noexcept { return n_; }
  unsigned precision() const noexcept { return precision_; }
  const KWiseFamily& u_family() const noexcept { return u_; }
  const KWiseFamily& v_family() const noexcept { return v_; }

  /// Coordinate j of the block.
  double sample(std::size_t j) const;

  /// All n coordinates at once; out.size() must equal n.
  void sample_all(std::span<double> out) const;

 private:
  KWiseFamily u_;
  KWiseFamily v_;
  std::size_t n_;
  unsigned precision_;
};

/// Writes the n block coordinates for u/v coefficient vectors over
/// GF(2^64) into `out`, using `scratch` (size >= 2n) for field values.
/// This is the allocation-free path the generator uses.
void sample_block64(std::span<const FieldElement> u_coeffs, std::span<const FieldElement> v_coeffs,
                    unsigned precision, std::span<FieldElement> scratch, std::span<double> out);

/// Closeness parameter delta = c0 * 2^(-M/2) of the discretized samples.
struct DiscretizationBound {
  unsigned precision = 0;
  double delta = 0.0;
  double c0 = 0.0;
};

inline constexpr double kDefaultC0 = 8.0;

/// Throws a parameter error when delta >= 1 (grid too coarse).
DiscretizationBound closeness_bound(unsigned precision, double c0 = kDefaultC0);

}  // namespace ptfprg
