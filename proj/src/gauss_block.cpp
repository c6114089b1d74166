#include "ptfprg/gauss_block.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "ptfprg/error.hpp"

namespace ptfprg {

double box_muller(double u, double v) {
  if (!(u > 0.0) || u > 1.0) fail(ErrorKind::domain, "box_muller needs u in (0, 1]");
  if (!(v > 0.0) || v > 1.0) fail(ErrorKind::domain, "box_muller needs v in (0, 1]");
  return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
}

GaussianBlock::GaussianBlock(KWiseFamily u_family, KWiseFamily v_family, std::size_t n,
                             unsigned precision)
    : u_(std::move(u_family)), v_(std::move(v_family)), n_(n), precision_(precision) {
  if (u_.field() != v_.field() || u_.k() != v_.k()) {
    fail(ErrorKind::parameter, "u and v families must share field width and k");
  }
  if (precision_ == 0 || precision_ > u_.field().width) {
    fail(ErrorKind::precision, "precision M must lie in [1, w]");
  }
  if (n_ > 0 && !u_.field().contains(n_ - 1)) {
    fail(ErrorKind::position_overflow, "dimension n exceeds the field size");
  }
}

double GaussianBlock::sample(std::size_t j) const {
  if (j >= n_) {
    fail(ErrorKind::coordinate,
         "coordinate " + std::to_string(j) + " out of range for n=" + std::to_string(n_));
  }
  return box_muller(u_.uniform(j, precision_).unit(), v_.uniform(j, precision_).unit());
}

void GaussianBlock::sample_all(std::span<double> out) const {
  if (out.size() != n_) fail(ErrorKind::input_size, "output span must have n entries");
  if (u_.field().width == 64) {
    std::vector<FieldElement> scratch(2 * n_);
    sample_block64(u_.coeffs(), v_.coeffs(), precision_, scratch, out);
    return;
  }
  for (std::size_t j = 0; j < n_; ++j) out[j] = sample(j);
}

void sample_block64(std::span<const FieldElement> u_coeffs, std::span<const FieldElement> v_coeffs,
                    unsigned precision, std::span<FieldElement> scratch, std::span<double> out) {
  const std::size_t n = out.size();
  auto u_vals = scratch.first(n);
  auto v_vals = scratch.subspan(n, n);
  eval_prefix_points64(u_coeffs, u_vals);
  eval_prefix_points64(v_coeffs, v_vals);
  const unsigned shift = 64 - precision;
  for (std::size_t j = 0; j < n; ++j) {
    const double u = GridPoint{u_vals[j] >> shift, precision}.unit();
    const double v = GridPoint{v_vals[j] >> shift, precision}.unit();
    out[j] = std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
  }
}

DiscretizationBound closeness_bound(unsigned precision, double c0) {
  if (precision < 4) fail(ErrorKind::parameter, "closeness bound needs M >= 4");
  if (!(c0 > 0.0)) fail(ErrorKind::parameter, "closeness bound needs c0 > 0");
  const double delta = c0 * std::exp2(-0.5 * precision);
  if (delta >= 1.0) {
    fail(ErrorKind::parameter, "parameters too coarse: delta = c0*2^(-M/2) = " +
                                   std::to_string(delta) + " >= 1");
  }
  return {precision, delta, c0};
}

}  // namespace ptfprg
