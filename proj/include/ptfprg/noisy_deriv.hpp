#pragma once

// Noisy points, noisy derivatives, averaged derivative norms q_{l,m} and
// the interpolation schemes that annihilate low-degree OU orbits.

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ptfprg/polynomial.hpp"
#include "ptfprg/stats.hpp"

namespace ptfprg {

/// cos(theta) X + sin(theta) Y.
std::vector<double> noisy_point(std::span<const double> x, std::span<const double> y, double theta);

/// (p(N_Y(X)) - p(N_Z(X))) / theta.
double noisy_derivative(const Polynomial& p, std::span<const double> x, std::span<const double> y,
                        std::span<const double> z, double theta);

/// D_{Y_1,Z_1} ... D_{Y_l,Z_l} p (X) with directions given as
/// ys[r], zs[r] for r = 0..l-1 (r = 0 is the outermost derivative).
double iterated_noisy_derivative(const Polynomial& p, std::span<const double> x,
                                 const std::vector<std::vector<double>>& ys,
                                 const std::vector<std::vector<double>>& zs, double theta);

/// |p^(l)_theta(X)|_2^2: exact p(X)^2 for l = 0, otherwise Monte Carlo over
/// iid Gaussian direction pairs drawn from substreams of `seed`.
Estimate deriv_norm_mc(const Polynomial& p, std::span<const double> x, unsigned ell, double theta,
                       std::uint64_t samples, std::uint64_t seed);

/// Caps of the symbolic path.
inline constexpr std::size_t kExactMaxN = 4;
inline constexpr unsigned kExactMaxDegree = 3;
inline constexpr unsigned kExactMaxEll = 2;

/// X -> |p^(l)_theta(X)|_2^2 as a polynomial: expand the iterated derivative
/// over (X, Y_1, Z_1, ...), square it and integrate out the directions with
/// Gaussian moments. Throws a capability error past the caps above.
Polynomial deriv_norm_poly(const Polynomial& p, unsigned ell, double theta);

enum class ProfileMode { mc, exact };

struct DerivParams {
  double theta = 0.1;
  unsigned ell = 0;
  unsigned m = 0;
  /// Inner samples (directions) per outer sample.
  std::uint64_t samples = 10'000;
  /// Outer samples of the m-fold averaging chain.
  std::uint64_t outer_samples = 1'000;
};

/// q_{l,m}(X) = (A^theta)^m |p^(l)_theta(X)|_2^2.
Estimate q_lm(const Polynomial& p, std::span<const double> x, const DerivParams& params,
              ProfileMode mode, std::uint64_t seed);

struct ProfileEntry {
  unsigned ell = 0;
  unsigned m = 0;
  Estimate q;
};

struct DerivProfile {
  std::vector<double> point;
  std::vector<ProfileEntry> values;
};

/// q_{l,m}(X) for all l <= max_ell, m <= max_m.
DerivProfile deriv_profile(const Polynomial& p, std::span<const double> x, unsigned max_ell,
                           unsigned max_m, DerivParams base, ProfileMode mode, std::uint64_t seed);

/// Coefficients c_0..c_{D+1} with sum_m c_m lambda^(m j) = 0 for j = 0..D,
/// lambda = cos(theta).
struct InterpolationScheme {
  unsigned degree = 0;
  double theta = 0.0;
  std::vector<double> coeffs;
  std::string normalization = "max|c|=1,c0>0";

  double lambda() const;
  /// sum_m c_m lambda^(m j); exactly 0 at j = 0.
  double response(unsigned j) const;
  /// max |c_m| / min nonzero |c_m|.
  double spread() const;
};

/// The null vector of the (D+1) x (D+2) system is the coefficient vector of
/// prod_{j=0..D} (z - lambda^j); c_0 is then re-derived so that the
/// coefficients sum to exactly zero.
InterpolationScheme interp_coeffs(unsigned degree, double theta);

struct AnnihilationReport {
  unsigned scheme_degree = 0;
  unsigned poly_degree = 0;
  double theta = 0.0;
  /// max |Hermite coefficient of sum_m c_m (A^theta)^m p|
  double residual_abs = 0.0;
  /// residual_abs / max |Hermite coefficient of p|
  double residual = 0.0;
};

/// Residual of sum_m c_m (A^theta)^m p, applied coefficientwise in the
/// Hermite basis. Unchecked so negative controls can run; see below.
AnnihilationReport annihilation_residual(const Polynomial& p, const InterpolationScheme& scheme);

/// As above, but a degree error if deg p > scheme.degree.
AnnihilationReport verify_annihilation(const Polynomial& p, const InterpolationScheme& scheme);

struct SizeVsDerivativeRow {
  double eps = 0.0;
  double theta = 0.0;
  Estimate frequency;
};

/// Pr(|p(X)| < eps |D^theta_{Y,Z} p(X)|) with theta = eps * theta_ratio,
/// using the same (X, Y, Z) samples for every eps on the grid.
std::vector<SizeVsDerivativeRow> size_vs_derivative(const Polynomial& p,
                                                    std::span<const double> eps_grid,
                                                    double theta_ratio, std::uint64_t samples,
                                                    std::uint64_t seed);

}  // namespace ptfprg
