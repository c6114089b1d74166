#pragma once

// Sparse multivariate real polynomials with an orthonormal Hermite view,
// exact Gaussian L2 norms and the Ornstein-Uhlenbeck operator.

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "ptfprg/stats.hpp"

namespace ptfprg {

using Exponents = std::vector<std::uint16_t>;

/// Largest total degree the Hermite change of basis accepts.
inline constexpr unsigned kMaxHermiteDegree = 20;
/// Largest dense multidegree set random_poly will enumerate.
inline constexpr std::uint64_t kMaxDenseTerms = 1'000'000;

class Polynomial {
 public:
  explicit Polynomial(std::size_t n = 0) : n_(n) {}

  static Polynomial constant(std::size_t n, double value);
  /// The polynomial x_i.
  static Polynomial variable(std::size_t n, std::size_t i);
  /// Sums duplicate exponent vectors and drops zeros.
  static Polynomial from_terms(std::size_t n, const std::vector<std::pair<Exponents, double>>& terms);

  std::size_t n() const noexcept { return n_; }
  unsigned degree() const noexcept;
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t term_count() const noexcept { return terms_.size(); }
  const std::map<Exponents, double>& terms() const noexcept { return terms_; }

  double coeff(const Exponents& e) const;
  void add_term(const Exponents& e, double coeff);

  double eval(std::span<const double> x) const;
  double operator()(std::span<const double> x) const { return eval(x); }

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(double s);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, double s) { return a *= s; }
  friend Polynomial operator*(double s, Polynomial a) { return a *= s; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

  /// Largest absolute coefficient.
  double max_abs_coeff() const noexcept;

  /// Same polynomial viewed in `m >= n` variables (new ones unused).
  Polynomial embed(std::size_t m) const;

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  std::size_t n_;
  std::map<Exponents, double> terms_;
};

/// A linear form sum_v coeffs[v] * y_v over some variable space.
using LinearForm = std::vector<std::pair<std::size_t, double>>;

/// p(L_1(y), ..., L_n(y)) as a polynomial in `m` variables y.
Polynomial substitute_linear(const Polynomial& p, const std::vector<LinearForm>& forms, std::size_t m);

/// E over y_keep..y_{n-1} iid standard Gaussian, leaving a polynomial in the
/// first `keep` variables.
Polynomial integrate_gaussian_tail(const Polynomial& p, std::size_t keep);

/// E[y^a] for standard Gaussian y: (a-1)!! for even a, 0 for odd a.
double gaussian_moment(unsigned a) noexcept;

/// Coefficients in the orthonormal probabilists' Hermite basis
/// h_a(x) = prod_i He_{a_i}(x_i) / sqrt(a_i!).
class HermiteExpansion {
 public:
  explicit HermiteExpansion(std::size_t n = 0) : n_(n) {}

  std::size_t n() const noexcept { return n_; }
  const std::map<Exponents, double>& coeffs() const noexcept { return coeffs_; }
  std::map<Exponents, double>& coeffs() noexcept { return coeffs_; }
  double coeff(const Exponents& a) const;
  void add(const Exponents& a, double c);

  /// Sum of squared coefficients (= E[p^2] by Parseval).
  double norm_squared() const noexcept;
  double max_abs_coeff() const noexcept;

  /// Direct evaluation with the three-term recurrence.
  double eval(std::span<const double> x) const;

  Polynomial to_polynomial() const;

 private:
  std::size_t n_;
  std::map<Exponents, double> coeffs_;
};

/// Throws a degree error above kMaxHermiteDegree.
HermiteExpansion hermite_expand(const Polynomial& p);

/// |p|_2 under the standard Gaussian, via Parseval.
double l2_norm(const Polynomial& p);

/// (E|p(Y)|^t)^(1/t) by Monte Carlo with a delta-method standard error.
Estimate lk_norm_mc(const Polynomial& p, double t, std::uint64_t samples, std::uint64_t seed);

/// Scales degree-|a| Hermite coefficients by lambda^|a|.
HermiteExpansion ou_scale(const HermiteExpansion& h, double lambda);

/// Ornstein-Uhlenbeck operator A^theta: E_Y[p(cos(theta) x + sin(theta) Y)].
Polynomial ou_apply(const Polynomial& p, double theta);

enum class Basis { monomial, hermite };

/// All exponent vectors of total degree <= d, by degree then descending
/// lexicographic order.
std::vector<Exponents> multi_indices(std::size_t n, unsigned d);

/// iid standard normal coefficients over every multidegree <= d in the
/// chosen basis.
Polynomial random_poly(std::size_t n, unsigned d, std::uint64_t seed, Basis basis);

/// p / |p|_2 (zero stays zero).
Polynomial normalized(const Polynomial& p);

}  // namespace ptfprg
