#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "ptfprg/error.hpp"
#include "ptfprg/noisy_deriv.hpp"
#include "ptfprg/polynomial.hpp"
#include "ptfprg/random.hpp"

using namespace ptfprg;

namespace {

Polynomial linear(const std::vector<double>& g) {
  Polynomial p(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    Exponents e(g.size(), 0);
    e[i] = 1;
    p.add_term(e, g[i]);
  }
  return p;
}

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::io;
}

}  // namespace

TEST_CASE("noisy point and derivative of a linear form") {
  const std::vector<double> x = {1.0, 2.0}, y = {0.5, -1.0}, z = {-2.0, 0.0};
  const double t = 0.4;
  const auto np = noisy_point(x, y, t);
  CHECK(np[0] == doctest::Approx(std::cos(t) + 0.5 * std::sin(t)));
  const Polynomial p = linear({3.0, -1.0});
  // sin(t) g.(Y - Z) / t
  CHECK(noisy_derivative(p, x, y, z, t) == doctest::Approx(std::sin(t) * (3.0 * 2.5 - 1.0 * -1.0) / t));
  CHECK(kind_of([&] { noisy_derivative(p, x, y, z, 0.0); }) == ErrorKind::domain);
}

TEST_CASE("iterated derivative of x^2 by hand") {
  // D_{Y,Z} x^2 = ((cx + sY)^2 - (cx + sZ)^2)/t = (2cs x (Y - Z) + s^2 (Y^2 - Z^2))/t
  // D_{Y1,Z1} of that in x: 2cs (Y - Z) * s (Y1 - Z1) / t^2 (terms without x cancel).
  const Polynomial p = Polynomial::from_terms(1, {{{2}, 1.0}});
  const double t = 0.3, c = std::cos(t), s = std::sin(t);
  const std::vector<double> x = {0.8};
  const std::vector<std::vector<double>> ys = {{1.1}, {0.2}}, zs = {{-0.4}, {0.9}};
  const double inner = 2 * c * s * (ys[1][0] - zs[1][0]) / t;
  CHECK(iterated_noisy_derivative(p, x, ys, zs, t) ==
        doctest::Approx(inner * s * (ys[0][0] - zs[0][0]) / t).epsilon(1e-10));
}

TEST_CASE("derivative norm of a linear form: 2 sin^2(t)/t^2 |g|^2") {
  const std::vector<double> g = {1.0, -2.0, 0.5};
  const Polynomial p = linear(g);
  const double t = 0.5;
  const double exact = 2.0 * std::pow(std::sin(t) / t, 2) * (1.0 + 4.0 + 0.25);
  const std::vector<double> x = {0.1, 0.2, 0.3};
  const Estimate mc = deriv_norm_mc(p, x, 1, t, 100'000, 3);
  CHECK(std::abs(mc.value - exact) < 4.0 * mc.std_error);
  const Polynomial q = deriv_norm_poly(p, 1, t);
  CHECK(q.degree() == 0);
  CHECK(q.coeff({0, 0, 0}) == doctest::Approx(exact).epsilon(1e-12));
  const Estimate zero = deriv_norm_mc(p, x, 0, t, 10, 3);
  CHECK(zero.value == doctest::Approx(std::pow(0.1 - 0.4 + 0.15, 2)));
  CHECK(zero.std_error == 0.0);
}

TEST_CASE("symbolic and Monte Carlo derivative norms agree") {
  const Polynomial p = normalized(random_poly(2, 3, 4, Basis::hermite));
  const std::vector<double> x = {0.4, -1.1};
  for (unsigned ell : {1u, 2u}) {
    const double exact = deriv_norm_poly(p, ell, 0.4).eval(x);
    const Estimate mc = deriv_norm_mc(p, x, ell, 0.4, 200'000, 10 + ell);
    CAPTURE(ell);
    CHECK(std::abs(mc.value - exact) < 4.0 * mc.std_error);
  }
  CHECK(kind_of([&] { deriv_norm_poly(random_poly(5, 2, 1, Basis::hermite), 1, 0.4); }) ==
        ErrorKind::capability);
}

TEST_CASE("q_lm exact and Monte Carlo routes agree") {
  const Polynomial p = normalized(random_poly(2, 2, 7, Basis::hermite));
  const std::vector<double> x = {0.9, 0.3};
  DerivParams params;
  params.theta = 0.3;
  params.ell = 1;
  params.m = 2;
  params.samples = 400;
  params.outer_samples = 4000;
  const Estimate exact = q_lm(p, x, params, ProfileMode::exact, 0);
  const Estimate mc = q_lm(p, x, params, ProfileMode::mc, 5);
  CHECK(exact.std_error == 0.0);
  CHECK(std::abs(mc.value - exact.value) < 4.0 * mc.std_error);
}

TEST_CASE("interpolation coefficients match an independent null-space solve") {
  for (double theta : {0.3, 0.8, 1.3}) {
    for (unsigned D = 0; D <= 4; ++D) {
      CAPTURE(theta);
      CAPTURE(D);
      const double lam = std::cos(theta);
      std::vector<std::vector<double>> a(D + 1, std::vector<double>(D + 2));
      for (unsigned j = 0; j <= D; ++j) {
        for (unsigned m = 0; m <= D + 1; ++m) a[j][m] = std::pow(lam, double(m) * j);
      }
      const auto ref = oracle::null_vector(a);
      const auto s = interp_coeffs(D, theta);
      REQUIRE(s.coeffs.size() == D + 2);
      for (unsigned m = 0; m <= D + 1; ++m) CHECK(s.coeffs[m] == doctest::Approx(ref[m]).epsilon(1e-8));
    }
  }
}

TEST_CASE("degree-1 scheme is proportional to (lambda, -(1+lambda), 1)") {
  const double theta = 0.5, lam = std::cos(theta);
  const auto s = interp_coeffs(1, theta);
  CHECK(s.coeffs[0] == doctest::Approx(lam / (1 + lam)));
  CHECK(s.coeffs[1] == doctest::Approx(-1.0));
  CHECK(s.coeffs[2] == doctest::Approx(1.0 / (1 + lam)));
}

TEST_CASE("interpolation scheme properties") {
  for (double theta : {0.05, 0.1, 0.3}) {
    for (unsigned D = 1; D <= 4; ++D) {
      const auto s = interp_coeffs(D, theta);
      double sum = 0.0, mx = 0.0;
      for (double c : s.coeffs) {
        sum += c;
        mx = std::max(mx, std::abs(c));
      }
      CHECK(std::abs(sum) <= 1e-12);
      CHECK(mx == doctest::Approx(1.0).epsilon(1e-14));
      CHECK(s.coeffs[0] > 0.0);
      CHECK(s.response(0) == 0.0);
      for (unsigned j = 1; j <= D; ++j) CHECK(std::abs(s.response(j)) < 1e-12);
      CHECK(std::abs(s.response(D + 1)) > 0.0);
      CHECK(s.spread() >= 1.0);
    }
  }
  CHECK(kind_of([] { interp_coeffs(2, 0.0); }) == ErrorKind::domain);
  CHECK(kind_of([] { interp_coeffs(2, std::numbers::pi / 2); }) == ErrorKind::domain);
}

TEST_CASE("annihilation of low-degree polynomials") {
  for (unsigned d = 1; d <= 4; ++d) {
    const Polynomial p = random_poly(3, d, d, Basis::hermite);
    for (double theta : {0.05, 0.1, 0.3}) {
      const auto r = verify_annihilation(p, interp_coeffs(d, theta));
      CHECK(r.residual <= 1e-9);
      CHECK(r.poly_degree == d);
    }
  }
  const Polynomial cubic = random_poly(2, 3, 1, Basis::hermite);
  CHECK(kind_of([&] { verify_annihilation(cubic, interp_coeffs(2, 0.3)); }) == ErrorKind::degree);
  // Negative control where the residual is large: d = 1 against the D = 0
  // scheme leaves 1 - cos(theta) of the linear part.
  const Polynomial lin = linear({1.0, 2.0});
  const auto ctl = annihilation_residual(lin, interp_coeffs(0, 0.3));
  CHECK(ctl.residual == doctest::Approx(1.0 - std::cos(0.3)));
}

TEST_CASE("annihilation residual matches a direct sum over OU powers") {
  const Polynomial p = random_poly(2, 3, 9, Basis::monomial);
  const double theta = 0.7;
  const auto s = interp_coeffs(2, theta);
  Polynomial acc(2);
  Polynomial power = p;
  for (std::size_t m = 0; m < s.coeffs.size(); ++m) {
    acc += s.coeffs[m] * power;
    power = ou_apply(power, theta);
  }
  const double direct = hermite_expand(acc).max_abs_coeff() / hermite_expand(p).max_abs_coeff();
  CHECK(annihilation_residual(p, s).residual == doctest::Approx(direct).epsilon(1e-8));
}

TEST_CASE("size versus derivative for p = x: (2/pi) atan(eps sqrt(2) sin(t)/t)") {
  const Polynomial p = linear({1.0});
  const std::vector<double> grid = {0.01, 0.02, 0.05, 0.2};
  const auto rows = size_vs_derivative(p, grid, 0.5, 400'000, 13);
  REQUIRE(rows.size() == grid.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double t = rows[i].theta;
    CHECK(t == doctest::Approx(grid[i] / 2));
    const double exact = 2.0 / std::numbers::pi * std::atan(grid[i] * std::sqrt(2.0) * std::sin(t) / t);
    CHECK(std::abs(rows[i].frequency.value - exact) < 4.0 * rows[i].frequency.std_error);
    if (i > 0) CHECK(rows[i].frequency.value >= rows[i - 1].frequency.value);
  }
}
