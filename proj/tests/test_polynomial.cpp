#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "ptfprg/error.hpp"
#include "ptfprg/polynomial.hpp"
#include "ptfprg/random.hpp"
#include "ptfprg/stats.hpp"

using namespace ptfprg;

namespace {

Polynomial x_pow(std::size_t n, std::size_t i, std::uint16_t a) {
  Exponents e(n, 0);
  e[i] = a;
  return Polynomial::from_terms(n, {{e, 1.0}});
}

// Probabilists' Hermite He_k by its explicit sum.
double hermite_he(unsigned k, double x) {
  double s = 0.0;
  for (unsigned m = 0; 2 * m <= k; ++m) {
    s += (m % 2 ? -1.0 : 1.0) * std::tgamma(k + 1.0) /
         (std::tgamma(m + 1.0) * std::tgamma(k - 2.0 * m + 1.0) * std::pow(2.0, m)) *
         std::pow(x, k - 2.0 * m);
  }
  return s;
}

// A^theta p by substituting cos(t) x + sin(t) y and integrating y out.
Polynomial ou_by_substitution(const Polynomial& p, double theta) {
  const std::size_t n = p.n();
  std::vector<LinearForm> forms;
  for (std::size_t i = 0; i < n; ++i) forms.push_back({{i, std::cos(theta)}, {n + i, std::sin(theta)}});
  return integrate_gaussian_tail(substitute_linear(p, forms, 2 * n), n);
}

double max_coeff_diff(const Polynomial& a, const Polynomial& b) { return (a - b).max_abs_coeff(); }

}  // namespace

TEST_CASE("evaluation and arithmetic") {
  const Polynomial p = Polynomial::from_terms(2, {{{2, 1}, 3.0}, {{0, 1}, -2.0}, {{0, 0}, 0.5}});
  const std::vector<double> x = {1.5, -2.0};
  CHECK(p.eval(x) == doctest::Approx(-9.0));
  CHECK(p.degree() == 3);
  CHECK(p.term_count() == 3);

  const Polynomial a = Polynomial::variable(1, 0) + Polynomial::constant(1, 1.0);
  const Polynomial b = Polynomial::variable(1, 0) - Polynomial::constant(1, 1.0);
  CHECK(a * b == x_pow(1, 0, 2) - Polynomial::constant(1, 1.0));

  Polynomial z(2);
  z.add_term({1, 1}, 2.0);
  z.add_term({1, 1}, -2.0);
  CHECK(z.is_zero());

  const Polynomial e = p.embed(4);
  CHECK(e.n() == 4);
  CHECK(e.eval(std::vector<double>{1.5, -2.0, 7.0, 9.0}) == doctest::Approx(-9.0));
  CHECK_THROWS_AS(p.eval(std::vector<double>{1.0}), Error);
  CHECK_THROWS_AS(Polynomial::variable(2, 2), Error);
}

TEST_CASE("products agree with pointwise products") {
  const Polynomial p = random_poly(3, 3, 1, Basis::monomial);
  const Polynomial q = random_poly(3, 2, 2, Basis::monomial);
  const Polynomial pq = p * q;
  NormalSource s(3);
  std::vector<double> x(3);
  for (int t = 0; t < 20; ++t) {
    s.fill(x);
    CHECK(pq.eval(x) == doctest::Approx(p.eval(x) * q.eval(x)).epsilon(1e-10));
  }
}

TEST_CASE("linear substitution and Gaussian integration") {
  const Polynomial xy = Polynomial::from_terms(2, {{{1, 1}, 1.0}});
  const Polynomial s = substitute_linear(xy, {{{0, 1.0}, {1, 1.0}}, {{0, 1.0}, {1, -1.0}}}, 2);
  CHECK(s == Polynomial::from_terms(2, {{{2, 0}, 1.0}, {{0, 2}, -1.0}}));

  const Polynomial p = Polynomial::from_terms(2, {{{2, 2}, 1.0}, {{0, 1}, 1.0}, {{1, 4}, 2.0}});
  CHECK(integrate_gaussian_tail(p, 1) == Polynomial::from_terms(1, {{{2}, 1.0}, {{1}, 6.0}}));
  CHECK(integrate_gaussian_tail(p, 0).coeff({}) == 1.0);  // E[x^2 y^2 + y + 2 x y^4]
}

TEST_CASE("Gaussian moments") {
  CHECK(gaussian_moment(0) == 1);
  CHECK(gaussian_moment(1) == 0);
  CHECK(gaussian_moment(2) == 1);
  CHECK(gaussian_moment(4) == 3);
  CHECK(gaussian_moment(6) == 15);
  CHECK(gaussian_moment(8) == 105);
  CHECK(gaussian_moment(7) == 0);
}

TEST_CASE("Hermite expansion worked examples") {
  const HermiteExpansion h2 = hermite_expand(x_pow(1, 0, 2));
  CHECK(h2.coeff({2}) == doctest::Approx(std::sqrt(2.0)));
  CHECK(h2.coeff({0}) == doctest::Approx(1.0));
  CHECK(h2.coeff({1}) == 0.0);
  const HermiteExpansion h3 = hermite_expand(x_pow(1, 0, 3));
  CHECK(h3.coeff({3}) == doctest::Approx(std::sqrt(6.0)));
  CHECK(h3.coeff({1}) == doctest::Approx(3.0));
  CHECK(l2_norm(x_pow(1, 0, 2)) == doctest::Approx(std::sqrt(3.0)));
}

TEST_CASE("Hermite coefficients match quadrature projections") {
  const Polynomial p = random_poly(1, 6, 11, Basis::monomial);
  const HermiteExpansion h = hermite_expand(p);
  for (unsigned k = 0; k <= 6; ++k) {
    const double proj = oracle::gaussian_expectation([&](double y) {
      return p.eval(std::vector<double>{y}) * hermite_he(k, y) / std::sqrt(std::tgamma(k + 1.0));
    });
    CHECK(h.coeff({static_cast<std::uint16_t>(k)}) == doctest::Approx(proj).epsilon(1e-8));
  }
}

TEST_CASE("Hermite round trip and direct evaluation") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Polynomial p = random_poly(3, 5, seed, Basis::monomial);
    const HermiteExpansion h = hermite_expand(p);
    CHECK(max_coeff_diff(h.to_polynomial(), p) < 1e-10);
    const std::vector<double> x = {0.3, -1.2, 2.0};
    CHECK(h.eval(x) == doctest::Approx(p.eval(x)).epsilon(1e-10));
  }
  CHECK_THROWS_AS(hermite_expand(x_pow(1, 0, 21)), Error);
}

TEST_CASE("L2 norm by Parseval") {
  const Polynomial p = Polynomial::from_terms(2, {{{2, 1}, 1.0}, {{0, 1}, 1.0}});
  CHECK(l2_norm(p) == doctest::Approx(std::sqrt(6.0)));
  const Polynomial q = random_poly(1, 4, 5, Basis::monomial);
  const double quad = oracle::gaussian_expectation([&](double y) {
    const double v = q.eval(std::vector<double>{y});
    return v * v;
  });
  CHECK(l2_norm(q) == doctest::Approx(std::sqrt(quad)).epsilon(1e-9));

  const Polynomial r = random_poly(3, 3, 6, Basis::monomial);
  const Estimate mc = lk_norm_mc(r, 2.0, 200'000, 7);
  CHECK(std::abs(mc.value - l2_norm(r)) < 4.0 * mc.std_error);
}

TEST_CASE("Lt norms by Monte Carlo") {
  const Estimate e = lk_norm_mc(x_pow(1, 0, 2), 4.0, 400'000, 8);
  CHECK(std::abs(e.value - std::pow(105.0, 0.25)) < 4.0 * e.std_error);
  const Estimate c = lk_norm_mc(Polynomial::constant(2, -2.0), 3.0, 1000, 9);
  CHECK(c.value == doctest::Approx(2.0).epsilon(1e-14));
  CHECK_THROWS_AS(lk_norm_mc(x_pow(1, 0, 2), 0.5, 1000, 1), Error);
  CHECK_THROWS_AS(lk_norm_mc(x_pow(1, 0, 2), 2.0, 999, 1), Error);
}

TEST_CASE("OU operator worked examples") {
  const Polynomial x2 = x_pow(1, 0, 2);
  const Polynomial a = ou_apply(x2, std::numbers::pi / 3);
  CHECK(a.coeff({2}) == doctest::Approx(0.25));
  CHECK(a.coeff({0}) == doctest::Approx(0.75));
  CHECK(ou_apply(Polynomial::constant(2, 3.0), 0.7) == Polynomial::constant(2, 3.0));

  // theta = pi/2 projects onto the mean.
  const Polynomial p = x2 + x_pow(1, 0, 1);
  const Polynomial m = ou_apply(p, std::numbers::pi / 2);
  CHECK(m.coeff({0}) == doctest::Approx(1.0));
  CHECK(std::abs(m.coeff({1})) < 1e-15);
  CHECK(std::abs(m.coeff({2})) < 1e-15);
}

TEST_CASE("OU via Hermite scaling equals OU via substitution") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const Polynomial p = random_poly(1 + seed % 3, 1 + seed % 4, seed, Basis::monomial);
    for (double theta : {0.05, 0.4, 1.2}) {
      CHECK(max_coeff_diff(ou_apply(p, theta), ou_by_substitution(p, theta)) <
            1e-10 * p.max_abs_coeff());
    }
  }
}

TEST_CASE("OU operator agrees with Monte Carlo averaging") {
  const Polynomial p = random_poly(2, 3, 21, Basis::monomial);
  const double theta = 0.6;
  const std::vector<double> x = {0.7, -0.4};
  NormalSource s(22);
  Moments m;
  std::vector<double> y(2), z(2);
  for (int t = 0; t < 200'000; ++t) {
    s.fill(y);
    for (int i = 0; i < 2; ++i) z[i] = std::cos(theta) * x[i] + std::sin(theta) * y[i];
    m.add(p.eval(z));
  }
  CHECK(std::abs(ou_apply(p, theta).eval(x) - m.mean()) < 4.0 * m.stderr_of_mean());
}

TEST_CASE("OU semigroup and contraction") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Polynomial p = random_poly(3, 4, seed, Basis::hermite);
    const double t1 = 0.3, t2 = 0.9;
    const double t3 = std::acos(std::cos(t1) * std::cos(t2));
    CHECK(max_coeff_diff(ou_apply(ou_apply(p, t1), t2), ou_apply(p, t3)) < 1e-10 * p.max_abs_coeff());
    const HermiteExpansion h = hermite_expand(p);
    CHECK(ou_scale(h, std::cos(t1)).norm_squared() <= h.norm_squared());
  }
}

TEST_CASE("multi-index enumeration order") {
  const auto idx = multi_indices(2, 2);
  const std::vector<Exponents> expect = {{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
  CHECK(idx == expect);
  CHECK(multi_indices(4, 3).size() == 35);
}

TEST_CASE("random polynomials") {
  CHECK(random_poly(3, 2, 5, Basis::hermite) == random_poly(3, 2, 5, Basis::hermite));
  CHECK_FALSE(random_poly(3, 2, 5, Basis::hermite) == random_poly(3, 2, 6, Basis::hermite));
  CHECK(random_poly(3, 2, 5, Basis::monomial).term_count() == 10);

  // Hermite coefficients are iid N(0,1), so E|p|_2^2 = binom(n+d, d).
  Moments m;
  for (std::uint64_t seed = 0; seed < 400; ++seed) m.add(std::pow(l2_norm(random_poly(2, 3, seed, Basis::hermite)), 2));
  CHECK(std::abs(m.mean() - 10.0) < 4.0 * m.stderr_of_mean());

  CHECK(l2_norm(normalized(random_poly(4, 3, 1, Basis::hermite))) == doctest::Approx(1.0));
  CHECK(normalized(Polynomial(2)).is_zero());
  CHECK_THROWS_AS(random_poly(100, 6, 1, Basis::hermite), Error);
}
