#include "ptfprg/noisy_deriv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <string>

#include "ptfprg/error.hpp"
#include "ptfprg/random.hpp"

namespace ptfprg {

namespace {

constexpr std::uint64_t kChunk = 2048;

void check_dims(std::size_t a, std::size_t b) {
  if (a != b) fail(ErrorKind::input_size, "vector dimensions do not match");
}

void check_theta(double theta) {
  if (!(theta > 0.0)) fail(ErrorKind::domain, "noisy derivative needs theta > 0");
}

// g_r(P) = (g_{r+1}(N_{Y_r} P) - g_{r+1}(N_{Z_r} P)) / theta, g_l = p.
double derivative_at(const Polynomial& p, std::span<const double> point,
                     const std::vector<std::vector<double>>& ys,
                     const std::vector<std::vector<double>>& zs, std::size_t level, double cs,
                     double sn, double theta, std::vector<std::vector<double>>& work) {
  if (level == ys.size()) return p.eval(point);
  auto& buf = work[level];
  const std::size_t n = point.size();
  for (std::size_t i = 0; i < n; ++i) buf[i] = cs * point[i] + sn * ys[level][i];
  const double a = derivative_at(p, buf, ys, zs, level + 1, cs, sn, theta, work);
  for (std::size_t i = 0; i < n; ++i) buf[i] = cs * point[i] + sn * zs[level][i];
  const double b = derivative_at(p, buf, ys, zs, level + 1, cs, sn, theta, work);
  return (a - b) / theta;
}

// Serial estimator shared by deriv_norm_mc chunks and q_lm inner loops.
Moments deriv_norm_samples(const Polynomial& p, std::span<const double> x, unsigned ell,
                           double theta, std::uint64_t count, NormalSource& normal) {
  const std::size_t n = x.size();
  std::vector<std::vector<double>> ys(ell, std::vector<double>(n));
  std::vector<std::vector<double>> zs(ell, std::vector<double>(n));
  std::vector<std::vector<double>> work(ell, std::vector<double>(n));
  const double cs = std::cos(theta);
  const double sn = std::sin(theta);
  Moments acc;
  for (std::uint64_t s = 0; s < count; ++s) {
    for (unsigned r = 0; r < ell; ++r) {
      normal.fill(ys[r]);
      normal.fill(zs[r]);
    }
    const double v = derivative_at(p, x, ys, zs, 0, cs, sn, theta, work);
    acc.add(v * v);
  }
  return acc;
}

// E over the trailing variables of a(v) * b(v), keeping the first `keep`.
Polynomial gaussian_tail_of_product(const Polynomial& a, const Polynomial& b, std::size_t keep) {
  const std::size_t m = a.n();
  std::map<Exponents, double> acc;
  Exponents head(keep);
  for (const auto& [ea, ca] : a.terms()) {
    for (const auto& [eb, cb] : b.terms()) {
      double moment = 1.0;
      for (std::size_t i = keep; i < m; ++i) {
        const unsigned e = ea[i] + eb[i];
        if (e % 2 != 0) {
          moment = 0.0;
          break;
        }
        if (e != 0) moment *= gaussian_moment(e);
      }
      if (moment == 0.0) continue;
      for (std::size_t i = 0; i < keep; ++i) head[i] = static_cast<std::uint16_t>(ea[i] + eb[i]);
      acc[head] += ca * cb * moment;
    }
  }
  Polynomial out(keep);
  for (const auto& [e, c] : acc) out.add_term(e, c);
  return out;
}

}  // namespace

std::vector<double> noisy_point(std::span<const double> x, std::span<const double> y, double theta) {
  check_dims(x.size(), y.size());
  const double cs = std::cos(theta);
  const double sn = std::sin(theta);
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = cs * x[i] + sn * y[i];
  return out;
}

double noisy_derivative(const Polynomial& p, std::span<const double> x, std::span<const double> y,
                        std::span<const double> z, double theta) {
  check_theta(theta);
  check_dims(x.size(), y.size());
  check_dims(x.size(), z.size());
  return (p.eval(noisy_point(x, y, theta)) - p.eval(noisy_point(x, z, theta))) / theta;
}

double iterated_noisy_derivative(const Polynomial& p, std::span<const double> x,
                                 const std::vector<std::vector<double>>& ys,
                                 const std::vector<std::vector<double>>& zs, double theta) {
  if (ys.size() != zs.size()) fail(ErrorKind::input_size, "need one Z per Y direction");
  if (!ys.empty()) check_theta(theta);
  for (std::size_t r = 0; r < ys.size(); ++r) {
    check_dims(x.size(), ys[r].size());
    check_dims(x.size(), zs[r].size());
  }
  std::vector<std::vector<double>> work(ys.size(), std::vector<double>(x.size()));
  return derivative_at(p, x, ys, zs, 0, std::cos(theta), std::sin(theta), theta, work);
}

Estimate deriv_norm_mc(const Polynomial& p, std::span<const double> x, unsigned ell, double theta,
                       std::uint64_t samples, std::uint64_t seed) {
  check_dims(p.n(), x.size());
  if (ell == 0) {
    const double v = p.eval(x);
    return {v * v, 0.0, 0};
  }
  check_theta(theta);
  if (samples < 1) fail(ErrorKind::parameter, "deriv_norm_mc needs samples >= 1");
  const Moments m = chunked_reduce<Moments>(
      samples, kChunk, [&](std::uint64_t chunk, std::uint64_t begin, std::uint64_t end) {
        NormalSource normal(substream_key(seed, chunk));
        return deriv_norm_samples(p, x, ell, theta, end - begin, normal);
      });
  return m.estimate();
}

Polynomial deriv_norm_poly(const Polynomial& p, unsigned ell, double theta) {
  const std::size_t n = p.n();
  if (n > kExactMaxN || p.degree() > kExactMaxDegree || ell > kExactMaxEll) {
    fail(ErrorKind::capability, "exact derivative norms need n <= 4, d <= 3, l <= 2 (got n=" +
                                    std::to_string(n) + ", d=" + std::to_string(p.degree()) +
                                    ", l=" + std::to_string(ell) + ")");
  }
  if (ell == 0) return p * p;
  check_theta(theta);
  const std::size_t m = n * (1 + 2 * ell);
  const double cs = std::cos(theta);
  const double sn = std::sin(theta);
  // Variables: X = [0, n), Y_r = [n(1+2r), n(2+2r)), Z_r = [n(2+2r), n(3+2r)).
  auto forms_toward = [&](std::size_t dir_base) {
    std::vector<LinearForm> forms(m);
    for (std::size_t v = 0; v < m; ++v) forms[v] = {{v, 1.0}};
    for (std::size_t i = 0; i < n; ++i) forms[i] = {{i, cs}, {dir_base + i, sn}};
    return forms;
  };
  Polynomial g = p.embed(m);
  for (std::size_t r = ell; r-- > 0;) {
    const std::size_t y_base = n * (1 + 2 * r);
    const std::size_t z_base = y_base + n;
    g = (substitute_linear(g, forms_toward(y_base), m) - substitute_linear(g, forms_toward(z_base), m)) *
        (1.0 / theta);
  }
  return gaussian_tail_of_product(g, g, n);
}

Estimate q_lm(const Polynomial& p, std::span<const double> x, const DerivParams& params,
              ProfileMode mode, std::uint64_t seed) {
  check_dims(p.n(), x.size());
  if (mode == ProfileMode::exact) {
    Polynomial q = deriv_norm_poly(p, params.ell, params.theta);
    for (unsigned i = 0; i < params.m; ++i) q = ou_apply(q, params.theta);
    return {q.eval(x), 0.0, 0};
  }
  if (params.m == 0) return deriv_norm_mc(p, x, params.ell, params.theta, params.samples, seed);
  if (params.outer_samples < 2) fail(ErrorKind::parameter, "q_lm needs at least 2 outer samples");
  const double cs = std::cos(params.theta);
  const double sn = std::sin(params.theta);
  const std::size_t n = x.size();
  const Moments m = chunked_reduce<Moments>(
      params.outer_samples, 16, [&](std::uint64_t chunk, std::uint64_t begin, std::uint64_t end) {
        NormalSource normal(substream_key(seed, chunk));
        std::vector<double> point(n);
        std::vector<double> w(n);
        Moments acc;
        for (std::uint64_t s = begin; s < end; ++s) {
          std::copy(x.begin(), x.end(), point.begin());
          for (unsigned i = 0; i < params.m; ++i) {
            normal.fill(w);
            for (std::size_t j = 0; j < n; ++j) point[j] = cs * point[j] + sn * w[j];
          }
          if (params.ell == 0) {
            const double v = p.eval(point);
            acc.add(v * v);
          } else {
            acc.add(deriv_norm_samples(p, point, params.ell, params.theta, params.samples, normal)
                        .mean());
          }
        }
        return acc;
      });
  return m.estimate();
}

DerivProfile deriv_profile(const Polynomial& p, std::span<const double> x, unsigned max_ell,
                           unsigned max_m, DerivParams base, ProfileMode mode, std::uint64_t seed) {
  DerivProfile out;
  out.point.assign(x.begin(), x.end());
  for (unsigned ell = 0; ell <= max_ell; ++ell) {
    for (unsigned m = 0; m <= max_m; ++m) {
      base.ell = ell;
      base.m = m;
      out.values.push_back(
          {ell, m, q_lm(p, x, base, mode, substream_key(seed, ell * 1000003ULL + m))});
    }
  }
  return out;
}

double InterpolationScheme::lambda() const { return std::cos(theta); }

double InterpolationScheme::response(unsigned j) const {
  const double lam = lambda();
  double s = 0.0;
  for (std::size_t m = coeffs.size(); m-- > 1;) {
    s += coeffs[m] * std::pow(lam, static_cast<double>(m) * j);
  }
  return s + coeffs[0];
}

double InterpolationScheme::spread() const {
  double hi = 0.0;
  double lo = std::numeric_limits<double>::infinity();
  for (double c : coeffs) {
    if (c == 0.0) continue;
    hi = std::max(hi, std::abs(c));
    lo = std::min(lo, std::abs(c));
  }
  return hi / lo;
}

InterpolationScheme interp_coeffs(unsigned degree, double theta) {
  if (!(theta > 0.0 && theta < std::numbers::pi / 2)) {
    fail(ErrorKind::domain, "interpolation needs theta in (0, pi/2)");
  }
  const double lam = std::cos(theta);
  if (lam >= 1.0) fail(ErrorKind::domain, "cos(theta) rounds to 1; eigenvalues are degenerate");
  // Ascending coefficients of prod_{j=0..D} (z - lam^j).
  std::vector<double> c{1.0};
  for (unsigned j = 0; j <= degree; ++j) {
    const double root = std::pow(lam, static_cast<double>(j));
    std::vector<double> next(c.size() + 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i + 1] += c[i];
      next[i] -= root * c[i];
    }
    c = std::move(next);
  }
  double top = 0.0;
  for (double v : c) top = std::max(top, std::abs(v));
  const double sign = c[0] < 0.0 ? -1.0 : 1.0;
  for (double& v : c) v *= sign / top;
  // Re-derive c_0 so the sum, taken in response() order, is exactly zero.
  double rest = 0.0;
  for (std::size_t m = c.size(); m-- > 1;) rest += c[m];
  c[0] = -rest;
  return {degree, theta, std::move(c)};
}

AnnihilationReport annihilation_residual(const Polynomial& p, const InterpolationScheme& scheme) {
  const HermiteExpansion h = hermite_expand(p);
  AnnihilationReport rep;
  rep.scheme_degree = scheme.degree;
  rep.poly_degree = p.degree();
  rep.theta = scheme.theta;
  std::vector<double> response(rep.poly_degree + 1);
  for (unsigned j = 0; j <= rep.poly_degree; ++j) response[j] = scheme.response(j);
  for (const auto& [a, coef] : h.coeffs()) {
    unsigned j = 0;
    for (auto ai : a) j += ai;
    rep.residual_abs = std::max(rep.residual_abs, std::abs(coef * response[j]));
  }
  const double scale = h.max_abs_coeff();
  rep.residual = scale > 0.0 ? rep.residual_abs / scale : 0.0;
  return rep;
}

AnnihilationReport verify_annihilation(const Polynomial& p, const InterpolationScheme& scheme) {
  if (p.degree() > scheme.degree) {
    fail(ErrorKind::degree, "polynomial degree " + std::to_string(p.degree()) +
                                " exceeds the scheme degree " + std::to_string(scheme.degree));
  }
  return annihilation_residual(p, scheme);
}

std::vector<SizeVsDerivativeRow> size_vs_derivative(const Polynomial& p,
                                                    std::span<const double> eps_grid,
                                                    double theta_ratio, std::uint64_t samples,
                                                    std::uint64_t seed) {
  const std::size_t g = eps_grid.size();
  const std::size_t n = p.n();
  std::vector<double> thetas(g);
  for (std::size_t i = 0; i < g; ++i) {
    thetas[i] = eps_grid[i] * theta_ratio;
    check_theta(thetas[i]);
  }
  const MomentsVec m = chunked_reduce<MomentsVec>(
      samples, kChunk, [&](std::uint64_t chunk, std::uint64_t begin, std::uint64_t end) {
        NormalSource normal(substream_key(seed, chunk));
        std::vector<double> x(n), y(n), z(n);
        MomentsVec acc(g);
        for (std::uint64_t s = begin; s < end; ++s) {
          normal.fill(x);
          normal.fill(y);
          normal.fill(z);
          const double px = std::abs(p.eval(x));
          for (std::size_t i = 0; i < g; ++i) {
            const double dv = std::abs(noisy_derivative(p, x, y, z, thetas[i]));
            acc.items[i].add(px < eps_grid[i] * dv ? 1.0 : 0.0);
          }
        }
        return acc;
      });
  std::vector<SizeVsDerivativeRow> rows(g);
  for (std::size_t i = 0; i < g; ++i) rows[i] = {eps_grid[i], thetas[i], m.items[i].estimate()};
  return rows;
}

}  // namespace ptfprg
