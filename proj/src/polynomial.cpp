#include "ptfprg/polynomial.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "ptfprg/error.hpp"
#include "ptfprg/random.hpp"

namespace ptfprg {

namespace {

unsigned total_degree(const Exponents& e) noexcept {
  return std::accumulate(e.begin(), e.end(), 0U);
}

void check_same_n(std::size_t a, std::size_t b) {
  if (a != b) {
    fail(ErrorKind::input_size, "polynomials in " + std::to_string(a) + " and " +
                                    std::to_string(b) + " variables cannot be combined");
  }
}

// 1-D change-of-basis tables between x^a and the orthonormal h_k, built
// from x h_k = sqrt(k+1) h_{k+1} + sqrt(k) h_{k-1}.
struct HermiteTables {
  static constexpr unsigned kSize = 64;
  // monomial_in_hermite[a][k]: coefficient of h_k in x^a.
  std::vector<std::vector<double>> monomial_in_hermite;
  // hermite_in_monomial[k][a]: coefficient of x^a in h_k.
  std::vector<std::vector<double>> hermite_in_monomial;

  HermiteTables() : monomial_in_hermite(kSize + 1), hermite_in_monomial(kSize + 1) {
    monomial_in_hermite[0] = {1.0};
    for (unsigned a = 0; a < kSize; ++a) {
      const auto& prev = monomial_in_hermite[a];
      std::vector<double> next(a + 2, 0.0);
      for (unsigned k = 0; k <= a; ++k) {
        if (prev[k] == 0.0) continue;
        next[k + 1] += std::sqrt(static_cast<double>(k + 1)) * prev[k];
        if (k > 0) next[k - 1] += std::sqrt(static_cast<double>(k)) * prev[k];
      }
      monomial_in_hermite[a + 1] = std::move(next);
    }
    hermite_in_monomial[0] = {1.0};
    hermite_in_monomial[1] = {0.0, 1.0};
    for (unsigned k = 1; k < kSize; ++k) {
      // h_{k+1} = (x h_k - sqrt(k) h_{k-1}) / sqrt(k+1)
      std::vector<double> next(k + 2, 0.0);
      const auto& hk = hermite_in_monomial[k];
      const auto& hkm1 = hermite_in_monomial[k - 1];
      for (unsigned a = 0; a <= k; ++a) next[a + 1] += hk[a];
      for (unsigned a = 0; a < hkm1.size(); ++a) next[a] -= std::sqrt(static_cast<double>(k)) * hkm1[a];
      for (double& v : next) v /= std::sqrt(static_cast<double>(k + 1));
      hermite_in_monomial[k + 1] = std::move(next);
    }
  }
};

const HermiteTables& tables() {
  static const HermiteTables t;
  return t;
}

// Expands one product term through the per-variable table `rows`
// (rows[e] lists the coefficients of the image of degree e).
template <class Sink>
void tensor_expand(const Exponents& e, double c, const std::vector<std::vector<double>>& rows,
                   Sink&& sink) {
  std::vector<std::pair<Exponents, double>> acc{{Exponents(e.size(), 0), c}};
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] == 0) continue;
    const auto& row = rows[e[i]];
    std::vector<std::pair<Exponents, double>> next;
    next.reserve(acc.size() * row.size());
    for (const auto& [idx, val] : acc) {
      for (std::size_t k = 0; k < row.size(); ++k) {
        if (row[k] == 0.0) continue;
        Exponents j = idx;
        j[i] = static_cast<std::uint16_t>(k);
        next.emplace_back(std::move(j), val * row[k]);
      }
    }
    acc = std::move(next);
  }
  for (auto& [idx, val] : acc) sink(idx, val);
}

}  // namespace

Polynomial Polynomial::constant(std::size_t n, double value) {
  Polynomial p(n);
  p.add_term(Exponents(n, 0), value);
  return p;
}

Polynomial Polynomial::variable(std::size_t n, std::size_t i) {
  if (i >= n) fail(ErrorKind::input_size, "variable index out of range");
  Polynomial p(n);
  Exponents e(n, 0);
  e[i] = 1;
  p.add_term(e, 1.0);
  return p;
}

Polynomial Polynomial::from_terms(std::size_t n,
                                  const std::vector<std::pair<Exponents, double>>& terms) {
  Polynomial p(n);
  for (const auto& [e, c] : terms) p.add_term(e, c);
  return p;
}

unsigned Polynomial::degree() const noexcept {
  unsigned d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, total_degree(e));
  return d;
}

double Polynomial::coeff(const Exponents& e) const {
  const auto it = terms_.find(e);
  return it == terms_.end() ? 0.0 : it->second;
}

void Polynomial::add_term(const Exponents& e, double coeff) {
  if (e.size() != n_) {
    fail(ErrorKind::input_size, "exponent vector has " + std::to_string(e.size()) +
                                    " entries, polynomial has " + std::to_string(n_) +
                                    " variables");
  }
  if (coeff == 0.0) return;
  auto [it, inserted] = terms_.try_emplace(e, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0.0) terms_.erase(it);
  }
}

double Polynomial::eval(std::span<const double> x) const {
  if (x.size() != n_) {
    fail(ErrorKind::input_size, "point has " + std::to_string(x.size()) +
                                    " coordinates, polynomial has " + std::to_string(n_) +
                                    " variables");
  }
  double sum = 0.0;
  for (const auto& [e, c] : terms_) {
    double t = c;
    for (std::size_t i = 0; i < n_; ++i) {
      for (unsigned r = 0; r < e[i]; ++r) t *= x[i];
    }
    sum += t;
  }
  return sum;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  check_same_n(n_, other.n_);
  for (const auto& [e, c] : other.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  check_same_n(n_, other.n_);
  for (const auto& [e, c] : other.terms_) add_term(e, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(double s) {
  if (s == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, c] : terms_) c *= s;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  check_same_n(a.n_, b.n_);
  Polynomial out(a.n_);
  Exponents e(a.n_);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      for (std::size_t i = 0; i < a.n_; ++i) e[i] = static_cast<std::uint16_t>(ea[i] + eb[i]);
      out.add_term(e, ca * cb);
    }
  }
  return out;
}

double Polynomial::max_abs_coeff() const noexcept {
  double m = 0.0;
  for (const auto& [e, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

Polynomial Polynomial::embed(std::size_t m) const {
  if (m < n_) fail(ErrorKind::input_size, "cannot embed into fewer variables");
  Polynomial out(m);
  for (const auto& [e, c] : terms_) {
    Exponents f(m, 0);
    std::copy(e.begin(), e.end(), f.begin());
    out.add_term(f, c);
  }
  return out;
}

Polynomial substitute_linear(const Polynomial& p, const std::vector<LinearForm>& forms,
                             std::size_t m) {
  if (forms.size() != p.n()) fail(ErrorKind::input_size, "need one linear form per variable");
  std::vector<std::vector<Polynomial>> powers(p.n());
  auto power = [&](std::size_t i, unsigned e) -> const Polynomial& {
    auto& cache = powers[i];
    if (cache.empty()) {
      cache.push_back(Polynomial::constant(m, 1.0));
      Polynomial form(m);
      for (const auto& [v, coef] : forms[i]) {
        if (v >= m) fail(ErrorKind::input_size, "linear form refers to a missing variable");
        Exponents ev(m, 0);
        ev[v] = 1;
        form.add_term(ev, coef);
      }
      cache.push_back(std::move(form));
    }
    while (cache.size() <= e) cache.push_back(cache.back() * cache[1]);
    return cache[e];
  };
  Polynomial out(m);
  for (const auto& [e, c] : p.terms()) {
    Polynomial term = Polynomial::constant(m, c);
    for (std::size_t i = 0; i < p.n(); ++i) {
      if (e[i] != 0) term = term * power(i, e[i]);
    }
    out += term;
  }
  return out;
}

double gaussian_moment(unsigned a) noexcept {
  if (a % 2 != 0) return 0.0;
  double m = 1.0;
  for (unsigned j = a; j > 1; j -= 2) m *= static_cast<double>(j - 1);
  return m;
}

Polynomial integrate_gaussian_tail(const Polynomial& p, std::size_t keep) {
  if (keep > p.n()) fail(ErrorKind::input_size, "cannot keep more variables than exist");
  Polynomial out(keep);
  for (const auto& [e, c] : p.terms()) {
    double moment = 1.0;
    for (std::size_t i = keep; i < p.n() && moment != 0.0; ++i) moment *= gaussian_moment(e[i]);
    if (moment == 0.0) continue;
    out.add_term(Exponents(e.begin(), e.begin() + static_cast<std::ptrdiff_t>(keep)), c * moment);
  }
  return out;
}

double HermiteExpansion::coeff(const Exponents& a) const {
  const auto it = coeffs_.find(a);
  return it == coeffs_.end() ? 0.0 : it->second;
}

void HermiteExpansion::add(const Exponents& a, double c) {
  if (a.size() != n_) fail(ErrorKind::input_size, "multi-index has the wrong length");
  if (c == 0.0) return;
  auto [it, inserted] = coeffs_.try_emplace(a, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) coeffs_.erase(it);
  }
}

double HermiteExpansion::norm_squared() const noexcept {
  double s = 0.0;
  for (const auto& [a, c] : coeffs_) s += c * c;
  return s;
}

double HermiteExpansion::max_abs_coeff() const noexcept {
  double m = 0.0;
  for (const auto& [a, c] : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

double HermiteExpansion::eval(std::span<const double> x) const {
  if (x.size() != n_) fail(ErrorKind::input_size, "point has the wrong dimension");
  unsigned top = 0;
  for (const auto& [a, c] : coeffs_) {
    for (auto ai : a) top = std::max<unsigned>(top, ai);
  }
  // h[i][k] = h_k(x_i)
  std::vector<std::vector<double>> h(n_, std::vector<double>(top + 1));
  for (std::size_t i = 0; i < n_; ++i) {
    h[i][0] = 1.0;
    if (top >= 1) h[i][1] = x[i];
    for (unsigned k = 1; k < top; ++k) {
      h[i][k + 1] = (x[i] * h[i][k] - std::sqrt(static_cast<double>(k)) * h[i][k - 1]) /
                    std::sqrt(static_cast<double>(k + 1));
    }
  }
  double sum = 0.0;
  for (const auto& [a, c] : coeffs_) {
    double t = c;
    for (std::size_t i = 0; i < n_; ++i) t *= h[i][a[i]];
    sum += t;
  }
  return sum;
}

Polynomial HermiteExpansion::to_polynomial() const {
  Polynomial out(n_);
  for (const auto& [a, c] : coeffs_) {
    if (total_degree(a) > HermiteTables::kSize) {
      fail(ErrorKind::degree, "Hermite index exceeds the internal table size");
    }
    tensor_expand(a, c, tables().hermite_in_monomial,
                  [&](const Exponents& e, double v) { out.add_term(e, v); });
  }
  return out;
}

HermiteExpansion hermite_expand(const Polynomial& p) {
  if (p.degree() > kMaxHermiteDegree) {
    fail(ErrorKind::degree, "Hermite expansion supports degree <= " +
                                std::to_string(kMaxHermiteDegree) + " (got " +
                                std::to_string(p.degree()) + ")");
  }
  HermiteExpansion out(p.n());
  for (const auto& [e, c] : p.terms()) {
    tensor_expand(e, c, tables().monomial_in_hermite,
                  [&](const Exponents& a, double v) { out.add(a, v); });
  }
  return out;
}

double l2_norm(const Polynomial& p) { return std::sqrt(hermite_expand(p).norm_squared()); }

Estimate lk_norm_mc(const Polynomial& p, double t, std::uint64_t samples, std::uint64_t seed) {
  if (!(t >= 1.0)) fail(ErrorKind::domain, "norm order t must be >= 1");
  if (samples < 1000) fail(ErrorKind::parameter, "lk_norm_mc needs at least 1000 samples");
  constexpr std::uint64_t kChunk = 4096;
  const Moments m = chunked_reduce<Moments>(samples, kChunk, [&](std::uint64_t chunk,
                                                                 std::uint64_t begin,
                                                                 std::uint64_t end) {
    NormalSource normal(substream_key(seed, chunk));
    std::vector<double> y(p.n());
    Moments acc;
    for (std::uint64_t s = begin; s < end; ++s) {
      normal.fill(y);
      acc.add(std::pow(std::abs(p.eval(y)), t));
    }
    return acc;
  });
  const double mean = m.mean();
  if (mean <= 0.0) return {0.0, 0.0, samples};
  const double value = std::pow(mean, 1.0 / t);
  const double se = m.stderr_of_mean() * value / (t * mean);
  return {value, se, samples};
}

HermiteExpansion ou_scale(const HermiteExpansion& h, double lambda) {
  HermiteExpansion out(h.n());
  for (const auto& [a, c] : h.coeffs()) {
    out.add(a, c * std::pow(lambda, static_cast<double>(total_degree(a))));
  }
  return out;
}

Polynomial ou_apply(const Polynomial& p, double theta) {
  return ou_scale(hermite_expand(p), std::cos(theta)).to_polynomial();
}

std::vector<Exponents> multi_indices(std::size_t n, unsigned d) {
  std::vector<Exponents> out;
  Exponents cur(n, 0);
  // Fill positions i.. with total exactly `left`, first position largest first.
  auto rec = [&](auto&& self, std::size_t i, unsigned left) -> void {
    if (i + 1 == n) {
      cur[i] = static_cast<std::uint16_t>(left);
      out.push_back(cur);
      return;
    }
    for (unsigned e = left + 1; e-- > 0;) {
      cur[i] = static_cast<std::uint16_t>(e);
      self(self, i + 1, left - e);
    }
    cur[i] = 0;
  };
  if (n == 0) {
    out.emplace_back();
    return out;
  }
  for (unsigned t = 0; t <= d; ++t) rec(rec, 0, t);
  return out;
}

Polynomial random_poly(std::size_t n, unsigned d, std::uint64_t seed, Basis basis) {
  if (n < 1) fail(ErrorKind::parameter, "random_poly needs n >= 1");
  // binom(n + d, d), bailing out once it passes the cap
  double count = 1.0;
  for (unsigned i = 1; i <= d; ++i) {
    count = count * static_cast<double>(n + i) / static_cast<double>(i);
    if (count > static_cast<double>(kMaxDenseTerms)) {
      fail(ErrorKind::degree, "random_poly: binom(n+d, d) exceeds " + std::to_string(kMaxDenseTerms));
    }
  }
  NormalSource normal(seed);
  const auto indices = multi_indices(n, d);
  if (basis == Basis::monomial) {
    Polynomial p(n);
    for (const auto& e : indices) p.add_term(e, normal());
    return p;
  }
  HermiteExpansion h(n);
  for (const auto& a : indices) h.add(a, normal());
  return h.to_polynomial();
}

Polynomial normalized(const Polynomial& p) {
  const double norm = l2_norm(p);
  return norm > 0.0 ? p * (1.0 / norm) : p;
}

}  // namespace ptfprg
