#include "ptfprg/harness.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ptfprg/error.hpp"
#include "ptfprg/gauss_block.hpp"
#include "ptfprg/noisy_deriv.hpp"
#include "ptfprg/random.hpp"

namespace ptfprg {

namespace {

constexpr std::uint64_t kGaussStream = 0x6A09E667F3BCC909ULL;
constexpr std::uint64_t kPrgChunk = 512;
constexpr std::uint64_t kMcChunk = 8192;

Estimate root_estimate(const Moments& m, double t) {
  const double mean = m.mean();
  if (mean <= 0.0) return {0.0, 0.0, m.count()};
  const double value = std::pow(mean, 1.0 / t);
  return {value, m.stderr_of_mean() * value / (t * mean), m.count()};
}

}  // namespace

std::optional<AnalyticMean> analytic_sign_mean(const Polynomial& p) {
  const unsigned d = p.degree();
  if (d == 0) {
    return AnalyticMean{ptf_sign(p.coeff(Exponents(p.n(), 0))), "analytic-constant"};
  }
  if (d == 1) {
    double norm2 = 0.0;
    double constant = 0.0;
    for (const auto& [e, c] : p.terms()) {
      if (std::all_of(e.begin(), e.end(), [](auto v) { return v == 0; })) {
        constant = c;
      } else {
        norm2 += c * c;
      }
    }
    // p = a.x - b with b = -constant; a.x ~ N(0, |a|^2)
    const double b = -constant;
    return AnalyticMean{1.0 - 2.0 * normal_cdf(b / std::sqrt(norm2)), "analytic-linear"};
  }
  if (p.term_count() == 1) {
    const auto& [e, c] = *p.terms().begin();
    const bool all_even = std::all_of(e.begin(), e.end(), [](auto v) { return v % 2 == 0; });
    return AnalyticMean{all_even ? ptf_sign(c) : 0.0, "analytic-monomial"};
  }
  return std::nullopt;
}

std::vector<FoolingReport> fooling_test(const PRGParams& params, const std::vector<PTF>& corpus,
                                        const FoolingConfig& config) {
  validate(params);
  if (config.draws_prg < 1000 || config.draws_gauss < 1000) {
    fail(ErrorKind::configuration, "fooling test needs at least 1000 draws on each side");
  }
  for (const auto& f : corpus) {
    if (f.p.n() != params.n) {
      fail(ErrorKind::configuration, "corpus member '" + f.id + "' has n=" +
                                         std::to_string(f.p.n()) + " but params have n=" +
                                         std::to_string(params.n));
    }
    if (f.p.degree() > params.d) {
      fail(ErrorKind::configuration, "corpus member '" + f.id + "' has degree " +
                                         std::to_string(f.p.degree()) + " > d=" +
                                         std::to_string(params.d));
    }
  }
  const std::size_t count = corpus.size();
  const std::size_t n = params.n;

  const MomentsVec prg = chunked_reduce<MomentsVec>(
      config.draws_prg, kPrgChunk, [&](std::uint64_t, std::uint64_t begin, std::uint64_t end) {
        StreamGenerator stream(params, config.master_seed);
        std::vector<double> x(n);
        MomentsVec acc(count);
        for (std::uint64_t t = begin; t < end; ++t) {
          stream.draw_into(t, x);
          for (std::size_t i = 0; i < count; ++i) acc.items[i].add(corpus[i](x));
        }
        return acc;
      });

  std::vector<std::optional<AnalyticMean>> analytic(count);
  std::vector<std::size_t> mc_members;
  for (std::size_t i = 0; i < count; ++i) {
    analytic[i] = analytic_sign_mean(corpus[i].p);
    if (!analytic[i] || !config.mc_only_when_needed) mc_members.push_back(i);
  }
  const std::uint64_t gauss_seed = substream_key(config.master_seed, kGaussStream);
  MomentsVec gauss(count);
  if (!mc_members.empty()) {
    gauss = chunked_reduce<MomentsVec>(
        config.draws_gauss, kMcChunk, [&](std::uint64_t chunk, std::uint64_t begin, std::uint64_t end) {
          NormalSource normal(substream_key(gauss_seed, chunk));
          std::vector<double> y(n);
          MomentsVec acc(count);
          for (std::uint64_t s = begin; s < end; ++s) {
            normal.fill(y);
            for (std::size_t i : mc_members) acc.items[i].add(corpus[i](y));
          }
          return acc;
        });
  }

  std::vector<FoolingReport> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    FoolingReport r;
    r.id = corpus[i].id;
    r.degree = corpus[i].p.degree();
    const Estimate pe = prg.items[i].estimate();
    r.prg_mean = pe.value;
    r.stderr_prg = pe.std_error;
    if (gauss.items[i].count() > 0) r.gauss_mc = gauss.items[i].estimate();
    if (analytic[i]) {
      r.gauss_mean = analytic[i]->value;
      r.stderr_gauss = 0.0;
      r.gauss_method = analytic[i]->method;
    } else {
      r.gauss_mean = r.gauss_mc->value;
      r.stderr_gauss = r.gauss_mc->std_error;
      r.gauss_method = "monte-carlo";
    }
    r.gap = std::abs(r.prg_mean - r.gauss_mean);
    r.threshold = config.threshold;
    r.pass = r.gap <= r.threshold + 3.0 * std::hypot(r.stderr_prg, r.stderr_gauss);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<AnticoncentrationRow> anticoncentration_test(const Polynomial& p,
                                                         std::span<const double> eps_grid,
                                                         std::uint64_t samples, std::uint64_t seed,
                                                         double c) {
  const double norm = l2_norm(p);
  const unsigned d = std::max(1U, p.degree());
  const std::size_t g = eps_grid.size();
  const MomentsVec m = chunked_reduce<MomentsVec>(
      samples, kMcChunk, [&](std::uint64_t chunk, std::uint64_t begin, std::uint64_t end) {
        NormalSource normal(substream_key(seed, chunk));
        std::vector<double> y(p.n());
        MomentsVec acc(g);
        for (std::uint64_t s = begin; s < end; ++s) {
          normal.fill(y);
          const double v = std::abs(p.eval(y));
          for (std::size_t i = 0; i < g; ++i) acc.items[i].add(v <= eps_grid[i] * norm ? 1.0 : 0.0);
        }
        return acc;
      });
  std::vector<AnticoncentrationRow> rows(g);
  for (std::size_t i = 0; i < g; ++i) {
    rows[i] = {eps_grid[i], m.items[i].estimate(), c * d * std::pow(eps_grid[i], 1.0 / d)};
  }
  return rows;
}

double calibrate_anticoncentration(const std::vector<std::vector<AnticoncentrationRow>>& tables,
                                   const std::vector<unsigned>& degrees) {
  if (tables.size() != degrees.size()) fail(ErrorKind::input_size, "one degree per table");
  double c = 0.0;
  for (std::size_t t = 0; t < tables.size(); ++t) {
    const unsigned d = std::max(1U, degrees[t]);
    for (const auto& row : tables[t]) {
      c = std::max(c, row.frequency.value / (d * std::pow(row.eps, 1.0 / d)));
    }
  }
  return c;
}

std::vector<InequalityReport> inequality_suite(const std::vector<PTF>& corpus,
                                               std::uint64_t samples, std::uint64_t seed) {
  std::vector<InequalityReport> out;
  out.reserve(corpus.size());
  for (std::size_t idx = 0; idx < corpus.size(); ++idx) {
    const Polynomial& p = corpus[idx].p;
    InequalityReport r;
    r.id = corpus[idx].id;
    r.n = p.n();
    r.degree = p.degree();
    r.l2 = l2_norm(p);
    const std::uint64_t key = substream_key(seed, idx);
    const MomentsVec m = chunked_reduce<MomentsVec>(
        samples, kMcChunk, [&](std::uint64_t chunk, std::uint64_t begin, std::uint64_t end) {
          NormalSource normal(substream_key(key, chunk));
          std::vector<double> y(p.n());
          MomentsVec acc(3);
          for (std::uint64_t s = begin; s < end; ++s) {
            normal.fill(y);
            const double v = std::abs(p.eval(y));
            const double v2 = v * v;
            acc.items[0].add(v2 * v2);
            acc.items[1].add(v >= 0.5 * r.l2 ? 1.0 : 0.0);
            acc.items[2].add(v);
          }
          return acc;
        });
    r.l4 = root_estimate(m.items[0], 4.0);
    r.hyper_bound = std::pow(std::sqrt(3.0), r.degree) * r.l2;
    r.hyper_pass = r.l4.value <= r.hyper_bound + 3.0 * r.l4.std_error;
    r.pz_frequency = m.items[1].estimate();
    r.pz_bound = std::pow(9.0, -static_cast<double>(r.degree)) / 2.0;
    r.pz_pass = r.pz_frequency.value + 3.0 * r.pz_frequency.std_error >= r.pz_bound;
    r.l1 = m.items[2].estimate();
    r.l2_over_l1 = r.l1.value > 0.0 ? r.l2 / r.l1.value : 0.0;
    out.push_back(std::move(r));
  }
  return out;
}

namespace {

// |a(u,v) - a(u',v')| for each sample and each precision, row-major by sample.
std::vector<double> coupling_differences(std::span<const unsigned> precisions,
                                         std::uint64_t samples, std::uint64_t seed) {
  const std::size_t g = precisions.size();
  std::vector<double> diffs(samples * g);
  SplitMix64 gen(seed);
  for (std::uint64_t s = 0; s < samples; ++s) {
    const double u = unit_open_closed(gen());
    const double v = unit_open_closed(gen());
    const double exact = box_muller(u, v);
    for (std::size_t i = 0; i < g; ++i) {
      const int m = static_cast<int>(precisions[i]);
      const double ur = std::ldexp(std::ceil(std::ldexp(u, m)), -m);
      const double vr = std::ldexp(std::ceil(std::ldexp(v, m)), -m);
      diffs[s * g + i] = std::abs(exact - box_muller(ur, vr));
    }
  }
  return diffs;
}

}  // namespace

std::vector<DiscretizationRow> discretization_test(std::span<const unsigned> precisions,
                                                   std::uint64_t samples, double c0,
                                                   std::uint64_t seed) {
  const std::size_t g = precisions.size();
  std::vector<DiscretizationBound> bounds;
  for (unsigned m : precisions) bounds.push_back(closeness_bound(m, c0));
  const auto diffs = coupling_differences(precisions, samples, seed);
  std::vector<DiscretizationRow> rows(g);
  for (std::size_t i = 0; i < g; ++i) {
    Moments m;
    for (std::uint64_t s = 0; s < samples; ++s) m.add(diffs[s * g + i] > bounds[i].delta ? 1.0 : 0.0);
    const Estimate e = m.estimate();
    rows[i] = {precisions[i], bounds[i].delta, e, e.value <= bounds[i].delta + 3.0 * e.std_error};
  }
  return rows;
}

double calibrate_c0(std::span<const unsigned> precisions, std::uint64_t samples, std::uint64_t seed) {
  const std::size_t g = precisions.size();
  const auto diffs = coupling_differences(precisions, samples, seed);
  for (double c0 = 1.0 / 64.0; c0 < 1e6; c0 *= 2.0) {
    bool ok = true;
    for (std::size_t i = 0; i < g && ok; ++i) {
      const double delta = c0 * std::exp2(-0.5 * precisions[i]);
      if (delta >= 1.0) {
        ok = false;
        break;
      }
      std::uint64_t hits = 0;
      for (std::uint64_t s = 0; s < samples; ++s) hits += diffs[s * g + i] > delta ? 1 : 0;
      ok = 2.0 * static_cast<double>(hits) / static_cast<double>(samples) <= delta;
    }
    if (ok) return c0;
  }
  fail(ErrorKind::parameter, "no power-of-two c0 satisfies the coupling property");
}

ConstancyReport top_derivative_constancy(const PTF& ptf, std::size_t points, double theta,
                                         std::uint64_t samples, std::uint64_t seed,
                                         double beyond_tolerance, bool shared_directions) {
  const Polynomial& p = ptf.p;
  ConstancyReport r;
  r.id = ptf.id;
  r.degree = p.degree();
  NormalSource normal(substream_key(seed, 0));
  std::vector<double> x(p.n());
  for (std::size_t i = 0; i < points; ++i) {
    normal.fill(x);
    const std::uint64_t directions = substream_key(seed, shared_directions ? 1 : i + 1);
    r.top.push_back(deriv_norm_mc(p, x, r.degree, theta, samples, directions));
    r.beyond.push_back(deriv_norm_mc(p, x, r.degree + 1, theta, samples, directions));
  }
  for (std::size_t i = 0; i < points; ++i) {
    r.max_beyond = std::max(r.max_beyond, r.beyond[i].value);
    for (std::size_t j = i + 1; j < points; ++j) {
      const double se = std::hypot(r.top[i].std_error, r.top[j].std_error);
      const double diff = std::abs(r.top[i].value - r.top[j].value);
      const double z = se > 0.0 ? diff / se : (diff == 0.0 ? 0.0 : INFINITY);
      r.max_z = std::max(r.max_z, z);
      ++r.pairs;
      if (z > 3.0) ++r.pairs_over_3;
    }
  }
  r.pass = r.max_z <= 3.0 && r.max_beyond <= beyond_tolerance;
  return r;
}

PerturbationReport perturbation_test(const std::vector<PTF>& corpus, double box, double delta,
                                     std::uint64_t samples, std::uint64_t seed) {
  PerturbationReport r;
  SplitMix64 gen(seed);
  auto uniform_sym = [&] { return 2.0 * unit_open_closed(gen()) - 1.0; };
  for (int half = 0; half < 2; ++half) {
    double worst = 0.0;
    for (const auto& f : corpus) {
      const std::size_t n = f.p.n();
      const unsigned d = f.p.degree();
      const double scale = delta * std::pow(static_cast<double>(n), 0.5 * d) * std::pow(box, d);
      std::vector<double> x(n), xp(n);
      for (std::uint64_t s = 0; s < samples / 2; ++s) {
        for (std::size_t i = 0; i < n; ++i) {
          x[i] = box * uniform_sym();
          xp[i] = x[i] + 0.999 * delta * uniform_sym();
        }
        worst = std::max(worst, std::abs(f.p.eval(x) - f.p.eval(xp)) / scale);
      }
    }
    (half == 0 ? r.calibrated_c : r.holdout_max) = worst;
  }
  r.pass = r.holdout_max <= 2.0 * r.calibrated_c;
  return r;
}

std::vector<PTF> linear_corpus(std::size_t n, std::size_t count, std::uint64_t seed) {
  std::vector<PTF> out;
  for (std::size_t i = 0; i < count; ++i) {
    NormalSource normal(substream_key(seed, i));
    Polynomial p(n);
    for (std::size_t j = 0; j < n; ++j) {
      Exponents e(n, 0);
      e[j] = 1;
      p.add_term(e, normal());
    }
    p.add_term(Exponents(n, 0), -0.5 * normal());
    out.push_back({"lin-" + std::to_string(i), std::move(p)});
  }
  return out;
}

std::vector<PTF> random_corpus(std::size_t n, unsigned d, std::size_t count, std::uint64_t seed) {
  std::vector<PTF> out;
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back({"rand-n" + std::to_string(n) + "-d" + std::to_string(d) + "-" + std::to_string(i),
                   normalized(random_poly(n, d, substream_key(seed, i), Basis::hermite))});
  }
  return out;
}

std::vector<PTF> mixed_corpus(std::size_t max_n, unsigned max_d, std::size_t count,
                              std::uint64_t seed) {
  std::vector<PTF> out;
  for (std::size_t i = 0; i < count; ++i) {
    const unsigned d = 1 + static_cast<unsigned>(i % max_d);
    const std::size_t n = 1 + (i / max_d) % max_n;
    out.push_back({"mix-n" + std::to_string(n) + "-d" + std::to_string(d) + "-" + std::to_string(i),
                   normalized(random_poly(n, d, substream_key(seed, i), Basis::hermite))});
  }
  return out;
}

}  // namespace ptfprg
