#include "ptfprg/lab.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>

#include "ptfprg/error.hpp"
#include "ptfprg/gauss_block.hpp"
#include "ptfprg/harness.hpp"
#include "ptfprg/noisy_deriv.hpp"
#include "ptfprg/polynomial.hpp"
#include "ptfprg/random.hpp"
#include "ptfprg/report.hpp"

namespace ptfprg {

namespace {

constexpr double kNoThreshold = std::numeric_limits<double>::quiet_NaN();

std::string cell(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string cell(std::uint64_t v) { return std::to_string(v); }

std::uint64_t check_seed(const RunConfig& cfg, std::uint64_t salt) {
  return substream_key(cfg.master_seed(), salt);
}

LabResult annihilation(const RunConfig& cfg) {
  const auto degrees = cfg.get_uints("d", {1, 2, 3, 4});
  const auto thetas = cfg.get_doubles("theta", {0.05, 0.1, 0.3});
  const std::size_t n = cfg.get_uint("n", 3);
  const std::size_t count = cfg.get_uint("count", 5);
  const double tol = cfg.get_double("tolerance", 1e-9);
  const double sum_tol = cfg.get_double("sum_tolerance", 1e-12);
  const double control_floor = cfg.get_double("control_floor", 1e-3);
  const std::uint64_t seed = check_seed(cfg, 1);

  LabResult r;
  r.name = "annihilation";
  r.threshold = tol;
  r.columns = {"d", "theta", "max_residual", "coeff_sum", "control_min_residual"};
  double max_sum = 0.0;
  double control_min = std::numeric_limits<double>::infinity();
  nlohmann::json rows = nlohmann::json::array();
  for (unsigned d : degrees) {
    if (d == 0) fail(ErrorKind::configuration, "annihilation needs d >= 1");
    const auto corpus = random_corpus(n, d, count, substream_key(seed, d));
    for (double theta : thetas) {
      const auto scheme = interp_coeffs(d, theta);
      const auto control = interp_coeffs(d - 1, theta);
      double coeff_sum = 0.0;
      for (std::size_t m = scheme.coeffs.size(); m-- > 0;) coeff_sum += scheme.coeffs[m];
      double worst = 0.0;
      double control_row = std::numeric_limits<double>::infinity();
      for (const auto& f : corpus) {
        worst = std::max(worst, verify_annihilation(f.p, scheme).residual);
        control_row = std::min(control_row, annihilation_residual(f.p, control).residual);
      }
      r.estimate = std::max(r.estimate, worst);
      max_sum = std::max(max_sum, std::abs(coeff_sum));
      control_min = std::min(control_min, control_row);
      rows.push_back({{"d", d},
                      {"theta", theta},
                      {"max_residual", worst},
                      {"coeff_sum", coeff_sum},
                      {"scheme", scheme},
                      {"control_min_residual", control_row}});
      r.rows.push_back({cell(std::uint64_t{d}), cell(theta), cell(worst), cell(coeff_sum),
                        cell(control_row)});
    }
  }
  r.pass = r.estimate <= tol && max_sum <= sum_tol;
  r.details = {{"rows", rows},
               {"max_coeff_sum", max_sum},
               {"sum_tolerance", sum_tol},
               {"negative_control",
                {{"scheme_degree", "d-1"},
                 {"min_residual", control_min},
                 {"floor", control_floor},
                 {"verdict", control_min > control_floor ? "pass" : "fail"}}}};
  return r;
}

LabResult semigroup(const RunConfig& cfg) {
  const std::size_t count = cfg.get_uint("count", 50);
  const std::size_t max_n = cfg.get_uint("max_n", 3);
  const unsigned max_d = static_cast<unsigned>(cfg.get_uint("max_d", 4));
  const double tol = cfg.get_double("tolerance", 1e-10);
  const std::uint64_t seed = check_seed(cfg, 2);
  const auto corpus = mixed_corpus(max_n, max_d, count, seed);
  SplitMix64 angles(substream_key(seed, 1));

  LabResult r;
  r.name = "semigroup";
  r.threshold = tol;
  std::size_t contraction_violations = 0;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& f : corpus) {
    const double t1 = 0.05 + 1.45 * unit_open_closed(angles());
    const double t2 = 0.05 + 1.45 * unit_open_closed(angles());
    const double t3 = std::acos(std::cos(t1) * std::cos(t2));
    const Polynomial twice = ou_apply(ou_apply(f.p, t1), t2);
    const Polynomial once = ou_apply(f.p, t3);
    const double diff = (twice - once).max_abs_coeff() / f.p.max_abs_coeff();

    const HermiteExpansion h = hermite_expand(f.p);
    const double before = h.norm_squared();
    const double after = ou_scale(h, std::cos(t1)).norm_squared();
    if (after > before) ++contraction_violations;

    r.estimate = std::max(r.estimate, diff);
    rows.push_back({{"id", f.id}, {"theta1", t1}, {"theta2", t2}, {"theta3", t3},
                    {"max_coeff_diff", diff}, {"norm2_before", before}, {"norm2_after", after}});
  }
  r.pass = r.estimate <= tol && contraction_violations == 0;
  r.details = {{"rows", rows}, {"contraction_violations", contraction_violations}};
  return r;
}

LabResult constancy(const RunConfig& cfg) {
  const std::size_t count = cfg.get_uint("count", 20);
  const std::size_t max_n = cfg.get_uint("max_n", 4);
  const unsigned max_d = static_cast<unsigned>(cfg.get_uint("max_d", 3));
  const std::size_t points = cfg.get_uint("points", 10);
  const double theta = cfg.get_double("theta", 0.2);
  const std::uint64_t samples = cfg.get_uint("samples", 2000);
  const double beyond_tol = cfg.get_double("beyond_tolerance", 1e-20);
  const bool shared = cfg.get_bool("shared_directions", false);
  const std::uint64_t seed = check_seed(cfg, 3);
  const auto corpus = mixed_corpus(max_n, max_d, count, seed);

  LabResult r;
  r.name = "constancy";
  r.threshold = 3.0;
  r.pass = true;
  double max_beyond = 0.0;
  std::size_t pairs = 0;
  std::size_t over = 0;
  nlohmann::json reports = nlohmann::json::array();
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto rep = top_derivative_constancy(corpus[i], points, theta, samples, substream_key(seed, i + 1),
                                              beyond_tol, shared);
    r.estimate = std::max(r.estimate, rep.max_z);
    max_beyond = std::max(max_beyond, rep.max_beyond);
    pairs += rep.pairs;
    over += rep.pairs_over_3;
    r.pass = r.pass && rep.pass;
    reports.push_back(rep);
  }
  r.details = {{"theta", theta},
               {"shared_directions", shared},
               {"pairs", pairs},
               {"pairs_over_3", over},
               {"pairs_over_3_expected", pairs * 0.0027},
               {"max_beyond", max_beyond},
               {"beyond_tolerance", beyond_tol},
               {"polynomials", reports}};
  return r;
}

LabResult size_vs_derivative_check(const RunConfig& cfg) {
  const std::size_t count = cfg.get_uint("count", 10);
  const std::size_t max_n = cfg.get_uint("max_n", 4);
  const unsigned max_d = static_cast<unsigned>(cfg.get_uint("max_d", 3));
  const auto eps_grid = cfg.get_doubles("eps_grid", {0.01, 0.02, 0.05});
  const double ratio = cfg.get_double("theta_ratio", 0.5);
  const std::uint64_t samples = cfg.get_uint("samples", 100'000);
  const std::uint64_t seed = check_seed(cfg, 4);
  const auto corpus = mixed_corpus(max_n, max_d, count, seed);

  LabResult r;
  r.name = "size-vs-derivative";
  r.threshold = kNoThreshold;
  r.columns = {"id", "d", "eps", "theta", "frequency", "stderr", "ratio"};
  bool monotone = true;
  nlohmann::json polys = nlohmann::json::array();
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& f = corpus[i];
    const unsigned d = f.p.degree();
    const auto rows = size_vs_derivative(f.p, eps_grid, ratio, samples, substream_key(seed, i + 1));
    for (std::size_t j = 0; j < rows.size(); ++j) {
      const double scaled = rows[j].frequency.value / (double(d) * d * rows[j].eps);
      r.estimate = std::max(r.estimate, scaled);
      r.rows.push_back({f.id, cell(std::uint64_t{d}), cell(rows[j].eps), cell(rows[j].theta),
                        cell(rows[j].frequency.value), cell(rows[j].frequency.std_error),
                        cell(scaled)});
      if (j > 0 && eps_grid[j] > eps_grid[j - 1]) {
        const auto& a = rows[j - 1].frequency;
        const auto& b = rows[j].frequency;
        if (b.value + 3.0 * std::hypot(a.std_error, b.std_error) < a.value) monotone = false;
      }
    }
    polys.push_back({{"id", f.id}, {"degree", d}, {"rows", rows}});
  }
  r.pass = monotone;
  r.details = {{"calibrated_C", r.estimate},
               {"bound", "C * d^2 * eps"},
               {"monotone", monotone},
               {"theta_ratio", ratio},
               {"polynomials", polys}};
  return r;
}

LabResult inequality(const RunConfig& cfg) {
  const std::size_t count = cfg.get_uint("count", 100);
  const std::size_t max_n = cfg.get_uint("max_n", 8);
  const unsigned max_d = static_cast<unsigned>(cfg.get_uint("max_d", 4));
  const std::uint64_t samples = cfg.get_uint("samples", 20'000);
  const std::uint64_t seed = check_seed(cfg, 5);
  const auto corpus = mixed_corpus(max_n, max_d, count, seed);
  const auto reports = inequality_suite(corpus, samples, substream_key(seed, 1));

  LabResult r;
  r.name = "inequality";
  r.threshold = 1.0;
  r.pass = true;
  r.columns = {"id", "n", "d", "l4", "l4_stderr", "hyper_bound", "pz_frequency", "pz_stderr",
               "pz_bound", "l2_over_l1"};
  std::size_t hyper_fail = 0;
  std::size_t pz_fail = 0;
  for (const auto& rep : reports) {
    r.estimate = std::max(r.estimate, rep.l4.value / rep.hyper_bound);
    hyper_fail += rep.hyper_pass ? 0 : 1;
    pz_fail += rep.pz_pass ? 0 : 1;
    r.rows.push_back({rep.id, cell(std::uint64_t{rep.n}), cell(std::uint64_t{rep.degree}),
                      cell(rep.l4.value), cell(rep.l4.std_error), cell(rep.hyper_bound),
                      cell(rep.pz_frequency.value), cell(rep.pz_frequency.std_error),
                      cell(rep.pz_bound), cell(rep.l2_over_l1)});
  }
  r.pass = hyper_fail == 0 && pz_fail == 0;
  r.details = {{"estimate_is", "max |p|_4 / (sqrt(3)^d |p|_2)"},
               {"hyper_failures", hyper_fail},
               {"pz_failures", pz_fail},
               {"polynomials", reports}};
  return r;
}

LabResult anticoncentration(const RunConfig& cfg) {
  const std::size_t count = cfg.get_uint("count", 20);
  const std::size_t max_n = cfg.get_uint("max_n", 8);
  const unsigned max_d = static_cast<unsigned>(cfg.get_uint("max_d", 4));
  const auto eps_grid = cfg.get_doubles("eps_grid", {0.01, 0.02, 0.05, 0.1, 0.2, 0.5});
  const std::uint64_t samples = cfg.get_uint("samples", 100'000);
  const std::uint64_t seed = check_seed(cfg, 6);
  const auto corpus = mixed_corpus(max_n, max_d, count, seed);

  std::vector<std::vector<AnticoncentrationRow>> tables;
  std::vector<unsigned> degrees;
  bool monotone = true;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    tables.push_back(anticoncentration_test(corpus[i].p, eps_grid, samples, substream_key(seed, i + 1)));
    degrees.push_back(corpus[i].p.degree());
    const auto& t = tables.back();
    for (std::size_t j = 1; j < t.size(); ++j) {
      if (eps_grid[j] >= eps_grid[j - 1] && t[j].frequency.value < t[j - 1].frequency.value) {
        monotone = false;
      }
    }
  }
  const double c = calibrate_anticoncentration(tables, degrees);

  LabResult r;
  r.name = "anticoncentration";
  r.threshold = kNoThreshold;
  r.estimate = c;
  r.pass = monotone;
  r.columns = {"id", "d", "eps", "frequency", "stderr", "bound"};
  nlohmann::json polys = nlohmann::json::array();
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    for (auto& row : tables[i]) {
      row.bound = c * degrees[i] * std::pow(row.eps, 1.0 / degrees[i]);
      r.rows.push_back({corpus[i].id, cell(std::uint64_t{degrees[i]}), cell(row.eps),
                        cell(row.frequency.value), cell(row.frequency.std_error), cell(row.bound)});
    }
    polys.push_back({{"id", corpus[i].id}, {"degree", degrees[i]}, {"rows", tables[i]}});
  }
  r.details = {{"calibrated_C", c}, {"bound", "C * d * eps^(1/d)"}, {"monotone", monotone},
               {"polynomials", polys}};
  return r;
}

LabResult discretization(const RunConfig& cfg) {
  const auto precisions = cfg.get_uints("M_grid", {16, 24, 32});
  const double c0 = cfg.get_double("c0", kDefaultC0);
  const std::uint64_t samples = cfg.get_uint("samples", 100'000);
  const std::uint64_t seed = check_seed(cfg, 7);
  const auto rows = discretization_test(precisions, samples, c0, seed);
  const double calibrated = calibrate_c0(precisions, samples, substream_key(seed, 1));

  LabResult r;
  r.name = "discretization";
  r.threshold = 1.0;
  r.pass = true;
  r.columns = {"M", "delta", "frequency", "stderr"};
  bool monotone = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    r.estimate = std::max(r.estimate, rows[i].frequency.value / rows[i].delta);
    r.pass = r.pass && rows[i].pass;
    if (i > 0 && precisions[i] > precisions[i - 1]) {
      const auto& a = rows[i - 1].frequency;
      const auto& b = rows[i].frequency;
      if (b.value > a.value + 3.0 * std::hypot(a.std_error, b.std_error)) monotone = false;
    }
    r.rows.push_back({cell(std::uint64_t{rows[i].precision}), cell(rows[i].delta),
                      cell(rows[i].frequency.value), cell(rows[i].frequency.std_error)});
  }
  r.pass = r.pass && monotone;
  r.details = {{"estimate_is", "max frequency / delta"},
               {"c0", c0},
               {"calibrated_c0", calibrated},
               {"monotone_in_M", monotone},
               {"rows", rows}};
  return r;
}

LabResult perturbation(const RunConfig& cfg) {
  const std::size_t count = cfg.get_uint("count", 20);
  const std::size_t max_n = cfg.get_uint("max_n", 4);
  const unsigned max_d = static_cast<unsigned>(cfg.get_uint("max_d", 3));
  const double box = cfg.get_double("box", 3.0);
  const double delta = cfg.get_double("delta", 1e-3);
  const std::uint64_t samples = cfg.get_uint("samples", 20'000);
  const std::uint64_t seed = check_seed(cfg, 8);
  const auto corpus = mixed_corpus(max_n, max_d, count, seed);
  const auto rep = perturbation_test(corpus, box, delta, samples, substream_key(seed, 1));

  LabResult r;
  r.name = "perturbation";
  r.estimate = rep.holdout_max;
  r.threshold = 2.0 * rep.calibrated_c;
  r.pass = rep.pass;
  r.details = {{"box", box}, {"delta", delta}, {"report", rep}};
  return r;
}

LabResult relation(const RunConfig& cfg) {
  const std::size_t count = cfg.get_uint("count", 4);
  const std::size_t n = cfg.get_uint("n", 2);
  const unsigned max_d = static_cast<unsigned>(cfg.get_uint("max_d", kExactMaxDegree));
  const double theta = cfg.get_double("theta", 0.3);
  const double tol = cfg.get_double("tolerance", 1e-9);
  const std::uint64_t seed = check_seed(cfg, 9);

  LabResult r;
  r.name = "relation";
  r.threshold = tol;
  nlohmann::json rows = nlohmann::json::array();
  for (unsigned d = 1; d <= max_d; ++d) {
    const auto corpus = random_corpus(n, d, count, substream_key(seed, d));
    for (unsigned ell = 1; ell <= std::min(d, kExactMaxEll); ++ell) {
      const auto scheme = interp_coeffs(2 * (d - ell), theta);
      double worst = 0.0;
      for (const auto& f : corpus) {
        const Polynomial q = deriv_norm_poly(f.p, ell, theta);
        if (q.max_abs_coeff() == 0.0) continue;
        worst = std::max(worst, verify_annihilation(q, scheme).residual);
      }
      r.estimate = std::max(r.estimate, worst);
      rows.push_back({{"d", d}, {"ell", ell}, {"scheme_degree", scheme.degree}, {"max_residual", worst}});
    }
  }
  r.pass = r.estimate <= tol;
  r.details = {{"theta", theta}, {"rows", rows}};
  return r;
}

LabResult profile(const RunConfig& cfg) {
  const std::size_t n = cfg.get_uint("n", 2);
  const unsigned d = static_cast<unsigned>(cfg.get_uint("d", 2));
  const unsigned max_ell = static_cast<unsigned>(cfg.get_uint("max_ell", 1));
  const unsigned max_m = static_cast<unsigned>(cfg.get_uint("max_m", 2));
  DerivParams base;
  base.theta = cfg.get_double("theta", 0.3);
  base.samples = cfg.get_uint("samples", 2000);
  base.outer_samples = cfg.get_uint("outer_samples", 500);
  const std::uint64_t seed = check_seed(cfg, 10);

  const Polynomial p = normalized(random_poly(n, d, seed, Basis::hermite));
  std::vector<double> x(n);
  NormalSource(substream_key(seed, 1)).fill(x);
  const auto exact = deriv_profile(p, x, max_ell, max_m, base, ProfileMode::exact, 0);
  const auto mc = deriv_profile(p, x, max_ell, max_m, base, ProfileMode::mc, substream_key(seed, 2));

  LabResult r;
  r.name = "profile";
  r.threshold = 3.0;
  r.columns = {"ell", "m", "exact", "mc", "mc_stderr", "z"};
  nlohmann::json rows = nlohmann::json::array();
  bool ok = true;
  for (std::size_t i = 0; i < exact.values.size(); ++i) {
    const auto& e = exact.values[i];
    const auto& m = mc.values[i];
    const double diff = std::abs(e.q.value - m.q.value);
    double z = 0.0;
    if (m.q.std_error > 0.0) {
      z = diff / m.q.std_error;
    } else if (diff > 1e-12 * std::max(1.0, std::abs(e.q.value))) {
      ok = false;
    }
    r.estimate = std::max(r.estimate, z);
    rows.push_back({{"ell", e.ell}, {"m", e.m}, {"exact", e.q.value}, {"mc", m.q}, {"z", z}});
    r.rows.push_back({cell(std::uint64_t{e.ell}), cell(std::uint64_t{e.m}), cell(e.q.value),
                      cell(m.q.value), cell(m.q.std_error), cell(z)});
  }
  r.pass = ok && r.estimate <= r.threshold;
  r.details = {{"theta", base.theta}, {"point", x}, {"rows", rows}};
  return r;
}

using CheckFn = LabResult (*)(const RunConfig&);

const std::vector<std::pair<std::string, CheckFn>>& registry() {
  static const std::vector<std::pair<std::string, CheckFn>> checks = {
      {"annihilation", annihilation},
      {"semigroup", semigroup},
      {"constancy", constancy},
      {"size-vs-derivative", size_vs_derivative_check},
      {"inequality", inequality},
      {"anticoncentration", anticoncentration},
      {"discretization", discretization},
      {"perturbation", perturbation},
      {"relation", relation},
      {"profile", profile},
  };
  return checks;
}

}  // namespace

const std::vector<std::string>& lab_check_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, fn] : registry()) out.push_back(name);
    return out;
  }();
  return names;
}

LabResult run_lab_check(std::string_view name, const RunConfig& config) {
  for (const auto& [check, fn] : registry()) {
    if (check == name) return fn(config);
  }
  std::string valid;
  for (const auto& n : lab_check_names()) valid += (valid.empty() ? "" : ", ") + n;
  fail(ErrorKind::configuration, "unknown check '" + std::string(name) + "'; valid checks: " + valid);
}

nlohmann::json lab_result_json(const LabResult& r) {
  nlohmann::json j = {{"name", r.name},
                      {"estimate", r.estimate},
                      {"stderr", r.std_error},
                      {"threshold", std::isnan(r.threshold) ? nlohmann::json(nullptr)
                                                            : nlohmann::json(r.threshold)},
                      {"verdict", r.pass ? "pass" : "fail"},
                      {"details", r.details}};
  return j;
}

std::string lab_result_csv(const LabResult& r) {
  if (r.columns.empty()) return {};
  std::string out;
  for (std::size_t i = 0; i < r.columns.size(); ++i) out += (i ? "," : "") + r.columns[i];
  out += "\n";
  for (const auto& row : r.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + row[i];
    out += "\n";
  }
  return out;
}

}  // namespace ptfprg
