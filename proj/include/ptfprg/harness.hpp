#pragma once

// Statistical experiments: fooling error of PTFs under the generator,
// anti-concentration, the Gaussian inequality suites and the discretization
// coupling. Every verdict allows three standard errors.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ptfprg/polynomial.hpp"
#include "ptfprg/prg.hpp"
#include "ptfprg/stats.hpp"

namespace ptfprg {

/// sgn with sgn(0) = +1.
inline double ptf_sign(double v) noexcept { return v < 0.0 ? -1.0 : 1.0; }

struct PTF {
  std::string id;
  Polynomial p;

  double operator()(std::span<const double> x) const { return ptf_sign(p.eval(x)); }
};

/// Closed form of E[sgn p(Y)] when one exists: degree <= 1 gives
/// 1 - 2 Phi(b / |a|_2) for p = a.x - b; a single monomial c x^e gives
/// sgn(c) if every exponent is even and 0 otherwise.
struct AnalyticMean {
  double value = 0.0;
  std::string method;
};
std::optional<AnalyticMean> analytic_sign_mean(const Polynomial& p);

struct FoolingReport {
  std::string id;
  unsigned degree = 0;
  double prg_mean = 0.0;
  double stderr_prg = 0.0;
  double gauss_mean = 0.0;
  double stderr_gauss = 0.0;
  std::string gauss_method;
  /// Monte Carlo ground truth, also recorded when the analytic value is used.
  std::optional<Estimate> gauss_mc;
  double gap = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

struct FoolingConfig {
  std::uint64_t draws_prg = 100'000;
  std::uint64_t draws_gauss = 1'000'000;
  double threshold = 0.05;
  std::uint64_t master_seed = 0x5EED;
  /// Skip the Gaussian Monte Carlo when a closed form exists.
  bool mc_only_when_needed = true;
};

std::vector<FoolingReport> fooling_test(const PRGParams& params, const std::vector<PTF>& corpus,
                                        const FoolingConfig& config);

struct AnticoncentrationRow {
  double eps = 0.0;
  Estimate frequency;
  double bound = 0.0;
};

/// Frequencies of |p(Y)| <= eps |p|_2 over one shared set of samples, with
/// bound column C d eps^(1/d).
std::vector<AnticoncentrationRow> anticoncentration_test(const Polynomial& p,
                                                         std::span<const double> eps_grid,
                                                         std::uint64_t samples, std::uint64_t seed,
                                                         double c = 1.0);

/// Smallest C with frequency <= C d eps^(1/d) on every row of every table.
double calibrate_anticoncentration(const std::vector<std::vector<AnticoncentrationRow>>& tables,
                                   const std::vector<unsigned>& degrees);

struct InequalityReport {
  std::string id;
  std::size_t n = 0;
  unsigned degree = 0;
  double l2 = 0.0;
  Estimate l4;
  double hyper_bound = 0.0;
  bool hyper_pass = false;
  Estimate pz_frequency;
  double pz_bound = 0.0;
  bool pz_pass = false;
  Estimate l1;
  /// |p|_2 / |p|_1, diagnostic only.
  double l2_over_l1 = 0.0;
};

/// |p|_4 <= sqrt(3)^d |p|_2 and Pr(|p| >= |p|_2 / 2) >= 9^-d / 2.
std::vector<InequalityReport> inequality_suite(const std::vector<PTF>& corpus,
                                               std::uint64_t samples, std::uint64_t seed);

struct DiscretizationRow {
  unsigned precision = 0;
  double delta = 0.0;
  Estimate frequency;
  bool pass = false;
};

/// Couples exact (0,1] uniforms (53-bit) with their round-up to the 2^-M
/// grid and counts |a(u,v) - a(u',v')| > c0 2^(-M/2).
std::vector<DiscretizationRow> discretization_test(std::span<const unsigned> precisions,
                                                   std::uint64_t samples, double c0,
                                                   std::uint64_t seed);

/// Smallest power of two c0 whose coupling frequency is at most delta / 2
/// for every M on the grid.
double calibrate_c0(std::span<const unsigned> precisions, std::uint64_t samples, std::uint64_t seed);

struct ConstancyReport {
  std::string id;
  unsigned degree = 0;
  std::vector<Estimate> top;      // l = d at each point
  std::vector<Estimate> beyond;   // l = d + 1 at each point
  double max_z = 0.0;             // max pairwise |a - b| / sqrt(se_a^2 + se_b^2)
  std::size_t pairs = 0;
  std::size_t pairs_over_3 = 0;
  double max_beyond = 0.0;
  bool pass = false;
};

/// Estimates |p^(d)_theta(X)|_2^2 at `points` random X plus the l = d+1
/// estimates that must vanish. Each point gets its own direction samples
/// unless `shared_directions` is set; with shared directions the l = d
/// estimates coincide exactly and max_z is 0 up to rounding.
ConstancyReport top_derivative_constancy(const PTF& ptf, std::size_t points, double theta,
                                         std::uint64_t samples, std::uint64_t seed,
                                         double beyond_tolerance = 1e-20,
                                         bool shared_directions = false);

struct PerturbationReport {
  double calibrated_c = 0.0;
  double holdout_max = 0.0;
  bool pass = false;
};

/// For |p|_2 = 1, |x|_inf <= box and |x - x'|_inf < delta, measures
/// |p(x) - p(x')| / (delta n^(d/2) box^d); C comes from the first half of the
/// samples and the second half must stay within 2C.
PerturbationReport perturbation_test(const std::vector<PTF>& corpus, double box, double delta,
                                     std::uint64_t samples, std::uint64_t seed);

/// Corpus generators. Members are normalized to |p|_2 = 1 unless noted.
/// Linear: p = a.x - b with a ~ N(0, I_n), b ~ N(0, 1/4), not normalized.
std::vector<PTF> linear_corpus(std::size_t n, std::size_t count, std::uint64_t seed);
/// Fixed (n, d) Hermite-basis random polynomials.
std::vector<PTF> random_corpus(std::size_t n, unsigned d, std::size_t count, std::uint64_t seed);
/// Member i has d = 1 + i % max_d and n = 1 + (i / max_d) % max_n.
std::vector<PTF> mixed_corpus(std::size_t max_n, unsigned max_d, std::size_t count,
                              std::uint64_t seed);

}  // namespace ptfprg
