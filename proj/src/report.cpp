#include "ptfprg/report.hpp"

#include "ptfprg/config.hpp"

namespace ptfprg {

void to_json(nlohmann::json& j, const Estimate& e) {
  j = {{"value", e.value}, {"stderr", e.std_error}, {"samples", e.samples}};
}

void to_json(nlohmann::json& j, const PRGParams& p) {
  j = {{"n", p.n},
       {"d", p.d},
       {"eps", p.eps},
       {"c", p.c},
       {"N", p.N},
       {"k", p.k},
       {"M", p.M},
       {"w", p.w},
       {"theta", p.theta},
       {"B", p.B},
       {"c0", p.c0},
       {"precision_meets_bound", p.precision_meets_bound},
       {"precision_capped", p.precision_capped}};
}

void to_json(nlohmann::json& j, const SeedSegment& s) {
  j = {{"block", s.block},
       {"side", s.side == SeedSide::u ? "u" : "v"},
       {"offset", s.offset},
       {"length", s.length}};
}

void to_json(nlohmann::json& j, const FoolingReport& r) {
  j = {{"id", r.id},
       {"degree", r.degree},
       {"prg_mean", r.prg_mean},
       {"stderr_prg", r.stderr_prg},
       {"gauss_mean", r.gauss_mean},
       {"stderr_gauss", r.stderr_gauss},
       {"gauss_method", r.gauss_method},
       {"gap", r.gap},
       {"threshold", r.threshold},
       {"verdict", r.pass ? "pass" : "fail"}};
  if (r.gauss_mc) j["gauss_mc"] = *r.gauss_mc;
}

void to_json(nlohmann::json& j, const AnticoncentrationRow& r) {
  j = {{"eps", r.eps}, {"frequency", r.frequency}, {"bound", r.bound}};
}

void to_json(nlohmann::json& j, const InequalityReport& r) {
  j = {{"id", r.id},
       {"n", r.n},
       {"degree", r.degree},
       {"l2", r.l2},
       {"l4", r.l4},
       {"hyper_bound", r.hyper_bound},
       {"hyper_verdict", r.hyper_pass ? "pass" : "fail"},
       {"pz_frequency", r.pz_frequency},
       {"pz_bound", r.pz_bound},
       {"pz_verdict", r.pz_pass ? "pass" : "fail"},
       {"l1", r.l1},
       {"l2_over_l1", r.l2_over_l1}};
}

void to_json(nlohmann::json& j, const DiscretizationRow& r) {
  j = {{"M", r.precision},
       {"delta", r.delta},
       {"frequency", r.frequency},
       {"verdict", r.pass ? "pass" : "fail"}};
}

void to_json(nlohmann::json& j, const ConstancyReport& r) {
  j = {{"id", r.id},
       {"degree", r.degree},
       {"top", r.top},
       {"beyond", r.beyond},
       {"max_z", r.max_z},
       {"pairs", r.pairs},
       {"pairs_over_3", r.pairs_over_3},
       {"max_beyond", r.max_beyond},
       {"verdict", r.pass ? "pass" : "fail"}};
}

void to_json(nlohmann::json& j, const PerturbationReport& r) {
  j = {{"calibrated_c", r.calibrated_c},
       {"holdout_max", r.holdout_max},
       {"verdict", r.pass ? "pass" : "fail"}};
}

void to_json(nlohmann::json& j, const InterpolationScheme& s) {
  j = {{"degree", s.degree},
       {"theta", s.theta},
       {"coeffs", s.coeffs},
       {"normalization", s.normalization}};
}

void to_json(nlohmann::json& j, const AnnihilationReport& r) {
  j = {{"scheme_degree", r.scheme_degree},
       {"poly_degree", r.poly_degree},
       {"theta", r.theta},
       {"residual_abs", r.residual_abs},
       {"residual", r.residual}};
}

void to_json(nlohmann::json& j, const SizeVsDerivativeRow& r) {
  j = {{"eps", r.eps}, {"theta", r.theta}, {"frequency", r.frequency}};
}

nlohmann::json layout_json(const SeedLayout& layout, bool with_segments) {
  nlohmann::json j = {{"blocks", layout.blocks},
                      {"k", layout.k},
                      {"w", layout.w},
                      {"per_block_bits", layout.per_block_bits},
                      {"total_bits", layout.total_bits}};
  if (with_segments) j["segments"] = layout.segments();
  return j;
}

nlohmann::json report_header(std::string_view command, const RunConfig& config,
                             std::uint64_t master_seed, const PRGParams* params) {
  nlohmann::json j = {{"schema", "ptfprg-report"},
                      {"schema_version", kReportSchemaVersion},
                      {"version", kToolVersion},
                      {"command", command},
                      {"config", config.to_json()},
                      {"seed", format_seed(master_seed)}};
  if (params != nullptr) {
    j["params"] = *params;
    j["provenance"] = params->provenance;
  }
  return j;
}

}  // namespace ptfprg
