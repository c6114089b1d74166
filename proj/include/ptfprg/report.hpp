#pragma once

// JSON serialization of parameters, layouts and experiment reports, and
// the header that opens every artifact.

#include <string>
#include <string_view>

#include "json.hpp"
#include "ptfprg/config.hpp"
#include "ptfprg/harness.hpp"
#include "ptfprg/noisy_deriv.hpp"
#include "ptfprg/prg.hpp"
#include "ptfprg/stats.hpp"

namespace ptfprg {

inline constexpr int kReportSchemaVersion = 1;
inline constexpr std::string_view kToolVersion = "1.0.0";

void to_json(nlohmann::json& j, const Estimate& e);
void to_json(nlohmann::json& j, const PRGParams& p);
void to_json(nlohmann::json& j, const SeedSegment& s);
void to_json(nlohmann::json& j, const FoolingReport& r);
void to_json(nlohmann::json& j, const AnticoncentrationRow& r);
void to_json(nlohmann::json& j, const InequalityReport& r);
void to_json(nlohmann::json& j, const DiscretizationRow& r);
void to_json(nlohmann::json& j, const ConstancyReport& r);
void to_json(nlohmann::json& j, const PerturbationReport& r);
void to_json(nlohmann::json& j, const InterpolationScheme& s);
void to_json(nlohmann::json& j, const AnnihilationReport& r);
void to_json(nlohmann::json& j, const SizeVsDerivativeRow& r);

/// Segments are listed only when `with_segments` is set.
nlohmann::json layout_json(const SeedLayout& layout, bool with_segments);

/// {"schema", "version", "command", "config", "seed"} plus "params" and
/// "provenance" when parameters are given.
nlohmann::json report_header(std::string_view command, const RunConfig& config,
                             std::uint64_t master_seed, const PRGParams* params = nullptr);

}  // namespace ptfprg
