#pragma once

// Named lab checks. Each reads its knobs from a RunConfig (defaults listed
// in README) and returns an estimate, threshold and verdict plus details.

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "ptfprg/config.hpp"

namespace ptfprg {

struct LabResult {
  std::string name;
  double estimate = 0.0;
  double std_error = 0.0;
  /// NaN when the check has no scalar threshold (calibrated constants).
  double threshold = 0.0;
  bool pass = false;
  nlohmann::json details = nlohmann::json::object();
  /// Grid checks fill a table for CSV export.
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

const std::vector<std::string>& lab_check_names();

/// A configuration error naming the valid checks if `name` is unknown.
LabResult run_lab_check(std::string_view name, const RunConfig& config);

nlohmann::json lab_result_json(const LabResult& r);
/// Empty when the check has no table.
std::string lab_result_csv(const LabResult& r);

}  // namespace ptfprg
