#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "delone/point_set.hpp"
#include "json.hpp"

namespace delone {

/// Radii and sizes of one verification run. Radii for d = 2 are scaled to
/// the smaller windows that are practical for cut-and-project sets.
struct Profile {
  std::string name;
  std::vector<double> gap_radii;
  std::vector<double> lr_grid;
  double ext_R1 = 5.0, ext_R2 = 20.0;
  double cell_R = 5.0;
  int cell_n = 1;
  std::vector<double> fiber_radii;
  std::vector<double> factor_radii;
  std::size_t localization_sites = 200;
  double rule_radius = 3.0;
};

/// "smoke", "desk" or "deep". Throws UsageError for other names.
Profile profile_for(const std::string& name, int dim);

struct VerificationReport {
  std::string check_id;
  nlohmann::json parameters = nlohmann::json::object();
  double measured = 0.0;
  std::optional<double> bound;
  std::string relation = "<=";  // measured relation bound
  bool passed = false;
  bool skipped = false;
  std::string reason;  // why skipped, or the error that failed the check
  nlohmann::json scanned_range = nlohmann::json::object();
  nlohmann::json window_stats = nlohmann::json::object();
  nlohmann::json details = nlohmann::json::object();

  nlohmann::json to_json() const;
};

struct VerifyOptions {
  std::string profile = "desk";
  std::uint64_t seed = 0;
  double tiling_tolerance = 1e-6;
  std::optional<double> L;       // overrides the estimated linear-repetitivity constant
  std::optional<double> radius;  // single-radius override for radius-driven checks
  bool parallel = true;
};

/// Check ids in report order.
const std::vector<std::string>& check_ids();

/// One check. Periodic inputs fail the checks that assume aperiodicity.
/// Throws UsageError for an unknown id; other errors land in the report.
VerificationReport run_check(const WindowedDeloneSet& X, const std::string& check_id, const VerifyOptions& opt = {});

/// The whole suite; checks that assume aperiodicity are skipped with a reason on periodic inputs.
std::vector<VerificationReport> verify_all(const WindowedDeloneSet& X, const VerifyOptions& opt = {});

nlohmann::json reports_to_json(const std::vector<VerificationReport>& reports);

}  // namespace delone
