#pragma once

#include <string>

#include "mpoc/config.hpp"

namespace mpoc {

struct RunReport {
  AdaptiveResult result;
  double vstar_final = trop::neg_inf;
  double vstar_oracle = std::numeric_limits<double>::quiet_NaN();
  double baseline_err = std::numeric_limits<double>::quiet_NaN();
  long baseline_basis = 0;
  double total_seconds = 0.0;
};

/// Executes a config: adaptive (or single-level) solve, CSV outputs under
/// out_dir (report.csv, levels.csv, optional values_t{k}.csv / lambdas.csv),
/// summary table on stdout.
RunReport run(const RunConfig& cfg, const std::string& out_dir);

/// Oracle value export: "t, x..., value" rows for the LQ instance.
void write_oracle_csv(int d, const std::string& out_path, double delta = 0.5);

}  // namespace mpoc
