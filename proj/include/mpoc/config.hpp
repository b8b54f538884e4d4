#pragma once

#include <map>
#include <string>

#include "mpoc/adaptive.hpp"

namespace mpoc {

/// Flat "key = value" config with [section] headers; see docs/example.cfg.
struct RunConfig {
  // [problem]
  std::string problem = "lq";
  std::map<std::string, double> problem_params;  // e.g. d

  // [solver]
  double delta = 0.5;
  std::string basis = "quadratic";  // or lipschitz_cone
  double c = 10.0;

  // [schedule]
  std::string schedule_mode = "explicit";  // explicit | geometric
  std::vector<double> meshes;
  std::vector<double> etas;       // explicit thresholds
  double eta_const = 0.0;         // >0: eta_l = eta_const * H_l^2
  double eta_error_scale = 0.0;   // >0: eta_l = scale * measured level error
  double h_first = 0.0, h_final = 0.0;
  long rounds = 0;                // geometric mode
  double target_eps = 0.0;        // geometric via suggest_schedule

  // [propagator]
  std::string method = "auto";  // auto | direct | analytic
  int inner_steps = 8;
  int max_iters = 500;
  double tolerance = 1e-8;
  double entry_floor = -1e6;
  bool banded = true;

  // [output]
  bool write_values = false;
  bool write_lambdas = false;
  bool baseline = false;  // also run the full final-mesh single-level solve
  long seed = 0;          // randomized tests only

  LevelSchedule schedule() const;
  AdaptiveConfig adaptive_config() const;
  ControlProblem make() const;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text);

/// Advisory schedule from the complexity-driven rule:
/// m = ceil(d |ln eps| / 2), final mesh C sqrt(eps), geometric in between.
/// Natural log. Requires eps in (0, 1).
LevelSchedule suggest_schedule(int d, double eps, double C = 1.0);

}  // namespace mpoc
