#include "mpoc/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace mpoc {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<double> parse_list(const std::string& s, int line) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim(tok);
    if (tok.empty()) continue;
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw ConfigError("line " + std::to_string(line) + ": bad number '" + tok + "'");
    }
  }
  return out;
}

double parse_num(const std::string& s, int line) {
  try {
    return std::stod(s);
  } catch (const std::exception&) {
    throw ConfigError("line " + std::to_string(line) + ": bad number '" + s + "'");
  }
}

bool parse_bool(const std::string& s, int line) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError("line " + std::to_string(line) + ": bad boolean '" + s + "'");
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  std::stringstream ss(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(lineno) + ": unterminated section");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    const int ln = lineno;

    if (section == "problem") {
      if (key == "name")
        cfg.problem = val;
      else
        cfg.problem_params[key] = parse_num(val, ln);
    } else if (section == "solver") {
      if (key == "delta")
        cfg.delta = parse_num(val, ln);
      else if (key == "basis")
        cfg.basis = val;
      else if (key == "c")
        cfg.c = parse_num(val, ln);
      else
        throw ConfigError("line " + std::to_string(ln) + ": unknown solver key " + key);
    } else if (section == "schedule") {
      if (key == "mode")
        cfg.schedule_mode = val;
      else if (key == "meshes")
        cfg.meshes = parse_list(val, ln);
      else if (key == "etas")
        cfg.etas = parse_list(val, ln);
      else if (key == "eta_const")
        cfg.eta_const = parse_num(val, ln);
      else if (key == "eta_error_scale")
        cfg.eta_error_scale = parse_num(val, ln);
      else if (key == "h_first")
        cfg.h_first = parse_num(val, ln);
      else if (key == "h_final")
        cfg.h_final = parse_num(val, ln);
      else if (key == "rounds")
        cfg.rounds = static_cast<long>(parse_num(val, ln));
      else if (key == "target_eps")
        cfg.target_eps = parse_num(val, ln);
      else
        throw ConfigError("line " + std::to_string(ln) + ": unknown schedule key " + key);
    } else if (section == "propagator") {
      if (key == "method")
        cfg.method = val;
      else if (key == "inner_steps")
        cfg.inner_steps = static_cast<int>(parse_num(val, ln));
      else if (key == "max_iters")
        cfg.max_iters = static_cast<int>(parse_num(val, ln));
      else if (key == "tolerance")
        cfg.tolerance = parse_num(val, ln);
      else if (key == "entry_floor")
        cfg.entry_floor = parse_num(val, ln);
      else if (key == "banded")
        cfg.banded = parse_bool(val, ln);
      else
        throw ConfigError("line " + std::to_string(ln) + ": unknown propagator key " + key);
    } else if (section == "output") {
      if (key == "write_values")
        cfg.write_values = parse_bool(val, ln);
      else if (key == "write_lambdas")
        cfg.write_lambdas = parse_bool(val, ln);
      else if (key == "baseline")
        cfg.baseline = parse_bool(val, ln);
      else if (key == "seed")
        cfg.seed = static_cast<long>(parse_num(val, ln));
      else
        throw ConfigError("line " + std::to_string(ln) + ": unknown output key " + key);
    } else {
      throw ConfigError("line " + std::to_string(lineno) + ": key outside known section");
    }
  }
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

LevelSchedule RunConfig::schedule() const {
  LevelSchedule s;
  if (schedule_mode == "explicit") {
    s.meshes = meshes;
  } else if (schedule_mode == "geometric") {
    if (target_eps > 0) {
      const int d = static_cast<int>(problem_params.count("d") ? problem_params.at("d") : 1);
      s = suggest_schedule(d, target_eps);
      s.etas.clear();
    } else {
      s = LevelSchedule::geometric(h_first, h_final, rounds, {});
    }
  } else {
    throw ConfigError("unknown schedule mode: " + schedule_mode);
  }
  if (!etas.empty()) {
    s.etas = etas;
  } else if (eta_const > 0) {
    for (std::size_t l = 0; l + 1 < s.meshes.size(); ++l)
      s.etas.push_back(eta_const * s.meshes[l] * s.meshes[l]);
  }
  // error-scaled mode supplies etas at run time; keep placeholders for validate()
  if (eta_error_scale > 0 && s.etas.empty())
    s.etas.assign(s.meshes.empty() ? 0 : s.meshes.size() - 1, 1.0);
  s.validate();
  return s;
}

AdaptiveConfig RunConfig::adaptive_config() const {
  AdaptiveConfig a;
  if (basis == "quadratic")
    a.kind = BasisKind::quadratic(c);
  else if (basis == "lipschitz_cone")
    a.kind = BasisKind::cone(c);
  else
    throw ConfigError("unknown basis kind: " + basis);
  a.stiffness.direct.inner_steps = inner_steps;
  a.stiffness.direct.max_iters = max_iters;
  a.stiffness.direct.tolerance = tolerance;
  a.stiffness.entry_floor = entry_floor;
  a.stiffness.banded = banded;
  a.mass_floor = entry_floor;
  if (method == "auto")
    a.stiffness.method = StiffnessMethod::Auto;
  else if (method == "direct")
    a.stiffness.method = StiffnessMethod::Direct;
  else if (method == "analytic")
    a.stiffness.method = StiffnessMethod::LqAnalytic;
  else
    throw ConfigError("unknown propagator method: " + method);
  if (eta_error_scale > 0) {
    a.eta_mode = AdaptiveConfig::EtaMode::ErrorScaled;
    a.eta_error_scale = eta_error_scale;
  }
  return a;
}

ControlProblem RunConfig::make() const { return make_problem(problem, problem_params); }

LevelSchedule suggest_schedule(int d, double eps, double C) {
  if (eps <= 0 || eps >= 1) throw std::invalid_argument("suggest_schedule: eps in (0,1)");
  if (d < 1) throw std::invalid_argument("suggest_schedule: d >= 1");
  const long m = static_cast<long>(std::ceil(0.5 * d * std::abs(std::log(eps))));
  const double h_final = C * std::sqrt(eps);
  LevelSchedule s;
  for (long l = 1; l <= m + 1; ++l)
    s.meshes.push_back(C * std::pow(h_final / C, static_cast<double>(l) / (m + 1)));
  for (long l = 0; l < m; ++l) s.etas.push_back(s.meshes[l] * s.meshes[l]);
  s.validate();
  return s;
}

}  // namespace mpoc
