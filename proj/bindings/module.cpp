// Python surface: config-driven runs, the adaptive solver, schedule
// suggestion, the tropical core, and the LQ oracle.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mpoc/runner.hpp"

namespace py = pybind11;
using namespace mpoc;

namespace {

TropicalMatrix from_rows(const std::vector<std::vector<double>>& rows) {
  const long r = static_cast<long>(rows.size());
  const long c = r == 0 ? 0 : static_cast<long>(rows[0].size());
  std::vector<double> flat;
  flat.reserve(r * c);
  for (const auto& row : rows) {
    if (static_cast<long>(row.size()) != c)
      throw std::invalid_argument("ragged matrix");
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return TropicalMatrix::dense(r, c, std::move(flat));
}

py::dict level_dict(const LevelReport& l) {
  py::dict d;
  d["level"] = l.level;
  d["H"] = l.H;
  d["eta"] = l.eta;
  d["num_basis"] = l.num_basis;
  d["num_pairs_max_t"] = l.num_pairs_max_t;
  d["err_vs_oracle"] = l.err_vs_oracle;
  d["vstar_estimate"] = l.vstar_estimate;
  return d;
}

py::dict solve_lq(int d, std::vector<double> meshes, std::vector<double> etas,
                  double delta, double c) {
  const ControlProblem prob = make_problem("lq", {{"d", double(d)}});
  LevelSchedule sched;
  sched.meshes = std::move(meshes);
  sched.etas = std::move(etas);
  AdaptiveConfig cfg;
  cfg.kind = BasisKind::quadratic(c);
  const AdaptiveResult res = run_adaptive(prob, sched, delta, cfg);
  py::dict out;
  py::list levels;
  for (const auto& l : res.levels) levels.append(level_dict(l));
  out["levels"] = levels;
  out["num_basis"] = res.final_family.size();
  out["vstar"] = res.levels.back().vstar_estimate;
  return out;
}

py::dict run_config(const std::string& text, const std::string& out_dir) {
  const RunReport rep = run(parse_config_text(text), out_dir);
  py::dict out;
  py::list levels;
  for (const auto& l : rep.result.levels) levels.append(level_dict(l));
  out["levels"] = levels;
  out["vstar"] = rep.vstar_final;
  out["vstar_oracle"] = rep.vstar_oracle;
  out["num_basis"] = rep.result.final_family.size();
  out["total_seconds"] = rep.total_seconds;
  return out;
}

}  // namespace

PYBIND11_MODULE(_mpoc, m) {
  m.doc() = "Adaptive max-plus solver for finite-horizon optimal control";

  m.def("matvec",
        [](const std::vector<std::vector<double>>& rows, const TropicalVector& x) {
          return from_rows(rows).matvec(x);
        },
        py::arg("matrix"), py::arg("x"),
        "Max-plus matrix-vector product; -inf entries are absorbing.");
  m.def("residuate",
        [](const std::vector<std::vector<double>>& rows, const TropicalVector& b) {
          return from_rows(rows).residuate(b);
        },
        py::arg("matrix"), py::arg("b"),
        "Largest lam with matvec(matrix, lam) <= b.");
  m.def("project",
        [](const std::vector<std::vector<double>>& rows, const TropicalVector& x) {
          return from_rows(rows).project(x);
        },
        py::arg("matrix"), py::arg("x"));

  m.def("suggest_schedule",
        [](int d, double eps, double C) {
          const LevelSchedule s = suggest_schedule(d, eps, C);
          return py::make_tuple(s.meshes, s.etas);
        },
        py::arg("d"), py::arg("eps"), py::arg("C") = 1.0,
        "Complexity-driven (meshes, etas) schedule for a target accuracy.");

  m.def("solve_lq", &solve_lq, py::arg("d"), py::arg("meshes"), py::arg("etas"),
        py::arg("delta") = 0.5, py::arg("c") = 10.0,
        "Adaptive multi-level solve of the built-in LQ instance.");

  m.def("run", &run_config, py::arg("config_text"), py::arg("out_dir"),
        "Execute a config text; CSV outputs land under out_dir.");

  m.def("oracle_optimal_value",
        [](int d) { return RiccatiOracle(LQInstance(d)).optimal_value(0.0); },
        py::arg("d"));
  m.def("oracle_trajectory",
        [](int d, double t) { return RiccatiOracle(LQInstance(d)).trajectory(t); },
        py::arg("d"), py::arg("t"));
  m.def("oracle_value",
        [](int d, const std::string& direction, double t, const Vec& x) {
          const Direction dir = direction == "forward" ? Direction::Forward
                                                       : Direction::Backward;
          return RiccatiOracle(LQInstance(d)).value(dir, t, x);
        },
        py::arg("d"), py::arg("direction"), py::arg("t"), py::arg("x"));
}
