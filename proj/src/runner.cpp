#include "mpoc/runner.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace mpoc {

namespace {

std::ofstream open_csv(const std::string& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  std::ofstream out(dir + "/" + name);
  if (!out) throw std::runtime_error("cannot open output file " + dir + "/" + name);
  out.precision(17);
  return out;
}

}  // namespace

RunReport run(const RunConfig& cfg, const std::string& out_dir) {
  const auto t0 = std::chrono::steady_clock::now();
  const ControlProblem prob = cfg.make();
  const LevelSchedule schedule = cfg.schedule();
  const AdaptiveConfig acfg = cfg.adaptive_config();

  RunReport rep;
  rep.result = run_adaptive(prob, schedule, cfg.delta, acfg);
  const AdaptiveResult& res = rep.result;
  rep.vstar_final = res.levels.back().vstar_estimate;
  if (prob.lq) {
    LQInstance lq(prob.d);
    lq.x0 = prob.lq->x0;
    lq.xT = prob.lq->xT;
    rep.vstar_oracle = RiccatiOracle(lq).optimal_value(0.0);
  }

  if (cfg.baseline) {
    LevelSchedule flat;
    flat.meshes = {schedule.meshes.back()};
    AdaptiveResult base = run_adaptive(prob, flat, cfg.delta, acfg);
    rep.baseline_err = base.levels.back().err_vs_oracle;
    rep.baseline_basis = base.levels.back().num_basis;
  }
  rep.total_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  {
    auto out = open_csv(out_dir, "levels.csv");
    out << "level,H,eta,num_basis,num_pairs_max_t,err_vs_oracle,seconds\n";
    for (const auto& l : res.levels)
      out << l.level << ',' << l.H << ',' << l.eta << ',' << l.num_basis << ','
          << l.num_pairs_max_t << ',' << l.err_vs_oracle << ',' << l.seconds << '\n';
  }
  {
    auto out = open_csv(out_dir, "report.csv");
    out << "key,value\n";
    out << "problem," << cfg.problem << '\n';
    out << "d," << prob.d << '\n';
    out << "delta," << cfg.delta << '\n';
    out << "levels," << res.levels.size() << '\n';
    out << "final_basis_count," << res.final_family.size() << '\n';
    out << "vstar_estimate," << rep.vstar_final << '\n';
    out << "vstar_oracle," << rep.vstar_oracle << '\n';
    out << "err_vs_oracle," << res.levels.back().err_vs_oracle << '\n';
    if (cfg.baseline) {
      out << "baseline_basis_count," << rep.baseline_basis << '\n';
      out << "baseline_err_vs_oracle," << rep.baseline_err << '\n';
    }
    out << "total_seconds," << rep.total_seconds << '\n';
  }
  if (cfg.write_values) {
    const std::vector<Vec> pts = error_grid(prob, 0.0);
    const ValueApprox& fwd = res.fwd.back();
    const ValueApprox& bwd = res.bwd.back();
    for (long k = 0; k <= fwd.num_steps(); ++k) {
      auto out = open_csv(out_dir, "values_t" + std::to_string(k) + ".csv");
      out << "t";
      for (int a = 0; a < prob.d; ++a) out << ",x" << a;
      out << ",v_fwd,v_bwd\n";
      for (const auto& x : pts) {
        out << fwd.time(k);
        for (double v : x) out << ',' << v;
        out << ',' << synthesize(fwd, k, x) << ',' << synthesize(bwd, k, x) << '\n';
      }
    }
  }
  if (cfg.write_lambdas) {
    auto out = open_csv(out_dir, "lambdas.csv");
    out << "t,i,lambda_fwd,lambda_bwd\n";
    const ValueApprox& fwd = res.fwd.back();
    const ValueApprox& bwd = res.bwd.back();
    for (long k = 0; k <= fwd.num_steps(); ++k)
      for (long i = 0; i < res.final_family.size(); ++i)
        out << fwd.time(k) << ',' << i << ',' << fwd.coeffs[k][i] << ','
            << bwd.coeffs[k][i] << '\n';
    out << "# p = " << res.final_family.size() << ", N = " << fwd.num_steps() << '\n';
  }

  std::cout << "level       H     eta  basis  pairs  err_vs_oracle  seconds\n";
  for (const auto& l : res.levels) {
    std::printf("%5ld %7.3f %7.4f %6ld %6ld %14.6g %8.2f\n", l.level, l.H, l.eta,
                l.num_basis, l.num_pairs_max_t, l.err_vs_oracle, l.seconds);
  }
  std::printf("v* estimate = %.8g", rep.vstar_final);
  if (prob.lq) std::printf("   (oracle %.8g)", rep.vstar_oracle);
  std::printf("\n");
  return rep;
}

void write_oracle_csv(int d, const std::string& out_path, double delta) {
  LQInstance lq(d);
  RiccatiOracle oracle(lq);
  const ControlProblem prob = lq.to_problem();
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot open " + out_path);
  out.precision(17);
  out << "t";
  for (int a = 0; a < d; ++a) out << ",x" << a;
  out << ",v_fwd,v_bwd\n";
  const std::vector<Vec> pts = error_grid(prob, 0.0);
  for (double t = 0.0; t <= prob.T + 1e-9; t += delta)
    for (const auto& x : pts) {
      out << t;
      for (double v : x) out << ',' << v;
      out << ',' << oracle.value(Direction::Forward, t, x) << ','
          << oracle.value(Direction::Backward, t, x) << '\n';
    }
}

}  // namespace mpoc
