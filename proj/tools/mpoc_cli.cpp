#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "mpoc/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"max-plus optimal control solver"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out";
  auto* run_cmd = app.add_subcommand("run", "solve a problem described by a config file");
  run_cmd->add_option("config", config_path, "config file path")->required();
  run_cmd->add_option("--out", out_dir, "output directory for CSV reports");

  int d = 1;
  double eps = 0.01, C = 1.0;
  auto* sug = app.add_subcommand("suggest", "print a mesh/threshold schedule");
  sug->add_option("--d", d, "state dimension")->required();
  sug->add_option("--eps", eps, "target accuracy")->required();
  sug->add_option("--C", C, "scale constant");

  std::string problem = "lq", oracle_out = "oracle.csv";
  int od = 1;
  auto* orc = app.add_subcommand("oracle", "export reference values");
  orc->add_option("--problem", problem, "problem name (lq)")->required();
  orc->add_option("--d", od, "state dimension")->required();
  orc->add_option("--out", oracle_out, "output CSV path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      mpoc::RunConfig cfg = mpoc::parse_config_file(config_path);
      mpoc::run(cfg, out_dir);
    } else if (sug->parsed()) {
      mpoc::LevelSchedule s = mpoc::suggest_schedule(d, eps, C);
      std::printf("levels = %zu (refinement rounds = %ld)\n", s.meshes.size(),
                  s.rounds());
      std::printf("level        H          eta\n");
      for (std::size_t l = 0; l < s.meshes.size(); ++l) {
        if (l < s.etas.size())
          std::printf("%5zu %10.6g %12.6g\n", l + 1, s.meshes[l], s.etas[l]);
        else
          std::printf("%5zu %10.6g %12s\n", l + 1, s.meshes[l], "-");
      }
    } else if (orc->parsed()) {
      if (problem != "lq") {
        std::fprintf(stderr, "error: unknown problem '%s'\n", problem.c_str());
        return 2;
      }
      mpoc::write_oracle_csv(od, oracle_out);
      std::printf("wrote %s\n", oracle_out.c_str());
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
