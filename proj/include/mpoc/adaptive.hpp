#pragma once

#include <optional>

#include "mpoc/oracle.hpp"
#include "mpoc/solver.hpp"

namespace mpoc {

/// Mesh / threshold schedule of the multi-level loop: meshes H_1 > ... > H_{m+1},
/// thresholds eta_1..eta_m.
struct LevelSchedule {
  std::vector<double> meshes;
  std::vector<double> etas;

  long rounds() const { return static_cast<long>(meshes.size()) - 1; }
  void validate() const;

  /// Geometric interpolation H_l = H_1 (H_final/H_1)^{(l-1)/m}.
  static LevelSchedule geometric(double h_first, double h_final, long m,
                                 std::vector<double> etas);
};

/// Pair-score view N^t(i,i') = lambda_fwd_i + lambda_bwd_i' + W*_{i,i'};
/// sups must outlive the view.
struct PairScores {
  long p = 0;
  const TropicalMatrix* sups = nullptr;
  TropicalVector lambda_fwd;
  TropicalVector lambda_bwd;
  double best = trop::neg_inf;  // N^{t,*}
  long time_index = 0;

  double score(long i, long ip) const {
    const double w = sups->at(ip, i);
    if (trop::is_neg_inf(w) || trop::is_neg_inf(lambda_fwd[i]) ||
        trop::is_neg_inf(lambda_bwd[ip]))
      return trop::neg_inf;
    return lambda_fwd[i] + lambda_bwd[ip] + w;
  }
};

PairScores pair_scores(const ValueApprox& va_fwd, const ValueApprox& va_bwd,
                       long time_index, const TropicalMatrix& basis_sups);

struct PairSelection {
  long time_index = 0;
  std::vector<std::pair<long, long>> pairs;  // lexicographic
  double threshold = 0.0;                    // N^{t,*} - eta
};

/// Keep pairs with score strictly above N^{t,*} - eta.
PairSelection select_pairs(const PairScores& scores, double eta);

/// Fine-grid points x with w_i(x) + w_i'(x) > W*_{i,i'} - eta for some kept
/// pair; enumerated per pair over the bounding box of its sublevel set.
/// Returns sorted unique flat indices into fine_grid; throws when empty.
std::vector<long> active_points(const PairSelection& selection,
                                const RegularGrid& fine_grid,
                                const BasisFamily& family, double eta);

struct AdaptiveConfig {
  BasisKind kind = BasisKind::quadratic(10.0);
  StiffnessConfig stiffness;
  double mass_floor = -1e6;
  enum class EtaMode { FromSchedule, ErrorScaled };
  EtaMode eta_mode = EtaMode::FromSchedule;
  double eta_error_scale = 2.0;  // eta_l = scale x measured level error (LQ only)
  double error_grid_step = 0.0;  // 0 -> dimension-based default
  double dedup_factor = 0.5;     // dedup tolerance = factor x H_{l+1}
};

struct LevelReport {
  long level = 0;
  double H = 0.0;
  double eta = 0.0;
  long num_basis = 0;
  long num_pairs_max_t = 0;
  double err_vs_oracle = std::numeric_limits<double>::quiet_NaN();
  double seconds = 0.0;
  double vstar_estimate = trop::neg_inf;
};

struct AdaptiveResult {
  std::vector<LevelReport> levels;
  std::vector<ValueApprox> fwd;  // per level
  std::vector<ValueApprox> bwd;
  /// Per refinement round l <= m: fine grid and per-time active index sets.
  std::vector<RegularGrid> fine_grids;
  std::vector<std::vector<std::vector<long>>> active_sets;
  BasisFamily final_family;
};

/// Algorithm: level 1 solves both directions on the full X^{H_1} grid; each
/// round selects near-optimal pairs, collects the fine-grid active region,
/// appends its points to the cumulative family and re-solves.
AdaptiveResult run_adaptive(const ControlProblem& prob, const LevelSchedule& schedule,
                            double delta, const AdaptiveConfig& cfg);

/// Sample points for error measurement against the Riccati oracle.
std::vector<Vec> error_grid(const ControlProblem& prob, double step);

}  // namespace mpoc
