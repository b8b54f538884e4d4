#pragma once

#include "mpoc/basis.hpp"
#include "mpoc/problem.hpp"
#include "mpoc/propagator.hpp"

namespace mpoc {

struct SolveConfig {
  StiffnessConfig stiffness;
  double mass_floor = -1e6;
  /// Best-fit sample grid for the end-cost coefficients; when empty, the
  /// caller must pass one to solve_direction.
  std::vector<Vec> sample_grid;
};

struct SolveReport {
  long p = 0;
  long q = 0;
  long num_steps = 0;
  double assembly_seconds = 0.0;
  double recursion_seconds = 0.0;
  StiffnessReport stiffness;
};

struct SolveResult {
  ValueApprox approx;
  SolveReport report;
};

/// Max-plus finite-element recursion in one direction:
/// initialize at the natural end, then lambda^{t -+ delta} = M_h^# (K_h lambda^t).
/// Throws with the offending step index if the coefficients collapse to -inf.
SolveResult solve_direction(const ControlProblem& prob, Direction dir,
                            const BasisFamily& basis, const BasisFamily& tests,
                            double delta, const SolveConfig& cfg);

/// Same recursion on preassembled matrices (reused across levels and
/// directions when the problem data is time-invariant).
ValueApprox run_recursion(const ControlProblem& prob, Direction dir,
                          const BasisFamily& basis, const TropicalMatrix& mass,
                          const TropicalMatrix& stiffness, double delta,
                          const std::vector<Vec>& sample_grid);

double value_at(const ValueApprox& va, double t, const Vec& x);

/// v* estimate from the coefficient pair: max over (i,i') of
/// lambda_fwd_i + lambda_bwd_i' + W*_{i,i'}; basis_sups = <w_i, w_i'>.
double optimal_value(const ValueApprox& va_fwd, const ValueApprox& va_bwd,
                     long time_index, const TropicalMatrix& basis_sups);

}  // namespace mpoc
