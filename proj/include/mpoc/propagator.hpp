#pragma once

#include "mpoc/basis.hpp"
#include "mpoc/problem.hpp"
#include "mpoc/tropical.hpp"

namespace mpoc {

/// Direct-method transcription settings for the small-horizon problems
/// behind stiffness entries.
struct DirectMethodConfig {
  int inner_steps = 8;       // Euler sub-steps of [0, delta]
  int max_iters = 500;
  double tolerance = 1e-8;   // projected-gradient norm
  double initial_step = 1.0;  // relative to the preconditioned gradient
  double fd_step = 1e-6;     // Jacobian fallback when no analytic derivatives
};

enum class PropagationStatus { Converged, Clipped, Fallback };

struct PropagationEntry {
  double value = trop::neg_inf;
  std::vector<Vec> states;    // K+1 states of the maximizing trajectory
  std::vector<Vec> controls;  // K controls
  PropagationStatus status = PropagationStatus::Converged;
};

/// <z_j, S^delta w_i> by direct transcription: Euler rollout of K inner
/// steps, projected gradient ascent with Armijo backtracking over the free
/// endpoint and the controls. The forward direction swaps the roles of the
/// two end functions.
PropagationEntry propagate_entry(const ControlProblem& prob, Direction dir,
                                 const BasisFamily& tests, long j,
                                 const BasisFamily& basis, long i, double delta,
                                 const DirectMethodConfig& cfg);

/// First-order semigroup expansion: max_x { z_j(x) + w_i(x) + delta H(x, s grad w_i) }
/// with s = +1 backward, -1 forward. O(delta^2) accurate; fallback and cross-check.
double hamiltonian_approx(const ControlProblem& prob, Direction dir,
                          const BasisFamily& tests, long j, const BasisFamily& basis,
                          long i, double delta);

enum class StiffnessMethod { Direct, LqAnalytic, Auto };

struct StiffnessConfig {
  DirectMethodConfig direct;
  StiffnessMethod method = StiffnessMethod::Auto;
  double entry_floor = -1e6;
  bool banded = true;           // skip entries with distant centers
  double band_margin_factor = 3.0;
  double f_sup = 0.0;           // sup |f| estimate; 0 -> derived from U for f = u
};

struct StiffnessReport {
  TropicalMatrix K;
  long n_converged = 0;
  long n_clipped = 0;
  long n_fallback = 0;
  long n_skipped = 0;
};

/// (K_h)_{j,i} = <z_j, S^delta w_i>. Entry method per StiffnessConfig; the
/// analytic LQ path propagates each quadratic bump through the Riccati flow
/// once and pairs it with every test function in closed form.
StiffnessReport assemble_stiffness(const ControlProblem& prob, Direction dir,
                                   const BasisFamily& basis, const BasisFamily& tests,
                                   double delta, const StiffnessConfig& cfg);

}  // namespace mpoc
