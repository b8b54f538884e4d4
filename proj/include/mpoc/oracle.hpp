#pragma once

#include <vector>

#include "mpoc/problem.hpp"

namespace mpoc {

/// Separable quadratic sum_k (a x_k^2 + b_k x_k + e_k); a is shared across
/// coordinates (all bumps and end costs here are isotropic).
struct SepQuadratic {
  double a = 0.0;
  Vec b;
  Vec e;

  double value(const Vec& x) const {
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k)
      s += a * x[k] * x[k] + b[k] * x[k] + e[k];
    return s;
  }

  /// -c |x - z|^2 as a separable quadratic.
  static SepQuadratic bump(double c, const Vec& z);
};

/// Fundamental solution of the per-coordinate Riccati system for
/// H(x,p) = 1/2 p^2 - x^2, in elapsed horizon s:
///   a' = 2a^2 - 1,  beta' = 2 a beta,  J' = beta^2
/// with beta(0)=1, J(0)=0. A quadratic a0 x^2 + b0 x + e0 propagates to
/// a x^2 + (b0 beta) x + (e0 + 1/2 b0^2 J). Both the forward and the
/// backward Lax-Oleinik flows of the LQ instance reduce to this system
/// (the Hamiltonian is even in p).
struct RiccatiFlow {
  double a = 0.0;
  double beta = 1.0;
  double J = 0.0;

  /// RK4 with fixed step from a(0) = a0 over horizon tau.
  static RiccatiFlow over(double a0, double tau, double ode_step = 1e-4);

  SepQuadratic apply(const SepQuadratic& q) const;
};

/// max over the box of a separable quadratic (requires a < 0), and its argmax.
double quad_max_over(const SepQuadratic& q, const Box& box);
Vec quad_argmax_over(const SepQuadratic& q, const Box& box);

/// Ground truth for the LQ instance: tabulated Riccati coefficients for both
/// value functions, optimal trajectory, optimal value.
class RiccatiOracle {
 public:
  explicit RiccatiOracle(const LQInstance& lq, double ode_step = 1e-4);

  double value(Direction dir, double t, const Vec& x) const;
  SepQuadratic quadratic(Direction dir, double t) const;
  /// argmax_x of v_fwd(x,t) + v_bwd(x,t); closed form per coordinate.
  Vec trajectory(double t) const;
  double optimal_value(double t) const;

  const LQInstance& instance() const { return lq_; }

 private:
  struct Table {
    std::vector<double> a, beta, J;
    SepQuadratic start;
  };
  const Table& table(Direction dir) const {
    return dir == Direction::Forward ? fwd_ : bwd_;
  }
  long index(double s) const;

  LQInstance lq_;
  Box X_;
  double T_ = 5.0;
  double step_;
  Table fwd_, bwd_;
};

/// Plain semi-Lagrangian value iteration on a regular grid; validation
/// baseline for non-LQ problems, d <= 3 only.
struct SLConfig {
  double space_step = 0.25;
  double time_step = 0.05;
  long controls_per_dim = 21;
};

struct SLGrid {
  Direction direction = Direction::Backward;
  RegularGrid grid;
  double dt = 0.0;
  std::vector<std::vector<double>> values;  // one table per time slice, index k <-> k*dt

  double value_at(long k, const Vec& x) const;  // multilinear interpolation
  long num_steps() const { return static_cast<long>(values.size()) - 1; }
};

SLGrid sl_solve(const ControlProblem& prob, Direction dir, const SLConfig& cfg);

}  // namespace mpoc
