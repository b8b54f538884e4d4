#include "mpoc/solver.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mpoc {

namespace {

long step_count(double T, double delta) {
  const double n = T / delta;
  const long N = static_cast<long>(std::llround(n));
  if (N < 1 || std::abs(n - N) > 1e-9 * std::max(1.0, n))
    throw std::invalid_argument("solve: delta must divide T");
  return N;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

ValueApprox run_recursion(const ControlProblem& prob, Direction dir,
                          const BasisFamily& basis, const TropicalMatrix& mass,
                          const TropicalMatrix& stiffness, double delta,
                          const std::vector<Vec>& sample_grid) {
  const long N = step_count(prob.T, delta);
  ValueApprox va;
  va.direction = dir;
  va.dt = delta;
  va.family = basis;
  va.coeffs.assign(N + 1, TropicalVector());

  const auto& end_cost = prob.directional_end_cost(dir);
  const long start = dir == Direction::Backward ? N : 0;
  const long sweep = dir == Direction::Backward ? -1 : +1;
  va.coeffs[start] = best_fit_coeffs(basis, end_cost, sample_grid);

  for (long k = start; k != start + sweep * N; k += sweep) {
    const TropicalVector next =
        mass.residuate(stiffness.matvec(va.coeffs[k]));
    if (all_neg_inf(next))
      throw std::runtime_error("solve: coefficients collapsed to -inf at step t = " +
                               std::to_string((k + sweep) * delta));
    va.coeffs[k + sweep] = next;
  }
  return va;
}

SolveResult solve_direction(const ControlProblem& prob, Direction dir,
                            const BasisFamily& basis, const BasisFamily& tests,
                            double delta, const SolveConfig& cfg) {
  if (basis.size() == 0 || tests.size() == 0)
    throw std::invalid_argument("solve_direction: empty family");
  if (cfg.sample_grid.empty())
    throw std::invalid_argument("solve_direction: empty best-fit sample grid");
  SolveResult out;
  out.report.p = basis.size();
  out.report.q = tests.size();
  out.report.num_steps = step_count(prob.T, delta);

  const auto t0 = std::chrono::steady_clock::now();
  const TropicalMatrix mass = assemble_mass(tests, basis, cfg.mass_floor);
  out.report.stiffness =
      assemble_stiffness(prob, dir, basis, tests, delta, cfg.stiffness);
  out.report.assembly_seconds = seconds_since(t0);

  const auto t1 = std::chrono::steady_clock::now();
  out.approx = run_recursion(prob, dir, basis, mass, out.report.stiffness.K, delta,
                             cfg.sample_grid);
  out.report.recursion_seconds = seconds_since(t1);
  return out;
}

double value_at(const ValueApprox& va, double t, const Vec& x) {
  const long k = static_cast<long>(std::llround(t / va.dt));
  if (k < 0 || k >= static_cast<long>(va.coeffs.size()) ||
      std::abs(t - k * va.dt) > 1e-9 * std::max(1.0, std::abs(t)))
    throw std::out_of_range("value_at: time off the grid");
  return synthesize(va, k, x);
}

double optimal_value(const ValueApprox& va_fwd, const ValueApprox& va_bwd,
                     long time_index, const TropicalMatrix& basis_sups) {
  if (va_fwd.family.size() != va_bwd.family.size())
    throw std::invalid_argument("optimal_value: mismatched families");
  const TropicalVector y = basis_sups.matvec(va_fwd.coeffs.at(time_index));
  const TropicalVector& lb = va_bwd.coeffs.at(time_index);
  double best = trop::neg_inf;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (trop::is_neg_inf(lb[i]) || trop::is_neg_inf(y[i])) continue;
    best = std::max(best, lb[i] + y[i]);
  }
  return best;
}

}  // namespace mpoc
