#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>

#include "mpoc/basis.hpp"
#include "mpoc/geometry.hpp"

namespace mpoc {

/// Analytic LQ structure of the benchmark instance: f = u,
/// l = -|x|^2 - 1/2 |u|^2, phi_0 = -1/2 |x - x0|^2, phi_T = -|x - xT|^2.
/// Presence of this tag enables closed-form Hamiltonian and Riccati paths.
struct LqData {
  Vec x0;
  Vec xT;
};

struct ProblemDerivatives {
  // Jacobians as flat row-major d x d / d x m blocks.
  std::function<std::vector<double>(const Vec&, const Vec&)> f_x;
  std::function<std::vector<double>(const Vec&, const Vec&)> f_u;
  std::function<Vec(const Vec&, const Vec&)> ell_x;
  std::function<Vec(const Vec&, const Vec&)> ell_u;
};

struct ControlProblem {
  int d = 1;
  int m = 1;
  Box X;
  Box U;
  double T = 1.0;
  std::function<Vec(const Vec&, const Vec&)> f;
  std::function<double(const Vec&, const Vec&)> ell;
  std::function<double(const Vec&)> phi0;
  std::function<double(const Vec&)> phiT;
  double L_f = 0.0;    // metadata only
  double L_ell = 0.0;  // metadata only

  std::optional<std::function<double(const Vec&, const Vec&)>> analytic_hamiltonian;
  std::optional<ProblemDerivatives> derivatives;
  std::optional<LqData> lq;

  /// End cost imposed at the start of the sweep: phi_T for backward,
  /// phi_0 for forward.
  const std::function<double(const Vec&)>& directional_end_cost(Direction dir) const {
    return dir == Direction::Backward ? phiT : phi0;
  }
};

/// H(x,p) = sup_{u in U} { p . f(x,u) + l(x,u) }; analytic when available,
/// otherwise multi-start projected gradient over the control box.
double hamiltonian(const ControlProblem& prob, const Vec& x, const Vec& p);

/// Brute-force H over a uniform control grid (oracle for tests).
double hamiltonian_grid(const ControlProblem& prob, const Vec& x, const Vec& p,
                        long points_per_dim);

/// Section-6 benchmark instance.
struct LQInstance {
  int d = 2;
  Vec x0;  // defaults to (-3,...,-3)
  Vec xT;  // defaults to (3,...,3)
  double c_phi0 = 0.5;
  double c_phiT = 1.0;

  explicit LQInstance(int dim) : d(dim), x0(dim, -3.0), xT(dim, 3.0) {}

  ControlProblem to_problem() const;
};

/// Built-in problems by name; currently "lq". Parameters: "d".
ControlProblem make_problem(const std::string& name,
                            const std::map<std::string, double>& params);

}  // namespace mpoc
