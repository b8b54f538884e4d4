#include "mpoc/problem.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mpoc {

namespace {

double control_objective(const ControlProblem& prob, const Vec& x, const Vec& p,
                         const Vec& u) {
  const Vec fx = prob.f(x, u);
  double s = prob.ell(x, u);
  for (int k = 0; k < prob.d; ++k) s += p[k] * fx[k];
  return s;
}

}  // namespace

double hamiltonian_grid(const ControlProblem& prob, const Vec& x, const Vec& p,
                        long points_per_dim) {
  long total = 1;
  for (int k = 0; k < prob.m; ++k) total *= points_per_dim;
  double best = -std::numeric_limits<double>::infinity();
  Vec u(prob.m);
  for (long f = 0; f < total; ++f) {
    long r = f;
    for (int k = prob.m - 1; k >= 0; --k) {
      const long j = r % points_per_dim;
      r /= points_per_dim;
      u[k] = prob.U.lo[k] +
             j * (prob.U.hi[k] - prob.U.lo[k]) / static_cast<double>(points_per_dim - 1);
    }
    best = std::max(best, control_objective(prob, x, p, u));
  }
  return best;
}

double hamiltonian(const ControlProblem& prob, const Vec& x, const Vec& p) {
  if (prob.analytic_hamiltonian) return (*prob.analytic_hamiltonian)(x, p);

  // Multi-start projected gradient ascent over U, FD gradients.
  const int starts_per_dim = 3;
  long total = 1;
  for (int k = 0; k < prob.m; ++k) total *= starts_per_dim;
  double best = -std::numeric_limits<double>::infinity();
  Vec u(prob.m), g(prob.m), trial(prob.m);
  const double fd = 1e-6;
  for (long s = 0; s < total; ++s) {
    long r = s;
    for (int k = prob.m - 1; k >= 0; --k) {
      const long j = r % starts_per_dim;
      r /= starts_per_dim;
      u[k] = prob.U.lo[k] + (j + 0.5) * (prob.U.hi[k] - prob.U.lo[k]) / starts_per_dim;
    }
    double val = control_objective(prob, x, p, u);
    double step = 1.0;
    for (int it = 0; it < 200; ++it) {
      for (int k = 0; k < prob.m; ++k) {
        Vec up = u, um = u;
        up[k] = prob.U.clamp1(k, u[k] + fd);
        um[k] = prob.U.clamp1(k, u[k] - fd);
        const double den = up[k] - um[k];
        g[k] = den > 0 ? (control_objective(prob, x, p, up) -
                          control_objective(prob, x, p, um)) /
                             den
                       : 0.0;
      }
      double gnorm = std::sqrt(sq_norm(g));
      if (gnorm < 1e-10) break;
      bool improved = false;
      for (int bt = 0; bt < 40; ++bt) {
        for (int k = 0; k < prob.m; ++k) trial[k] = prob.U.clamp1(k, u[k] + step * g[k]);
        const double tv = control_objective(prob, x, p, trial);
        if (tv > val + 1e-14) {
          u = trial;
          val = tv;
          improved = true;
          step *= 1.5;
          break;
        }
        step *= 0.5;
      }
      if (!improved) break;
    }
    best = std::max(best, val);
  }
  return best;
}

ControlProblem LQInstance::to_problem() const {
  ControlProblem p;
  p.d = d;
  p.m = d;
  p.X = Box::cube(d, -5.0, 5.0);
  // Wide enough that optimal controls stay interior for states in X over T=5.
  p.U = Box::cube(d, -20.0, 20.0);
  p.T = 5.0;
  p.f = [](const Vec&, const Vec& u) { return u; };
  p.ell = [](const Vec& x, const Vec& u) { return -sq_norm(x) - 0.5 * sq_norm(u); };
  const Vec a = x0, b = xT;
  const double ca = c_phi0, cb = c_phiT;
  p.phi0 = [a, ca](const Vec& x) { return -ca * sq_dist(x, a); };
  p.phiT = [b, cb](const Vec& x) { return -cb * sq_dist(x, b); };
  p.L_f = 1.0;
  p.L_ell = 10.0 * std::sqrt(static_cast<double>(d)) * 2.0;
  const Box U = p.U;
  p.analytic_hamiltonian = [U](const Vec& x, const Vec& pp) {
    // sup_u p.u - |x|^2 - 1/2|u|^2, maximizer u = p clamped to U.
    double s = -sq_norm(x);
    for (std::size_t k = 0; k < pp.size(); ++k) {
      const double u = U.clamp1(static_cast<int>(k), pp[k]);
      s += pp[k] * u - 0.5 * u * u;
    }
    return s;
  };
  const int dd = d;
  ProblemDerivatives der;
  der.f_x = [dd](const Vec&, const Vec&) { return std::vector<double>(dd * dd, 0.0); };
  der.f_u = [dd](const Vec&, const Vec&) {
    std::vector<double> J(dd * dd, 0.0);
    for (int k = 0; k < dd; ++k) J[k * dd + k] = 1.0;
    return J;
  };
  der.ell_x = [](const Vec& x, const Vec&) {
    Vec g(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) g[k] = -2.0 * x[k];
    return g;
  };
  der.ell_u = [](const Vec&, const Vec& u) {
    Vec g(u.size());
    for (std::size_t k = 0; k < u.size(); ++k) g[k] = -u[k];
    return g;
  };
  p.derivatives = der;
  p.lq = LqData{x0, xT};
  return p;
}

ControlProblem make_problem(const std::string& name,
                            const std::map<std::string, double>& params) {
  if (name == "lq") {
    int d = 2;
    if (auto it = params.find("d"); it != params.end())
      d = static_cast<int>(it->second);
    if (d < 1) throw std::invalid_argument("lq: dimension must be >= 1");
    return LQInstance(d).to_problem();
  }
  throw std::invalid_argument("unknown problem: " + name);
}

}  // namespace mpoc
