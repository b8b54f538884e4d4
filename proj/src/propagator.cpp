#include "mpoc/propagator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>

#include "mpoc/oracle.hpp"
#include "mpoc/util.hpp"

namespace mpoc {

namespace {

Vec bump_gradient(const BasisFamily& fam, long i, const Vec& x) {
  const Vec& z = fam.center(i);
  const double c = fam.kind().c;
  Vec g(x.size());
  if (fam.kind().tag == BasisKind::Tag::Quadratic) {
    for (std::size_t k = 0; k < x.size(); ++k) g[k] = -2.0 * c * (x[k] - z[k]);
  } else {
    for (std::size_t k = 0; k < x.size(); ++k) {
      const double d = x[k] - z[k];
      g[k] = d > 0 ? -c : (d < 0 ? c : 0.0);
    }
  }
  return g;
}

struct Jacobians {
  std::vector<double> f_x, f_u;  // row-major d x d, d x m
  Vec ell_x, ell_u;
};

Jacobians jacobians(const ControlProblem& prob, const Vec& x, const Vec& u, double fd) {
  Jacobians J;
  if (prob.derivatives) {
    J.f_x = prob.derivatives->f_x(x, u);
    J.f_u = prob.derivatives->f_u(x, u);
    J.ell_x = prob.derivatives->ell_x(x, u);
    J.ell_u = prob.derivatives->ell_u(x, u);
    return J;
  }
  const int d = prob.d, m = prob.m;
  J.f_x.assign(d * d, 0.0);
  J.f_u.assign(d * m, 0.0);
  J.ell_x.assign(d, 0.0);
  J.ell_u.assign(m, 0.0);
  Vec xp = x, xm = x, up = u, um = u;
  for (int k = 0; k < d; ++k) {
    xp[k] = x[k] + fd;
    xm[k] = x[k] - fd;
    const Vec fp = prob.f(xp, u), fm = prob.f(xm, u);
    for (int r = 0; r < d; ++r) J.f_x[r * d + k] = (fp[r] - fm[r]) / (2 * fd);
    J.ell_x[k] = (prob.ell(xp, u) - prob.ell(xm, u)) / (2 * fd);
    xp[k] = x[k];
    xm[k] = x[k];
  }
  for (int k = 0; k < m; ++k) {
    up[k] = u[k] + fd;
    um[k] = u[k] - fd;
    const Vec fp = prob.f(x, up), fm = prob.f(x, um);
    for (int r = 0; r < d; ++r) J.f_u[r * m + k] = (fp[r] - fm[r]) / (2 * fd);
    J.ell_u[k] = (prob.ell(x, up) - prob.ell(x, um)) / (2 * fd);
    up[k] = u[k];
    um[k] = u[k];
  }
  return J;
}

struct Transcription {
  const ControlProblem& prob;
  const BasisFamily* start_fam;
  long start_idx;
  const BasisFamily* end_fam;
  long end_idx;
  double h;  // delta / K
  int K;
  double fd;

  int num_vars() const { return prob.d + K * prob.m; }

  void clamp(Vec& vars) const {
    for (int k = 0; k < prob.d; ++k) vars[k] = prob.X.clamp1(k, vars[k]);
    for (int s = 0; s < K; ++s)
      for (int k = 0; k < prob.m; ++k) {
        double& u = vars[prob.d + s * prob.m + k];
        u = prob.U.clamp1(k, u);
      }
  }

  // Euler rollout; states clamped to X (sets *clipped when that bites).
  double objective(const Vec& vars, std::vector<Vec>* states_out,
                   std::vector<Vec>* controls_out, bool* clipped) const {
    Vec x(vars.begin(), vars.begin() + prob.d);
    double acc = start_fam->eval(start_idx, x);
    std::vector<Vec> states{x};
    std::vector<Vec> controls;
    for (int s = 0; s < K; ++s) {
      Vec u(vars.begin() + prob.d + s * prob.m,
            vars.begin() + prob.d + (s + 1) * prob.m);
      acc += h * prob.ell(x, u);
      const Vec fx = prob.f(x, u);
      for (int k = 0; k < prob.d; ++k) {
        double nx = x[k] + h * fx[k];
        const double cl = prob.X.clamp1(k, nx);
        if (clipped && cl != nx) *clipped = true;
        x[k] = cl;
      }
      states.push_back(x);
      controls.push_back(std::move(u));
    }
    acc += end_fam->eval(end_idx, x);
    if (states_out) *states_out = std::move(states);
    if (controls_out) *controls_out = std::move(controls);
    return acc;
  }

  // Adjoint sweep; clamping ignored (active only off the optimum).
  Vec gradient(const Vec& vars) const {
    const int d = prob.d, m = prob.m;
    std::vector<Vec> xs(K + 1);
    std::vector<Vec> us(K);
    xs[0].assign(vars.begin(), vars.begin() + d);
    for (int s = 0; s < K; ++s) {
      us[s].assign(vars.begin() + d + s * m, vars.begin() + d + (s + 1) * m);
      const Vec fx = prob.f(xs[s], us[s]);
      xs[s + 1] = xs[s];
      for (int k = 0; k < d; ++k) xs[s + 1][k] += h * fx[k];
    }
    Vec grad(num_vars(), 0.0);
    Vec p = bump_gradient(*end_fam, end_idx, xs[K]);
    for (int s = K - 1; s >= 0; --s) {
      const Jacobians J = jacobians(prob, xs[s], us[s], fd);
      for (int k = 0; k < m; ++k) {
        double g = h * J.ell_u[k];
        for (int r = 0; r < d; ++r) g += h * J.f_u[r * m + k] * p[r];
        grad[d + s * m + k] = g;
      }
      Vec pn(d);
      for (int k = 0; k < d; ++k) {
        double g = h * J.ell_x[k] + p[k];
        for (int r = 0; r < d; ++r) g += h * J.f_x[r * d + k] * p[r];
        pn[k] = g;
      }
      p = std::move(pn);
    }
    const Vec g0 = bump_gradient(*start_fam, start_idx, xs[0]);
    for (int k = 0; k < d; ++k) grad[k] = g0[k] + p[k];
    return grad;
  }
};

}  // namespace

PropagationEntry propagate_entry(const ControlProblem& prob, Direction dir,
                                 const BasisFamily& tests, long j,
                                 const BasisFamily& basis, long i, double delta,
                                 const DirectMethodConfig& cfg) {
  if (cfg.inner_steps < 1)
    throw std::invalid_argument("propagate_entry: inner_steps must be >= 1");
  const BasisFamily* start_fam = dir == Direction::Backward ? &tests : &basis;
  const long start_idx = dir == Direction::Backward ? j : i;
  const BasisFamily* end_fam = dir == Direction::Backward ? &basis : &tests;
  const long end_idx = dir == Direction::Backward ? i : j;

  const int K = cfg.inner_steps;
  Transcription tr{prob, start_fam, start_idx, end_fam, end_idx,
                   delta / K, K, cfg.fd_step};

  // Initial iterate: straight line from the start center to the end center,
  // controls from the finite difference of that line.
  const Vec& a = start_fam->center(start_idx);
  const Vec& b = end_fam->center(end_idx);
  Vec vars(tr.num_vars(), 0.0);
  for (int k = 0; k < prob.d; ++k) vars[k] = a[k];
  for (int s = 0; s < K; ++s)
    for (int k = 0; k < prob.m; ++k)
      vars[prob.d + s * prob.m + k] =
          prob.U.clamp1(k, k < prob.d ? (b[k] - a[k]) / delta : 0.0);
  tr.clamp(vars);

  // Diagonal preconditioner matched to the objective's curvature: the free
  // endpoint sees both bumps (~2c each), each control sees ~h from the
  // running cost. Brings the conditioning down to O(c * delta).
  const double pc_x = 1.0 / (2.0 * (start_fam->kind().c + end_fam->kind().c) + 2.0);
  const double pc_u = 1.0 / (tr.h * (1.0 + 2.0 * end_fam->kind().c * tr.h));
  auto precondition = [&](Vec g) {
    for (int k = 0; k < prob.d; ++k) g[k] *= pc_x;
    for (int k = prob.d; k < tr.num_vars(); ++k) g[k] *= pc_u;
    return g;
  };

  bool clipped = false;
  double val = tr.objective(vars, nullptr, nullptr, &clipped);
  double step = cfg.initial_step;
  bool converged = false;
  for (int it = 0; it < cfg.max_iters; ++it) {
    const Vec dirn = precondition(tr.gradient(vars));
    // Natural residual at the preconditioned unit step.
    Vec probe = vars;
    for (int k = 0; k < tr.num_vars(); ++k) probe[k] += dirn[k];
    tr.clamp(probe);
    double res = 0.0;
    for (int k = 0; k < tr.num_vars(); ++k) {
      const double d = probe[k] - vars[k];
      res += d * d;
    }
    if (std::sqrt(res) < cfg.tolerance * (1.0 + std::sqrt(sq_norm(vars)))) {
      converged = true;
      break;
    }
    bool improved = false;
    while (step > 1e-14) {
      Vec trial = vars;
      for (int k = 0; k < tr.num_vars(); ++k) trial[k] += step * dirn[k];
      tr.clamp(trial);
      const double tv = tr.objective(trial, nullptr, nullptr, nullptr);
      if (tv > val) {
        if (tv - val < 1e-13 * (1.0 + std::abs(val))) {
          vars = std::move(trial);
          val = tv;
          converged = true;  // stalled at machine precision
        } else {
          vars = std::move(trial);
          val = tv;
          improved = true;
          step = std::min(step * 2.0, 1.0);
        }
        break;
      }
      step *= 0.5;
    }
    if (converged) break;
    if (!improved) {
      converged = true;  // no ascent direction left
      break;
    }
  }

  PropagationEntry out;
  clipped = false;
  // The attained value comes from a feasible trajectory, hence is always a
  // valid lower bound on the entry, converged or not.
  out.value = tr.objective(vars, &out.states, &out.controls, &clipped);
  if (!converged)
    out.status = PropagationStatus::Fallback;
  else
    out.status = clipped ? PropagationStatus::Clipped : PropagationStatus::Converged;
  return out;
}

double hamiltonian_approx(const ControlProblem& prob, Direction dir,
                          const BasisFamily& tests, long j, const BasisFamily& basis,
                          long i, double delta) {
  const double sgn = dir == Direction::Backward ? 1.0 : -1.0;
  auto obj = [&](const Vec& x) {
    Vec gw = bump_gradient(basis, i, x);
    for (double& g : gw) g *= sgn;
    return tests.eval(j, x) + basis.eval(i, x) + delta * hamiltonian(prob, x, gw);
  };
  // Projected gradient ascent from the center midpoint, FD gradients.
  Vec x(prob.d);
  for (int k = 0; k < prob.d; ++k)
    x[k] = 0.5 * (tests.center(j)[k] + basis.center(i)[k]);
  x = prob.X.clamp(x);
  double val = obj(x);
  double step = 0.05;
  const double fd = 1e-6;
  Vec g(prob.d);
  for (int it = 0; it < 300; ++it) {
    for (int k = 0; k < prob.d; ++k) {
      Vec xp = x, xm = x;
      xp[k] = prob.X.clamp1(k, x[k] + fd);
      xm[k] = prob.X.clamp1(k, x[k] - fd);
      const double den = xp[k] - xm[k];
      g[k] = den > 0 ? (obj(xp) - obj(xm)) / den : 0.0;
    }
    bool improved = false;
    while (step > 1e-13) {
      Vec trial = x;
      for (int k = 0; k < prob.d; ++k) trial[k] = prob.X.clamp1(k, x[k] + step * g[k]);
      const double tv = obj(trial);
      if (tv > val + 1e-15) {
        x = std::move(trial);
        val = tv;
        improved = true;
        step *= 2.0;
        break;
      }
      step *= 0.5;
    }
    if (!improved) break;
  }
  return val;
}

namespace {

double estimate_f_sup(const ControlProblem& prob) {
  std::mt19937 rng(12345);
  double best = 0.0;
  Vec x(prob.d), u(prob.m);
  for (int s = 0; s < 256; ++s) {
    for (int k = 0; k < prob.d; ++k) {
      std::uniform_real_distribution<double> dist(prob.X.lo[k], prob.X.hi[k]);
      x[k] = dist(rng);
    }
    for (int k = 0; k < prob.m; ++k) {
      // corners dominate for control-affine dynamics
      u[k] = (rng() & 1) ? prob.U.hi[k] : prob.U.lo[k];
    }
    best = std::max(best, std::sqrt(sq_norm(prob.f(x, u))));
  }
  return best;
}

}  // namespace

StiffnessReport assemble_stiffness(const ControlProblem& prob, Direction dir,
                                   const BasisFamily& basis, const BasisFamily& tests,
                                   double delta, const StiffnessConfig& cfg) {
  const long p = basis.size();
  const long q = tests.size();
  StiffnessReport rep;

  bool analytic = cfg.method == StiffnessMethod::LqAnalytic;
  if (cfg.method == StiffnessMethod::Auto)
    analytic = prob.lq.has_value() &&
               basis.kind().tag == BasisKind::Tag::Quadratic &&
               tests.kind().tag == BasisKind::Tag::Quadratic;
  if (analytic && !prob.lq)
    throw std::invalid_argument("assemble_stiffness: analytic path needs the LQ instance");

  double band_radius = trop::pos_inf;
  if (cfg.banded) {
    const double f_sup = cfg.f_sup > 0 ? cfg.f_sup : estimate_f_sup(prob);
    band_radius = f_sup * delta + cfg.band_margin_factor *
                                      std::sqrt(std::abs(cfg.entry_floor) / basis.kind().c);
  }

  std::vector<double> entries(static_cast<std::size_t>(q) * p, trop::neg_inf);
  std::atomic<long> skipped{0}, fallback{0}, clippedc{0}, convergedc{0};

  if (analytic) {
    const double c = basis.kind().c;
    const RiccatiFlow flow = RiccatiFlow::over(-c, delta);
    std::vector<SepQuadratic> propagated(p);
    for (long i = 0; i < p; ++i)
      propagated[i] = flow.apply(SepQuadratic::bump(c, basis.center(i)));
    const double ct = tests.kind().c;
    parallel_for(q, [&](long jb, long je) {
      long n_skip = 0, n_ok = 0;
      for (long j = jb; j < je; ++j) {
        const Vec& zc = tests.center(j);
        for (long i = 0; i < p; ++i) {
          if (std::sqrt(sq_dist(zc, basis.center(i))) > band_radius) {
            ++n_skip;
            continue;
          }
          const SepQuadratic& g = propagated[i];
          double s = 0.0;
          const double A = g.a - ct;
          for (int k = 0; k < prob.d; ++k) {
            const double B = g.b[k] + 2.0 * ct * zc[k];
            const double E = g.e[k] - ct * zc[k] * zc[k];
            const double x = prob.X.clamp1(k, -B / (2.0 * A));
            s += A * x * x + B * x + E;
          }
          if (s >= cfg.entry_floor) {
            entries[j * p + i] = s;
            ++n_ok;
          } else {
            ++n_skip;
          }
        }
      }
      skipped += n_skip;
      convergedc += n_ok;
    });
  } else {
    parallel_for(q, [&](long jb, long je) {
      long n_skip = 0, n_conv = 0, n_clip = 0, n_fb = 0;
      for (long j = jb; j < je; ++j)
        for (long i = 0; i < p; ++i) {
          if (std::sqrt(sq_dist(tests.center(j), basis.center(i))) > band_radius) {
            ++n_skip;
            continue;
          }
          const PropagationEntry e =
              propagate_entry(prob, dir, tests, j, basis, i, delta, cfg.direct);
          if (e.value >= cfg.entry_floor)
            entries[j * p + i] = e.value;
          else
            ++n_skip;
          switch (e.status) {
            case PropagationStatus::Converged: ++n_conv; break;
            case PropagationStatus::Clipped: ++n_clip; break;
            case PropagationStatus::Fallback: ++n_fb; break;
          }
        }
      skipped += n_skip;
      convergedc += n_conv;
      clippedc += n_clip;
      fallback += n_fb;
    });
  }

  rep.n_skipped = skipped;
  rep.n_fallback = fallback;
  rep.n_clipped = clippedc;
  rep.n_converged = convergedc;
  TropicalMatrix K = TropicalMatrix::dense(q, p, std::move(entries));
  rep.K = (rep.n_skipped > q * p / 2) ? K.to_sparse() : std::move(K);
  return rep;
}

}  // namespace mpoc
