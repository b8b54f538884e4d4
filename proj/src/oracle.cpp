#include "mpoc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mpoc {

SepQuadratic SepQuadratic::bump(double c, const Vec& z) {
  SepQuadratic q;
  q.a = -c;
  q.b.resize(z.size());
  q.e.resize(z.size());
  for (std::size_t k = 0; k < z.size(); ++k) {
    q.b[k] = 2.0 * c * z[k];
    q.e[k] = -c * z[k] * z[k];
  }
  return q;
}

namespace {

struct State {
  double a, beta, J;
};

State deriv(const State& s) {
  return {2.0 * s.a * s.a - 1.0, 2.0 * s.a * s.beta, s.beta * s.beta};
}

State axpy(const State& s, double h, const State& d) {
  return {s.a + h * d.a, s.beta + h * d.beta, s.J + h * d.J};
}

}  // namespace

RiccatiFlow RiccatiFlow::over(double a0, double tau, double ode_step) {
  if (tau < 0) throw std::invalid_argument("RiccatiFlow: negative horizon");
  State s{a0, 1.0, 0.0};
  double remaining = tau;
  while (remaining > 0) {
    const double h = std::min(ode_step, remaining);
    const State k1 = deriv(s);
    const State k2 = deriv(axpy(s, 0.5 * h, k1));
    const State k3 = deriv(axpy(s, 0.5 * h, k2));
    const State k4 = deriv(axpy(s, h, k3));
    s.a += h / 6.0 * (k1.a + 2 * k2.a + 2 * k3.a + k4.a);
    s.beta += h / 6.0 * (k1.beta + 2 * k2.beta + 2 * k3.beta + k4.beta);
    s.J += h / 6.0 * (k1.J + 2 * k2.J + 2 * k3.J + k4.J);
    if (s.a >= 0.7 || !std::isfinite(s.a))
      throw std::runtime_error("RiccatiFlow: coefficient blow-up");
    remaining -= h;
  }
  return {s.a, s.beta, s.J};
}

SepQuadratic RiccatiFlow::apply(const SepQuadratic& q) const {
  SepQuadratic out;
  out.a = a;
  out.b.resize(q.b.size());
  out.e.resize(q.e.size());
  for (std::size_t k = 0; k < q.b.size(); ++k) {
    out.b[k] = q.b[k] * beta;
    out.e[k] = q.e[k] + 0.5 * q.b[k] * q.b[k] * J;
  }
  return out;
}

double quad_max_over(const SepQuadratic& q, const Box& box) {
  if (q.a >= 0) throw std::invalid_argument("quad_max_over: needs concavity");
  double s = 0.0;
  for (int k = 0; k < box.dim(); ++k) {
    const double x = box.clamp1(k, -q.b[k] / (2.0 * q.a));
    s += q.a * x * x + q.b[k] * x + q.e[k];
  }
  return s;
}

Vec quad_argmax_over(const SepQuadratic& q, const Box& box) {
  if (q.a >= 0) throw std::invalid_argument("quad_argmax_over: needs concavity");
  Vec x(box.dim());
  for (int k = 0; k < box.dim(); ++k) x[k] = box.clamp1(k, -q.b[k] / (2.0 * q.a));
  return x;
}

RiccatiOracle::RiccatiOracle(const LQInstance& lq, double ode_step)
    : lq_(lq), X_(Box::cube(lq.d, -5.0, 5.0)), step_(ode_step) {
  const long n = static_cast<long>(std::llround(T_ / step_));
  auto fill = [&](Table& tbl, const SepQuadratic& start) {
    tbl.start = start;
    tbl.a.resize(n + 1);
    tbl.beta.resize(n + 1);
    tbl.J.resize(n + 1);
    State s{start.a, 1.0, 0.0};
    tbl.a[0] = s.a;
    tbl.beta[0] = s.beta;
    tbl.J[0] = s.J;
    for (long i = 0; i < n; ++i) {
      const double h = step_;
      const State k1 = deriv(s);
      const State k2 = deriv(axpy(s, 0.5 * h, k1));
      const State k3 = deriv(axpy(s, 0.5 * h, k2));
      const State k4 = deriv(axpy(s, h, k3));
      s.a += h / 6.0 * (k1.a + 2 * k2.a + 2 * k3.a + k4.a);
      s.beta += h / 6.0 * (k1.beta + 2 * k2.beta + 2 * k3.beta + k4.beta);
      s.J += h / 6.0 * (k1.J + 2 * k2.J + 2 * k3.J + k4.J);
      if (s.a >= 0.7 || !std::isfinite(s.a))
        throw std::runtime_error("RiccatiOracle: coefficient blow-up");
      tbl.a[i + 1] = s.a;
      tbl.beta[i + 1] = s.beta;
      tbl.J[i + 1] = s.J;
    }
  };
  fill(fwd_, SepQuadratic::bump(lq.c_phi0, lq.x0));
  fill(bwd_, SepQuadratic::bump(lq.c_phiT, lq.xT));
}

long RiccatiOracle::index(double s) const {
  if (s < -1e-9 || s > T_ + 1e-9)
    throw std::out_of_range("RiccatiOracle: time outside [0,T]");
  long i = static_cast<long>(std::llround(s / step_));
  i = std::clamp<long>(i, 0, static_cast<long>(fwd_.a.size()) - 1);
  return i;
}

SepQuadratic RiccatiOracle::quadratic(Direction dir, double t) const {
  const double s = dir == Direction::Forward ? t : T_ - t;
  const Table& tbl = table(dir);
  const long i = index(s);
  RiccatiFlow flow{tbl.a[i], tbl.beta[i], tbl.J[i]};
  return flow.apply(tbl.start);
}

double RiccatiOracle::value(Direction dir, double t, const Vec& x) const {
  return quadratic(dir, t).value(x);
}

Vec RiccatiOracle::trajectory(double t) const {
  const SepQuadratic qf = quadratic(Direction::Forward, t);
  const SepQuadratic qb = quadratic(Direction::Backward, t);
  SepQuadratic sum;
  sum.a = qf.a + qb.a;
  sum.b.resize(qf.b.size());
  sum.e.assign(qf.e.size(), 0.0);
  for (std::size_t k = 0; k < qf.b.size(); ++k) sum.b[k] = qf.b[k] + qb.b[k];
  return quad_argmax_over(sum, X_);
}

double RiccatiOracle::optimal_value(double t) const {
  const SepQuadratic qf = quadratic(Direction::Forward, t);
  const SepQuadratic qb = quadratic(Direction::Backward, t);
  SepQuadratic sum;
  sum.a = qf.a + qb.a;
  sum.b.resize(qf.b.size());
  sum.e.resize(qf.e.size());
  for (std::size_t k = 0; k < qf.b.size(); ++k) {
    sum.b[k] = qf.b[k] + qb.b[k];
    sum.e[k] = qf.e[k] + qb.e[k];
  }
  return quad_max_over(sum, X_);
}

namespace {

double interp(const RegularGrid& grid, const std::vector<double>& table, const Vec& x) {
  const Box& box = grid.box();
  const int d = box.dim();
  const double h = grid.step();
  std::vector<long> base(d);
  std::vector<double> frac(d);
  for (int i = 0; i < d; ++i) {
    double rel = (box.clamp1(i, x[i]) - box.lo[i]) / h;
    long j = static_cast<long>(std::floor(rel));
    j = std::clamp<long>(j, 0, grid.counts()[i] - 2 >= 0 ? grid.counts()[i] - 2 : 0);
    base[i] = j;
    frac[i] = std::clamp(rel - j, 0.0, 1.0);
  }
  const long corners = 1L << d;
  double acc = 0.0;
  std::vector<long> idx(d);
  for (long c = 0; c < corners; ++c) {
    double wgt = 1.0;
    for (int i = 0; i < d; ++i) {
      const bool hi = (c >> i) & 1;
      long j = base[i] + (hi ? 1 : 0);
      if (j >= grid.counts()[i]) j = grid.counts()[i] - 1;
      idx[i] = j;
      wgt *= hi ? frac[i] : 1.0 - frac[i];
    }
    if (wgt == 0.0) continue;
    acc += wgt * table[grid.flatten(idx)];
  }
  return acc;
}

}  // namespace

double SLGrid::value_at(long k, const Vec& x) const {
  return interp(grid, values.at(k), x);
}

SLGrid sl_solve(const ControlProblem& prob, Direction dir, const SLConfig& cfg) {
  if (prob.d > 3) throw std::invalid_argument("sl_solve: d <= 3 only");
  SLGrid out;
  out.direction = dir;
  out.grid = RegularGrid(prob.X, cfg.space_step);
  out.dt = cfg.time_step;
  const long N = static_cast<long>(std::llround(prob.T / cfg.time_step));
  const long n = out.grid.size();

  // Control sample grid.
  long uc = 1;
  for (int k = 0; k < prob.m; ++k) uc *= cfg.controls_per_dim;
  std::vector<Vec> controls;
  controls.reserve(uc);
  for (long f = 0; f < uc; ++f) {
    Vec u(prob.m);
    long r = f;
    for (int k = prob.m - 1; k >= 0; --k) {
      const long j = r % cfg.controls_per_dim;
      r /= cfg.controls_per_dim;
      u[k] = prob.U.lo[k] + j * (prob.U.hi[k] - prob.U.lo[k]) /
                                static_cast<double>(cfg.controls_per_dim - 1);
    }
    controls.push_back(std::move(u));
  }

  out.values.assign(N + 1, std::vector<double>(n));
  const auto& end_cost = prob.directional_end_cost(dir);
  const long start_slice = dir == Direction::Backward ? N : 0;
  for (long g = 0; g < n; ++g) out.values[start_slice][g] = end_cost(out.grid.point(g));

  // Backward: v^{t-dt}(x) = max_u { dt l(x,u) + I[v^t](x + dt f(x,u)) }.
  // Forward:  v^{t+dt}(x) = max_u { dt l(x,u) + I[v^t](x - dt f(x,u)) }.
  const int sweep = dir == Direction::Backward ? -1 : +1;
  for (long step = 0; step < N; ++step) {
    const long from = dir == Direction::Backward ? N - step : step;
    const long to = from + sweep;
    const std::vector<double>& prev = out.values[from];
    for (long g = 0; g < n; ++g) {
      const Vec x = out.grid.point(g);
      double best = -std::numeric_limits<double>::infinity();
      for (const Vec& u : controls) {
        const Vec fx = prob.f(x, u);
        Vec foot(prob.d);
        for (int k = 0; k < prob.d; ++k)
          foot[k] = x[k] - sweep * cfg.time_step * fx[k];
        foot = prob.X.clamp(foot);
        const double cand =
            cfg.time_step * prob.ell(x, u) + interp(out.grid, prev, foot);
        best = std::max(best, cand);
      }
      out.values[to][g] = best;
    }
  }
  return out;
}

}  // namespace mpoc
