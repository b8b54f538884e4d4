#include "mpoc/adaptive.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_set>

#include "mpoc/util.hpp"

namespace mpoc {

void LevelSchedule::validate() const {
  if (meshes.empty()) throw std::invalid_argument("schedule: no meshes");
  for (std::size_t l = 1; l < meshes.size(); ++l)
    if (meshes[l] >= meshes[l - 1])
      throw std::invalid_argument("schedule: meshes must be strictly decreasing");
  if (static_cast<long>(etas.size()) < rounds())
    throw std::invalid_argument("schedule: need one eta per refinement round");
  for (double e : etas)
    if (e <= 0) throw std::invalid_argument("schedule: eta must be positive");
}

LevelSchedule LevelSchedule::geometric(double h_first, double h_final, long m,
                                       std::vector<double> etas) {
  if (m < 1) throw std::invalid_argument("geometric schedule: m >= 1");
  LevelSchedule s;
  s.etas = std::move(etas);
  const double ratio = h_final / h_first;
  for (long l = 0; l <= m; ++l)
    s.meshes.push_back(h_first * std::pow(ratio, static_cast<double>(l) / m));
  s.validate();
  return s;
}

PairScores pair_scores(const ValueApprox& va_fwd, const ValueApprox& va_bwd,
                       long time_index, const TropicalMatrix& basis_sups) {
  if (va_fwd.family.size() != va_bwd.family.size())
    throw std::invalid_argument("pair_scores: approximations must share the family");
  PairScores s;
  s.p = va_fwd.family.size();
  s.sups = &basis_sups;
  s.lambda_fwd = va_fwd.coeffs.at(time_index);
  s.lambda_bwd = va_bwd.coeffs.at(time_index);
  s.time_index = time_index;
  const TropicalVector y = basis_sups.matvec(s.lambda_fwd);
  s.best = trop::neg_inf;
  for (long ip = 0; ip < s.p; ++ip) {
    if (trop::is_neg_inf(s.lambda_bwd[ip]) || trop::is_neg_inf(y[ip])) continue;
    s.best = std::max(s.best, s.lambda_bwd[ip] + y[ip]);
  }
  return s;
}

PairSelection select_pairs(const PairScores& scores, double eta) {
  if (eta <= 0) throw std::invalid_argument("select_pairs: eta must be positive");
  PairSelection sel;
  sel.time_index = scores.time_index;
  sel.threshold = scores.best - eta;
  const TropicalVector row_best = scores.sups->matvec(scores.lambda_fwd);
  for (long ip = 0; ip < scores.p; ++ip) {
    if (trop::is_neg_inf(scores.lambda_bwd[ip]) || trop::is_neg_inf(row_best[ip]))
      continue;
    if (scores.lambda_bwd[ip] + row_best[ip] <= sel.threshold) continue;  // whole row
    for (long i = 0; i < scores.p; ++i) {
      const double sc = scores.score(i, ip);
      if (sc > sel.threshold) sel.pairs.emplace_back(i, ip);
    }
  }
  std::sort(sel.pairs.begin(), sel.pairs.end());
  return sel;
}

namespace {

// 1-d eta-sublevel interval of w_a + w_b around its box maximum; conservative
// per-coordinate bound of the d-dimensional sublevel set.
struct Interval {
  double lo, hi;
  bool empty;
};

Interval sublevel_1d(BasisKind kind, double a, double b, double box_lo, double box_hi,
                     double g_star, double eta) {
  if (kind.tag == BasisKind::Tag::Quadratic) {
    const double mid = 0.5 * (a + b);
    const double peak = -0.5 * kind.c * (a - b) * (a - b);  // unconstrained max
    const double r2 = (peak - g_star + eta) / (2.0 * kind.c);
    if (r2 < 0) return {0, 0, true};
    const double r = std::sqrt(r2);
    return {std::max(box_lo, mid - r), std::min(box_hi, mid + r), mid - r > box_hi || mid + r < box_lo};
  }
  // cone: |y-a| + |y-b| <= |a-b| + eta/c
  const double s = 0.5 * eta / kind.c;
  const double lo = std::min(a, b) - s;
  const double hi = std::max(a, b) + s;
  return {std::max(box_lo, lo), std::min(box_hi, hi), lo > box_hi || hi < box_lo};
}

}  // namespace

std::vector<long> active_points(const PairSelection& selection,
                                const RegularGrid& fine_grid,
                                const BasisFamily& family, double eta) {
  if (eta <= 0) throw std::invalid_argument("active_points: eta must be positive");
  const Box& box = fine_grid.box();
  const int d = box.dim();
  std::unordered_set<long> kept;
  std::vector<long> jlo(d), jhi(d), idx(d);
  for (const auto& [i, ip] : selection.pairs) {
    const double w_star = family.pairwise_sup(i, ip);
    const double tau = w_star - eta;
    const Vec& a = family.center(i);
    const Vec& b = family.center(ip);
    bool empty = false;
    for (int k = 0; k < d; ++k) {
      // per-coordinate box maximum of the pair sum
      const double g_star = [&] {
        BasisKind kind = family.kind();
        if (kind.tag == BasisKind::Tag::Quadratic) {
          const double mid = std::clamp(0.5 * (a[k] + b[k]), box.lo[k], box.hi[k]);
          const double da = mid - a[k], db = mid - b[k];
          return -kind.c * (da * da + db * db);
        }
        return -kind.c * std::abs(a[k] - b[k]);
      }();
      const Interval iv =
          sublevel_1d(family.kind(), a[k], b[k], box.lo[k], box.hi[k], g_star, eta);
      if (iv.empty) {
        empty = true;
        break;
      }
      jlo[k] = static_cast<long>(std::ceil((iv.lo - box.lo[k]) / fine_grid.step() - 1e-9));
      jhi[k] = static_cast<long>(std::floor((iv.hi - box.lo[k]) / fine_grid.step() + 1e-9));
      jlo[k] = std::max<long>(jlo[k], 0);
      jhi[k] = std::min<long>(jhi[k], fine_grid.counts()[k] - 1);
      if (jlo[k] > jhi[k]) {
        empty = true;
        break;
      }
    }
    if (empty) continue;
    // enumerate the index box, keep points passing the exact strict test
    idx = jlo;
    while (true) {
      Vec x(d);
      for (int k = 0; k < d; ++k) x[k] = box.lo[k] + idx[k] * fine_grid.step();
      if (family.eval(i, x) + family.eval(ip, x) > tau) kept.insert(fine_grid.flatten(idx));
      int k = d - 1;
      while (k >= 0 && idx[k] == jhi[k]) {
        idx[k] = jlo[k];
        --k;
      }
      if (k < 0) break;
      ++idx[k];
    }
  }
  if (kept.empty())
    throw std::runtime_error(
        "active_points: empty active set at time index " +
        std::to_string(selection.time_index) + " (threshold too small)");
  std::vector<long> out(kept.begin(), kept.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Vec> error_grid(const ControlProblem& prob, double step) {
  if (step <= 0) step = prob.d == 1 ? 0.05 : (prob.d == 2 ? 0.5 : 1.25);
  return RegularGrid(prob.X, step).all_points();
}

namespace {

double measured_error(const RiccatiOracle& oracle, const ValueApprox& fwd,
                      const ValueApprox& bwd, const std::vector<Vec>& points) {
  double err = 0.0;
  const long N = fwd.num_steps();
  for (long k = 0; k <= N; ++k) {
    const double t = fwd.time(k);
    std::vector<Vec> pts = points;
    pts.push_back(oracle.trajectory(t));
    for (const auto& x : pts) {
      err = std::max(err, std::abs(synthesize(fwd, k, x) -
                                   oracle.value(Direction::Forward, t, x)));
      err = std::max(err, std::abs(synthesize(bwd, k, x) -
                                   oracle.value(Direction::Backward, t, x)));
    }
  }
  return err;
}

}  // namespace

AdaptiveResult run_adaptive(const ControlProblem& prob, const LevelSchedule& schedule,
                            double delta, const AdaptiveConfig& cfg) {
  schedule.validate();
  const long m = schedule.rounds();
  AdaptiveResult res;

  std::optional<RiccatiOracle> oracle;
  if (prob.lq) {
    LQInstance lq(prob.d);
    lq.x0 = prob.lq->x0;
    lq.xT = prob.lq->xT;
    oracle.emplace(lq);
  }
  const std::vector<Vec> err_points = error_grid(prob, cfg.error_grid_step);

  // Cumulative family, seeded with the coarse regular grid.
  BasisFamily family =
      BasisFamily::on_grid(cfg.kind, RegularGrid(prob.X, schedule.meshes.front()));

  const double sample_step = schedule.meshes.back() / 2.0;
  const std::vector<Vec> sample_grid = RegularGrid(prob.X, sample_step).all_points();

  for (long level = 1; level <= m + 1; ++level) {
    const auto t0 = std::chrono::steady_clock::now();
    LevelReport rep;
    rep.level = level;
    rep.H = schedule.meshes[level - 1];
    rep.num_basis = family.size();

    const TropicalMatrix mass = assemble_mass(family, family, cfg.mass_floor);
    const TropicalMatrix kf =
        assemble_stiffness(prob, Direction::Forward, family, family, delta, cfg.stiffness).K;
    const TropicalMatrix kb =
        assemble_stiffness(prob, Direction::Backward, family, family, delta, cfg.stiffness).K;
    ValueApprox fwd =
        run_recursion(prob, Direction::Forward, family, mass, kf, delta, sample_grid);
    ValueApprox bwd =
        run_recursion(prob, Direction::Backward, family, mass, kb, delta, sample_grid);
    rep.vstar_estimate = optimal_value(fwd, bwd, 0, mass);
    if (oracle) rep.err_vs_oracle = measured_error(*oracle, fwd, bwd, err_points);

    if (level <= m) {
      double eta = 0.0;
      if (cfg.eta_mode == AdaptiveConfig::EtaMode::FromSchedule) {
        eta = schedule.etas[level - 1];
      } else {
        if (!oracle)
          throw std::invalid_argument("run_adaptive: error-scaled eta needs the LQ oracle");
        eta = cfg.eta_error_scale * rep.err_vs_oracle;
      }
      rep.eta = eta;

      const RegularGrid fine(prob.X, schedule.meshes[level]);
      const long N = fwd.num_steps();
      std::vector<std::vector<long>> per_t(N + 1);
      for (long k = 0; k <= N; ++k) {
        const PairScores scores = pair_scores(fwd, bwd, k, mass);
        const PairSelection sel = select_pairs(scores, eta);
        rep.num_pairs_max_t =
            std::max(rep.num_pairs_max_t, static_cast<long>(sel.pairs.size()));
        per_t[k] = active_points(sel, fine, family, eta);
      }
      const double dedup = cfg.dedup_factor * schedule.meshes[level];
      std::unordered_set<long> unioned;
      for (const auto& s : per_t) unioned.insert(s.begin(), s.end());
      std::vector<long> ordered(unioned.begin(), unioned.end());
      std::sort(ordered.begin(), ordered.end());
      for (long f : ordered) family.add_center(fine.point(f), dedup);
      res.fine_grids.push_back(fine);
      res.active_sets.push_back(std::move(per_t));
    }

    rep.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    res.levels.push_back(rep);
    res.fwd.push_back(std::move(fwd));
    res.bwd.push_back(std::move(bwd));
  }
  res.final_family = family;
  return res;
}

}  // namespace mpoc
