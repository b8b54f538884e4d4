#include "mpoc/basis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "mpoc/util.hpp"

namespace mpoc {

BasisFamily::BasisFamily(BasisKind kind, std::vector<Vec> centers, Box domain)
    : kind_(kind), centers_(std::move(centers)), domain_(std::move(domain)) {
  if (kind_.c <= 0) throw std::invalid_argument("BasisFamily: stiffness c must be > 0");
  for (const auto& x : centers_) {
    if (static_cast<int>(x.size()) != domain_.dim())
      throw std::invalid_argument("BasisFamily: center dimension mismatch");
    if (!domain_.contains(x, 1e-12))
      throw std::invalid_argument("BasisFamily: center outside domain");
  }
  for (std::size_t i = 0; i < centers_.size(); ++i)
    for (std::size_t j = i + 1; j < centers_.size(); ++j) {
      double m = 0.0;
      for (std::size_t k = 0; k < centers_[i].size(); ++k)
        m = std::max(m, std::abs(centers_[i][k] - centers_[j][k]));
      if (m < 1e-12) throw std::invalid_argument("BasisFamily: duplicate centers");
    }
}

BasisFamily BasisFamily::on_grid(BasisKind kind, const RegularGrid& grid) {
  return BasisFamily(kind, grid.all_points(), grid.box());
}

bool BasisFamily::add_center(const Vec& x, double dedup_tol) {
  for (const auto& c : centers_) {
    double m = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k)
      m = std::max(m, std::abs(c[k] - x[k]));
    if (m <= dedup_tol) return false;
  }
  centers_.push_back(domain_.clamp(x));
  return true;
}

double BasisFamily::eval(long i, const Vec& x) const {
  const Vec& c = centers_.at(i);
  if (kind_.tag == BasisKind::Tag::Quadratic) return -kind_.c * sq_dist(x, c);
  return -kind_.c * one_dist(x, c);
}

namespace {

double bump1(BasisKind::Tag tag, double c, double center, double y) {
  const double d = y - center;
  return tag == BasisKind::Tag::Quadratic ? -c * d * d : -c * std::abs(d);
}

// max over [lo,hi] of bump(a) + bump(b); both terms concave in y, so the
// clamped candidate set (centers, branch optima, box ends) contains the max.
double sup_1d(BasisKind::Tag ta, double ca, double a, BasisKind::Tag tb, double cb,
              double b, double lo, double hi) {
  double cand[6];
  int n = 0;
  cand[n++] = a;
  cand[n++] = b;
  const bool qa = ta == BasisKind::Tag::Quadratic;
  const bool qb = tb == BasisKind::Tag::Quadratic;
  if (qa && qb) {
    cand[n++] = (ca * a + cb * b) / (ca + cb);
  } else if (!qa && qb) {
    cand[n++] = b - ca / (2 * cb);
    cand[n++] = b + ca / (2 * cb);
  } else if (qa && !qb) {
    cand[n++] = a - cb / (2 * ca);
    cand[n++] = a + cb / (2 * ca);
  }
  double best = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < n; ++k) {
    const double y = std::clamp(cand[k], lo, hi);
    best = std::max(best, bump1(ta, ca, a, y) + bump1(tb, cb, b, y));
  }
  return best;
}

double pairwise_sup_impl(BasisKind ka, const Vec& a, BasisKind kb, const Vec& b,
                         const Box& box) {
  double s = 0.0;
  for (int k = 0; k < box.dim(); ++k)
    s += sup_1d(ka.tag, ka.c, a[k], kb.tag, kb.c, b[k], box.lo[k], box.hi[k]);
  return s;
}

}  // namespace

double BasisFamily::pairwise_sup(long i, long ip) const {
  return pairwise_sup_impl(kind_, centers_.at(i), kind_, centers_.at(ip), domain_);
}

double pairwise_sup(const BasisFamily& tests, long j, const BasisFamily& basis, long i) {
  return pairwise_sup_impl(tests.kind(), tests.center(j), basis.kind(), basis.center(i),
                           tests.domain());
}

TropicalMatrix assemble_mass(const BasisFamily& tests, const BasisFamily& basis,
                             double floor) {
  const long q = tests.size();
  const long p = basis.size();
  std::vector<double> entries(static_cast<std::size_t>(q) * p);
  std::atomic<long> kept{0};
  parallel_for(q, [&](long jb, long je) {
    long n = 0;
    for (long j = jb; j < je; ++j)
      for (long i = 0; i < p; ++i) {
        const double v = pairwise_sup(tests, j, basis, i);
        const bool keep = v >= floor;
        entries[j * p + i] = keep ? v : trop::neg_inf;
        if (keep) ++n;
      }
    kept += n;
  });
  TropicalMatrix m = TropicalMatrix::dense(q, p, std::move(entries));
  if (kept < q * p / 2) return m.to_sparse();
  return m;
}

TropicalVector best_fit_coeffs(const BasisFamily& family,
                               const std::function<double(const Vec&)>& phi,
                               const std::vector<Vec>& sample_grid) {
  if (sample_grid.empty())
    throw std::invalid_argument("best_fit_coeffs: empty sample grid");
  std::vector<double> phi_vals(sample_grid.size());
  for (std::size_t s = 0; s < sample_grid.size(); ++s) phi_vals[s] = phi(sample_grid[s]);
  TropicalVector lam(family.size(), trop::pos_inf);
  parallel_for(family.size(), [&](long ib, long ie) {
    for (long i = ib; i < ie; ++i) {
      double m = trop::pos_inf;
      for (std::size_t s = 0; s < sample_grid.size(); ++s)
        m = std::min(m, phi_vals[s] - family.eval(i, sample_grid[s]));
      lam[i] = m;
    }
  });
  return lam;
}

std::vector<Vec> refined_sample_grid(const RegularGrid& grid) {
  return RegularGrid(grid.box(), grid.step() / 2).all_points();
}

double synthesize(const BasisFamily& family, const TropicalVector& lambda, const Vec& x) {
  if (static_cast<long>(lambda.size()) != family.size())
    throw std::invalid_argument("synthesize: coefficient count mismatch");
  double best = trop::neg_inf;
  for (long i = 0; i < family.size(); ++i) {
    if (trop::is_neg_inf(lambda[i])) continue;
    best = std::max(best, lambda[i] + family.eval(i, x));
  }
  return best;
}

double synthesize(const ValueApprox& va, long k, const Vec& x) {
  if (k < 0 || k >= static_cast<long>(va.coeffs.size()))
    throw std::out_of_range("synthesize: time index off the grid");
  return synthesize(va.family, va.coeffs[k], x);
}

void BasisFamily::dump(std::ostream& os) const {
  os << (kind_.tag == BasisKind::Tag::Quadratic ? "quadratic" : "lipschitz_cone") << ' '
     << kind_.c << ' ' << domain_.dim() << ' ' << size() << '\n';
  os.precision(17);
  for (const auto& c : centers_) {
    for (std::size_t k = 0; k < c.size(); ++k) os << (k ? " " : "") << c[k];
    os << '\n';
  }
}

BasisFamily BasisFamily::load(std::istream& is, Box domain) {
  std::string tag;
  double c;
  int d;
  long p;
  if (!(is >> tag >> c >> d >> p)) throw std::runtime_error("family load: bad header");
  BasisKind kind = tag == "quadratic" ? BasisKind::quadratic(c) : BasisKind::cone(c);
  if (tag != "quadratic" && tag != "lipschitz_cone")
    throw std::runtime_error("family load: unknown kind " + tag);
  std::vector<Vec> centers(p, Vec(d));
  for (long i = 0; i < p; ++i)
    for (int k = 0; k < d; ++k)
      if (!(is >> centers[i][k])) throw std::runtime_error("family load: truncated");
  return BasisFamily(kind, std::move(centers), std::move(domain));
}

}  // namespace mpoc
