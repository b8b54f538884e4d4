#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "mpoc/geometry.hpp"
#include "mpoc/tropical.hpp"

namespace mpoc {

/// Concave bump shape: -c |x - x_i|_1 (cone) or -c |x - x_i|_2^2 (quadratic).
struct BasisKind {
  enum class Tag { Quadratic, LipschitzCone };
  Tag tag = Tag::Quadratic;
  double c = 10.0;

  static BasisKind quadratic(double c) { return {Tag::Quadratic, c}; }
  static BasisKind cone(double c) { return {Tag::LipschitzCone, c}; }
};

enum class Direction { Forward, Backward };

/// Finite family of bumps with centers on (possibly irregular) points of X.
class BasisFamily {
 public:
  BasisFamily() = default;
  BasisFamily(BasisKind kind, std::vector<Vec> centers, Box domain);

  static BasisFamily on_grid(BasisKind kind, const RegularGrid& grid);

  const BasisKind& kind() const { return kind_; }
  const Box& domain() const { return domain_; }
  long size() const { return static_cast<long>(centers_.size()); }
  const Vec& center(long i) const { return centers_.at(i); }
  const std::vector<Vec>& centers() const { return centers_; }

  /// Appends a center unless one already lies within dedup_tol (inf-norm).
  /// Returns true when added.
  bool add_center(const Vec& x, double dedup_tol);

  double eval(long i, const Vec& x) const;

  /// <w_i, w_i'> = max_{y in X} (w_i(y) + w_i'(y)), analytic per coordinate.
  double pairwise_sup(long i, long ip) const;

  /// Text dump: header "kind c d p", one center per line.
  void dump(std::ostream& os) const;
  static BasisFamily load(std::istream& is, Box domain);

 private:
  BasisKind kind_;
  std::vector<Vec> centers_;
  Box domain_;
};

/// Cross-family scalar product <z_j, w_i> over the shared domain, exact for
/// any kind combination via per-coordinate concave 1-d maximization.
double pairwise_sup(const BasisFamily& tests, long j, const BasisFamily& basis, long i);

/// Mass matrix (M_h)_{j,i} = <z_j, w_i>. Entries below `floor` are dropped to
/// -inf (sparse storage); otherwise dense.
TropicalMatrix assemble_mass(const BasisFamily& tests, const BasisFamily& basis,
                             double floor = -1e6);

/// Maximal coefficients with synthesized function <= phi on the sample grid:
/// lambda_i = min_y (phi(y) - w_i(y)).
TropicalVector best_fit_coeffs(const BasisFamily& family,
                               const std::function<double(const Vec&)>& phi,
                               const std::vector<Vec>& sample_grid);

/// Default best-fit sample grid: the family's center grid refined 2x.
std::vector<Vec> refined_sample_grid(const RegularGrid& grid);

/// One direction of the approximation: coefficients lambda^t per time step
/// over a shared family; v^{t,h}(x) = max_i (lambda^t_i + w_i(x)).
struct ValueApprox {
  Direction direction = Direction::Backward;
  double dt = 0.0;
  std::vector<TropicalVector> coeffs;  // index k <-> time k*dt
  BasisFamily family;

  long num_steps() const { return static_cast<long>(coeffs.size()) - 1; }
  double time(long k) const { return k * dt; }
};

/// Max-plus synthesis at time index k. Returns -inf (no throw) when every
/// coefficient is -inf.
double synthesize(const ValueApprox& va, long k, const Vec& x);

double synthesize(const BasisFamily& family, const TropicalVector& lambda, const Vec& x);

}  // namespace mpoc
