#pragma once

#include <iosfwd>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace mpoc {

// Scalars of the completed max-plus semiring R u {-inf,+inf}:
// oplus = max with -inf neutral, otimes = + with -inf absorbing.
// +inf only appears through residuation over empty constraint sets.
namespace trop {

inline constexpr double neg_inf = -std::numeric_limits<double>::infinity();
inline constexpr double pos_inf = std::numeric_limits<double>::infinity();

inline bool is_neg_inf(double a) { return a == neg_inf; }
inline bool is_pos_inf(double a) { return a == pos_inf; }

struct UndefinedProduct : std::runtime_error {
  UndefinedProduct() : std::runtime_error("tropical product (-inf) (+inf) is undefined") {}
};

inline double oplus(double a, double b) { return a > b ? a : b; }

inline double otimes(double a, double b) {
  if ((is_neg_inf(a) && is_pos_inf(b)) || (is_pos_inf(a) && is_neg_inf(b)))
    throw UndefinedProduct();
  if (is_neg_inf(a) || is_neg_inf(b)) return neg_inf;
  return a + b;
}

// Residuated difference: largest x with m + x <= b.
inline double rdiff(double b, double m) {
  if (is_neg_inf(m)) return pos_inf;   // no constraint
  if (is_pos_inf(b)) return pos_inf;
  if (is_pos_inf(m)) return neg_inf;
  if (is_neg_inf(b)) return neg_inf;
  return b - m;
}

}  // namespace trop

using TropicalVector = std::vector<double>;

inline bool leq(const TropicalVector& a, const TropicalVector& b, double tol = 0.0) {
  if (a.size() != b.size()) throw std::invalid_argument("leq: size mismatch");
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i] + tol) return false;
  return true;
}

inline bool all_neg_inf(const TropicalVector& a) {
  for (double v : a)
    if (!trop::is_neg_inf(v)) return false;
  return true;
}

/// Max entry with smallest-index tie breaking; returns {value, index}.
inline std::pair<double, std::size_t> arg_max(const TropicalVector& a) {
  if (a.empty()) throw std::invalid_argument("arg_max: empty vector");
  double best = a[0];
  std::size_t at = 0;
  for (std::size_t i = 1; i < a.size(); ++i)
    if (a[i] > best) { best = a[i]; at = i; }
  return {best, at};
}

inline TropicalVector shifted(TropicalVector a, double t) {
  for (double& v : a)
    if (!trop::is_neg_inf(v) && !trop::is_pos_inf(v)) v += t;
  return a;
}

/// Max-plus matrix, dense or row-sparse (CSR with a CSC mirror for
/// residuation). Sparse storage drops -inf entries; both representations
/// agree on products and residuations.
class TropicalMatrix {
 public:
  TropicalMatrix() = default;

  static TropicalMatrix dense(long rows, long cols, std::vector<double> entries);
  static TropicalMatrix dense_filled(long rows, long cols, double fill = trop::neg_inf);

  struct Triplet {
    long row;
    long col;
    double value;
  };
  static TropicalMatrix sparse(long rows, long cols, const std::vector<Triplet>& triplets);

  long rows() const { return rows_; }
  long cols() const { return cols_; }
  bool is_dense() const { return dense_; }
  long nnz() const;

  double at(long j, long i) const;
  /// Dense-only mutable access during assembly.
  void set(long j, long i, double v);

  /// y_j = max_i (M_ji + x_i).
  TropicalVector matvec(const TropicalVector& x) const;

  /// Largest lambda with matvec(lambda) <= b: lambda_i = min_j (b_j - M_ji).
  TropicalVector residuate(const TropicalVector& b) const;

  /// Coefficient-level projector M^# (M lambda); idempotent.
  TropicalVector project(const TropicalVector& lambda) const;

  TropicalMatrix to_dense() const;
  TropicalMatrix to_sparse(double drop_below = trop::neg_inf) const;

  /// Text format: header "rows cols nnz", then "row col value" triples with
  /// -inf / +inf literals.
  void dump(std::ostream& os) const;
  static TropicalMatrix load(std::istream& is);

 private:
  void build_transpose() const;

  long rows_ = 0;
  long cols_ = 0;
  bool dense_ = true;
  std::vector<double> d_;  // dense, row-major

  // CSR
  std::vector<long> row_ptr_;
  std::vector<long> col_;
  std::vector<double> val_;
  // CSC mirror, built on first residuation
  mutable bool has_csc_ = false;
  mutable std::vector<long> col_ptr_;
  mutable std::vector<long> t_row_;
  mutable std::vector<double> t_val_;
};

/// 2x2, 3x3, ... max-plus identity (0 on diagonal, -inf elsewhere).
TropicalMatrix tropical_identity(long n);

}  // namespace mpoc
