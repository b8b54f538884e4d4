#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace mpoc {

using Vec = std::vector<double>;

inline double sq_norm(const Vec& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

inline double one_norm(const Vec& x) {
  double s = 0.0;
  for (double v : x) s += std::abs(v);
  return s;
}

inline double sq_dist(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return s;
}

inline double one_dist(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += std::abs(a[k] - b[k]);
  return s;
}

/// Axis-aligned box [lo_1,hi_1] x ... x [lo_d,hi_d].
struct Box {
  Vec lo;
  Vec hi;

  Box() = default;
  Box(Vec lo_, Vec hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
    if (lo.size() != hi.size()) throw std::invalid_argument("Box: lo/hi size mismatch");
    for (std::size_t k = 0; k < lo.size(); ++k)
      if (lo[k] > hi[k]) throw std::invalid_argument("Box: empty interval");
  }

  static Box cube(int d, double a, double b) { return Box(Vec(d, a), Vec(d, b)); }

  int dim() const { return static_cast<int>(lo.size()); }

  bool contains(const Vec& x, double tol = 0.0) const {
    for (std::size_t k = 0; k < lo.size(); ++k)
      if (x[k] < lo[k] - tol || x[k] > hi[k] + tol) return false;
    return true;
  }

  double clamp1(int k, double v) const {
    if (v < lo[k]) return lo[k];
    if (v > hi[k]) return hi[k];
    return v;
  }

  Vec clamp(Vec x) const {
    for (std::size_t k = 0; k < x.size(); ++k) x[k] = clamp1(static_cast<int>(k), x[k]);
    return x;
  }

  /// Half the diameter in the 2-norm.
  double radius() const {
    double s = 0.0;
    for (std::size_t k = 0; k < lo.size(); ++k) {
      const double h = 0.5 * (hi[k] - lo[k]);
      s += h * h;
    }
    return std::sqrt(s);
  }
};

/// Regular grid over a box: per-axis points lo_k + j*step, including both ends
/// (the last point is hi_k when step divides the side length).
class RegularGrid {
 public:
  RegularGrid() = default;
  RegularGrid(Box box, double step) : box_(std::move(box)), step_(step) {
    if (step <= 0) throw std::invalid_argument("RegularGrid: step must be positive");
    counts_.resize(box_.dim());
    size_ = 1;
    for (int k = 0; k < box_.dim(); ++k) {
      const double len = box_.hi[k] - box_.lo[k];
      counts_[k] = static_cast<long>(std::floor(len / step + 1e-9)) + 1;
      size_ *= counts_[k];
    }
  }

  const Box& box() const { return box_; }
  double step() const { return step_; }
  long size() const { return size_; }
  const std::vector<long>& counts() const { return counts_; }

  Vec point(long flat) const {
    Vec x(box_.dim());
    for (int k = box_.dim() - 1; k >= 0; --k) {
      const long j = flat % counts_[k];
      flat /= counts_[k];
      x[k] = box_.lo[k] + j * step_;
    }
    return x;
  }

  long flatten(const std::vector<long>& idx) const {
    long f = 0;
    for (int k = 0; k < box_.dim(); ++k) f = f * counts_[k] + idx[k];
    return f;
  }

  /// Nearest grid index along axis k for coordinate v, clamped to range.
  long axis_index(int k, double v) const {
    long j = std::lround((v - box_.lo[k]) / step_);
    if (j < 0) j = 0;
    if (j >= counts_[k]) j = counts_[k] - 1;
    return j;
  }

  /// Nearest grid point to x (flat index).
  long nearest(const Vec& x) const {
    std::vector<long> idx(box_.dim());
    for (int k = 0; k < box_.dim(); ++k) idx[k] = axis_index(k, x[k]);
    return flatten(idx);
  }

  std::vector<Vec> all_points() const {
    std::vector<Vec> pts;
    pts.reserve(size_);
    for (long f = 0; f < size_; ++f) pts.push_back(point(f));
    return pts;
  }

 private:
  Box box_;
  double step_ = 1.0;
  std::vector<long> counts_;
  long size_ = 0;
};

}  // namespace mpoc
