#include "mpoc/tropical.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

namespace mpoc {

TropicalMatrix TropicalMatrix::dense(long rows, long cols, std::vector<double> entries) {
  if (static_cast<long>(entries.size()) != rows * cols)
    throw std::invalid_argument("TropicalMatrix::dense: entry count mismatch");
  TropicalMatrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.dense_ = true;
  m.d_ = std::move(entries);
  return m;
}

TropicalMatrix TropicalMatrix::dense_filled(long rows, long cols, double fill) {
  TropicalMatrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.dense_ = true;
  m.d_.assign(static_cast<std::size_t>(rows) * cols, fill);
  return m;
}

TropicalMatrix TropicalMatrix::sparse(long rows, long cols,
                                      const std::vector<Triplet>& triplets) {
  TropicalMatrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.dense_ = false;
  std::vector<Triplet> tr;
  tr.reserve(triplets.size());
  for (const auto& t : triplets) {
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols)
      throw std::invalid_argument("TropicalMatrix::sparse: index out of range");
    if (!trop::is_neg_inf(t.value)) tr.push_back(t);
  }
  std::sort(tr.begin(), tr.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  m.row_ptr_.assign(rows + 1, 0);
  for (const auto& t : tr) ++m.row_ptr_[t.row + 1];
  for (long j = 0; j < rows; ++j) m.row_ptr_[j + 1] += m.row_ptr_[j];
  m.col_.reserve(tr.size());
  m.val_.reserve(tr.size());
  for (const auto& t : tr) {
    m.col_.push_back(t.col);
    m.val_.push_back(t.value);
  }
  return m;
}

long TropicalMatrix::nnz() const {
  if (!dense_) return static_cast<long>(val_.size());
  long n = 0;
  for (double v : d_)
    if (!trop::is_neg_inf(v)) ++n;
  return n;
}

double TropicalMatrix::at(long j, long i) const {
  if (j < 0 || j >= rows_ || i < 0 || i >= cols_)
    throw std::out_of_range("TropicalMatrix::at");
  if (dense_) return d_[j * cols_ + i];
  for (long k = row_ptr_[j]; k < row_ptr_[j + 1]; ++k)
    if (col_[k] == i) return val_[k];
  return trop::neg_inf;
}

void TropicalMatrix::set(long j, long i, double v) {
  if (!dense_) throw std::logic_error("TropicalMatrix::set: dense only");
  d_[j * cols_ + i] = v;
}

TropicalVector TropicalMatrix::matvec(const TropicalVector& x) const {
  if (static_cast<long>(x.size()) != cols_)
    throw std::invalid_argument("matvec: dimension mismatch");
  // the matrix acts as a sup-preserving map on the completed semiring, so the
  // lower convention (-inf)(+inf) = -inf applies entrywise
  TropicalVector y(rows_, trop::neg_inf);
  if (dense_) {
    for (long j = 0; j < rows_; ++j) {
      double m = trop::neg_inf;
      const double* row = d_.data() + j * cols_;
      for (long i = 0; i < cols_; ++i) {
        if (trop::is_neg_inf(row[i]) || trop::is_neg_inf(x[i])) continue;
        const double t = row[i] + x[i];
        if (t > m) m = t;
      }
      y[j] = m;
    }
    return y;
  }
  for (long j = 0; j < rows_; ++j) {
    double m = trop::neg_inf;
    for (long k = row_ptr_[j]; k < row_ptr_[j + 1]; ++k) {
      const double xi = x[col_[k]];
      if (trop::is_neg_inf(xi)) continue;
      const double t = val_[k] + xi;
      if (t > m) m = t;
    }
    y[j] = m;
  }
  return y;
}

void TropicalMatrix::build_transpose() const {
  col_ptr_.assign(cols_ + 1, 0);
  for (long c : col_) ++col_ptr_[c + 1];
  for (long i = 0; i < cols_; ++i) col_ptr_[i + 1] += col_ptr_[i];
  t_row_.resize(col_.size());
  t_val_.resize(col_.size());
  std::vector<long> fill(col_ptr_.begin(), col_ptr_.end() - 1);
  for (long j = 0; j < rows_; ++j)
    for (long k = row_ptr_[j]; k < row_ptr_[j + 1]; ++k) {
      const long pos = fill[col_[k]]++;
      t_row_[pos] = j;
      t_val_[pos] = val_[k];
    }
  has_csc_ = true;
}

TropicalVector TropicalMatrix::residuate(const TropicalVector& b) const {
  if (static_cast<long>(b.size()) != rows_)
    throw std::invalid_argument("residuate: dimension mismatch");
  TropicalVector lam(cols_, trop::pos_inf);
  if (dense_) {
    for (long j = 0; j < rows_; ++j) {
      const double bj = b[j];
      const double* row = d_.data() + j * cols_;
      for (long i = 0; i < cols_; ++i) {
        const double t = trop::rdiff(bj, row[i]);
        if (t < lam[i]) lam[i] = t;
      }
    }
    return lam;
  }
  if (!has_csc_) build_transpose();
  for (long i = 0; i < cols_; ++i) {
    double m = trop::pos_inf;
    for (long k = col_ptr_[i]; k < col_ptr_[i + 1]; ++k) {
      const double t = trop::rdiff(b[t_row_[k]], t_val_[k]);
      if (t < m) m = t;
    }
    lam[i] = m;
  }
  return lam;
}

TropicalVector TropicalMatrix::project(const TropicalVector& lambda) const {
  return residuate(matvec(lambda));
}

TropicalMatrix TropicalMatrix::to_dense() const {
  if (dense_) return *this;
  TropicalMatrix m = dense_filled(rows_, cols_);
  for (long j = 0; j < rows_; ++j)
    for (long k = row_ptr_[j]; k < row_ptr_[j + 1]; ++k)
      m.d_[j * cols_ + col_[k]] = val_[k];
  return m;
}

TropicalMatrix TropicalMatrix::to_sparse(double drop_below) const {
  std::vector<Triplet> tr;
  if (dense_) {
    for (long j = 0; j < rows_; ++j)
      for (long i = 0; i < cols_; ++i) {
        const double v = d_[j * cols_ + i];
        if (!trop::is_neg_inf(v) && v >= drop_below) tr.push_back({j, i, v});
      }
  } else {
    for (long j = 0; j < rows_; ++j)
      for (long k = row_ptr_[j]; k < row_ptr_[j + 1]; ++k)
        if (val_[k] >= drop_below) tr.push_back({j, col_[k], val_[k]});
  }
  return sparse(rows_, cols_, tr);
}

namespace {

void write_value(std::ostream& os, double v) {
  if (trop::is_neg_inf(v))
    os << "-inf";
  else if (trop::is_pos_inf(v))
    os << "+inf";
  else
    os << v;
}

double read_value(std::istream& is) {
  std::string tok;
  if (!(is >> tok)) throw std::runtime_error("tropical matrix load: truncated file");
  if (tok == "-inf") return trop::neg_inf;
  if (tok == "+inf" || tok == "inf") return trop::pos_inf;
  return std::stod(tok);
}

}  // namespace

void TropicalMatrix::dump(std::ostream& os) const {
  const TropicalMatrix* self = this;
  TropicalMatrix tmp;
  if (dense_) {
    tmp = to_sparse();
    self = &tmp;
  }
  os << self->rows_ << ' ' << self->cols_ << ' ' << self->nnz() << '\n';
  os.precision(17);
  for (long j = 0; j < self->rows_; ++j)
    for (long k = self->row_ptr_[j]; k < self->row_ptr_[j + 1]; ++k) {
      os << j << ' ' << self->col_[k] << ' ';
      write_value(os, self->val_[k]);
      os << '\n';
    }
}

TropicalMatrix TropicalMatrix::load(std::istream& is) {
  long rows, cols, nnz;
  if (!(is >> rows >> cols >> nnz))
    throw std::runtime_error("tropical matrix load: bad header");
  std::vector<Triplet> tr;
  tr.reserve(nnz);
  for (long k = 0; k < nnz; ++k) {
    long j, i;
    if (!(is >> j >> i)) throw std::runtime_error("tropical matrix load: truncated file");
    tr.push_back({j, i, read_value(is)});
  }
  return sparse(rows, cols, tr);
}

TropicalMatrix tropical_identity(long n) {
  std::vector<TropicalMatrix::Triplet> tr;
  tr.reserve(n);
  for (long i = 0; i < n; ++i) tr.push_back({i, i, 0.0});
  return TropicalMatrix::sparse(n, n, tr);
}

}  // namespace mpoc
