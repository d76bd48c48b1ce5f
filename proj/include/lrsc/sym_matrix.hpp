#pragma once

// Dense matrix containers used throughout: SymMatrix for square symmetric
// matrices stored full row-major (SIMD-friendly, no packing), Matrix for
// small rectangular factors (cluster bases), and CoordSet for coordinate
// masks over a matrix, stored one byte per coordinate so the masked
// kernels can consume it directly.

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace lrsc {

class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(int n) : n_(n), data_(static_cast<std::size_t>(n) * n, 0.0) {
    if (n < 0) throw std::invalid_argument("SymMatrix: negative order");
  }

  int order() const { return n_; }
  std::size_t size() const { return data_.size(); }

  double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * n_ + j]; }
  double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * n_ + j]; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  void fill(double v) { data_.assign(data_.size(), v); }

  // Largest |M_ij - M_ji|.
  double asymmetry() const {
    double m = 0.0;
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j) {
        double d = (*this)(i, j) - (*this)(j, i);
        if (d < 0) d = -d;
        if (d > m) m = d;
      }
    return m;
  }

  void symmetrize() {
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j) {
        double v = 0.5 * ((*this)(i, j) + (*this)(j, i));
        (*this)(i, j) = v;
        (*this)(j, i) = v;
      }
  }

  static SymMatrix identity(int n) {
    SymMatrix m(n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static SymMatrix ones(int n) {
    SymMatrix m(n);
    m.fill(1.0);
    return m;
  }

  friend bool operator==(const SymMatrix& a, const SymMatrix& b) {
    return a.n_ == b.n_ && a.data_ == b.data_;
  }

 private:
  int n_ = 0;
  std::vector<double> data_;
};

struct Matrix {
  int rows = 0, cols = 0;
  std::vector<double> d;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), d(static_cast<std::size_t>(r) * c, 0.0) {}

  double& operator()(int i, int j) { return d[static_cast<std::size_t>(i) * cols + j]; }
  double operator()(int i, int j) const { return d[static_cast<std::size_t>(i) * cols + j]; }
};

// Set of (row, col) coordinates of an r-by-c matrix; one byte per
// coordinate (0/1), row-major, so it can feed the masked kernels.
class CoordSet {
 public:
  CoordSet() = default;
  CoordSet(int rows, int cols)
      : rows_(rows), cols_(cols), bits_(static_cast<std::size_t>(rows) * cols, 0) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("CoordSet: negative shape");
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t size() const { return bits_.size(); }

  bool contains(int i, int j) const {
    return bits_[static_cast<std::size_t>(i) * cols_ + j] != 0;
  }
  void set(int i, int j, bool v = true) {
    bits_[static_cast<std::size_t>(i) * cols_ + j] = v ? 1 : 0;
  }

  const std::uint8_t* data() const { return bits_.data(); }
  std::uint8_t* data() { return bits_.data(); }

  long long count() const {
    long long c = 0;
    for (std::uint8_t b : bits_) c += (b != 0);
    return c;
  }

  CoordSet complemented() const {
    CoordSet r(rows_, cols_);
    for (std::size_t i = 0; i < bits_.size(); ++i) r.bits_[i] = bits_[i] ? 0 : 1;
    return r;
  }

  CoordSet intersect(const CoordSet& o) const {
    check_shape(o);
    CoordSet r(rows_, cols_);
    for (std::size_t i = 0; i < bits_.size(); ++i) r.bits_[i] = (bits_[i] && o.bits_[i]) ? 1 : 0;
    return r;
  }

  CoordSet unite(const CoordSet& o) const {
    check_shape(o);
    CoordSet r(rows_, cols_);
    for (std::size_t i = 0; i < bits_.size(); ++i) r.bits_[i] = (bits_[i] || o.bits_[i]) ? 1 : 0;
    return r;
  }

  bool symmetric() const {
    if (rows_ != cols_) return false;
    for (int i = 0; i < rows_; ++i)
      for (int j = i + 1; j < cols_; ++j)
        if (contains(i, j) != contains(j, i)) return false;
    return true;
  }

  friend bool operator==(const CoordSet& a, const CoordSet& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.bits_ == b.bits_;
  }

 private:
  void check_shape(const CoordSet& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw std::invalid_argument("CoordSet: shape mismatch");
  }

  int rows_ = 0, cols_ = 0;
  std::vector<std::uint8_t> bits_;
};

}  // namespace lrsc
