#pragma once

// Small dense complex matrices plus the few vector kernels the library
// needs. Row-major storage, value semantics throughout.

#include <complex>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace stbc {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(int rows, int cols)
      : rows_(rows), cols_(cols), data_(check_size(rows, cols)) {}

  static CMatrix identity(int n) {
    CMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool same_shape(const CMatrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

  cplx& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
  const cplx& operator()(int r, int c) const {
    return data_[static_cast<std::size_t>(r) * cols_ + c];
  }

  std::span<cplx> data() { return data_; }
  std::span<const cplx> data() const { return data_; }

  CMatrix& operator+=(const CMatrix& o) {
    require_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }

  // *this += alpha * o
  CMatrix& axpy(cplx alpha, const CMatrix& o) {
    require_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += alpha * o.data_[i];
    return *this;
  }

  CMatrix adjoint() const {
    CMatrix m(cols_, rows_);
    for (int r = 0; r < rows_; ++r)
      for (int c = 0; c < cols_; ++c) m(c, r) = std::conj((*this)(r, c));
    return m;
  }

  // Stack the columns top to bottom into one vector.
  CVec vec() const {
    CVec v(data_.size());
    std::size_t k = 0;
    for (int c = 0; c < cols_; ++c)
      for (int r = 0; r < rows_; ++r) v[k++] = (*this)(r, c);
    return v;
  }

  double fro_norm_sq() const {
    double s = 0.0;
    for (const cplx& z : data_) s += std::norm(z);
    return s;
  }

  double max_abs() const {
    double s = 0.0;
    for (const cplx& z : data_) s = std::max(s, std::abs(z));
    return s;
  }

  friend CMatrix operator*(const CMatrix& a, const CMatrix& b) {
    if (a.cols_ != b.rows_)
      throw std::invalid_argument("CMatrix multiply: inner dimensions " +
                                  std::to_string(a.cols_) + " and " + std::to_string(b.rows_) +
                                  " do not match");
    CMatrix m(a.rows_, b.cols_);
    for (int r = 0; r < a.rows_; ++r)
      for (int k = 0; k < a.cols_; ++k) {
        const cplx ark = a(r, k);
        for (int c = 0; c < b.cols_; ++c) m(r, c) += ark * b(k, c);
      }
    return m;
  }

  friend CMatrix operator*(cplx alpha, CMatrix m) {
    for (cplx& z : m.data_) z *= alpha;
    return m;
  }

  friend CMatrix operator+(CMatrix a, const CMatrix& b) {
    a += b;
    return a;
  }

  friend CMatrix operator-(CMatrix a, const CMatrix& b) {
    a.require_shape(b);
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] -= b.data_[i];
    return a;
  }

 private:
  static std::size_t check_size(int rows, int cols) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("CMatrix: negative dimension");
    return static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
  }

  void require_shape(const CMatrix& o) const {
    if (!same_shape(o)) throw std::invalid_argument("CMatrix: shape mismatch");
  }

  int rows_ = 0, cols_ = 0;
  std::vector<cplx> data_;
};

// Determinant by Gaussian elimination with partial pivoting.
inline cplx det(CMatrix m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("det: matrix is not square");
  const int n = m.rows();
  cplx d = 1.0;
  for (int c = 0; c < n; ++c) {
    int piv = c;
    double best = std::norm(m(c, c));
    for (int r = c + 1; r < n; ++r) {
      const double v = std::norm(m(r, c));
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best == 0.0) return 0.0;
    if (piv != c) {
      for (int k = c; k < n; ++k) std::swap(m(c, k), m(piv, k));
      d = -d;
    }
    d *= m(c, c);
    for (int r = c + 1; r < n; ++r) {
      const cplx f = m(r, c) / m(c, c);
      for (int k = c + 1; k < n; ++k) m(r, k) -= f * m(c, k);
    }
  }
  return d;
}

// conjugate(a) . b
inline cplx vdot(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.size() != b.size()) throw std::invalid_argument("vdot: length mismatch");
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

inline double vnorm_sq(std::span<const cplx> a) {
  double s = 0.0;
  for (const cplx& z : a) s += std::norm(z);
  return s;
}

inline double vnorm(std::span<const cplx> a) { return std::sqrt(vnorm_sq(a)); }

}  // namespace stbc
