#pragma once

// Dense matrices over exact scalars or polynomials in t, with fraction-free
// elimination.

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hyperpf/algebra/exact.hpp"
#include "hyperpf/algebra/unipoly.hpp"

namespace hyperpf {

template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill = T(0)) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<T>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw std::invalid_argument("ragged matrix literal");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<T> row(std::size_t i) const {
    return std::vector<T>(data_.begin() + static_cast<long>(i * cols_), data_.begin() + static_cast<long>((i + 1) * cols_));
  }
  void set_row(std::size_t i, const std::vector<T>& r) {
    if (r.size() != cols_) throw std::invalid_argument("row length mismatch");
    for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = r[j];
  }
  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }

  Matrix transpose() const {
    Matrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) {
    check_same(a, b);
    for (std::size_t k = 0; k < a.data_.size(); ++k) a.data_[k] += b.data_[k];
    return a;
  }
  friend Matrix operator-(Matrix a, const Matrix& b) {
    check_same(a, b);
    for (std::size_t k = 0; k < a.data_.size(); ++k) a.data_[k] -= b.data_[k];
    return a;
  }
  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product dimension mismatch");
    Matrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (hyperpf::is_zero(a(i, k))) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += a(i, k) * b(k, j);
      }
    return out;
  }
  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  static void check_same(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("matrix dimension mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using ExactMatrix = Matrix<Exact>;
using PolyMatrix = Matrix<ExactPoly>;

inline Exact exact_div(const Exact& a, const Exact& b) { return a / b; }
inline ExactPoly exact_div(const ExactPoly& a, const ExactPoly& b) { return a.exact_quotient(b); }

/// Result of fraction-free forward elimination.
template <class T>
struct EliminationProfile {
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_rows;  // original row indices, in pivot order
  std::vector<std::size_t> pivot_cols;
  T last_pivot = T(1);  // signed determinant of the leading rank x rank minor (up to sign of the permutation)
  int sign = 1;
};

/// Bareiss elimination with row pivoting. Every intermediate entry is a
/// minor of the input, so the divisions are exact over a polynomial ring.
template <class T>
EliminationProfile<T> bareiss_profile(Matrix<T> m) {
  EliminationProfile<T> prof;
  std::vector<std::size_t> order(m.rows());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  T prev(1);
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && hyperpf::is_zero(m(p, c))) ++p;
    if (p == m.rows()) continue;
    if (p != r) {
      m.swap_rows(p, r);
      std::swap(order[p], order[r]);
      prof.sign = -prof.sign;
    }
    for (std::size_t i = r + 1; i < m.rows(); ++i) {
      for (std::size_t j = c + 1; j < m.cols(); ++j) {
        T v = m(i, j) * m(r, c) - m(i, c) * m(r, j);
        m(i, j) = exact_div(v, prev);
      }
      m(i, c) = T(0);
    }
    prev = m(r, c);
    prof.pivot_rows.push_back(order[r]);
    prof.pivot_cols.push_back(c);
    ++r;
  }
  prof.rank = r;
  prof.last_pivot = prev;
  return prof;
}

/// Exact determinant by fraction-free (Bareiss) elimination.
template <class T>
T fraction_free_det(const Matrix<T>& m) {
  if (!m.square()) throw std::invalid_argument("determinant of a non-square matrix");
  if (m.rows() == 0) return T(1);
  auto prof = bareiss_profile(m);
  if (prof.rank < m.rows()) return T(0);
  return prof.sign < 0 ? T(-prof.last_pivot) : prof.last_pivot;
}

template <class T>
std::size_t exact_rank(const Matrix<T>& m) {
  return bareiss_profile(m).rank;
}

/// tE - A as a polynomial matrix in t.
inline PolyMatrix characteristic_matrix(const ExactMatrix& a) {
  if (!a.square()) throw std::invalid_argument("characteristic matrix of a non-square matrix");
  PolyMatrix m(a.rows(), a.cols(), ExactPoly());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      ExactPoly e = ExactPoly::constant(-a(i, j));
      if (i == j) e += ExactPoly::variable();
      m(i, j) = e;
    }
  return m;
}

/// det(tE - A) and Adj(tE - A) by the Faddeev-LeVerrier recursion.
struct AdjugateResult {
  ExactPoly charpoly;
  PolyMatrix adjugate;
};

inline AdjugateResult faddeev_leverrier(const ExactMatrix& a) {
  if (!a.square()) throw std::invalid_argument("adjugate of a non-square matrix");
  const std::size_t n = a.rows();
  std::vector<Exact> c(n + 1, Exact(0));
  c[n] = Exact(1);
  std::vector<ExactMatrix> mk;  // M_1 .. M_n
  ExactMatrix prev(n, n);
  for (std::size_t k = 1; k <= n; ++k) {
    ExactMatrix cur = a * prev;
    for (std::size_t i = 0; i < n; ++i) cur(i, i) += c[n - k + 1];
    const ExactMatrix am = a * cur;
    Exact tr(0);
    for (std::size_t i = 0; i < n; ++i) tr += am(i, i);
    c[n - k] = -tr / Exact(static_cast<long>(k));
    mk.push_back(cur);
    prev = cur;
  }
  PolyMatrix adj(n, n, ExactPoly());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<Exact> coeffs(n, Exact(0));
      for (std::size_t k = 1; k <= n; ++k) coeffs[n - k] = mk[k - 1](i, j);
      adj(i, j) = ExactPoly(std::move(coeffs));
    }
  return {ExactPoly(std::move(c)), std::move(adj)};
}

inline PolyMatrix to_poly_matrix(const ExactMatrix& a) {
  PolyMatrix m(a.rows(), a.cols(), ExactPoly());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = ExactPoly::constant(a(i, j));
  return m;
}

inline int max_degree(const PolyMatrix& m) {
  int d = -1;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) d = std::max(d, m(i, j).degree());
  return d;
}

/// Reduced row echelon form over the exact field; returns pivot columns.
inline std::vector<std::size_t> rref(ExactMatrix& m) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && m(p, c).is_zero()) ++p;
    if (p == m.rows()) continue;
    m.swap_rows(p, r);
    const Exact inv = Exact(1) / m(r, c);
    for (std::size_t j = c; j < m.cols(); ++j) m(r, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c).is_zero()) continue;
      const Exact f = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

/// Basis of the right kernel {v : M v = 0}, one vector per free column.
inline std::vector<std::vector<Exact>> kernel_basis(ExactMatrix m) {
  const auto pivots = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<std::vector<Exact>> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    std::vector<Exact> v(m.cols(), Exact(0));
    v[f] = Exact(1);
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m(r, f);
    basis.push_back(std::move(v));
  }
  return basis;
}

inline ExactMatrix inverse(const ExactMatrix& a) {
  if (!a.square()) throw std::invalid_argument("inverse of a non-square matrix");
  const std::size_t n = a.rows();
  ExactMatrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n + i) = Exact(1);
  }
  const auto pivots = rref(aug);
  if (pivots.size() < n || pivots[n - 1] != n - 1) throw std::domain_error("singular matrix");
  ExactMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
  return inv;
}

/// Row vector times matrix.
template <class T>
std::vector<T> row_times(const std::vector<T>& v, const Matrix<T>& m) {
  if (v.size() != m.rows()) throw std::invalid_argument("row-vector product dimension mismatch");
  std::vector<T> out(m.cols(), T(0));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (hyperpf::is_zero(v[i])) continue;
    for (std::size_t j = 0; j < m.cols(); ++j) out[j] += v[i] * m(i, j);
  }
  return out;
}

}  // namespace hyperpf
