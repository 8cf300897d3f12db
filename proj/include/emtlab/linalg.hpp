#pragma once

// Small dense matrices over double / complex<double>.  Everything here is
// sized by the spacetime dimension (m <= 8), spinor dimension (<= 16) or a
// Lie algebra dimension (<= 12), so O(n^3) loops with no blocking are fine.

#include <algorithm>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <vector>

#include "emtlab/error.hpp"

namespace emtlab {

using cplx = std::complex<double>;
using RVec = std::vector<double>;
using CVec = std::vector<cplx>;

template <class T>
struct Mat {
  int rows = 0, cols = 0;
  std::vector<T> a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, T(0)) {}
  Mat(int r, int c, std::initializer_list<T> init) : rows(r), cols(c), a(init) {}

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  T& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  const T& operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

  Mat operator+(const Mat& o) const {
    Mat r = *this;
    for (size_t i = 0; i < a.size(); ++i) r.a[i] += o.a[i];
    return r;
  }
  Mat operator-(const Mat& o) const {
    Mat r = *this;
    for (size_t i = 0; i < a.size(); ++i) r.a[i] -= o.a[i];
    return r;
  }
  Mat operator-() const {
    Mat r = *this;
    for (auto& v : r.a) v = -v;
    return r;
  }
  Mat operator*(const Mat& o) const {
    Mat r(rows, o.cols);
    for (int i = 0; i < rows; ++i)
      for (int k = 0; k < cols; ++k) {
        T aik = (*this)(i, k);
        if (aik == T(0)) continue;
        for (int j = 0; j < o.cols; ++j) r(i, j) += aik * o(k, j);
      }
    return r;
  }
  Mat operator*(T s) const {
    Mat r = *this;
    for (auto& v : r.a) v *= s;
    return r;
  }
  friend Mat operator*(T s, const Mat& m) { return m * s; }

  std::vector<T> operator*(const std::vector<T>& v) const {
    std::vector<T> r(rows, T(0));
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) r[i] += (*this)(i, j) * v[j];
    return r;
  }

  Mat transpose() const {
    Mat r(cols, rows);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) r(j, i) = (*this)(i, j);
    return r;
  }

  T trace() const {
    T s(0);
    for (int i = 0; i < std::min(rows, cols); ++i) s += (*this)(i, i);
    return s;
  }
};

using RMat = Mat<double>;
using CMat = Mat<cplx>;

inline CMat adjoint(const CMat& m) {
  CMat r(m.cols, m.rows);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) r(j, i) = std::conj(m(i, j));
  return r;
}

template <class T>
Mat<T> kron(const Mat<T>& x, const Mat<T>& y) {
  Mat<T> r(x.rows * y.rows, x.cols * y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int j = 0; j < x.cols; ++j)
      for (int k = 0; k < y.rows; ++k)
        for (int l = 0; l < y.cols; ++l) r(i * y.rows + k, j * y.cols + l) = x(i, j) * y(k, l);
  return r;
}

template <class T>
double norm_fro(const Mat<T>& m) {
  double s = 0;
  for (const auto& v : m.a) s += std::norm(v);
  return std::sqrt(s);
}
inline double norm_fro(const RMat& m) {
  double s = 0;
  for (double v : m.a) s += v * v;
  return std::sqrt(s);
}

template <class T>
double norm2(const std::vector<T>& v) {
  double s = 0;
  for (const auto& x : v) s += std::norm(x);
  return std::sqrt(s);
}
inline double norm2(const RVec& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

inline double dot(const RVec& x, const RVec& y) {
  double s = 0;
  for (size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

// Hermitian dot product, conjugate-linear in the first slot.
inline cplx hdot(const CVec& x, const CVec& y) {
  cplx s(0);
  for (size_t i = 0; i < x.size(); ++i) s += std::conj(x[i]) * y[i];
  return s;
}

template <class T>
std::vector<T> vadd(std::vector<T> x, const std::vector<T>& y) {
  for (size_t i = 0; i < x.size(); ++i) x[i] += y[i];
  return x;
}
template <class T>
std::vector<T> vsub(std::vector<T> x, const std::vector<T>& y) {
  for (size_t i = 0; i < x.size(); ++i) x[i] -= y[i];
  return x;
}
template <class T, class S>
std::vector<T> vscale(std::vector<T> x, S s) {
  for (auto& v : x) v *= s;
  return x;
}

// Gaussian elimination with partial pivoting; throws on (near-)singular input.
template <class T>
std::vector<T> solve(Mat<T> A, std::vector<T> b) {
  const int n = A.rows;
  for (int c = 0; c < n; ++c) {
    int p = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(A(r, c)) > std::abs(A(p, c))) p = r;
    if (std::abs(A(p, c)) < 1e-300) fail(ErrorKind::parameter, "solve: singular matrix");
    if (p != c) {
      for (int j = 0; j < n; ++j) std::swap(A(p, j), A(c, j));
      std::swap(b[p], b[c]);
    }
    for (int r = c + 1; r < n; ++r) {
      T f = A(r, c) / A(c, c);
      if (f == T(0)) continue;
      for (int j = c; j < n; ++j) A(r, j) -= f * A(c, j);
      b[r] -= f * b[c];
    }
  }
  std::vector<T> x(n);
  for (int r = n - 1; r >= 0; --r) {
    T s = b[r];
    for (int j = r + 1; j < n; ++j) s -= A(r, j) * x[j];
    x[r] = s / A(r, r);
  }
  return x;
}

template <class T>
Mat<T> inverse(const Mat<T>& A) {
  const int n = A.rows;
  Mat<T> inv(n, n);
  for (int c = 0; c < n; ++c) {
    std::vector<T> e(n, T(0));
    e[c] = T(1);
    auto col = solve(A, e);
    for (int r = 0; r < n; ++r) inv(r, c) = col[r];
  }
  return inv;
}

template <class T>
T det(Mat<T> A) {
  const int n = A.rows;
  T d(1);
  for (int c = 0; c < n; ++c) {
    int p = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(A(r, c)) > std::abs(A(p, c))) p = r;
    if (std::abs(A(p, c)) == 0.0) return T(0);
    if (p != c) {
      for (int j = 0; j < n; ++j) std::swap(A(p, j), A(c, j));
      d = -d;
    }
    d *= A(c, c);
    for (int r = c + 1; r < n; ++r) {
      T f = A(r, c) / A(c, c);
      for (int j = c; j < n; ++j) A(r, j) -= f * A(c, j);
    }
  }
  return d;
}

// Cholesky factor of a symmetric matrix; returns false if not positive definite.
inline bool cholesky(const RMat& A, RMat& L) {
  const int n = A.rows;
  L = RMat(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = A(i, j);
      for (int k = 0; k < j; ++k) s -= L(i, k) * L(j, k);
      if (i == j) {
        if (s <= 0) return false;
        L(i, i) = std::sqrt(s);
      } else {
        L(i, j) = s / L(j, j);
      }
    }
  }
  return true;
}

inline bool is_spd(const RMat& A, double sym_tol = 1e-10) {
  if (A.rows != A.cols) return false;
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < i; ++j)
      if (std::abs(A(i, j) - A(j, i)) > sym_tol) return false;
  RMat L;
  return cholesky(A, L);
}

struct EigSym {
  RVec values;  // ascending
  RMat vectors; // columns are eigenvectors
};

// Cyclic Jacobi for real symmetric matrices.
inline EigSym eigh(RMat A) {
  const int n = A.rows;
  RMat V = RMat::identity(n);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += A(i, j) * A(i, j);
    if (off < 1e-30) break;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(A(p, q)) < 1e-300) continue;
        double theta = (A(q, q) - A(p, p)) / (2 * A(p, q));
        double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
        double c = 1 / std::sqrt(t * t + 1), s = t * c;
        for (int k = 0; k < n; ++k) {
          double akp = A(k, p), akq = A(k, q);
          A(k, p) = c * akp - s * akq;
          A(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          double apk = A(p, k), aqk = A(q, k);
          A(p, k) = c * apk - s * aqk;
          A(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          double vkp = V(k, p), vkq = V(k, q);
          V(k, p) = c * vkp - s * vkq;
          V(k, q) = s * vkp + c * vkq;
        }
      }
  }
  EigSym e;
  e.values.resize(n);
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  RVec d(n);
  for (int i = 0; i < n; ++i) d[i] = A(i, i);
  std::sort(idx.begin(), idx.end(), [&](int i, int j) { return d[i] < d[j]; });
  e.vectors = RMat(n, n);
  for (int c = 0; c < n; ++c) {
    e.values[c] = d[idx[c]];
    for (int r = 0; r < n; ++r) e.vectors(r, c) = V(r, idx[c]);
  }
  return e;
}

// Orthonormal basis of the (numerical) null space of a complex matrix,
// via column-pivoted Gaussian elimination on A^dagger A.
inline std::vector<CVec> nullspace(const CMat& A, double tol = 1e-10) {
  const int n = A.cols;
  CMat G = adjoint(A) * A;
  // row echelon with full pivoting on the Hermitian Gram matrix
  CMat R = G;
  std::vector<int> pivot_cols;
  int row = 0;
  for (int c = 0; c < n && row < n; ++c) {
    int p = row;
    for (int r = row; r < n; ++r)
      if (std::abs(R(r, c)) > std::abs(R(p, c))) p = r;
    if (std::abs(R(p, c)) < tol) continue;
    for (int j = 0; j < n; ++j) std::swap(R(p, j), R(row, j));
    cplx piv = R(row, c);
    for (int j = 0; j < n; ++j) R(row, j) /= piv;
    for (int r = 0; r < n; ++r) {
      if (r == row) continue;
      cplx f = R(r, c);
      if (f == cplx(0)) continue;
      for (int j = 0; j < n; ++j) R(r, j) -= f * R(row, j);
    }
    pivot_cols.push_back(c);
    ++row;
  }
  std::vector<bool> is_pivot(n, false);
  for (int c : pivot_cols) is_pivot[c] = true;
  std::vector<CVec> basis;
  for (int c = 0; c < n; ++c) {
    if (is_pivot[c]) continue;
    CVec v(n, cplx(0));
    v[c] = 1;
    for (size_t r = 0; r < pivot_cols.size(); ++r) v[pivot_cols[r]] = -R(static_cast<int>(r), c);
    // Gram-Schmidt against previous basis vectors
    for (const auto& b : basis) {
      cplx proj = hdot(b, v);
      for (int i = 0; i < n; ++i) v[i] -= proj * b[i];
    }
    double nv = norm2(v);
    if (nv > tol) {
      for (auto& x : v) x /= nv;
      basis.push_back(v);
    }
  }
  return basis;
}

}  // namespace emtlab
