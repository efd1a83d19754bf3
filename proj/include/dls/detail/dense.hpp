#pragma once

// Small dense helpers shared by the LP/QP subsolvers: rectangular matrices,
// column-pivoted Householder QR with rank detection, least squares,
// null-space bases.

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "dls/linalg.hpp"

namespace dls::detail {

struct Mat {
  int rows = 0, cols = 0;
  Vec a;  // row-major
  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(std::size_t(r) * c, 0.0) {}
  double& at(int i, int j) { return a[std::size_t(i) * cols + j]; }
  double at(int i, int j) const { return a[std::size_t(i) * cols + j]; }
};

inline Vec matvec(const Mat& m, const Vec& x) {
  Vec y(m.rows, 0.0);
  for (int i = 0; i < m.rows; ++i) {
    double s = 0.0;
    for (int j = 0; j < m.cols; ++j) s += m.at(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

inline Vec matvec_t(const Mat& m, const Vec& x) {
  Vec y(m.cols, 0.0);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) y[j] += m.at(i, j) * x[i];
  return y;
}

inline Mat transpose(const Mat& m) {
  Mat t(m.cols, m.rows);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) t.at(j, i) = m.at(i, j);
  return t;
}

// Column-pivoted Householder QR:  A * P = Q * R  with |R(k,k)| nonincreasing,
// so the first tiny diagonal entry marks the numerical rank. Q is formed
// explicitly (m x m), which is fine at the sizes used here.
struct Qr {
  Mat q;               // m x m orthogonal
  Mat r;               // m x n upper trapezoidal
  std::vector<int> p;  // column permutation: column j of A*P is column p[j] of A
  int rank = 0;

  explicit Qr(const Mat& input, double rel_tol = 1e-12) : q(input.rows, input.rows), r(input) {
    const int m = input.rows, n = input.cols;
    p.resize(n);
    std::iota(p.begin(), p.end(), 0);
    for (int i = 0; i < m; ++i) q.at(i, i) = 1.0;

    Vec colnorm2(n, 0.0);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < m; ++i) colnorm2[j] += r.at(i, j) * r.at(i, j);

    const int steps = std::min(m, n);
    for (int k = 0; k < steps; ++k) {
      // pivot: bring the column with largest remaining norm to position k
      int piv = k;
      double best = -1.0;
      for (int j = k; j < n; ++j) {
        double s = 0.0;
        for (int i = k; i < m; ++i) s += r.at(i, j) * r.at(i, j);
        colnorm2[j] = s;
        if (s > best) {
          best = s;
          piv = j;
        }
      }
      if (piv != k) {
        for (int i = 0; i < m; ++i) std::swap(r.at(i, k), r.at(i, piv));
        std::swap(colnorm2[k], colnorm2[piv]);
        std::swap(p[k], p[piv]);
      }
      const double nx = std::sqrt(std::max(0.0, colnorm2[k]));
      if (nx == 0.0) break;
      const double alpha = (r.at(k, k) >= 0.0) ? -nx : nx;
      Vec v(m - k, 0.0);
      v[0] = r.at(k, k) - alpha;
      for (int i = k + 1; i < m; ++i) v[i - k] = r.at(i, k);
      double vn2 = 0.0;
      for (double t : v) vn2 += t * t;
      if (vn2 <= 0.0) continue;
      const double beta = 2.0 / vn2;
      for (int j = k; j < n; ++j) {
        double s = 0.0;
        for (int i = k; i < m; ++i) s += v[i - k] * r.at(i, j);
        s *= beta;
        for (int i = k; i < m; ++i) r.at(i, j) -= s * v[i - k];
      }
      for (int i = 0; i < m; ++i) {
        double s = 0.0;
        for (int l = k; l < m; ++l) s += q.at(i, l) * v[l - k];
        s *= beta;
        for (int l = k; l < m; ++l) q.at(i, l) -= s * v[l - k];
      }
      r.at(k, k) = alpha;
      for (int i = k + 1; i < m; ++i) r.at(i, k) = 0.0;
    }

    const double d0 = steps > 0 ? std::abs(r.at(0, 0)) : 0.0;
    const double thr = std::max(rel_tol * d0, 1e-300);
    rank = 0;
    for (int k = 0; k < steps; ++k) {
      if (std::abs(r.at(k, k)) > thr)
        ++rank;
      else
        break;
    }
  }
};

// Columns spanning null(E), where E is r x k. Returns k x (k - rank).
inline Mat null_space(const Mat& e, double rel_tol = 1e-12) {
  const Mat et = transpose(e);
  Qr qr(et, rel_tol);
  const int k = e.cols;
  Mat z(k, k - qr.rank);
  for (int j = qr.rank; j < k; ++j)
    for (int i = 0; i < k; ++i) z.at(i, j - qr.rank) = qr.q.at(i, j);
  return z;
}

// Least squares min ||A x - b||_2 via pivoted QR (basic solution).
inline Vec least_squares(const Mat& a, const Vec& b, double rel_tol = 1e-12) {
  Qr qr(a, rel_tol);
  Vec y(a.rows, 0.0);
  for (int j = 0; j < a.rows; ++j) {
    double s = 0.0;
    for (int i = 0; i < a.rows; ++i) s += qr.q.at(i, j) * b[i];
    y[j] = s;
  }
  Vec xp(a.cols, 0.0);
  for (int k = qr.rank - 1; k >= 0; --k) {
    double s = y[k];
    for (int j = k + 1; j < qr.rank; ++j) s -= qr.r.at(k, j) * xp[j];
    xp[k] = s / qr.r.at(k, k);
  }
  Vec x(a.cols, 0.0);
  for (int j = 0; j < qr.rank; ++j) x[qr.p[j]] = xp[j];
  return x;
}

// Minimum-norm solution of E x = b (E is r x k, possibly with dependent
// rows). Throws if the system is inconsistent beyond res_tol.
inline Vec min_norm_solve(const Mat& e, const Vec& b, double res_tol = 1e-8) {
  const Mat et = transpose(e);
  Qr qr(et);  // E^T P = Q R  =>  P^T E = R^T Q^T
  const int r = e.rows;
  Vec bp(r, 0.0);
  for (int i = 0; i < r; ++i) bp[i] = b[qr.p[i]];
  Vec w(r, 0.0);
  for (int k = 0; k < qr.rank; ++k) {
    double s = bp[k];
    for (int j = 0; j < k; ++j) s -= qr.r.at(j, k) * w[j];
    w[k] = s / qr.r.at(k, k);
  }
  double scale = norm_inf(b);
  for (int i = qr.rank; i < r; ++i) {
    double s = bp[i];
    for (int j = 0; j < qr.rank; ++j) s -= qr.r.at(j, i) * w[j];
    if (std::abs(s) > res_tol * std::max(1.0, scale))
      throw std::runtime_error("min_norm_solve: inconsistent system");
  }
  Vec x(e.cols, 0.0);
  for (int i = 0; i < e.cols; ++i) {
    double s = 0.0;
    for (int k = 0; k < qr.rank; ++k) s += qr.q.at(i, k) * w[k];
    x[i] = s;
  }
  return x;
}

}  // namespace dls::detail
