#pragma once

// Dense two-phase primal simplex for small LPs in standard form
//   min c^T x   s.t.  A x = b,  x >= 0.
// Bland's rule throughout (these LPs are tiny and often degenerate).
// Artificial columns are kept through phase 2 so the duals can be read off.

#include <stdexcept>
#include <vector>

#include "dls/detail/dense.hpp"

namespace dls {

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
  LpStatus status = LpStatus::optimal;
  Vec x;
  double objective = 0.0;
  Vec y;                    // duals of the equality rows (max b^T y convention)
  double infeasibility = 0.0;  // phase-1 objective when infeasible
  int iterations = 0;
};

class SimplexSolver {
 public:
  SimplexSolver(detail::Mat a, Vec b, Vec c) : m_(a.rows), n_(a.cols), c_(std::move(c)) {
    // rows are flipped so that rhs >= 0; remember signs for the duals
    row_sign_.assign(m_, 1.0);
    t_ = detail::Mat(m_, n_ + m_ + 1);
    for (int i = 0; i < m_; ++i) {
      double s = b[i] < 0.0 ? -1.0 : 1.0;
      row_sign_[i] = s;
      for (int j = 0; j < n_; ++j) t_.at(i, j) = s * a.at(i, j);
      t_.at(i, n_ + i) = 1.0;
      t_.at(i, n_ + m_) = s * b[i];
    }
    basis_.resize(m_);
    for (int i = 0; i < m_; ++i) basis_[i] = n_ + i;
    double scale = 1.0;
    for (double v : t_.a) scale = std::max(scale, std::abs(v));
    tol_ = 1e-11 * scale;
  }

  LpResult solve(double feas_tol = 1e-8, int max_iters = 0) {
    LpResult res;
    if (max_iters == 0) max_iters = 200 * (m_ + n_ + 10);

    // phase 1: minimize the sum of artificials
    Vec cost(n_ + m_, 0.0);
    for (int i = 0; i < m_; ++i) cost[n_ + i] = 1.0;
    res.iterations += run_phase(cost, /*allow_artificial=*/false, max_iters);
    const double p1 = objective_of(cost);
    res.infeasibility = p1;
    if (p1 > feas_tol * std::max(1.0, rhs_scale())) {
      res.status = LpStatus::infeasible;
      return res;
    }
    drive_out_artificials();

    // phase 2
    Vec cost2(n_ + m_, 0.0);
    for (int j = 0; j < n_; ++j) cost2[j] = c_[j];
    const int it2 = run_phase(cost2, false, max_iters);
    res.iterations += it2;
    if (it2 < 0) {
      res.status = LpStatus::unbounded;
      return res;
    }

    res.x.assign(n_, 0.0);
    for (int i = 0; i < m_; ++i)
      if (basis_[i] < n_) res.x[basis_[i]] = t_.at(i, n_ + m_);
    res.objective = objective_of(cost2);
    // y_i = cB B^{-1} e_i, read from the reduced cost of artificial column i
    res.y.assign(m_, 0.0);
    Vec red = reduced_costs(cost2);
    for (int i = 0; i < m_; ++i) res.y[i] = row_sign_[i] * (-red[n_ + i]);
    return res;
  }

 private:
  double rhs_scale() const {
    double s = 1.0;
    for (int i = 0; i < m_; ++i) s = std::max(s, std::abs(t_.at(i, n_ + m_)));
    return s;
  }

  Vec reduced_costs(const Vec& cost) const {
    Vec red = cost;
    for (int i = 0; i < m_; ++i) {
      const double cb = cost[basis_[i]];
      if (cb == 0.0) continue;
      for (int j = 0; j < n_ + m_; ++j) red[j] -= cb * t_.at(i, j);
    }
    return red;
  }

  double objective_of(const Vec& cost) const {
    double v = 0.0;
    for (int i = 0; i < m_; ++i) v += cost[basis_[i]] * t_.at(i, n_ + m_);
    return v;
  }

  // Returns iterations used, or -1 when unbounded.
  int run_phase(const Vec& cost, bool allow_artificial, int max_iters) {
    int iters = 0;
    while (iters < max_iters) {
      Vec red = reduced_costs(cost);
      int enter = -1;
      const int limit = allow_artificial ? n_ + m_ : n_;
      for (int j = 0; j < limit; ++j) {
        if (is_basic(j)) continue;
        if (red[j] < -tol_) {
          enter = j;  // Bland: smallest index
          break;
        }
      }
      if (enter < 0) return iters;
      int leave = -1;
      double best_ratio = 0.0;
      for (int i = 0; i < m_; ++i) {
        const double a = t_.at(i, enter);
        if (a > tol_) {
          const double ratio = t_.at(i, n_ + m_) / a;
          if (leave < 0 || ratio < best_ratio - 1e-15 ||
              (std::abs(ratio - best_ratio) <= 1e-15 && basis_[i] < basis_[leave]))
          {
            leave = i;
            best_ratio = ratio;
          }
        }
      }
      if (leave < 0) return -1;  // unbounded
      pivot(leave, enter);
      ++iters;
    }
    throw std::runtime_error("simplex: iteration cap reached");
  }

  bool is_basic(int j) const {
    for (int i = 0; i < m_; ++i)
      if (basis_[i] == j) return true;
    return false;
  }

  void pivot(int row, int col) {
    const double piv = t_.at(row, col);
    for (int j = 0; j <= n_ + m_; ++j) t_.at(row, j) /= piv;
    for (int i = 0; i < m_; ++i) {
      if (i == row) continue;
      const double f = t_.at(i, col);
      if (f == 0.0) continue;
      for (int j = 0; j <= n_ + m_; ++j) t_.at(i, j) -= f * t_.at(row, j);
    }
    basis_[row] = col;
  }

  void drive_out_artificials() {
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      int col = -1;
      for (int j = 0; j < n_; ++j)
        if (!is_basic(j) && std::abs(t_.at(i, j)) > 100 * tol_) {
          col = j;
          break;
        }
      if (col >= 0) pivot(i, col);
      // otherwise the row is redundant; the artificial stays basic at zero
    }
  }

  int m_, n_;
  Vec c_;
  detail::Mat t_;
  std::vector<int> basis_;
  std::vector<double> row_sign_;
  double tol_ = 1e-11;
};

inline LpResult solve_lp(const detail::Mat& a, const Vec& b, const Vec& c) {
  SimplexSolver s(a, b, c);
  return s.solve();
}

}  // namespace dls
