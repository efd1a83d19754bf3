#pragma once

// Small dense active-set quadratic programming, in two flavors:
//  - HullQp: min f(P theta) over the weight polytope {theta in simplex,
//    G theta = h}, for quadratic f given through cached H*p_j products.
//    Bounds theta >= 0 are handled implicitly, so the per-pivot cost stays
//    O(J * dim) even for large pools.
//  - solve_inequality_qp: min 1/2 x^T H x + g^T x s.t. C x <= d from a
//    feasible start (used for Euclidean polyhedral projections).
// Equality-constrained subproblems are solved by a null-space method with a
// Jacobi eigendecomposition, so singular reduced Hessians are handled by
// moving along zero-curvature descent directions until a bound blocks.

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "dls/detail/dense.hpp"

namespace dls {

namespace detail {

struct EqpStep {
  Vec d;        // step in the free variables
  bool ray = false;  // true when d is an unbounded descent direction
};

// min 1/2 d^T H d + g^T d  s.t.  E d = 0   (H symmetric, possibly singular)
inline EqpStep eqp_solve(const Mat& h, const Vec& g, const Mat& e, double tol = 1e-12) {
  const int k = int(g.size());
  EqpStep out{Vec(k, 0.0), false};
  Mat z = (e.rows > 0) ? null_space(e) : [&] {
    Mat id(k, k);
    for (int i = 0; i < k; ++i) id.at(i, i) = 1.0;
    return id;
  }();
  const int kz = z.cols;
  if (kz == 0) return out;

  Dense hz(kz);
  for (int i = 0; i < kz; ++i)
    for (int j = 0; j < kz; ++j) {
      double s = 0.0;
      for (int a = 0; a < k; ++a) {
        double ha = 0.0;
        for (int b = 0; b < k; ++b) ha += h.at(a, b) * z.at(b, j);
        s += z.at(a, i) * ha;
      }
      hz.at(i, j) = s;
    }
  Vec gz(kz, 0.0);
  for (int i = 0; i < kz; ++i)
    for (int a = 0; a < k; ++a) gz[i] += z.at(a, i) * g[a];

  const EigenSystem es = jacobi_eigensystem(hz);
  double lmax = 0.0;
  for (double v : es.values) lmax = std::max(lmax, std::abs(v));
  const double lthr = std::max(tol * lmax, 1e-300);
  double gscale = std::max(1.0, norm_inf(gz));

  Vec u(kz, 0.0);
  for (int i = 0; i < kz; ++i) {
    double a = 0.0;
    for (int j = 0; j < kz; ++j) a += es.vectors.at(j, i) * gz[j];
    if (es.values[i] > lthr) {
      const double ui = -a / es.values[i];
      for (int j = 0; j < kz; ++j) u[j] += ui * es.vectors.at(j, i);
    } else if (std::abs(a) > 1e-11 * gscale) {
      // zero-curvature descent direction
      out.ray = true;
      const double sgn = a > 0.0 ? -1.0 : 1.0;
      u.assign(kz, 0.0);
      for (int j = 0; j < kz; ++j) u[j] = sgn * es.vectors.at(j, i);
      break;
    }
  }
  for (int a = 0; a < k; ++a) {
    double s = 0.0;
    for (int j = 0; j < kz; ++j) s += z.at(a, j) * u[j];
    out.d[a] = s;
  }
  return out;
}

}  // namespace detail

struct HullQpProblem {
  const std::vector<Vec>* atoms = nullptr;  // pool atoms p_j
  const std::vector<Vec>* hp = nullptr;     // cached H_f * p_j per atom
  Vec c;                                    // <grad f(0), p_j>
  detail::Mat e;                            // equality rows [ones; G]
  Vec d;                                    // rhs [1; h]
};

struct HullQpResult {
  Vec theta;
  Vec duals;  // multipliers of the equality rows (grad q = E^T nu + lambda)
  int iterations = 0;
};

// Gradient of theta -> f(P theta) for quadratic f: c_j + <p_j, H x(theta)>.
inline Vec hull_qp_gradient(const HullQpProblem& qp, const Vec& theta) {
  const auto& atoms = *qp.atoms;
  const int j_count = int(atoms.size());
  const int n = int(atoms.empty() ? 0 : atoms[0].size());
  Vec hx(n, 0.0);
  for (int j = 0; j < j_count; ++j)
    if (theta[j] != 0.0) axpy(theta[j], (*qp.hp)[j], hx);
  Vec g = qp.c;
  for (int j = 0; j < j_count; ++j) g[j] += dot(atoms[j], hx);
  return g;
}

// Primal active-set over the bounds theta >= 0; the equality rows stay in
// every working set. `theta` must be feasible on entry and serves as the
// warm start (the free set is its support).
inline HullQpResult solve_hull_qp(const HullQpProblem& qp, Vec theta, double tol_opt = 1e-11) {
  const auto& atoms = *qp.atoms;
  const int j_count = int(atoms.size());
  const int r = qp.e.rows;

  std::vector<bool> active(j_count, false);
  for (int j = 0; j < j_count; ++j) active[j] = theta[j] <= 0.0;

  HullQpResult out;
  const int cap = 200 + 40 * j_count;
  for (int iter = 0; iter < cap; ++iter) {
    out.iterations = iter + 1;
    Vec g = hull_qp_gradient(qp, theta);
    std::vector<int> free_idx;
    for (int j = 0; j < j_count; ++j)
      if (!active[j]) free_idx.push_back(j);
    const int k = int(free_idx.size());

    detail::Mat hff(k, k);
    for (int a = 0; a < k; ++a)
      for (int b = a; b < k; ++b) {
        const double v = dot(atoms[free_idx[a]], (*qp.hp)[free_idx[b]]);
        hff.at(a, b) = v;
        hff.at(b, a) = v;
      }
    Vec gf(k);
    for (int a = 0; a < k; ++a) gf[a] = g[free_idx[a]];
    detail::Mat ef(r, k);
    for (int i = 0; i < r; ++i)
      for (int a = 0; a < k; ++a) ef.at(i, a) = qp.e.at(i, free_idx[a]);

    detail::EqpStep step = detail::eqp_solve(hff, gf, ef);
    const double dnorm = norm_inf(step.d);
    const double gscale = 1.0 + norm_inf(g);

    if (!step.ray && dnorm <= tol_opt * gscale) {
      // multipliers: nu from min ||E_F^T nu - g_F||, lambda = g - E^T nu on actives
      detail::Mat eft(k, r);
      for (int i = 0; i < r; ++i)
        for (int a = 0; a < k; ++a) eft.at(a, i) = ef.at(i, a);
      Vec nu = k > 0 ? detail::least_squares(eft, gf) : Vec(r, 0.0);
      int worst = -1;
      double worst_val = -tol_opt * gscale;
      for (int j = 0; j < j_count; ++j) {
        if (!active[j]) continue;
        double lambda = g[j];
        for (int i = 0; i < r; ++i) lambda -= qp.e.at(i, j) * nu[i];
        if (lambda < worst_val) {
          worst_val = lambda;
          worst = j;
          break;  // smallest index among violators
        }
      }
      if (worst < 0) {
        out.theta = std::move(theta);
        out.duals = std::move(nu);
        return out;
      }
      active[worst] = false;
      continue;
    }

    // ratio test against the bounds of the free variables
    double alpha = step.ray ? kInf : 1.0;
    int blocker = -1;
    for (int a = 0; a < k; ++a) {
      if (step.d[a] < -1e-15) {
        const double ratio = -theta[free_idx[a]] / step.d[a];
        if (ratio < alpha - 1e-15) {
          alpha = ratio;
          blocker = free_idx[a];
        }
      }
    }
    if (step.ray && blocker < 0)
      throw std::runtime_error("hull qp: unbounded direction on a bounded polytope");
    if (alpha > 0.0) {
      for (int a = 0; a < k; ++a) theta[free_idx[a]] += alpha * step.d[a];
    }
    if (blocker >= 0) {
      theta[blocker] = 0.0;
      active[blocker] = true;
    }
  }
  throw std::runtime_error("hull qp: pivot cap reached");
}

struct InequalityQpResult {
  Vec x;
  Vec duals;  // multipliers of C x <= d (nonnegative at optimum)
  int iterations = 0;
};

// min 1/2 x^T H x + g^T x  s.t.  C x <= d, from a feasible start.
inline InequalityQpResult solve_inequality_qp(const Dense& h, const Vec& g,
                                              const detail::Mat& c, const Vec& d, Vec x,
                                              double tol_opt = 1e-11) {
  const int n = int(x.size());
  const int m = c.rows;
  double cscale = 1.0;
  for (double v : c.a) cscale = std::max(cscale, std::abs(v));

  std::vector<bool> active(m, false);
  {
    const Vec cx = detail::matvec(c, x);
    for (int i = 0; i < m; ++i) active[i] = cx[i] >= d[i] - 1e-10 * std::max(1.0, std::abs(d[i]));
  }

  InequalityQpResult out;
  const int cap = 200 + 40 * m;
  for (int iter = 0; iter < cap; ++iter) {
    out.iterations = iter + 1;
    Vec grad(n, 0.0);
    for (int i = 0; i < n; ++i) {
      double s = g[i];
      for (int j = 0; j < n; ++j) s += h.at(i, j) * x[j];
      grad[i] = s;
    }
    std::vector<int> w;
    for (int i = 0; i < m; ++i)
      if (active[i]) w.push_back(i);

    detail::Mat cw(int(w.size()), n);
    for (std::size_t a = 0; a < w.size(); ++a)
      for (int j = 0; j < n; ++j) cw.at(int(a), j) = c.at(w[a], j);

    detail::Mat hd(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) hd.at(i, j) = h.at(i, j);

    detail::EqpStep step = detail::eqp_solve(hd, grad, cw);
    const double gscale = 1.0 + norm_inf(grad);

    if (!step.ray && norm_inf(step.d) <= tol_opt * gscale) {
      Vec rhs(n);
      for (int i = 0; i < n; ++i) rhs[i] = -grad[i];
      detail::Mat cwt(n, int(w.size()));
      for (std::size_t a = 0; a < w.size(); ++a)
        for (int j = 0; j < n; ++j) cwt.at(j, int(a)) = cw.at(int(a), j);
      Vec nu = w.empty() ? Vec{} : detail::least_squares(cwt, rhs);
      int worst = -1;
      for (std::size_t a = 0; a < w.size(); ++a)
        if (nu[a] < -tol_opt * gscale) {
          worst = int(a);
          break;
        }
      if (worst < 0) {
        out.x = std::move(x);
        out.duals.assign(m, 0.0);
        for (std::size_t a = 0; a < w.size(); ++a) out.duals[w[a]] = nu[a];
        return out;
      }
      active[w[worst]] = false;
      continue;
    }

    const Vec cd = detail::matvec(c, step.d);
    const Vec cx = detail::matvec(c, x);
    double alpha = step.ray ? kInf : 1.0;
    int blocker = -1;
    for (int i = 0; i < m; ++i) {
      if (active[i]) continue;
      if (cd[i] > 1e-13 * cscale) {
        const double ratio = (d[i] - cx[i]) / cd[i];
        if (ratio < alpha - 1e-15) {
          alpha = ratio;
          blocker = i;
        }
      }
    }
    if (step.ray && blocker < 0)
      throw std::runtime_error("inequality qp: unbounded descent direction");
    alpha = std::max(alpha, 0.0);
    axpy(alpha, step.d, x);
    if (blocker >= 0) active[blocker] = true;
  }
  throw std::runtime_error("inequality qp: pivot cap reached");
}

}  // namespace dls
