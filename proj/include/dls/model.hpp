#pragma once

// Problem abstraction: smooth objective, linear operator, support term,
// feasible set with LMO, dual initialization, slack augmentation.

#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>

#include "dls/linalg.hpp"

namespace dls {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Structure hint used by the hull subsolver to pick a specialized routine.
enum class Curvature { linear, quadratic, general };

struct SmoothObjective {
  int dim = 0;
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> grad;
  double beta = 1.0;  // Lipschitz constant of the gradient
  Curvature curvature = Curvature::general;
};

struct LinearMap {
  int n1 = 0, n2 = 0;
  std::function<Vec(const Vec&)> apply;    // E1 -> E2
  std::function<Vec(const Vec&)> adjoint;  // E2 -> E1
};

// Shape of the cone part of Q, as seen through dom(sigma_Q) = polar(Q2).
//   equality: dom sigma_Q = {0} and sigma_Q1 = 0  (constraints A x = b)
//   free:     sigma_Q identically zero            (no coupling term)
//   general:  arbitrary proj_dom / sigma_q1 pair
enum class ConeKind { equality, free_term, general };

// The term sigma_Q(.) with Q = Q1 + Q2 (Q1 bounded, Q2 a cone), supplied as
// sigma_Q(z) = sigma_Q1(z) + indicator(z in polar(Q2)), plus the Euclidean
// projection onto Q itself (used by the dual updates).
struct SupportTerm {
  std::function<Vec(const Vec&)> proj_Q;      // projection onto Q
  std::function<double(const Vec&)> sigma_q1; // finite part (support of Q1)
  std::function<Vec(const Vec&)> proj_dom;    // projection onto polar(Q2)
  std::function<Vec(const Vec&)> sigma_q1_grad;  // optional subgradient of sigma_q1
  double bound_q1 = 0.0;                      // radius of Q1
  Vec b;                                      // shift in E2
  double eps_cone = 1e-9;
  ConeKind kind = ConeKind::general;

  double violation(const Vec& z) const { return dist2(z, proj_dom(z)); }

  double support(const Vec& z) const {
    if (violation(z) > eps_cone) return kInf;
    return sigma_q1(z);
  }
};

struct FeasibleSet {
  std::function<Vec(const Vec&)> lmo;  // argmin over K of <mu, v>
  std::vector<Vec> initial_atoms;      // the compact set K^{-1}
};

struct DualInit {
  Vec mu1, mu2, w1;
};

struct ProblemInstance {
  SmoothObjective f;
  LinearMap A;
  SupportTerm q;
  FeasibleSet k;
  DualInit dual_init;
  std::optional<double> reference_value;  // V, when known analytically
};

// mu1 = grad f(seed), w1 = seed, mu2 = proj_Q(0). The pair (mu1, w1) is a
// conjugate certificate: w1 in subgradient of f* at mu1.
inline DualInit default_dual_init(const SmoothObjective& f, const SupportTerm& q,
                                  const Vec& seed_point) {
  DualInit d;
  d.mu1 = f.grad(seed_point);
  d.w1 = seed_point;
  d.mu2 = q.proj_Q(Vec(q.b.size(), 0.0));
  return d;
}

// f(x) + sigma_Q(Ax - b); +inf when cone-infeasible beyond eps_cone.
inline double evaluate_primal(const ProblemInstance& inst, const Vec& x) {
  Vec z = inst.A.apply(x);
  axpy(-1.0, inst.q.b, z);
  const double s = inst.q.support(z);
  if (s == kInf) return kInf;
  return inst.f.value(x) + s;
}

// Augmentation through a slack variable: the problem
//   min f_a(x) + sigma_Q(A_a x - b) + h(x)
// becomes an instance on E1 x R with f(x, s) = f_a(x) + s and K = epi h.
// h_oracle(mu) must return argmin <mu, v> + h(v); h is bounded by m_bound
// on the initial set.
inline ProblemInstance augment_with_slack(const SmoothObjective& f_a, const LinearMap& a_map,
                                          const SupportTerm& q,
                                          std::function<Vec(const Vec&)> h_oracle,
                                          std::function<double(const Vec&)> h_eval,
                                          const std::vector<Vec>& k_a_init, double m_bound) {
  ProblemInstance inst;
  const int n = f_a.dim;

  inst.f.dim = n + 1;
  inst.f.beta = f_a.beta;
  inst.f.curvature = f_a.curvature == Curvature::general ? Curvature::general : f_a.curvature;
  inst.f.value = [f_a](const Vec& x) {
    Vec xa(x.begin(), x.end() - 1);
    return f_a.value(xa) + x.back();
  };
  inst.f.grad = [f_a](const Vec& x) {
    Vec xa(x.begin(), x.end() - 1);
    Vec g = f_a.grad(xa);
    g.push_back(1.0);
    return g;
  };

  inst.A.n1 = n + 1;
  inst.A.n2 = a_map.n2;
  inst.A.apply = [a_map](const Vec& x) {
    Vec xa(x.begin(), x.end() - 1);
    return a_map.apply(xa);
  };
  inst.A.adjoint = [a_map](const Vec& y) {
    Vec g = a_map.adjoint(y);
    g.push_back(0.0);
    return g;
  };

  inst.q = q;

  inst.k.lmo = [h_oracle, h_eval](const Vec& mu) {
    // f*(mu_a, mu_b) = f_a*(mu_a) + indicator{mu_b = 1}: queries with a slack
    // coordinate away from 1 are outside dom f* and cannot occur in a valid run.
    if (std::abs(mu.back() - 1.0) > 1e-8)
      throw std::invalid_argument("augmented LMO: slack coordinate of mu must equal 1");
    Vec mu_a(mu.begin(), mu.end() - 1);
    Vec v = h_oracle(mu_a);
    v.push_back(h_eval(v));
    return v;
  };
  for (const Vec& p : k_a_init) {
    Vec atom = p;
    atom.push_back(m_bound);
    inst.k.initial_atoms.push_back(std::move(atom));
  }

  inst.dual_init = default_dual_init(inst.f, inst.q, inst.k.initial_atoms.at(0));
  return inst;
}

// ---- sampled consistency checks (used by tests and instance builders) ----

struct CheckReport {
  double max_adjoint_err = 0.0;
  double max_grad_err = 0.0;
  double max_lmo_err = 0.0;
  double max_proj_err = 0.0;
  double max_lipschitz_excess = 0.0;
};

inline Vec central_difference_grad(const std::function<double(const Vec&)>& f, const Vec& x,
                                   double h = 1e-6) {
  Vec g(x.size());
  Vec xp = x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double step = h * std::max(1.0, std::abs(x[i]));
    xp[i] = x[i] + step;
    const double fp = f(xp);
    xp[i] = x[i] - step;
    const double fm = f(xp);
    xp[i] = x[i];
    g[i] = (fp - fm) / (2.0 * step);
  }
  return g;
}

inline CheckReport check_instance(const ProblemInstance& inst, Prng& prng, int samples = 50,
                                  double span = 2.0) {
  CheckReport rep;
  const int n1 = inst.A.n1, n2 = inst.A.n2;
  for (int s = 0; s < samples; ++s) {
    Vec x = scaled(random_vec(prng, n1), span);
    Vec y = scaled(random_vec(prng, n2), span);
    // adjoint consistency <Ax, y> = <x, A^T y>
    const double lhs = dot(inst.A.apply(x), y);
    const double rhs = dot(x, inst.A.adjoint(y));
    const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
    rep.max_adjoint_err = std::max(rep.max_adjoint_err, std::abs(lhs - rhs) / scale);
    // gradient vs central differences
    const Vec g = inst.f.grad(x);
    const Vec gfd = central_difference_grad(inst.f.value, x);
    const double gs = std::max(1.0, norm2(g));
    rep.max_grad_err = std::max(rep.max_grad_err, dist2(g, gfd) / gs);
    // gradient Lipschitz bound on a sampled pair
    Vec x2 = scaled(random_vec(prng, n1), span);
    const double lip = dist2(inst.f.grad(x), inst.f.grad(x2));
    rep.max_lipschitz_excess =
        std::max(rep.max_lipschitz_excess, lip - inst.f.beta * dist2(x, x2));
    // LMO optimality against the stored atoms
    const Vec mu = scaled(random_vec(prng, n1), span);
    const Vec v = inst.k.lmo(mu);
    const double best = dot(mu, v);
    for (const Vec& p : inst.k.initial_atoms)
      rep.max_lmo_err = std::max(rep.max_lmo_err, best - dot(mu, p));
    // projection idempotency
    const Vec pz = inst.q.proj_Q(y);
    rep.max_proj_err = std::max(rep.max_proj_err, dist2(pz, inst.q.proj_Q(pz)));
  }
  return rep;
}

}  // namespace dls
