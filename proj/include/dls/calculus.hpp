#pragma once

// Bregman distances with subgradient certificates, perspective function and
// gradient, conjugate-value certificates. f* is never evaluated analytically:
// every conjugate value flows through a certificate pair (mu1, w1) with
// mu1 = grad f(w1), for which f*(mu1) = <mu1, w1> - f(w1).

#include <cmath>
#include <stdexcept>

#include "dls/model.hpp"

namespace dls {

struct CertifiedDualPoint {
  Vec mu1;      // dual variable in E1
  Vec w1;       // certificate, w1 in subgradient of f* at mu1
  double fstar; // cached f*(mu1)
};

inline CertifiedDualPoint certify(const SmoothObjective& f, const Vec& w1) {
  CertifiedDualPoint c;
  c.w1 = w1;
  c.mu1 = f.grad(w1);
  c.fstar = dot(c.mu1, w1) - f.value(w1);
  return c;
}

// A dual point (mu1, mu2) together with the certificate (w1, mu2) for the
// reference function Xi = f* (+) 1/2 ||.||^2, whose subgradient at mu is
// subgradient(f*)(mu1) x {mu2}.
struct BregmanState {
  Vec mu1, mu2;
  Vec w1;
  double fstar;  // f*(mu1)
};

inline BregmanState bregman_state(const CertifiedDualPoint& c, const Vec& mu2) {
  return {c.mu1, mu2, c.w1, c.fstar};
}

// B_Xi(target, (base, w_base)) = f*(t1) - f*(b1) - <t1 - b1, w1_base>
//                                + 1/2 ||t2 - b2||^2.
inline double bregman_value(const Vec& target_mu1, double target_fstar, const Vec& target_mu2,
                            const BregmanState& base) {
  double v = target_fstar - base.fstar - dot(sub(target_mu1, base.mu1), base.w1);
  const Vec d2 = sub(target_mu2, base.mu2);
  v += 0.5 * dot(d2, d2);
  return v;
}

inline double bregman_value(const BregmanState& target, const BregmanState& base) {
  return bregman_value(target.mu1, target.fstar, target.mu2, base);
}

// s * f(x/s). Only the regime s >= 1 is reachable here (s = 1 - mass of a
// nonpositive measure), so smaller s is rejected outright.
inline double perspective_eval(const SmoothObjective& f, const Vec& x, double s) {
  if (s < 1.0) throw std::invalid_argument("perspective_eval: s must be >= 1");
  Vec y = scaled(x, 1.0 / s);
  return s * f.value(y);
}

// Gradient of (x, s) -> s f(x/s): (grad f(y), f(y) - <grad f(y), y>), y = x/s.
struct PerspectiveGrad {
  Vec dx;
  double ds;
};

inline PerspectiveGrad perspective_grad(const SmoothObjective& f, const Vec& x, double s) {
  if (s < 1.0) throw std::invalid_argument("perspective_grad: s must be >= 1");
  Vec y = scaled(x, 1.0 / s);
  Vec g = f.grad(y);
  const double ds = f.value(y) - dot(g, y);
  return {std::move(g), ds};
}

}  // namespace dls
