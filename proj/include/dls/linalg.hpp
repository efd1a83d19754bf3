#pragma once

// Minimal dense real linear algebra: vectors, packed symmetric matrices,
// Jacobi eigensolver, seeded counter-based randomness.

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace dls {

using Vec = std::vector<double>;

inline double dot(const Vec& x, const Vec& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

inline double norm2(const Vec& x) { return std::sqrt(dot(x, x)); }

inline double norm_inf(const Vec& x) {
  double s = 0.0;
  for (double v : x) s = std::max(s, std::abs(v));
  return s;
}

// y += a*x
inline void axpy(double a, const Vec& x, Vec& y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

inline Vec scaled(const Vec& x, double a) {
  Vec r(x);
  for (double& v : r) v *= a;
  return r;
}

inline Vec add(const Vec& x, const Vec& y) {
  Vec r(x);
  axpy(1.0, y, r);
  return r;
}

inline Vec sub(const Vec& x, const Vec& y) {
  Vec r(x);
  axpy(-1.0, y, r);
  return r;
}

inline double dist2(const Vec& x, const Vec& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    s += d * d;
  }
  return std::sqrt(s);
}

inline bool all_finite(const Vec& x) {
  for (double v : x)
    if (!std::isfinite(v)) return false;
  return true;
}

// Symmetric matrix packed as the upper triangle in column-major order,
// (0,0),(0,1),(1,1),(0,2),...  Off-diagonal entries carry a sqrt(2) factor
// so that <M,N>_F equals the plain dot product of the packed vectors.
struct SymMat {
  int n = 0;
  Vec packed;  // length n*(n+1)/2

  SymMat() = default;
  explicit SymMat(int dim) : n(dim), packed(std::size_t(dim) * (dim + 1) / 2, 0.0) {}

  static std::size_t packed_size(int n) { return std::size_t(n) * (n + 1) / 2; }
  static std::size_t index(int i, int j) {  // requires i <= j
    return std::size_t(j) * (j + 1) / 2 + i;
  }

  double entry(int i, int j) const {
    if (i > j) std::swap(i, j);
    const double v = packed[index(i, j)];
    return i == j ? v : v / std::sqrt(2.0);
  }

  void set_entry(int i, int j, double v) {
    if (i > j) std::swap(i, j);
    packed[index(i, j)] = (i == j) ? v : v * std::sqrt(2.0);
  }
};

// Dense row-major square matrix, used only as a scratch format.
struct Dense {
  int n = 0;
  Vec a;  // n*n row-major
  explicit Dense(int dim) : n(dim), a(std::size_t(dim) * dim, 0.0) {}
  double& at(int i, int j) { return a[std::size_t(i) * n + j]; }
  double at(int i, int j) const { return a[std::size_t(i) * n + j]; }
};

inline double frobenius_norm(const Dense& m) {
  double s = 0.0;
  for (double v : m.a) s += v * v;
  return std::sqrt(s);
}

// Packs a dense symmetric matrix. Rejects inputs whose asymmetry exceeds tol.
inline SymMat svec(const Dense& m, double sym_tol = 1e-10) {
  double scale = 0.0;
  for (double v : m.a) scale = std::max(scale, std::abs(v));
  SymMat s(m.n);
  for (int j = 0; j < m.n; ++j) {
    for (int i = 0; i <= j; ++i) {
      if (std::abs(m.at(i, j) - m.at(j, i)) > sym_tol * std::max(1.0, scale))
        throw std::invalid_argument("svec: matrix is not symmetric within tolerance");
      const double v = 0.5 * (m.at(i, j) + m.at(j, i));
      s.packed[SymMat::index(i, j)] = (i == j) ? v : v * std::sqrt(2.0);
    }
  }
  return s;
}

inline Dense smat(const SymMat& s) {
  Dense m(s.n);
  for (int j = 0; j < s.n; ++j)
    for (int i = 0; i <= j; ++i) {
      const double v = s.entry(i, j);
      m.at(i, j) = v;
      m.at(j, i) = v;
    }
  return m;
}

inline double frobenius_inner(const Dense& a, const Dense& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.a.size(); ++i) s += a.a[i] * b.a[i];
  return s;
}

struct EigenError : std::runtime_error {
  double residual;
  EigenError(const std::string& what, double res) : std::runtime_error(what), residual(res) {}
};

// Full symmetric eigendecomposition by cyclic Jacobi sweeps. Returns
// eigenvalues (unsorted) and the matrix of eigenvectors as columns of V.
struct EigenSystem {
  Vec values;
  Dense vectors;
};

inline EigenSystem jacobi_eigensystem(Dense a, int max_sweeps = 50) {
  const int n = a.n;
  Dense v(n);
  for (int i = 0; i < n; ++i) v.at(i, i) = 1.0;
  if (n == 1) return {Vec{a.at(0, 0)}, v};

  const double norm = frobenius_norm(a);
  const double tol = 1e-15 * std::max(1.0, norm);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += a.at(p, q) * a.at(p, q);
    if (std::sqrt(2.0 * off) <= tol) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a.at(p, q);
        if (std::abs(apq) <= 0.0) continue;
        const double app = a.at(p, p);
        const double aqq = a.at(q, q);
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a.at(k, p);
          const double akq = a.at(k, q);
          a.at(k, p) = c * akp - s * akq;
          a.at(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a.at(p, k);
          const double aqk = a.at(q, k);
          a.at(p, k) = c * apk - s * aqk;
          a.at(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = v.at(k, p);
          const double vkq = v.at(k, q);
          v.at(k, p) = c * vkp - s * vkq;
          v.at(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  Vec values(n);
  for (int i = 0; i < n; ++i) values[i] = a.at(i, i);
  return {std::move(values), std::move(v)};
}

struct EigPair {
  double value;
  Vec vector;
};

// Smallest eigenpair of a packed symmetric matrix (dense Jacobi, n <= 512).
inline EigPair min_eigpair(const SymMat& m, double tol = 1e-12) {
  if (m.n > 512) throw std::invalid_argument("min_eigpair: dimension exceeds dense limit");
  if (!(tol > 0.0)) throw std::invalid_argument("min_eigpair: tol must be positive");
  const Dense d = smat(m);
  const EigenSystem es = jacobi_eigensystem(d);
  int best = 0;
  for (int i = 1; i < m.n; ++i)
    if (es.values[i] < es.values[best]) best = i;
  Vec vec(m.n);
  for (int i = 0; i < m.n; ++i) vec[i] = es.vectors.at(i, best);
  const double nv = norm2(vec);
  for (double& x : vec) x /= nv;

  Vec mv(m.n, 0.0);
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j) mv[i] += d.at(i, j) * vec[j];
  axpy(-es.values[best], vec, mv);
  const double residual = norm2(mv);
  const double fnorm = frobenius_norm(d);
  if (residual > tol * std::max(1.0, fnorm))
    throw EigenError("min_eigpair: residual above tolerance", residual);
  return {es.values[best], std::move(vec)};
}

// Counter-based generator (splitmix64): the state is a plain counter, so the
// stream is fully determined by the seed and reproducible across platforms.
class Prng {
 public:
  explicit Prng(std::uint64_t seed = 0) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // uniform in (0,1)
  double uniform() { return (double(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

  // uniform in (-1,1)
  double uniform_sym() { return 2.0 * uniform() - 1.0; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t state_;
};

// Upper triangle filled i.i.d. Uniform(-1,1) in packed order, mirrored.
inline SymMat random_symmetric(Prng& prng, int n) {
  if (n < 1) throw std::invalid_argument("random_symmetric: n must be >= 1");
  SymMat s(n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i <= j; ++i) s.set_entry(i, j, prng.uniform_sym());
  return s;
}

inline Vec random_vec(Prng& prng, int n) {
  Vec v(n);
  for (double& x : v) x = prng.uniform_sym();
  return v;
}

}  // namespace dls
