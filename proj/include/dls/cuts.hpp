#pragma once

// Cut pools: finite sets of atoms of K representing the inner approximation
// K^t (equivalently E^t = {(-p, -Ap) : p in K^t}), with support values, the
// measure-averaging operator, and pruning.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "dls/model.hpp"

namespace dls {

enum class AtomOrigin { initial, oracle, primal_candidate };

class CutPool {
 public:
  CutPool() = default;

  // The leading atoms are K^{-1}; they are never removed by pruning.
  explicit CutPool(std::vector<Vec> initial_atoms, double dedup_tol = 1e-12)
      : dedup_tol_(dedup_tol) {
    for (Vec& a : initial_atoms) push(std::move(a), -1, AtomOrigin::initial);
    initial_count_ = int(atoms_.size());
  }

  int size() const { return int(atoms_.size()); }
  int initial_count() const { return initial_count_; }
  std::uint64_t revision() const { return revision_; }
  const Vec& atom(int j) const { return atoms_[j]; }
  const std::vector<Vec>& atoms() const { return atoms_; }
  int birth(int j) const { return birth_[j]; }
  AtomOrigin origin(int j) const { return origin_[j]; }

  // Appends unless a duplicate is already stored; returns the atom index.
  int append(Vec atom, int birth, AtomOrigin origin = AtomOrigin::oracle) {
    const int dup = find_duplicate(atom);
    if (dup >= 0) return dup;
    push(std::move(atom), birth, origin);
    revision_++;
    return int(atoms_.size()) - 1;
  }

  int find_duplicate(const Vec& atom) const {
    double scale = 1.0;
    for (double v : atom) scale = std::max(scale, std::abs(v));
    for (int j = 0; j < size(); ++j) {
      bool same = true;
      for (std::size_t i = 0; i < atom.size(); ++i)
        if (std::abs(atom[i] - atoms_[j][i]) > dedup_tol_ * scale) {
          same = false;
          break;
        }
      if (same) return j;
    }
    return -1;
  }

 private:
  friend CutPool prune_to(const CutPool& pool, const std::vector<Vec>& keep, int birth);

  void push(Vec atom, int birth, AtomOrigin origin) {
    atoms_.push_back(std::move(atom));
    birth_.push_back(birth);
    origin_.push_back(origin);
  }

  std::vector<Vec> atoms_;
  std::vector<int> birth_;
  std::vector<AtomOrigin> origin_;
  int initial_count_ = 0;
  double dedup_tol_ = 1e-12;
  std::uint64_t revision_ = 0;
};

// Nonpositive weight vector over the pool atoms, the variable of the dual
// projection subproblem. Paired with the pool revision it was built for.
struct MeasureWeights {
  Vec w;
  std::uint64_t revision = 0;

  static MeasureWeights zeros(const CutPool& pool) {
    return {Vec(pool.size(), 0.0), pool.revision()};
  }

  double mass() const {
    double s = 0.0;
    for (double v : w) s += v;
    return s;
  }

  void validate_nonpositive(double tol = 0.0) const {
    for (double v : w)
      if (v > tol) throw std::invalid_argument("MeasureWeights: positive weight");
  }
};

struct SupportValue {
  double value;
  int argmax;
};

// sigma_{E^t}(mu) = max over atoms p of -<mu1 + A^T mu2, p>, with the argmax
// atom. The overload taking the precomputed pairing g = mu1 + A^T mu2 is the
// hot path.
inline SupportValue support_value(const CutPool& pool, const Vec& pairing) {
  if (pool.size() == 0) throw std::invalid_argument("support_value: empty pool");
  SupportValue best{-kInf, -1};
  for (int j = 0; j < pool.size(); ++j) {
    const double v = -dot(pairing, pool.atom(j));
    if (v > best.value) best = {v, j};
  }
  return best;
}

inline SupportValue support_value(const CutPool& pool, const Vec& mu1, const Vec& mu2,
                                  const LinearMap& a_map) {
  Vec pairing = a_map.adjoint(mu2);
  axpy(1.0, mu1, pairing);
  return support_value(pool, pairing);
}

struct Average {
  Vec ebar;    // sum of m_j p_j
  double mass; // sum of m_j
};

inline Average average(const CutPool& pool, const MeasureWeights& m) {
  if (m.revision != pool.revision())
    throw std::invalid_argument("average: weights are stale for this pool revision");
  if (int(m.w.size()) != pool.size())
    throw std::invalid_argument("average: weight length mismatch");
  Average out{Vec(pool.size() ? pool.atom(0).size() : 0, 0.0), 0.0};
  for (int j = 0; j < pool.size(); ++j) {
    if (m.w[j] == 0.0) continue;
    axpy(m.w[j], pool.atom(j), out.ebar);
    out.mass += m.w[j];
  }
  return out;
}

// New pool = initial atoms + keep. Each kept point must be an existing atom
// or a point known to lie in the hull of the old pool (the solver's primal
// candidate qualifies by construction); callers vouch via `origin`.
inline CutPool prune_to(const CutPool& pool, const std::vector<Vec>& keep, int birth = -1) {
  CutPool out;
  out.dedup_tol_ = pool.dedup_tol_;
  for (int j = 0; j < pool.initial_count(); ++j)
    out.push(pool.atom(j), pool.birth(j), AtomOrigin::initial);
  out.initial_count_ = pool.initial_count();
  for (const Vec& p : keep) {
    if (out.find_duplicate(p) >= 0) continue;
    const int old = pool.find_duplicate(p);
    out.push(p, old >= 0 ? pool.birth(old) : birth,
             old >= 0 ? pool.origin(old) : AtomOrigin::primal_candidate);
  }
  out.revision_ = pool.revision_ + 1;
  return out;
}

}  // namespace dls
