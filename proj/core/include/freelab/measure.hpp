// Finitely supported elements of the free space (rational combinations of
// Dirac functionals over non-base points) and base-point-vanishing
// Lipschitz functions.
#pragma once

#include "freelab/metric_space.hpp"

#include <utility>
#include <vector>

namespace freelab {

/// Sorted-by-index sparse rational vector with no explicit zeros.
using SparseVec = std::vector<std::pair<int, Rational>>;

SparseVec sparse_normalize(SparseVec entries);
SparseVec sparse_add(const SparseVec& a, const SparseVec& b);
SparseVec sparse_scale(const SparseVec& a, const Rational& c);

class Measure {
 public:
  Measure(const PointedMetricSpace& space, SparseVec coeffs);

  static Measure zero(const PointedMetricSpace& space) { return Measure(space, {}); }
  static Measure dirac(const PointedMetricSpace& space, int point);
  /// delta_x - delta_y (either may be the base, whose Dirac is 0).
  static Measure molecule(const PointedMetricSpace& space, int x, int y);

  const PointedMetricSpace& space() const { return *space_; }
  const SparseVec& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }
  /// Sum of the coefficients; the base point implicitly carries its negative.
  Rational total() const;

  Measure scaled(const Rational& c) const;
  Measure plus(const Measure& other) const;

 private:
  const PointedMetricSpace* space_;
  SparseVec coeffs_;
};

/// f in Lip0(M): one value per point, exactly 0 at the base.
struct LipschitzFunction {
  const PointedMetricSpace* space = nullptr;
  std::vector<Rational> values;  // indexed by point

  LipschitzFunction() = default;
  LipschitzFunction(const PointedMetricSpace& sp, std::vector<Rational> vals);

  Rational pair_with(const Measure& mu) const;  // <f, mu>
  /// Best Lipschitz constant over all pairs (exact spaces only).
  Rational lip_norm() const;
  /// Feasibility |f(x)-f(y)| <= bound * d(x,y) for all pairs, exact.
  bool lip_bounded_by(const Rational& bound) const;
};

}  // namespace freelab
