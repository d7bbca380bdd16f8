// Linear operators on the free space of a finite pointed metric space, in
// Dirac coordinates over the non-base points. Columns are kept sparse; the
// projection families this library builds are one- or two-entry columns.
#pragma once

#include "freelab/measure.hpp"

#include <vector>

namespace freelab {

class LinearOperator {
 public:
  explicit LinearOperator(const PointedMetricSpace& space);

  static LinearOperator zero(const PointedMetricSpace& space) { return LinearOperator(space); }
  static LinearOperator identity(const PointedMetricSpace& space);

  const PointedMetricSpace& space() const { return *space_; }

  /// Image of delta_x as a sparse coefficient vector (empty for the base).
  const SparseVec& column(int x) const { return cols_[x]; }
  void set_column(int x, SparseVec col);

  Measure apply(const Measure& mu) const;

  /// Composition this∘other: first other, then this.
  LinearOperator compose(const LinearOperator& other) const;
  LinearOperator plus(const LinearOperator& other) const;
  LinearOperator minus(const LinearOperator& other) const;
  LinearOperator scaled(const Rational& c) const;

  bool operator==(const LinearOperator& other) const;

  /// Exact rank over the non-base Dirac coordinates.
  int rank() const;

 private:
  const PointedMetricSpace* space_;
  std::vector<SparseVec> cols_;
};

}  // namespace freelab
