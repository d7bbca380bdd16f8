// The free-space (Kantorovich-Rubinstein) norm, computed two independent
// ways: a min-cost transport over the support plus the base point, and a
// linear program over function values with pairwise Lipschitz constraints.
// The two routes agree exactly on exact spaces; that cross-check is the
// module's certification story.
#pragma once

#include "freelab/linear_operator.hpp"
#include "freelab/measure.hpp"
#include "freelab/num.hpp"

#include <vector>

namespace freelab {

/// Transport (primal) route. Exact rational on exact spaces.
Num kr_norm(const Measure& mu);

struct DualResult {
  Num value;
  // Witness function values per point (0 at the base). On exact spaces the
  // rational vector is filled; the double mirror is always available.
  std::vector<Rational> witness_q;
  std::vector<double> witness_d;
};

enum class WitnessMode {
  None,     // value only
  LexMin,   // canonical: pointwise-minimal optimal witness
};

/// LP (dual) route: maximize <f, mu> over f with f(0) = 0 and
/// |f(x)-f(y)| <= d(x,y). Solved by exact simplex pivoting on exact spaces.
DualResult kr_norm_dual(const Measure& mu, WitnessMode mode = WitnessMode::LexMin);

struct OperatorNormResult {
  Num value;
  int mol_x = -1, mol_y = -1;  // attaining molecule (delta_x - delta_y)/d(x,y)
};

/// Exact operator norm on the free space: the unit ball is the convex hull
/// of the molecules, so the norm is the maximum of ||T m|| over molecules
/// m = (delta_x - delta_y)/d(x,y), pairs drawn from all points including
/// the base.
OperatorNormResult operator_norm_detailed(const LinearOperator& T);
Num operator_norm(const LinearOperator& T);

}  // namespace freelab
