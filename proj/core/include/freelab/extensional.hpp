// The extensional monotone basis on truncated circle unions: oriented
// enumeration (optionally permuted per circle), left/right neighbour
// functions, exact linear interpolation, the extension operators and their
// predual matrices, plus the verification suite.
#pragma once

#include "freelab/basis.hpp"
#include "freelab/linear_operator.hpp"
#include "freelab/metric_space.hpp"

#include <vector>

namespace freelab {

class CircleUnionEnumeration {
 public:
  /// Oriented enumeration: circle levels in order, each rim walked one step
  /// to the right per index.
  explicit CircleUnionEnumeration(int k_max);
  /// Same set, arbitrary rim visit order: rim_order[k-1] is a permutation of
  /// 1..4^k giving the enumeration order within circle k.
  CircleUnionEnumeration(int k_max, const std::vector<std::vector<int>>& rim_order);

  int k_max() const { return layout_.k_max; }
  const PointedMetricSpace& space() const { return space_; }
  const CircleUnionLayout& layout() const { return layout_; }

  int last() const { return static_cast<int>(enum_to_point_.size()) - 1; }
  int point_at(int i) const { return enum_to_point_.at(i); }
  int index_of_point(int p) const { return point_to_enum_.at(p); }
  bool in_prefix(int i, int point) const { return point_to_enum_.at(point) <= i; }

  /// k(i): the circle level enumerated at index i >= 1.
  int level_at(int i) const;
  /// Highest circle level fully or partially contained in D_i (0 for i = 0).
  int covered_level(int i) const { return i == 0 ? 0 : level_at(i); }

 private:
  void build(const std::vector<std::vector<int>>& rim_order);

  CircleUnionLayout layout_;
  PointedMetricSpace space_;
  std::vector<int> enum_to_point_;
  std::vector<int> point_to_enum_;
};

CircleUnionEnumeration enumerate_circle_union(int k_max);

struct NeighbourPair {
  int left = -1, right = -1;  // point indices
};

/// Nearest D_i points in each rotational direction from x; (x, x) exactly
/// when x is already in D_i, (0, 0) for the centre. Throws when x lies on a
/// circle above the covered level.
NeighbourPair neighbours(const CircleUnionEnumeration& en, int i, int point);

/// Exact linear interpolation of f (values on D_i, indexed by enumeration
/// position, f[0] = 0 at the base) at any covered point.
Rational interpolate(const CircleUnionEnumeration& en, int i, const std::vector<Rational>& f,
                     int point);

/// Extension of f from D_i to the whole truncation: interpolation on the
/// covered circles, zero above. Result indexed by point.
std::vector<Rational> apply_extension(const CircleUnionEnumeration& en, int i,
                                      const std::vector<Rational>& f);

/// Predual matrix T_i: a covered column is the convex combination of the two
/// neighbour Diracs, a D_i column is fixed, an uncovered column is zero.
LinearOperator extension_operator(const CircleUnionEnumeration& en, int i);

ProjectionFamily extensional_family(const CircleUnionEnumeration& en);

/// Stepwise-extension ledger whose iterated operators reproduce the family.
CoefficientLedger interpolation_ledger(const CircleUnionEnumeration& en);

struct ExtLevelResult {
  int i = 0;
  Num norm;
  int rank = 0;
  bool commutes_next = true;  // T_{i+1} T_i = T_i T_{i+1} = T_i
};

struct ExtSuiteReport {
  std::vector<ExtLevelResult> per_level;
  bool norms_ok = true;      // ||T_i|| = 1 exactly for i >= 1 (zero at i = 0)
  bool ranks_ok = true;      // rank T_i = i
  bool commute_ok = true;
  bool lipschitz_ok = true;  // extensions never increase the constant
  bool fixes_prefix_ok = true;  // P_i f = f on D_i
  // Pair classes exercised by the randomized Lipschitz sweep.
  long long pairs_cross_circle = 0;
  long long pairs_centre = 0;
  long long pairs_same_circle_shared = 0;
  long long pairs_right_metric = 0;
  long long pairs_left_metric = 0;
  bool all_ok() const {
    return norms_ok && ranks_ok && commute_ok && lipschitz_ok && fixes_prefix_ok;
  }
};

/// Exact verification over levels [i_lo, i_hi]: adjacent commutation, norm
/// one, rank i, and the randomized extension-constant sweep.
ExtSuiteReport verify_extensional_suite(const CircleUnionEnumeration& en, int i_lo, int i_hi,
                                        int n_random_f = 4, unsigned long long seed = 1);

}  // namespace freelab
