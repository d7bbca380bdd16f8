// Finite pointed metric spaces: generic distance-matrix spaces, graph
// circles, concentric circle unions and Euclidean grid nets, together with
// the axiom validator and the circle orientation helpers.
#pragma once

#include "freelab/num.hpp"
#include "freelab/rational.hpp"

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace freelab {

class PointedMetricSpace {
 public:
  // Exact space: distances are rationals, row-major n*n matrix.
  PointedMetricSpace(std::vector<std::string> labels, std::vector<Rational> dist, int base);
  // Float space (Euclidean nets): distances are binary doubles.
  PointedMetricSpace(std::vector<std::string> labels, std::vector<double> dist, int base);

  int size() const { return n_; }
  int base() const { return base_; }
  bool exact() const { return exact_; }

  const std::string& label(int i) const { return labels_.at(i); }
  const std::vector<std::string>& labels() const { return labels_; }
  /// Index of a label, -1 when absent.
  int index_of(std::string_view label) const;

  const Rational& dist_q(int i, int j) const;
  double dist_d(int i, int j) const { return dd_[idx(i, j)]; }
  Num dist(int i, int j) const {
    return exact_ ? Num(dist_q(i, j)) : Num(dist_d(i, j));
  }

  template <class S>
  const std::vector<S>& raw() const;

 private:
  int idx(int i, int j) const { return i * n_ + j; }
  void index_labels();

  int n_ = 0;
  int base_ = 0;
  bool exact_ = true;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, int> index_;
  std::vector<Rational> dq_;
  std::vector<double> dd_;  // mirror of dq_ on exact spaces
};

template <>
inline const std::vector<Rational>& PointedMetricSpace::raw<Rational>() const {
  if (!exact_) throw std::logic_error("rational distances requested from a float space");
  return dq_;
}
template <>
inline const std::vector<double>& PointedMetricSpace::raw<double>() const {
  return dd_;
}

// ---------------------------------------------------------------------------
// Metric axiom validation

struct MetricViolation {
  enum class Kind {
    Asymmetry,        // d(i,j) != d(j,i)
    NonzeroDiagonal,  // d(i,i) != 0
    ZeroOffDiagonal,  // d(i,j) <= 0 for i != j (separation failure)
    TriangleViolation,// d(i,k) > d(i,j) + d(j,k)
    NonFinite,
    BadBase,
  };
  Kind kind;
  int i = -1, j = -1, k = -1;
  std::string detail;
};

struct MetricReport {
  std::vector<MetricViolation> violations;
  bool ok() const { return violations.empty(); }
  std::string summary() const;
};

/// Exhaustive axiom check over every pair and ordered triple. Float spaces
/// get 1e-9 slack on the triangle inequality; exact spaces get none.
MetricReport validate_metric(const PointedMetricSpace& s);

// ---------------------------------------------------------------------------
// Built-in spaces

/// Circle of radius n: centre x0 at distance n from every rim point, rim
/// metric min(|k-l|, n-|k-l|). Points are labelled x0..xn, base = x0.
PointedMetricSpace build_circle(int n);

/// Concentric union of circles of radii 4^1..4^k_max: one common centre,
/// circle metric within each circle, max(4^i, 4^j) across circles.
PointedMetricSpace build_circle_union(int k_max);

/// Integer lattice {0..m}^dim with Euclidean distance, base at the origin.
/// Throws when the point count (m+1)^dim exceeds the cap.
PointedMetricSpace build_grid_net(int m, int dim, long long point_cap = 20000);

// ---------------------------------------------------------------------------
// Circle orientation machinery (rim indices are 1-based, rim size n)

enum class Orientation { Left, Right, Both, Neither };
enum class RimDirection { Left, Right };

/// Where x_l sits relative to x_k on the rim of C_n, by literal evaluation
/// of both case-defined index sets. The sets overlap (at least at l = k) and
/// can also leave points uncovered, hence the four-way answer.
Orientation orientation(int n, int k, int l);

/// Length of the rim path from x_x to x_y walking only left / only right.
/// Satisfies d^l(x,y) = d^r(y,x) and d(x,y) = min(d^l, d^r).
long long directed_distance(int n, int x, int y, RimDirection dir);

/// Rim metric of C_n between rim indices (no centre involved).
long long circle_rim_distance(int n, int k, int l);

// ---------------------------------------------------------------------------
// Circle-union index layout (shared by the extensional operators and the
// restriction machinery)

struct CircleUnionLayout {
  explicit CircleUnionLayout(int k_max);

  int k_max;
  int total_points() const { return total_; }
  /// 0 for the centre, otherwise the circle level 1..k_max.
  int level_of(int point) const;
  /// Rim index 1..4^level within the point's circle.
  int rim_of(int point) const;
  int point_of(int level, int rim) const;
  int circle_size(int level) const { return sizes_[level]; }
  int first_point(int level) const { return firsts_[level]; }

 private:
  int total_;
  std::vector<int> sizes_;   // [0]=unused, [k]=4^k
  std::vector<int> firsts_;  // point index of rim 1 on circle k
};

}  // namespace freelab
