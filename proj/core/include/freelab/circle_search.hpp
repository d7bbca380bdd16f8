// Certified lower bounds on circle retraction systems: exhaustive
// branch-and-bound over (order, parent) trees with exact pruning
// comparisons, heuristic upper-bound constructions, and the restriction
// dichotomy for circle unions.
#pragma once

#include "freelab/retraction.hpp"

#include <optional>
#include <string>
#include <vector>

namespace freelab {

/// A Lipschitz threshold comparable exactly against integer distance
/// ratios: either a plain rational or the closed form (sqrt(radicand)-1)/8.
struct LipTarget {
  enum class Kind { SqrtForm, Exact };
  Kind kind = Kind::Exact;
  long long radicand = 0;
  Rational value{};

  static LipTarget sqrt_form(long long radicand);
  static LipTarget exact(Rational v);

  double approx() const;
  std::string describe() const;
  /// Exact test num/den >= target (num >= 0, den > 0).
  bool ratio_ge(long long num, long long den) const;
  /// Exact test on a rational value.
  bool rational_ge(const Rational& v) const;
};

struct Theorem32Bound {
  LipTarget target;  // (sqrt(8n+1)-1)/8
  double approx = 0;
  bool small_n_warning = false;  // the statement assumes n >= 10
};
Theorem32Bound theorem32_bound(long long n);

struct SearchBudget {
  long long max_nodes = 100'000'000;
  double max_seconds = 600.0;
};

enum class SearchOutcome { Certified, Counterexample, Indeterminate };

/// Partial assignment: (rim point, parent position) per position 1..k.
using SearchPrefix = std::vector<std::pair<int, int>>;

struct SearchCertificate {
  int n = 0;
  LipTarget target;
  SearchOutcome outcome = SearchOutcome::Indeterminate;
  long long nodes_explored = 0;
  double wall_seconds = 0;
  // Counterexample system, when found (rim point and parent position per
  // position 1..n).
  SearchPrefix counterexample;
  // Unexplored subtree roots, when the budget ran out.
  std::vector<SearchPrefix> frontier;
};

/// Exhaustive search for a system on C_n^0 with every Lip(phi_i) < target.
/// Rotations are quotiented by fixing mu_1 = x_1, reflections by a
/// lexicographic canonicity constraint on the placement sequence; both
/// preserve all Lipschitz constants, so pruned orbits lose no systems.
/// "Certified" means the tree was exhausted with no such system.
SearchCertificate certify_circle_lower_bound(int n, const LipTarget& target,
                                             const SearchBudget& budget, int threads = 1,
                                             const std::vector<SearchPrefix>* resume = nullptr);

// ---------------------------------------------------------------------------
// Heuristic upper bounds

enum class CircleStrategy { PeelOneArc, PeelBalanced, GreedyMinLip };
CircleStrategy strategy_from_string(const std::string& s);
std::string strategy_name(CircleStrategy s);

struct HeuristicResult {
  RetractionSystem sys;
  Num achieved;  // max_i Lip(phi_i)
};

/// Builds a valid system on the given circle space (the caller keeps the
/// space alive, as everywhere else).
HeuristicResult heuristic_circle_system(const PointedMetricSpace& circle,
                                        CircleStrategy strategy);

/// Greedy minimum-partial-Lipschitz construction on any validated space.
RetractionSystem greedy_min_lip_system(const PointedMetricSpace& space);

/// Per-circle peel order on a circle union (inner circles first); each
/// circle's first point hangs off the centre.
RetractionSystem union_peel_system(const PointedMetricSpace& union_space, int k_max,
                                   bool balanced);

// ---------------------------------------------------------------------------
// Circle-union restriction dichotomy

struct UnionDichotomyReport {
  int big_level = 0;      // level of the outermost circle
  int big_size = 0;       // 4^big_level
  int first_big_pos = -1; // first position carrying an outer-circle point
  bool escapes = false;   // some phi_j (j >= first_big_pos) leaves the rim
  int escape_level = -1;  // witnessing level j
  int escape_point = -1;  // witnessing point
  Num union_max_lip;
  bool restricted_valid = false;  // restriction passes the system axioms
  Num restricted_max_lip;
  double floor_approx = 0;  // 4^k on escape, else the circle lower bound
  bool floor_met = false;
};

/// Restriction of a union system to its outermost circle, per the proof
/// dichotomy: either some retraction pushes a rim point off the circle
/// (then the union constant is at least the circle size), or the restricted
/// maps form a valid circle system subject to the circle lower bound.
UnionDichotomyReport union_restriction_report(const RetractionSystem& sys, int k_max);

}  // namespace freelab
