// Commuting retraction systems encoded canonically as an enumeration plus a
// parent tree: order mu_0..mu_N starting at the base, each later point
// attached to an earlier one. phi_i(x) is the deepest ancestor of x placed
// at position <= i; chains, fibers and Lipschitz constants all read off the
// tree. Raw retraction tables are accepted for adversarial validation and
// converted back to tree form.
#pragma once

#include "freelab/measure.hpp"
#include "freelab/num.hpp"

#include <optional>
#include <string>
#include <vector>

namespace freelab {

class RetractionSystem {
 public:
  /// order: permutation of all point indices with order[0] == base.
  /// parent_pos: per position k >= 1 a parent position < k (entry 0 ignored).
  RetractionSystem(const PointedMetricSpace& space, std::vector<int> order,
                   std::vector<int> parent_pos);

  const PointedMetricSpace& space() const { return *space_; }
  int points() const { return static_cast<int>(order_.size()); }
  int levels() const { return points() - 1; }  // N

  int point_at(int pos) const { return order_.at(pos); }
  int position(int point) const { return pos_of_.at(point); }
  int parent_pos(int pos) const { return parent_pos_.at(pos); }
  int parent_point(int point) const { return order_[parent_pos_[pos_of_[point]]]; }
  const std::vector<int>& order() const { return order_; }

  /// phi_i(x): the deepest ancestor of x among positions 0..i.
  int phi(int i, int point) const;

  /// Exact per-level Lipschitz constants, lip[i] = Lip(phi_i), i = 0..N.
  const std::vector<Num>& lip_constants() const { return lips_; }
  Num lip_constant(int i) const;
  Num max_lip() const;

 private:
  void compute_lips();

  const PointedMetricSpace* space_;
  std::vector<int> order_;
  std::vector<int> parent_pos_;
  std::vector<int> pos_of_;
  std::vector<Num> lips_;
};

/// Convenience builder from a parent-by-point map (entries for every
/// non-base point; mu_1's parent must be the base).
RetractionSystem build_system(const PointedMetricSpace& space, const std::vector<int>& order,
                              const std::vector<std::pair<int, int>>& parent_of_point);

// ---------------------------------------------------------------------------
// Validation

struct SystemViolation {
  enum class Kind {
    ImageSet,       // phi_n(M) != {mu_0..mu_n}
    Retraction,     // phi_n not the identity on its image
    Commutativity,  // phi_m phi_n != phi_n or phi_n phi_m != phi_n
    TableShape,     // raw table malformed
    TableMismatch,  // raw table passes the axioms but disagrees with its tree
  };
  Kind kind;
  int m = -1, n = -1, x = -1;
  std::string detail;
};

struct SystemReport {
  std::vector<SystemViolation> violations;
  bool ok() const { return violations.empty(); }
  std::string summary() const;
};

/// Exhaustively confirms the image, retraction and commutation laws for all
/// levels n <= m and every point.
SystemReport validate_system(const RetractionSystem& sys);

/// Validates a raw table phi[i][x] of retraction values (i = 0..N). Checks
/// the image chain, retraction and commutation laws directly.
SystemReport validate_phi_table(const PointedMetricSpace& space,
                                const std::vector<std::vector<int>>& phi);

/// Converts a valid raw table to its canonical tree system (throws
/// std::invalid_argument when the table fails validation).
RetractionSystem system_from_phi_table(const PointedMetricSpace& space,
                                       const std::vector<std::vector<int>>& phi);

// ---------------------------------------------------------------------------
// Chains, fibers, step bounds

struct Chain {
  std::vector<int> points;  // ordered by increasing position
  int initial() const { return points.front(); }
  int final() const { return points.back(); }
  std::size_t size() const { return points.size(); }
};

/// The unique chain from the base to x.
Chain chain_to(const RetractionSystem& sys, int point);

/// Whether the given point sequence satisfies the chain law of sys.
bool is_chain(const RetractionSystem& sys, const Chain& chain);

/// All y with phi_i(y) = p. Throws when p is not in the image of phi_i.
std::vector<int> fiber(const RetractionSystem& sys, int i, int p);

struct StepLemmaResult {
  bool ok;         // every consecutive chain gap <= 2*K*alpha
  Num worst_gap;
  Num threshold;   // 2*K*alpha
  Num lip_bound;   // the K that was used
  int worst_step;  // index of the worst gap (chain step m-1 -> m)
};

/// Checks the chain-gap bound along `chain` given a connecting path from the
/// chain's final point back to its initial point with steps <= alpha. K
/// defaults to the max Lipschitz constant over the chain's position range;
/// an override must not be smaller than that.
StepLemmaResult step_lemma_check(const RetractionSystem& sys, const Chain& chain,
                                 const std::vector<int>& path, const Rational& alpha,
                                 const std::optional<Rational>& k_override = std::nullopt);

/// Basis molecules e_n = delta_{mu_n} - delta_{parent(mu_n)}, n = 1..N.
std::vector<Measure> basis_molecules(const RetractionSystem& sys);

/// Row-major system on a grid net: lexicographic order, parent obtained by
/// decrementing the last nonzero coordinate.
RetractionSystem grid_row_major_system(const PointedMetricSpace& grid, int m, int dim);

}  // namespace freelab
