// Schauder projection families on free spaces: built from retraction
// systems or from coefficient ledgers (stepwise extension operators), with
// basis constants, signed projection sums, unconditionality scans and the
// aligned-chain conditionality witness.
#pragma once

#include "freelab/linear_operator.hpp"
#include "freelab/retraction.hpp"
#include "freelab/transport.hpp"

#include <optional>
#include <vector>

namespace freelab {

struct ProjectionFamily {
  const PointedMetricSpace* space = nullptr;
  std::vector<LinearOperator> P;  // P[0] = 0, ..., P[N]; rank P[n] = n
  int levels() const { return static_cast<int>(P.size()) - 1; }
};

/// P_n delta_x = delta_{phi_n(x)}.
ProjectionFamily projections_from_system(const RetractionSystem& sys);

/// Extension-step coefficients: rows[n] (n = 1..N) lists (position i, a_i^n)
/// with 1 <= i < n; the step operator sets f(mu_n) = sum a_i^n f(mu_i).
struct CoefficientLedger {
  std::vector<SparseVec> rows;  // rows[0] unused
};

/// Ledger with the single entry (parent, 1) per row; reproduces
/// projections_from_system exactly.
CoefficientLedger retractional_ledger(const RetractionSystem& sys);

/// P_n obtained by iterating the extension steps n+1..N; columns express
/// E_n f(mu_j) as a combination of values on mu_1..mu_n.
ProjectionFamily projections_from_coefficients(const PointedMetricSpace& space,
                                               const std::vector<int>& order,
                                               const CoefficientLedger& ledger);

struct FamilyViolation {
  int m = -1, n = -1;
  std::string detail;
};
struct FamilyReport {
  std::vector<FamilyViolation> violations;
  bool ok() const { return violations.empty(); }
};
/// Exact checks: P_0 = 0, rank P_n = n, and P_m P_n = P_n P_m = P_n for n <= m.
FamilyReport verify_projection_family(const ProjectionFamily& fam);

/// max_n ||P_n||.
Num basis_constant(const ProjectionFamily& fam);

/// || sum_i eps_i (P_{i+1} - P_i) || for a +-1 vector of length N.
Num signed_sum_norm(const ProjectionFamily& fam, const std::vector<int>& eps);

struct UncondResult {
  Num value;
  std::vector<int> eps;          // attaining sign pattern
  long long patterns_scanned = 0;
  long long norms_evaluated = 0;
  bool exhaustive = false;
  unsigned long long seed = 0;
};

/// Supremum of signed_sum_norm over all 2^N sign patterns. Refuses N > cap.
UncondResult unconditional_constant_exhaustive(const ProjectionFamily& fam, int cap = 20);

/// Seeded random lower bound: the best of n_samples sign patterns.
UncondResult unconditional_constant_sampled(const ProjectionFamily& fam, int n_samples,
                                            unsigned long long seed);

// ---------------------------------------------------------------------------
// Conditionality witnesses from diverging chains

struct Lemma41Witness {
  LipschitzFunction f;       // alternating +-alpha/2 profile, norm <= 1
  std::vector<int> eps;      // sign flips exactly at the positions of S
  Rational bound;            // alpha * (n - 1) / beta
  int n_excess = 0;          // |S \ T|
  int t_shared = 0;          // position in S of the last point shared with T
};

/// Builds the conditionality witness for chains S, T from the base with
/// d(final S, final T) <= beta on an alpha-separated space. Guarantees
/// signed_sum_norm(family(sys), eps) >= bound.
Lemma41Witness lemma41_witness(const RetractionSystem& sys, const Chain& S, const Chain& T,
                               const Rational& alpha, const Rational& beta);

struct DivergentPair {
  int x = -1, y = -1;
  int excess = 0;  // |chain(x) \ chain(y)|
};

/// All ordered pairs with d(x, y) <= beta and |chain(x) \ chain(y)| >= n_min,
/// sorted by excess descending (ties by index).
std::vector<DivergentPair> find_divergent_chains(const RetractionSystem& sys,
                                                 const Rational& beta, int n_min);

}  // namespace freelab
