#include "freelab/basis.hpp"

#include <algorithm>
#include <random>
#include <set>

namespace freelab {

ProjectionFamily projections_from_system(const RetractionSystem& sys) {
  const auto& sp = sys.space();
  ProjectionFamily fam;
  fam.space = &sp;
  fam.P.reserve(sys.levels() + 1);
  for (int i = 0; i <= sys.levels(); ++i) {
    LinearOperator P(sp);
    for (int x = 0; x < sp.size(); ++x) {
      if (x == sp.base()) continue;
      const int img = sys.phi(i, x);
      if (img == sp.base()) continue;
      P.set_column(x, {{img, Rational(1)}});
    }
    fam.P.push_back(std::move(P));
  }
  return fam;
}

CoefficientLedger retractional_ledger(const RetractionSystem& sys) {
  CoefficientLedger led;
  led.rows.resize(sys.levels() + 1);
  for (int nn = 1; nn <= sys.levels(); ++nn) {
    const int pp = sys.parent_pos(nn);
    if (pp >= 1) led.rows[nn] = {{pp, Rational(1)}};
  }
  return led;
}

ProjectionFamily projections_from_coefficients(const PointedMetricSpace& space,
                                               const std::vector<int>& order,
                                               const CoefficientLedger& ledger) {
  const int n_pts = space.size();
  if (static_cast<int>(order.size()) != n_pts || order.empty() || order[0] != space.base())
    throw std::invalid_argument("order must enumerate all points starting at the base");
  const int N = n_pts - 1;
  if (static_cast<int>(ledger.rows.size()) != N + 1)
    throw std::invalid_argument("ledger must have one row per level 1..N");
  for (int nn = 1; nn <= N; ++nn)
    for (const auto& [i, a] : ledger.rows[nn]) {
      (void)a;
      if (i < 1 || i >= nn)
        throw std::invalid_argument("ledger row " + std::to_string(nn) +
                                    " references position " + std::to_string(i) +
                                    " outside 1..n-1");
    }

  ProjectionFamily fam;
  fam.space = &space;
  fam.P.reserve(N + 1);
  for (int lvl = 0; lvl <= N; ++lvl) {
    // w[j]: E_lvl f(mu_j) as a sparse combination over positions 1..lvl.
    std::vector<SparseVec> w(N + 1);
    for (int j = 1; j <= lvl; ++j) w[j] = {{j, Rational(1)}};
    for (int j = lvl + 1; j <= N; ++j) {
      SparseVec acc;
      for (const auto& [i, a] : ledger.rows[j]) acc = sparse_add(acc, sparse_scale(w[i], a));
      w[j] = std::move(acc);
    }
    LinearOperator P(space);
    for (int j = 1; j <= N; ++j) {
      SparseVec col;
      col.reserve(w[j].size());
      for (const auto& [pos, v] : w[j]) col.emplace_back(order[pos], v);
      P.set_column(order[j], sparse_normalize(std::move(col)));
    }
    fam.P.push_back(std::move(P));
  }
  return fam;
}

FamilyReport verify_projection_family(const ProjectionFamily& fam) {
  FamilyReport rep;
  const int N = fam.levels();
  if (!(fam.P[0] == LinearOperator::zero(*fam.space)))
    rep.violations.push_back({-1, 0, "P_0 is not the zero operator"});
  for (int n = 0; n <= N; ++n) {
    if (fam.P[n].rank() != n)
      rep.violations.push_back({-1, n, "rank P_n != n"});
  }
  for (int n = 0; n <= N; ++n)
    for (int m = n; m <= N; ++m) {
      if (!(fam.P[m].compose(fam.P[n]) == fam.P[n]))
        rep.violations.push_back({m, n, "P_m P_n != P_n"});
      if (!(fam.P[n].compose(fam.P[m]) == fam.P[n]))
        rep.violations.push_back({m, n, "P_n P_m != P_n"});
    }
  return rep;
}

Num basis_constant(const ProjectionFamily& fam) {
  Num best(Rational(0));
  for (const auto& P : fam.P) best = max(best, operator_norm(P));
  return best;
}

Num signed_sum_norm(const ProjectionFamily& fam, const std::vector<int>& eps) {
  const int N = fam.levels();
  if (static_cast<int>(eps.size()) != N)
    throw std::invalid_argument("sign vector length must equal N");
  for (int e : eps)
    if (e != 1 && e != -1) throw std::invalid_argument("signs must be +-1");
  LinearOperator acc = LinearOperator::zero(*fam.space);
  for (int i = 0; i < N; ++i) {
    LinearOperator diff = fam.P[i + 1].minus(fam.P[i]);
    acc = acc.plus(eps[i] == 1 ? diff : diff.scaled(Rational(-1)));
  }
  return operator_norm(acc);
}

namespace {

std::vector<int> mask_to_eps(unsigned long long mask, int N) {
  std::vector<int> eps(N);
  for (int i = 0; i < N; ++i) eps[i] = (mask >> i) & 1ULL ? -1 : 1;
  return eps;
}

}  // namespace

UncondResult unconditional_constant_exhaustive(const ProjectionFamily& fam, int cap) {
  const int N = fam.levels();
  if (N > cap)
    throw std::invalid_argument("exhaustive sign scan refused for N > " + std::to_string(cap));
  UncondResult res;
  res.exhaustive = true;
  const unsigned long long total = 1ULL << N;
  bool have = false;
  // Negating every sign negates the operator and keeps the norm, so only
  // patterns with eps_0 = +1 need evaluating; both orientations count as
  // scanned.
  for (unsigned long long mask = 0; mask < total; mask += 2) {
    const Num v = signed_sum_norm(fam, mask_to_eps(mask, N));
    ++res.norms_evaluated;
    res.patterns_scanned += (N >= 1 ? 2 : 1);
    if (!have || res.value < v) {
      have = true;
      res.value = v;
      res.eps = mask_to_eps(mask, N);
    }
    if (N == 0) break;
  }
  return res;
}

UncondResult unconditional_constant_sampled(const ProjectionFamily& fam, int n_samples,
                                            unsigned long long seed) {
  const int N = fam.levels();
  UncondResult res;
  res.exhaustive = false;
  res.seed = seed;
  std::mt19937_64 rng(seed);
  bool have = false;
  for (int s = 0; s < n_samples; ++s) {
    std::vector<int> eps(N);
    for (int i = 0; i < N; ++i) eps[i] = (rng() & 1ULL) ? -1 : 1;
    const Num v = signed_sum_norm(fam, eps);
    ++res.patterns_scanned;
    ++res.norms_evaluated;
    if (!have || res.value < v) {
      have = true;
      res.value = v;
      res.eps = std::move(eps);
    }
  }
  if (!have) throw std::invalid_argument("sampled scan needs at least one sample");
  return res;
}

// ---------------------------------------------------------------------------

namespace {

bool leq_with_float_slack(const PointedMetricSpace& sp, const Num& lhs, const Rational& rhs) {
  if (sp.exact()) return lhs.rat() <= rhs;
  return lhs.dbl() <= to_double(rhs) + 1e-9;
}

Rational min_separation_exact(const PointedMetricSpace& sp) {
  Rational best(-1);
  for (int i = 0; i < sp.size(); ++i)
    for (int j = i + 1; j < sp.size(); ++j) {
      const Rational& d = sp.dist_q(i, j);
      if (best < 0 || d < best) best = d;
    }
  return best;
}

double min_separation_float(const PointedMetricSpace& sp) {
  double best = -1;
  for (int i = 0; i < sp.size(); ++i)
    for (int j = i + 1; j < sp.size(); ++j) {
      const double d = sp.dist_d(i, j);
      if (best < 0 || d < best) best = d;
    }
  return best;
}

}  // namespace

Lemma41Witness lemma41_witness(const RetractionSystem& sys, const Chain& S, const Chain& T,
                               const Rational& alpha, const Rational& beta) {
  const auto& sp = sys.space();
  if (!is_chain(sys, S) || !is_chain(sys, T)) throw std::invalid_argument("S and T must be chains of the system");
  if (S.initial() != sp.base() || T.initial() != sp.base())
    throw std::invalid_argument("S and T must start at the base");
  if (alpha <= 0 || beta <= 0) throw std::invalid_argument("alpha and beta must be positive");
  if (!leq_with_float_slack(sp, sp.dist(S.final(), T.final()), beta))
    throw std::invalid_argument("chain endpoints are farther apart than beta");
  const bool separated = sp.exact() ? (min_separation_exact(sp) >= alpha)
                                    : (min_separation_float(sp) >= to_double(alpha) - 1e-9);
  if (!separated) throw std::invalid_argument("space is not alpha-separated");

  // Chains from the base intersect in a common prefix; locate its end in S.
  const std::set<int> t_set(T.points.begin(), T.points.end());
  int t_shared = 0;
  for (std::size_t j = 0; j < S.points.size(); ++j)
    if (t_set.count(S.points[j])) t_shared = static_cast<int>(j);
  for (int j = 0; j <= t_shared; ++j)
    if (!t_set.count(S.points[j])) throw std::logic_error("chain overlap is not a prefix");
  const int s = static_cast<int>(S.points.size()) - 1;
  const int n_excess = s - t_shared;
  if (n_excess < 2) throw std::invalid_argument("|S \\ T| must be at least 2");

  std::vector<Rational> values(sp.size(), Rational(0));
  const Rational half = alpha / 2;
  for (int j = t_shared + 1; j <= s; ++j) values[S.points[j]] = (j % 2 == 1) ? half : -half;
  LipschitzFunction f(sp, std::move(values));

  // eps_0 = 1, flipping at each position of S. A flip at the final position
  // itself would index past the family; it cannot affect the evaluation at
  // the final point and is dropped.
  const int N = sys.levels();
  std::set<int> flip_positions;
  for (int j = 1; j <= s; ++j) flip_positions.insert(sys.position(S.points[j]));
  std::vector<int> eps(N);
  int cur = 1;
  eps.at(0) = 1;
  for (int i = 1; i < N; ++i) {
    if (flip_positions.count(i)) cur = -cur;
    eps[i] = cur;
  }

  Lemma41Witness out;
  out.f = std::move(f);
  out.eps = std::move(eps);
  out.bound = alpha * Rational(n_excess - 1) / beta;
  out.n_excess = n_excess;
  out.t_shared = t_shared;
  return out;
}

std::vector<DivergentPair> find_divergent_chains(const RetractionSystem& sys,
                                                 const Rational& beta, int n_min) {
  const auto& sp = sys.space();
  std::vector<Chain> chains(sp.size());
  for (int x = 0; x < sp.size(); ++x) chains[x] = chain_to(sys, x);

  std::vector<std::set<int>> chain_sets(sp.size());
  for (int x = 0; x < sp.size(); ++x)
    chain_sets[x] = std::set<int>(chains[x].points.begin(), chains[x].points.end());

  std::vector<DivergentPair> out;
  for (int x = 0; x < sp.size(); ++x) {
    for (int y = 0; y < sp.size(); ++y) {
      if (x == y) continue;
      if (!leq_with_float_slack(sp, sp.dist(x, y), beta)) continue;
      int excess = 0;
      for (int p : chains[x].points)
        if (!chain_sets[y].count(p)) ++excess;
      if (excess >= n_min) out.push_back({x, y, excess});
    }
  }
  std::sort(out.begin(), out.end(), [](const DivergentPair& a, const DivergentPair& b) {
    if (a.excess != b.excess) return a.excess > b.excess;
    if (a.x != b.x) return a.x < b.x;
    return a.y < b.y;
  });
  return out;
}

}  // namespace freelab
