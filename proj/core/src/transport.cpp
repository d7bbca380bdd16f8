#include "freelab/transport.hpp"

#include "freelab/min_cost_flow.hpp"
#include "freelab/simplex.hpp"

#include <cmath>
#include <tuple>

namespace freelab {

namespace {

template <class S>
S dist_s(const PointedMetricSpace& sp, int i, int j) {
  return sp.raw<S>()[static_cast<std::size_t>(i) * sp.size() + j];
}

template <class S>
detail::TransportSolution<S> solve_primal(const Measure& mu) {
  const auto& sp = mu.space();
  std::vector<int> pts;
  std::vector<Rational> supply;
  for (const auto& [i, v] : mu.coeffs()) {
    pts.push_back(i);
    supply.push_back(v);
  }
  const Rational net = mu.total();
  if (net != 0) {
    pts.push_back(sp.base());
    supply.push_back(-net);
  }
  auto cost = [&](int a, int b) -> S { return dist_s<S>(sp, pts[a], pts[b]); };
  auto sol = detail::transport_solve<S>(std::move(supply), cost);
  // Re-express arcs in point indices.
  for (auto& [a, b, f] : sol.arcs) {
    a = pts[a];
    b = pts[b];
  }
  return sol;
}

template <class S>
struct DualT {
  S value;
  std::vector<S> witness;  // raw simplex witness, per point
};

template <class S>
DualT<S> solve_dual(const Measure& mu) {
  const auto& sp = mu.space();
  const int n = sp.size();
  const int base = sp.base();

  std::vector<int> var_of(n, -1), pt_of;
  for (int i = 0; i < n; ++i) {
    if (i == base) continue;
    var_of[i] = static_cast<int>(pt_of.size());
    pt_of.push_back(i);
  }
  const int d = static_cast<int>(pt_of.size());

  // Shifted variables g_i = f_i + d(i,0) >= 0 keep every right-hand side
  // nonnegative (triangle inequality), so the all-slack basis starts feasible.
  std::vector<std::vector<S>> A;
  std::vector<S> b;
  A.reserve(static_cast<std::size_t>(d) * d);
  for (int vi = 0; vi < d; ++vi) {
    const int i = pt_of[vi];
    for (int vj = 0; vj < d; ++vj) {
      if (vi == vj) continue;
      const int j = pt_of[vj];
      std::vector<S> row(d, detail::ScalarTraits<S>::zero());
      row[vi] = S(1);
      row[vj] = S(-1);
      A.push_back(std::move(row));
      b.push_back(dist_s<S>(sp, i, j) + dist_s<S>(sp, i, base) - dist_s<S>(sp, j, base));
    }
    std::vector<S> row(d, detail::ScalarTraits<S>::zero());
    row[vi] = S(1);
    A.push_back(std::move(row));
    b.push_back(S(2) * dist_s<S>(sp, i, base));
  }

  std::vector<S> c(d, detail::ScalarTraits<S>::zero());
  S shift = detail::ScalarTraits<S>::zero();
  for (const auto& [i, v] : mu.coeffs()) {
    const S coeff = detail::ScalarTraits<S>::from_rational(v);
    c[var_of[i]] = coeff;
    shift = shift + coeff * dist_s<S>(sp, i, base);
  }

  auto lp = detail::simplex_max<S>(A, b, c);
  if (lp.unbounded) throw std::logic_error("kr_norm_dual: LP unbounded on a metric space");

  DualT<S> out;
  out.value = lp.objective - shift;
  out.witness.assign(n, detail::ScalarTraits<S>::zero());
  for (int vi = 0; vi < d; ++vi) out.witness[pt_of[vi]] = lp.x[vi] - dist_s<S>(sp, pt_of[vi], base);
  return out;
}

// Pointwise-minimal optimal witness: Bellman-Ford from the base over the
// difference-constraint graph of the feasibility system plus the equalities
// forced by complementary slackness with one optimal flow.
template <class S>
std::vector<S> lex_min_witness(const Measure& mu) {
  const auto& sp = mu.space();
  const int n = sp.size();
  const auto primal = solve_primal<S>(mu);

  std::vector<S> dist(n, detail::ScalarTraits<S>::zero());
  std::vector<char> reached(n, 0);
  reached[sp.base()] = 1;

  auto relax_all = [&]() {
    bool changed = false;
    for (int a = 0; a < n; ++a) {
      if (!reached[a]) continue;
      for (int bp = 0; bp < n; ++bp) {
        if (a == bp) continue;
        const S nd = dist[a] + dist_s<S>(sp, a, bp);
        if (!reached[bp] || nd < dist[bp]) {
          reached[bp] = 1;
          dist[bp] = nd;
          changed = true;
        }
      }
    }
    for (const auto& [x, y, f] : primal.arcs) {
      (void)f;
      if (!reached[y]) continue;
      const S nd = dist[y] - dist_s<S>(sp, x, y);
      if (!reached[x] || nd < dist[x]) {
        reached[x] = 1;
        dist[x] = nd;
        changed = true;
      }
    }
    return changed;
  };
  for (int round = 0; round < n; ++round) {
    if (!relax_all()) break;
  }
  if constexpr (detail::ScalarTraits<S>::exact) {
    if (relax_all()) throw std::logic_error("kr_norm_dual: negative cycle in the optimality system");
  }

  std::vector<S> f(n);
  for (int i = 0; i < n; ++i) f[i] = detail::ScalarTraits<S>::zero() - dist[i];
  return f;
}

template <class S>
DualResult dual_with_witness(const Measure& mu, WitnessMode mode) {
  DualT<S> raw = solve_dual<S>(mu);
  DualResult out;
  out.value = make_num(raw.value);

  std::vector<S> w;
  if (mu.is_zero()) {
    w.assign(mu.space().size(), detail::ScalarTraits<S>::zero());
  } else if (mode == WitnessMode::LexMin) {
    w = lex_min_witness<S>(mu);
    // The canonical witness must attain the LP optimum.
    S attained = detail::ScalarTraits<S>::zero();
    for (const auto& [i, v] : mu.coeffs())
      attained = attained + detail::ScalarTraits<S>::from_rational(v) * w[i];
    if constexpr (detail::ScalarTraits<S>::exact) {
      if (attained != raw.value)
        throw std::logic_error("kr_norm_dual: witness does not attain the LP optimum");
    } else {
      const double scale = 1.0 + std::abs(static_cast<double>(raw.value));
      if (std::abs(static_cast<double>(attained - raw.value)) > 1e-7 * scale)
        throw std::logic_error("kr_norm_dual: float witness drifted from the LP optimum");
    }
  } else {
    w = std::move(raw.witness);
  }

  out.witness_d.resize(w.size());
  if constexpr (detail::ScalarTraits<S>::exact) {
    out.witness_q.assign(w.begin(), w.end());
    for (std::size_t i = 0; i < w.size(); ++i) out.witness_d[i] = to_double(out.witness_q[i]);
  } else {
    for (std::size_t i = 0; i < w.size(); ++i) out.witness_d[i] = static_cast<double>(w[i]);
  }
  return out;
}

}  // namespace

Num kr_norm(const Measure& mu) {
  if (mu.space().exact()) return Num(solve_primal<Rational>(mu).cost);
  return Num(solve_primal<double>(mu).cost);
}

DualResult kr_norm_dual(const Measure& mu, WitnessMode mode) {
  if (mu.space().exact()) return dual_with_witness<Rational>(mu, mode);
  return dual_with_witness<double>(mu, mode);
}

namespace {

template <class S>
OperatorNormResult operator_norm_impl(const LinearOperator& T) {
  const auto& sp = T.space();
  const int n = sp.size();
  OperatorNormResult res;
  bool have = false;
  S best = detail::ScalarTraits<S>::zero();
  // ||T(-m)|| = ||T m||, so unordered pairs cover every molecule.
  for (int x = 0; x < n; ++x) {
    for (int y = x + 1; y < n; ++y) {
      const Measure img = T.apply(Measure::molecule(sp, x, y));
      const S val = solve_primal<S>(img).cost / dist_s<S>(sp, x, y);
      if (!have || val > best) {
        have = true;
        best = val;
        res.mol_x = x;
        res.mol_y = y;
      }
    }
  }
  if (!have) {  // single-point space: only the zero operator exists
    res.value = make_num(detail::ScalarTraits<S>::zero());
    return res;
  }
  res.value = make_num(best);
  return res;
}

}  // namespace

OperatorNormResult operator_norm_detailed(const LinearOperator& T) {
  if (T.space().exact()) return operator_norm_impl<Rational>(T);
  return operator_norm_impl<double>(T);
}

Num operator_norm(const LinearOperator& T) { return operator_norm_detailed(T).value; }

}  // namespace freelab
