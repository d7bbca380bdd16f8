// Dense-tableau primal simplex with Bland's anti-cycling rule, templated on
// the scalar. With rational entries every pivot is exact, which is what the
// transport-norm certification leans on; the double instantiation serves
// float spaces with a tiny comparison slack.
#pragma once

#include "freelab/num.hpp"

#include <stdexcept>
#include <vector>

namespace freelab::detail {

template <class S>
struct LpResult {
  bool unbounded = false;
  S objective{};
  std::vector<S> x;  // structural variables only
};

/// Maximize c.x subject to A x <= b, x >= 0, with every b_i >= 0 so the
/// all-slack basis is feasible from the start.
template <class S>
LpResult<S> simplex_max(const std::vector<std::vector<S>>& A, const std::vector<S>& b,
                        const std::vector<S>& c) {
  using T = ScalarTraits<S>;
  const int m = static_cast<int>(A.size());
  const int n = static_cast<int>(c.size());
  for (const auto& bi : b)
    if (T::negative(bi)) throw std::invalid_argument("simplex_max: negative right-hand side");

  // Tableau columns: n structural + m slack. basis[r] = column basic in row r.
  std::vector<std::vector<S>> t(m, std::vector<S>(n + m, T::zero()));
  std::vector<S> rhs = b;
  std::vector<S> cost(n + m, T::zero());
  std::vector<int> basis(m);
  for (int r = 0; r < m; ++r) {
    for (int j = 0; j < n; ++j) t[r][j] = A[r][j];
    t[r][n + r] = S(1);
    basis[r] = n + r;
  }
  for (int j = 0; j < n; ++j) cost[j] = c[j];
  S objective = T::zero();

  while (true) {
    // Bland: entering column = lowest index with positive reduced cost.
    int e = -1;
    for (int j = 0; j < n + m; ++j) {
      if (T::positive(cost[j])) { e = j; break; }
    }
    if (e < 0) break;

    // Ratio test; ties broken by the smallest basis variable index (Bland).
    int r = -1;
    for (int i = 0; i < m; ++i) {
      if (!T::positive(t[i][e])) continue;
      if (r < 0) { r = i; continue; }
      const S lhs = rhs[i] * t[r][e];
      const S rhsv = rhs[r] * t[i][e];
      if (lhs < rhsv || (lhs == rhsv && basis[i] < basis[r])) r = i;
    }
    if (r < 0) {
      LpResult<S> res;
      res.unbounded = true;
      return res;
    }

    // Pivot on (r, e).
    const S piv = t[r][e];
    for (auto& v : t[r]) v = v / piv;
    rhs[r] = rhs[r] / piv;
    t[r][e] = S(1);
    for (int i = 0; i < m; ++i) {
      if (i == r) continue;
      const S f = t[i][e];
      if (f == T::zero()) continue;
      for (int j = 0; j < n + m; ++j) t[i][j] = t[i][j] - f * t[r][j];
      t[i][e] = T::zero();
      rhs[i] = rhs[i] - f * rhs[r];
    }
    const S cf = cost[e];
    if (!(cf == T::zero())) {
      for (int j = 0; j < n + m; ++j) cost[j] = cost[j] - cf * t[r][j];
      cost[e] = T::zero();
      objective = objective + cf * rhs[r];
    }
    basis[r] = e;
  }

  LpResult<S> res;
  res.objective = objective;
  res.x.assign(n, T::zero());
  for (int i = 0; i < m; ++i)
    if (basis[i] < n) res.x[basis[i]] = rhs[i];
  return res;
}

}  // namespace freelab::detail
