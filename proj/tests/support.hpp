// Shared test fixtures: the C4 reference system, seeded random spaces,
// measures and systems, and brute-force oracles kept independent of the
// library paths they check.
#pragma once

#include "freelab/basis.hpp"
#include "freelab/circle_search.hpp"
#include "freelab/metric_space.hpp"
#include "freelab/retraction.hpp"
#include "freelab/transport.hpp"

#include <algorithm>
#include <random>
#include <vector>

namespace freelab::test {

/// Order (0, x1, x2, x3, x4); parents x2->x1, x3->x2, x4->x1.
inline RetractionSystem c4_reference(const PointedMetricSpace& c4) {
  return RetractionSystem(c4, {0, 1, 2, 3, 4}, {-1, 0, 1, 2, 1});
}

/// Random exact metric space: positive rational weights on the complete
/// graph, closed under shortest paths, so every triangle holds.
inline PointedMetricSpace random_exact_space(std::mt19937_64& rng, int max_points) {
  const int n = 2 + static_cast<int>(rng() % (max_points - 1));
  std::vector<Rational> d(static_cast<std::size_t>(n) * n, Rational(0));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const Rational w(1 + static_cast<long long>(rng() % 20), 1 + static_cast<long long>(rng() % 3));
      d[i * n + j] = d[j * n + i] = w;
    }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        const Rational via = d[i * n + k] + d[k * n + j];
        if ((i != k && j != k) && via < d[i * n + j]) d[i * n + j] = via;
      }
  std::vector<std::string> labels(n);
  for (int i = 0; i < n; ++i) labels[i] = "p" + std::to_string(i);
  return PointedMetricSpace(std::move(labels), std::move(d), 0);
}

inline Measure random_measure(std::mt19937_64& rng, const PointedMetricSpace& sp) {
  SparseVec coeffs;
  for (int i = 0; i < sp.size(); ++i) {
    if (i == sp.base()) continue;
    if (rng() % 2 == 0) continue;
    const long long num = 1 + static_cast<long long>(rng() % 5);
    const long long den = 1 + static_cast<long long>(rng() % 3);
    Rational c(num, den);
    if (rng() % 2 == 0) c = -c;
    coeffs.emplace_back(i, c);
  }
  return Measure(sp, std::move(coeffs));
}

inline RetractionSystem random_system(std::mt19937_64& rng, const PointedMetricSpace& sp) {
  std::vector<int> order;
  for (int i = 0; i < sp.size(); ++i)
    if (i != sp.base()) order.push_back(i);
  for (int i = static_cast<int>(order.size()) - 1; i > 0; --i)
    std::swap(order[i], order[rng() % (i + 1)]);
  order.insert(order.begin(), sp.base());
  std::vector<int> parent(order.size(), -1);
  for (std::size_t k = 1; k < order.size(); ++k)
    parent[k] = static_cast<int>(rng() % k);
  return RetractionSystem(sp, order, parent);
}

/// Independent Lipschitz-constant oracle: direct max over ordered pairs.
inline Rational brute_lip(const RetractionSystem& sys, int level) {
  const auto& sp = sys.space();
  Rational best(0);
  for (int x = 0; x < sp.size(); ++x)
    for (int y = 0; y < sp.size(); ++y) {
      if (x == y) continue;
      const Rational r = sp.dist_q(sys.phi(level, x), sys.phi(level, y)) / sp.dist_q(x, y);
      if (r > best) best = r;
    }
  return best;
}

/// Independent operator-norm oracle: molecule enumeration with the LP route
/// for each image norm (the implementation under test uses the flow route).
inline Rational oracle_operator_norm(const LinearOperator& T) {
  const auto& sp = T.space();
  Rational best(0);
  for (int x = 0; x < sp.size(); ++x)
    for (int y = 0; y < sp.size(); ++y) {
      if (x == y) continue;
      const Measure img = T.apply(Measure::molecule(sp, x, y));
      const Rational v = kr_norm_dual(img, WitnessMode::None).value.rat() / sp.dist_q(x, y);
      if (v > best) best = v;
    }
  return best;
}

/// Exhaustive minimum over every system on the circle of the worst
/// Lipschitz constant (brute force; n small).
inline Rational brute_min_max_lip(const PointedMetricSpace& circle) {
  const int n = circle.size() - 1;
  std::vector<int> rim(n);
  for (int i = 0; i < n; ++i) rim[i] = i + 1;
  Rational best(-1);
  std::vector<int> parent(n + 1, -1);
  do {
    std::vector<int> order(n + 1);
    order[0] = 0;
    for (int i = 0; i < n; ++i) order[i + 1] = rim[i];
    // enumerate parent assignments by mixed radix counting
    std::vector<int> par(n + 1, 0);
    while (true) {
      for (int k = 1; k <= n; ++k) parent[k] = par[k];
      RetractionSystem sys(circle, order, parent);
      const Rational m = sys.max_lip().rat();
      if (best < 0 || m < best) best = m;
      int k = 2;
      for (; k <= n; ++k) {
        if (++par[k] < k) break;
        par[k] = 0;
      }
      if (k > n) break;
    }
  } while (std::next_permutation(rim.begin(), rim.end()));
  return best;
}

}  // namespace freelab::test
