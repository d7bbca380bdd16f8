#include "freelab/basis.hpp"

#include "support.hpp"

#include <doctest.h>

using namespace freelab;
using freelab::test::c4_reference;

TEST_CASE("projections from the reference system") {
  const auto c4 = build_circle(4);
  const auto sys = c4_reference(c4);
  const auto fam = projections_from_system(sys);
  REQUIRE(fam.levels() == 4);
  CHECK(fam.P[0] == LinearOperator::zero(c4));
  CHECK(fam.P[4] == LinearOperator::identity(c4));
  for (int x = 1; x <= 4; ++x)
    CHECK(fam.P[1].column(x) == SparseVec{{1, Rational(1)}});
  CHECK(verify_projection_family(fam).ok());
}

TEST_CASE("telescoping sums to the identity") {
  const auto c4 = build_circle(4);
  const auto fam = projections_from_system(c4_reference(c4));
  LinearOperator acc = LinearOperator::zero(c4);
  for (int i = 0; i < fam.levels(); ++i) acc = acc.plus(fam.P[i + 1].minus(fam.P[i]));
  CHECK(acc == LinearOperator::identity(c4).minus(fam.P[0]));
}

TEST_CASE("coefficient ledgers reproduce retractional projections") {
  const auto c4 = build_circle(4);
  const auto sys = c4_reference(c4);
  const auto direct = projections_from_system(sys);
  const auto via_ledger = projections_from_coefficients(c4, sys.order(), retractional_ledger(sys));
  REQUIRE(direct.levels() == via_ledger.levels());
  for (int i = 0; i <= direct.levels(); ++i) CHECK(direct.P[i] == via_ledger.P[i]);
}

TEST_CASE("empty ledger rows null the extension") {
  const auto c4 = build_circle(4);
  CoefficientLedger led;
  led.rows.resize(5);  // every row empty: E_n f vanishes beyond mu_n
  const auto fam = projections_from_coefficients(c4, {0, 1, 2, 3, 4}, led);
  CHECK(fam.P[1].column(1) == SparseVec{{1, Rational(1)}});
  CHECK(fam.P[1].column(2).empty());
  CHECK(fam.P[1].column(3).empty());

  CoefficientLedger bad;
  bad.rows.resize(5);
  bad.rows[2] = {{3, Rational(1)}};  // forward reference
  CHECK_THROWS_AS(projections_from_coefficients(c4, {0, 1, 2, 3, 4}, bad), std::invalid_argument);
}

TEST_CASE("basis constants") {
  const auto c4 = build_circle(4);
  const auto sys = c4_reference(c4);
  CHECK(basis_constant(projections_from_system(sys)).rat() == 2);

  // Path graph peeled from one end: all constants are 1.
  const int n = 5;
  std::vector<Rational> d(n * n, Rational(0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) d[i * n + j] = Rational(std::abs(i - j));
  const PointedMetricSpace path({"a0", "a1", "a2", "a3", "a4"}, d, 0);
  std::vector<int> order{0, 1, 2, 3, 4}, parent{-1, 0, 1, 2, 3};
  const RetractionSystem psys(path, order, parent);
  CHECK(basis_constant(projections_from_system(psys)).rat() == 1);

  // Two-point space: the only projection family is (0, I).
  const PointedMetricSpace two({"o", "p"},
                               std::vector<Rational>{Rational(0), Rational(3), Rational(3), Rational(0)}, 0);
  const RetractionSystem tsys(two, {0, 1}, {-1, 0});
  CHECK(basis_constant(projections_from_system(tsys)).rat() == 1);
}

TEST_CASE("retractional norms equal the Lipschitz constants level by level") {
  const auto c4 = build_circle(4);
  const auto sys = c4_reference(c4);
  const auto fam = projections_from_system(sys);
  for (int i = 0; i <= 4; ++i)
    CHECK(operator_norm(fam.P[i]).rat() == sys.lip_constant(i).rat());
}

TEST_CASE("signed projection sums") {
  const auto c4 = build_circle(4);
  const auto fam = projections_from_system(c4_reference(c4));
  CHECK(signed_sum_norm(fam, {1, 1, 1, 1}).rat() == 1);            // telescopes to I
  CHECK(signed_sum_norm(fam, {1, -1, -1, -1}).rat() == Rational(3, 2));  // 2 P1 - I
  CHECK(signed_sum_norm(fam, {1, -1, 1, -1}).rat() >= 3);
  CHECK_THROWS_AS(signed_sum_norm(fam, {1, -1}), std::invalid_argument);
  CHECK_THROWS_AS(signed_sum_norm(fam, {1, 0, 1, 1}), std::invalid_argument);
}

TEST_CASE("alternating-sign image of a unit molecule") {
  // (delta_x3 - delta_x4) under P1 - (P2-P1) + (P3-P2) - (P4-P3).
  const auto c4 = build_circle(4);
  const auto fam = projections_from_system(c4_reference(c4));
  LinearOperator op = LinearOperator::zero(c4);
  const std::vector<int> eps{1, -1, 1, -1};
  for (int i = 0; i < 4; ++i) {
    auto diff = fam.P[i + 1].minus(fam.P[i]);
    op = op.plus(eps[i] == 1 ? diff : diff.scaled(Rational(-1)));
  }
  const Measure img = op.apply(Measure::molecule(c4, 3, 4));
  CHECK(img.coeffs() == SparseVec{{2, Rational(-2)}, {3, Rational(1)}, {4, Rational(1)}});
  CHECK(kr_norm(img).rat() == 3);
}

TEST_CASE("unconditionality scans") {
  const auto c4 = build_circle(4);
  const auto fam = projections_from_system(c4_reference(c4));
  const auto ex = unconditional_constant_exhaustive(fam);
  CHECK(ex.exhaustive);
  CHECK(ex.patterns_scanned == 16);
  CHECK(ex.value.rat() >= 3);
  CHECK(signed_sum_norm(fam, {1, -1, 1, -1}).rat() == ex.value.rat());
  CHECK(basis_constant(fam).rat() <= ex.value.rat());

  const auto sampled = unconditional_constant_sampled(fam, 100, 7);
  CHECK(sampled.value.rat() <= ex.value.rat());
  CHECK(signed_sum_norm(fam, sampled.eps).rat() == sampled.value.rat());

  // Two-point family: only +-(P1 - P0).
  const PointedMetricSpace two({"o", "p"},
                               std::vector<Rational>{Rational(0), Rational(2), Rational(2), Rational(0)}, 0);
  const auto tfam = projections_from_system(RetractionSystem(two, {0, 1}, {-1, 0}));
  CHECK(unconditional_constant_exhaustive(tfam).value.rat() == 1);

  CHECK_THROWS_AS(unconditional_constant_exhaustive(fam, 3), std::invalid_argument);
}

TEST_CASE("divergent chain search on grids and circles") {
  const auto g = build_grid_net(3, 2);
  const auto gsys = grid_row_major_system(g, 3, 2);
  const auto pairs = find_divergent_chains(gsys, Rational(1), 3);
  REQUIRE_FALSE(pairs.empty());
  bool found = false;
  for (const auto& p : pairs)
    if (g.label(p.x) == "(1,3)" && g.label(p.y) == "(2,3)" && p.excess == 3) found = true;
  CHECK(found);
  // Deepest: a column chain against its left neighbour shares only the
  // prefix up to the column root, so the excess reaches m+1.
  CHECK(pairs.front().excess == 4);

  CHECK(find_divergent_chains(gsys, Rational(1, 2), 1).empty());

  const auto c4 = build_circle(4);
  const auto csys = c4_reference(c4);
  const auto cpairs = find_divergent_chains(csys, Rational(1), 2);
  bool c_found = false;
  for (const auto& p : cpairs)
    if (p.x == 3 && p.y == 4 && p.excess == 2) c_found = true;
  CHECK(c_found);
}

TEST_CASE("conditionality witness on the m=3 grid") {
  const auto g = build_grid_net(3, 2);
  const auto sys = grid_row_major_system(g, 3, 2);
  const Chain S = chain_to(sys, g.index_of("(1,3)"));
  const Chain T = chain_to(sys, g.index_of("(2,3)"));
  const auto w = lemma41_witness(sys, S, T, Rational(1), Rational(1));
  CHECK(w.n_excess == 3);
  CHECK(w.bound == 2);
  // f alternates -1/2, +1/2, -1/2 on (1,1), (1,2), (1,3); the shared prefix
  // ends after (1,0), so the first free index j = 2 is even.
  CHECK(w.f.values[g.index_of("(1,1)")] == Rational(-1, 2));
  CHECK(w.f.values[g.index_of("(1,2)")] == Rational(1, 2));
  CHECK(w.f.values[g.index_of("(1,3)")] == Rational(-1, 2));
  CHECK(w.f.values[g.index_of("(0,0)")] == 0);

  CHECK_THROWS_AS(lemma41_witness(sys, S, S, Rational(1), Rational(1)), std::invalid_argument);
}

TEST_CASE("witness signs certify the bound on small grids") {
  for (int m : {2, 3}) {
    const auto g = build_grid_net(m, 2);
    const auto sys = grid_row_major_system(g, m, 2);
    const auto pairs = find_divergent_chains(sys, Rational(1), 2);
    REQUIRE_FALSE(pairs.empty());
    const auto S = chain_to(sys, pairs.front().x);
    const auto T = chain_to(sys, pairs.front().y);
    const auto w = lemma41_witness(sys, S, T, Rational(1), Rational(1));
    const auto fam = projections_from_system(sys);
    CHECK(signed_sum_norm(fam, w.eps).dbl() >= to_double(w.bound) - 1e-9);
  }
}
