#include "freelab/extensional.hpp"

#include "support.hpp"

#include <doctest.h>

using namespace freelab;

TEST_CASE("enumeration levels follow the index thresholds") {
  const CircleUnionEnumeration en(3);
  CHECK(en.last() == 84);
  CHECK(en.level_at(1) == 1);   // 1 <= 1 < 5
  CHECK(en.level_at(4) == 1);
  CHECK(en.level_at(5) == 2);   // 5 <= 5 < 21
  CHECK(en.level_at(20) == 2);
  CHECK(en.level_at(21) == 3);  // 21 <= 21 < 85
  CHECK(en.covered_level(0) == 0);
  // Consecutive points on one circle are right-adjacent.
  const auto& lay = en.layout();
  for (int i = 1; i < en.last(); ++i) {
    if (en.level_at(i) != en.level_at(i + 1)) continue;
    const int n = lay.circle_size(en.level_at(i));
    CHECK(directed_distance(n, lay.rim_of(en.point_at(i)), lay.rim_of(en.point_at(i + 1)),
                            RimDirection::Right) == 1);
  }
}

TEST_CASE("neighbour functions") {
  const CircleUnionEnumeration en(2);
  const auto& lay = en.layout();
  // D_5 meets the outer circle in x5 alone.
  for (int r = 2; r <= 16; ++r) {
    const auto nb = neighbours(en, 5, lay.point_of(2, r));
    CHECK(nb.left == en.point_at(5));
    CHECK(nb.right == en.point_at(5));
  }
  // D_6 has x5 (rim 1) and x6 (rim 2); three steps right of x6 is rim 5.
  const auto nb = neighbours(en, 6, lay.point_of(2, 5));
  CHECK(nb.left == en.point_at(6));
  CHECK(nb.right == en.point_at(5));
  // Fixed points of the prefix.
  for (int i = 1; i <= 6; ++i) {
    const auto self = neighbours(en, 6, en.point_at(i));
    CHECK(self.left == en.point_at(i));
    CHECK(self.right == en.point_at(i));
  }
  CHECK(neighbours(en, 6, 0).left == 0);
  // Outer circle is above the covered level of D_4.
  CHECK_THROWS_AS(neighbours(en, 4, lay.point_of(2, 3)), std::invalid_argument);
}

TEST_CASE("interpolation values") {
  const CircleUnionEnumeration en(2);
  const auto& lay = en.layout();
  std::vector<Rational> f(7, Rational(0));
  f[5] = Rational(0);
  f[6] = Rational(15);
  // d^l to x6 (rim 2) is 3, d^r to x5 (rim 1) is 12.
  CHECK(interpolate(en, 6, f, lay.point_of(2, 5)) == 12);
  // Degenerate single-neighbour case: constant value.
  std::vector<Rational> f5(6, Rational(0));
  f5[5] = Rational(7);
  for (int r = 2; r <= 16; ++r) CHECK(interpolate(en, 5, f5, lay.point_of(2, r)) == 7);
  // Prefix points evaluate to their own values.
  CHECK(interpolate(en, 6, f, en.point_at(6)) == 15);
}

TEST_CASE("extension operators: columns, prefix fixing, fresh circles") {
  const CircleUnionEnumeration en(2);
  const auto& lay = en.layout();
  const auto t5 = extension_operator(en, 5);
  for (int r = 2; r <= 16; ++r)
    CHECK(t5.column(lay.point_of(2, r)) == SparseVec{{en.point_at(5), Rational(1)}});
  for (int i = 1; i <= 5; ++i)
    CHECK(t5.column(en.point_at(i)) == SparseVec{{en.point_at(i), Rational(1)}});

  // D_4 covers the inner circle exactly; the outer circle is annihilated.
  const auto t4 = extension_operator(en, 4);
  for (int r = 1; r <= 4; ++r)
    CHECK(t4.column(lay.point_of(1, r)) == SparseVec{{lay.point_of(1, r), Rational(1)}});
  for (int r = 1; r <= 16; ++r) CHECK(t4.column(lay.point_of(2, r)).empty());

  // Convexity: every column is empty, a unit, or a two-entry convex mix.
  for (int i = 0; i <= en.last(); ++i) {
    const auto t = extension_operator(en, i);
    for (int p = 0; p < en.space().size(); ++p) {
      const auto& col = t.column(p);
      if (col.empty()) continue;
      Rational sum(0);
      for (const auto& [idx, v] : col) {
        CHECK(v > 0);
        sum += v;
      }
      CHECK(sum == 1);
    }
  }
}

TEST_CASE("verification suite at k_max = 2") {
  const CircleUnionEnumeration en(2);
  const auto rep = verify_extensional_suite(en, 0, en.last(), 3, 17);
  CHECK(rep.norms_ok);
  CHECK(rep.ranks_ok);
  CHECK(rep.commute_ok);
  CHECK(rep.lipschitz_ok);
  CHECK(rep.fixes_prefix_ok);
  CHECK(rep.all_ok());
  // Every pair class of the case analysis occurs in the sweep.
  CHECK(rep.pairs_cross_circle > 0);
  CHECK(rep.pairs_centre > 0);
  CHECK(rep.pairs_same_circle_shared > 0);
  CHECK(rep.pairs_right_metric > 0);
  CHECK(rep.pairs_left_metric > 0);
  for (const auto& lvl : rep.per_level) {
    if (lvl.i == 0) CHECK(lvl.norm.rat() == 0);
    else CHECK(lvl.norm.rat() == 1);
    CHECK(lvl.rank == lvl.i);
  }
}

TEST_CASE("iterated one-step extensions reproduce the operators") {
  const CircleUnionEnumeration en(2);
  const auto fam = extensional_family(en);
  std::vector<int> order(en.last() + 1);
  for (int i = 0; i <= en.last(); ++i) order[i] = en.point_at(i);
  const auto via_ledger =
      projections_from_coefficients(en.space(), order, interpolation_ledger(en));
  REQUIRE(via_ledger.levels() == fam.levels());
  for (int i = 0; i <= fam.levels(); ++i) CHECK(via_ledger.P[i] == fam.P[i]);

  // Absorption chain: composing with all later operators changes nothing.
  for (int i : {0, 3, 7, 15}) {
    LinearOperator acc = fam.P[i];
    for (int j = i + 1; j <= fam.levels(); ++j) acc = acc.compose(fam.P[j]);
    CHECK(acc == fam.P[i]);
  }
}

TEST_CASE("any per-circle enumeration stays monotone") {
  // Reversed rim walk on the inner circle, a fixed shuffle on the outer one.
  std::vector<std::vector<int>> rims(2);
  rims[0] = {1, 4, 3, 2};
  rims[1] = {7, 3, 15, 1, 9, 5, 11, 13, 2, 4, 6, 8, 10, 12, 14, 16};
  const CircleUnionEnumeration en(2, rims);
  const auto rep = verify_extensional_suite(en, 0, en.last(), 2, 23);
  CHECK(rep.all_ok());
}
