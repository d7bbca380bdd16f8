#include "freelab/extensional.hpp"

#include "freelab/transport.hpp"

#include <algorithm>
#include <random>

namespace freelab {

CircleUnionEnumeration::CircleUnionEnumeration(int k_max)
    : layout_(k_max), space_(build_circle_union(k_max)) {
  std::vector<std::vector<int>> oriented(k_max);
  for (int k = 1; k <= k_max; ++k) {
    oriented[k - 1].resize(layout_.circle_size(k));
    for (int r = 1; r <= layout_.circle_size(k); ++r) oriented[k - 1][r - 1] = r;
  }
  build(oriented);
}

CircleUnionEnumeration::CircleUnionEnumeration(int k_max,
                                               const std::vector<std::vector<int>>& rim_order)
    : layout_(k_max), space_(build_circle_union(k_max)) {
  build(rim_order);
}

void CircleUnionEnumeration::build(const std::vector<std::vector<int>>& rim_order) {
  if (static_cast<int>(rim_order.size()) != layout_.k_max)
    throw std::invalid_argument("need one rim order per circle level");
  enum_to_point_.assign(1, space_.base());
  for (int k = 1; k <= layout_.k_max; ++k) {
    const auto& ord = rim_order[k - 1];
    if (static_cast<int>(ord.size()) != layout_.circle_size(k))
      throw std::invalid_argument("rim order size mismatch on circle " + std::to_string(k));
    std::vector<char> seen(layout_.circle_size(k) + 1, 0);
    for (int r : ord) {
      if (r < 1 || r > layout_.circle_size(k) || seen[r])
        throw std::invalid_argument("rim order is not a permutation on circle " + std::to_string(k));
      seen[r] = 1;
      enum_to_point_.push_back(layout_.point_of(k, r));
    }
  }
  point_to_enum_.assign(space_.size(), -1);
  for (int i = 0; i < static_cast<int>(enum_to_point_.size()); ++i)
    point_to_enum_[enum_to_point_[i]] = i;
}

int CircleUnionEnumeration::level_at(int i) const {
  if (i < 1 || i > last()) throw std::out_of_range("enumeration index out of range");
  return layout_.level_of(enum_to_point_[i]);
}

CircleUnionEnumeration enumerate_circle_union(int k_max) { return CircleUnionEnumeration(k_max); }

NeighbourPair neighbours(const CircleUnionEnumeration& en, int i, int point) {
  const auto& lay = en.layout();
  if (i < 0 || i > en.last()) throw std::out_of_range("enumeration index out of range");
  const int base = en.space().base();
  if (point == base) return {base, base};
  const int lvl = lay.level_of(point);
  if (lvl > en.covered_level(i))
    throw std::invalid_argument("point lies on a circle above the covered level");
  if (en.in_prefix(i, point)) return {point, point};

  const int n = lay.circle_size(lvl);
  const int r = lay.rim_of(point);
  NeighbourPair out;
  for (int step = 1; step <= n; ++step) {
    const int rr = ((r - 1 - step) % n + n) % n + 1;  // walking left
    if (en.in_prefix(i, lay.point_of(lvl, rr))) {
      out.left = lay.point_of(lvl, rr);
      break;
    }
  }
  for (int step = 1; step <= n; ++step) {
    const int rr = (r - 1 + step) % n + 1;  // walking right
    if (en.in_prefix(i, lay.point_of(lvl, rr))) {
      out.right = lay.point_of(lvl, rr);
      break;
    }
  }
  if (out.left < 0 || out.right < 0)
    throw std::logic_error("covered circle without enumerated points");
  return out;
}

namespace {

struct Weights {
  int left, right;       // neighbour points
  Rational gamma;        // weight of the left neighbour
};

Weights column_weights(const CircleUnionEnumeration& en, int i, int point) {
  const auto& lay = en.layout();
  const auto nb = neighbours(en, i, point);
  const int lvl = lay.level_of(point);
  const int n = lay.circle_size(lvl);
  const long long dl = directed_distance(n, lay.rim_of(point), lay.rim_of(nb.left), RimDirection::Left);
  const long long dr = directed_distance(n, lay.rim_of(point), lay.rim_of(nb.right), RimDirection::Right);
  Weights w{nb.left, nb.right, Rational(dr) / Rational(dl + dr)};
  return w;
}

}  // namespace

Rational interpolate(const CircleUnionEnumeration& en, int i, const std::vector<Rational>& f,
                     int point) {
  if (static_cast<int>(f.size()) != i + 1)
    throw std::invalid_argument("interpolation needs one value per D_i element");
  if (!f.empty() && f[0] != 0) throw std::invalid_argument("value at the base must be 0");
  if (point == en.space().base()) return Rational(0);
  if (en.in_prefix(i, point)) return f[en.index_of_point(point)];
  const Weights w = column_weights(en, i, point);
  return w.gamma * f[en.index_of_point(w.left)] +
         (Rational(1) - w.gamma) * f[en.index_of_point(w.right)];
}

std::vector<Rational> apply_extension(const CircleUnionEnumeration& en, int i,
                                      const std::vector<Rational>& f) {
  const auto& sp = en.space();
  const auto& lay = en.layout();
  std::vector<Rational> out(sp.size(), Rational(0));
  for (int p = 0; p < sp.size(); ++p) {
    if (p == sp.base()) continue;
    if (lay.level_of(p) > en.covered_level(i)) continue;  // zero beyond the covered circles
    out[p] = interpolate(en, i, f, p);
  }
  return out;
}

LinearOperator extension_operator(const CircleUnionEnumeration& en, int i) {
  const auto& sp = en.space();
  const auto& lay = en.layout();
  LinearOperator T(sp);
  for (int p = 0; p < sp.size(); ++p) {
    if (p == sp.base()) continue;
    if (lay.level_of(p) > en.covered_level(i)) continue;
    if (en.in_prefix(i, p)) {
      T.set_column(p, {{p, Rational(1)}});
      continue;
    }
    const Weights w = column_weights(en, i, p);
    T.set_column(p, {{w.left, w.gamma}, {w.right, Rational(1) - w.gamma}});
  }
  return T;
}

ProjectionFamily extensional_family(const CircleUnionEnumeration& en) {
  ProjectionFamily fam;
  fam.space = &en.space();
  fam.P.reserve(en.last() + 1);
  for (int i = 0; i <= en.last(); ++i) fam.P.push_back(extension_operator(en, i));
  return fam;
}

CoefficientLedger interpolation_ledger(const CircleUnionEnumeration& en) {
  CoefficientLedger led;
  led.rows.resize(en.last() + 1);
  for (int n = 1; n <= en.last(); ++n) {
    const int p = en.point_at(n);
    if (en.layout().level_of(p) > en.covered_level(n - 1)) continue;  // fresh circle: empty row
    const Weights w = column_weights(en, n - 1, p);
    SparseVec row;
    const int il = en.index_of_point(w.left);
    const int ir = en.index_of_point(w.right);
    if (il >= 1) row.emplace_back(il, w.gamma);
    if (ir >= 1) row.emplace_back(ir, Rational(1) - w.gamma);
    led.rows[n] = sparse_normalize(std::move(row));
  }
  return led;
}

// ---------------------------------------------------------------------------

ExtSuiteReport verify_extensional_suite(const CircleUnionEnumeration& en, int i_lo, int i_hi,
                                        int n_random_f, unsigned long long seed) {
  const auto& sp = en.space();
  const auto& lay = en.layout();
  if (i_lo < 0 || i_hi > en.last() || i_lo > i_hi) throw std::out_of_range("bad level range");

  ExtSuiteReport rep;
  std::vector<LinearOperator> T;
  T.reserve(i_hi - i_lo + 2);
  for (int i = i_lo; i <= std::min(i_hi + 1, en.last()); ++i) T.push_back(extension_operator(en, i));

  for (int i = i_lo; i <= i_hi; ++i) {
    ExtLevelResult lvl;
    lvl.i = i;
    const auto& Ti = T[i - i_lo];
    lvl.norm = operator_norm(Ti);
    lvl.rank = Ti.rank();
    if (i + 1 <= en.last()) {
      const auto& Tn = T[i + 1 - i_lo];
      lvl.commutes_next = (Tn.compose(Ti) == Ti) && (Ti.compose(Tn) == Ti);
    }
    if (i == 0) {
      if (!(lvl.norm == Num(Rational(0)))) rep.norms_ok = false;
    } else if (!(lvl.norm == Num(Rational(1)))) {
      rep.norms_ok = false;
    }
    if (lvl.rank != i) rep.ranks_ok = false;
    if (!lvl.commutes_next) rep.commute_ok = false;
    rep.per_level.push_back(std::move(lvl));
  }

  // Randomized extension sweep: rational profiles on D_i, checked pairwise.
  std::mt19937_64 rng(seed);
  auto rand_rational = [&]() {
    const long long num = static_cast<long long>(rng() % 49) - 24;
    const long long den = 1 + static_cast<long long>(rng() % 4);
    return Rational(num, den);
  };
  for (int i = i_lo; i <= i_hi; ++i) {
    for (int rep_i = 0; rep_i < n_random_f; ++rep_i) {
      std::vector<Rational> f(i + 1, Rational(0));
      for (int j = 1; j <= i; ++j) f[j] = rand_rational();
      // ||f|| over D_i (base included).
      Rational fn(0);
      for (int a = 0; a <= i; ++a)
        for (int b = a + 1; b <= i; ++b) {
          const Rational r =
              abs(f[a] - f[b]) / sp.dist_q(en.point_at(a), en.point_at(b));
          if (r > fn) fn = r;
        }
      const auto g = apply_extension(en, i, f);
      for (int a = 0; a <= i; ++a) {
        if (g[en.point_at(a)] != f[a]) rep.fixes_prefix_ok = false;
      }
      for (int x = 0; x < sp.size(); ++x)
        for (int y = x + 1; y < sp.size(); ++y) {
          if (abs(g[x] - g[y]) > fn * sp.dist_q(x, y)) rep.lipschitz_ok = false;
          if (x == sp.base() || y == sp.base()) {
            ++rep.pairs_centre;
          } else if (lay.level_of(x) != lay.level_of(y)) {
            ++rep.pairs_cross_circle;
          } else if (lay.level_of(x) == en.covered_level(i) && !en.in_prefix(i, x) &&
                     !en.in_prefix(i, y)) {
            const auto nx = neighbours(en, i, x);
            const auto ny = neighbours(en, i, y);
            if (nx.left == ny.left && nx.right == ny.right) ++rep.pairs_same_circle_shared;
            const int n = lay.circle_size(lay.level_of(x));
            const long long dr = directed_distance(n, lay.rim_of(x), lay.rim_of(y), RimDirection::Right);
            const long long dl = directed_distance(n, lay.rim_of(x), lay.rim_of(y), RimDirection::Left);
            if (dr <= dl) ++rep.pairs_right_metric;
            else ++rep.pairs_left_metric;
          }
        }
    }
  }
  return rep;
}

}  // namespace freelab
