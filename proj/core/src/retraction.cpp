#include "freelab/retraction.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace freelab {

RetractionSystem::RetractionSystem(const PointedMetricSpace& space, std::vector<int> order,
                                   std::vector<int> parent_pos)
    : space_(&space), order_(std::move(order)), parent_pos_(std::move(parent_pos)) {
  const int n = space.size();
  if (static_cast<int>(order_.size()) != n) throw std::invalid_argument("order must enumerate every point exactly once");
  if (order_[0] != space.base()) throw std::invalid_argument("order must start at the base point");
  pos_of_.assign(n, -1);
  for (int k = 0; k < n; ++k) {
    const int p = order_[k];
    if (p < 0 || p >= n || pos_of_[p] != -1) throw std::invalid_argument("order is not a permutation of the points");
    pos_of_[p] = k;
  }
  if (static_cast<int>(parent_pos_.size()) != n) throw std::invalid_argument("parent map size mismatch");
  parent_pos_[0] = -1;
  for (int k = 1; k < n; ++k) {
    if (parent_pos_[k] < 0 || parent_pos_[k] >= k)
      throw std::invalid_argument("parent of mu_" + std::to_string(k) + " must come earlier in the order");
  }
  compute_lips();
}

RetractionSystem build_system(const PointedMetricSpace& space, const std::vector<int>& order,
                              const std::vector<std::pair<int, int>>& parent_of_point) {
  std::vector<int> pos_of(space.size(), -1);
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (order[k] >= 0 && order[k] < space.size()) pos_of[order[k]] = static_cast<int>(k);
  }
  std::vector<int> parent_pos(order.size(), -1);
  for (const auto& [child, parent] : parent_of_point) {
    if (child < 0 || child >= space.size() || pos_of[child] < 0)
      throw std::invalid_argument("parent map names an unknown child point");
    if (parent < 0 || parent >= space.size() || pos_of[parent] < 0)
      throw std::invalid_argument("parent map names an unknown parent point");
    parent_pos[pos_of[child]] = pos_of[parent];
  }
  for (std::size_t k = 1; k < order.size(); ++k) {
    if (parent_pos[k] == -1) {
      if (k == 1) parent_pos[1] = 0;  // mu_1 hangs off the base by definition
      else throw std::invalid_argument("missing parent for " + space.label(order[k]));
    }
  }
  return RetractionSystem(space, order, parent_pos);
}

int RetractionSystem::phi(int i, int point) const {
  if (i < 0 || i > levels()) throw std::out_of_range("retraction level out of range");
  int pos = pos_of_.at(point);
  while (pos > i) pos = parent_pos_[pos];
  return order_[pos];
}

Num RetractionSystem::lip_constant(int i) const {
  if (i < 0 || i > levels()) throw std::out_of_range("retraction level out of range");
  return lips_[i];
}

Num RetractionSystem::max_lip() const {
  Num best = lips_[0];
  for (const auto& v : lips_) best = max(best, v);
  return best;
}

namespace {

template <class S>
std::vector<S> lips_impl(const PointedMetricSpace& sp, const std::vector<int>& order,
                         const std::vector<int>& parent_pos, const std::vector<int>& pos_of) {
  const int n = sp.size();
  const int N = n - 1;
  const auto& d = sp.raw<S>();
  auto dist = [&](int a, int b) -> const S& { return d[static_cast<std::size_t>(a) * n + b]; };

  std::vector<S> lvl(N + 1, S(0));
  for (int x = 0; x < n; ++x) {
    for (int y = x + 1; y < n; ++y) {
      const S& dxy = dist(x, y);
      int a = pos_of[x], b = pos_of[y];
      int hi = N;
      while (true) {
        const int lo = std::max(a, b);
        const S ratio = dist(order[a], order[b]) / dxy;
        for (int i = lo; i <= hi; ++i)
          if (ratio > lvl[i]) lvl[i] = ratio;
        if (lo == 0) break;
        hi = lo - 1;
        if (a > b) a = parent_pos[a];
        else b = parent_pos[b];
        if (a == b) break;  // common ancestor; zero distance below
      }
    }
  }
  return lvl;
}

}  // namespace

void RetractionSystem::compute_lips() {
  lips_.clear();
  if (space_->exact()) {
    for (auto& v : lips_impl<Rational>(*space_, order_, parent_pos_, pos_of_)) lips_.push_back(Num(std::move(v)));
  } else {
    for (double v : lips_impl<double>(*space_, order_, parent_pos_, pos_of_)) lips_.push_back(Num(v));
  }
}

// ---------------------------------------------------------------------------

std::string SystemReport::summary() const {
  std::ostringstream os;
  for (const auto& v : violations) {
    switch (v.kind) {
      case SystemViolation::Kind::ImageSet: os << "image-set"; break;
      case SystemViolation::Kind::Retraction: os << "retraction"; break;
      case SystemViolation::Kind::Commutativity: os << "commutativity"; break;
      case SystemViolation::Kind::TableShape: os << "table-shape"; break;
      case SystemViolation::Kind::TableMismatch: os << "table-mismatch"; break;
    }
    os << " (m=" << v.m << ", n=" << v.n << ", x=" << v.x << ")";
    if (!v.detail.empty()) os << " " << v.detail;
    os << "\n";
  }
  return os.str();
}

SystemReport validate_system(const RetractionSystem& sys) {
  SystemReport rep;
  const int n = sys.points();
  const int N = sys.levels();
  // Materialize the full table once; all laws are checked on it.
  std::vector<std::vector<int>> table(N + 1, std::vector<int>(n));
  for (int i = 0; i <= N; ++i)
    for (int x = 0; x < n; ++x) table[i][x] = sys.phi(i, x);

  for (int i = 0; i <= N; ++i) {
    std::set<int> image(table[i].begin(), table[i].end());
    std::set<int> expected;
    for (int k = 0; k <= i; ++k) expected.insert(sys.point_at(k));
    if (image != expected)
      rep.violations.push_back({SystemViolation::Kind::ImageSet, -1, i, -1, "phi_n image mismatch"});
    for (int k = 0; k <= i; ++k) {
      const int p = sys.point_at(k);
      if (table[i][p] != p)
        rep.violations.push_back({SystemViolation::Kind::Retraction, -1, i, p, "phi_n moves a settled point"});
    }
  }
  for (int nn = 0; nn <= N; ++nn)
    for (int mm = nn; mm <= N; ++mm)
      for (int x = 0; x < n; ++x) {
        const int a = table[mm][table[nn][x]];
        const int b = table[nn][table[mm][x]];
        if (a != table[nn][x] || b != table[nn][x])
          rep.violations.push_back({SystemViolation::Kind::Commutativity, mm, nn, x, ""});
      }
  return rep;
}

SystemReport validate_phi_table(const PointedMetricSpace& space,
                                const std::vector<std::vector<int>>& phi) {
  SystemReport rep;
  const int n = space.size();
  const int N = n - 1;
  if (static_cast<int>(phi.size()) != N + 1) {
    rep.violations.push_back({SystemViolation::Kind::TableShape, -1, -1, -1, "need one row per level 0..N"});
    return rep;
  }
  for (int i = 0; i <= N; ++i) {
    if (static_cast<int>(phi[i].size()) != n) {
      rep.violations.push_back({SystemViolation::Kind::TableShape, -1, i, -1, "row length mismatch"});
      return rep;
    }
    for (int x = 0; x < n; ++x)
      if (phi[i][x] < 0 || phi[i][x] >= n) {
        rep.violations.push_back({SystemViolation::Kind::TableShape, -1, i, x, "value out of range"});
        return rep;
      }
  }

  // Image chain: |image(phi_i)| = i+1, nested, phi_0 constant at the base.
  std::vector<int> mu;  // enumeration induced by the images
  std::set<int> prev;
  for (int i = 0; i <= N; ++i) {
    std::set<int> img(phi[i].begin(), phi[i].end());
    if (static_cast<int>(img.size()) != i + 1)
      rep.violations.push_back({SystemViolation::Kind::ImageSet, -1, i, -1, "image size is not n+1"});
    if (!std::includes(img.begin(), img.end(), prev.begin(), prev.end()))
      rep.violations.push_back({SystemViolation::Kind::ImageSet, -1, i, -1, "images are not nested"});
    if (i == 0 && !(img.size() == 1 && *img.begin() == space.base()))
      rep.violations.push_back({SystemViolation::Kind::ImageSet, -1, 0, -1, "phi_0 must collapse to the base"});
    std::vector<int> fresh;
    std::set_difference(img.begin(), img.end(), prev.begin(), prev.end(), std::back_inserter(fresh));
    if (fresh.size() == 1) mu.push_back(fresh[0]);
    prev = std::move(img);
    for (int x : prev)
      if (phi[i][x] != x)
        rep.violations.push_back({SystemViolation::Kind::Retraction, -1, i, x, "not the identity on the image"});
  }
  for (int nn = 0; nn <= N; ++nn)
    for (int mm = nn; mm <= N; ++mm)
      for (int x = 0; x < n; ++x) {
        if (phi[mm][phi[nn][x]] != phi[nn][x] || phi[nn][phi[mm][x]] != phi[nn][x])
          rep.violations.push_back({SystemViolation::Kind::Commutativity, mm, nn, x, ""});
      }
  if (!rep.ok()) return rep;

  // The laws pin the table to a tree; confirm the round trip.
  std::vector<int> parent_pos(N + 1, -1);
  std::vector<int> pos_of(n, -1);
  for (int k = 0; k <= N; ++k) pos_of[mu[k]] = k;
  for (int k = 1; k <= N; ++k) parent_pos[k] = pos_of[phi[k - 1][mu[k]]];
  RetractionSystem sys(space, mu, parent_pos);
  for (int i = 0; i <= N; ++i)
    for (int x = 0; x < n; ++x)
      if (sys.phi(i, x) != phi[i][x])
        rep.violations.push_back({SystemViolation::Kind::TableMismatch, -1, i, x, ""});
  return rep;
}

RetractionSystem system_from_phi_table(const PointedMetricSpace& space,
                                       const std::vector<std::vector<int>>& phi) {
  SystemReport rep = validate_phi_table(space, phi);
  if (!rep.ok()) throw std::invalid_argument("invalid retraction table:\n" + rep.summary());
  const int n = space.size();
  std::vector<int> mu;
  std::set<int> prev;
  for (int i = 0; i < n; ++i) {
    std::set<int> img(phi[i].begin(), phi[i].end());
    std::vector<int> fresh;
    std::set_difference(img.begin(), img.end(), prev.begin(), prev.end(), std::back_inserter(fresh));
    mu.push_back(fresh[0]);
    prev = std::move(img);
  }
  std::vector<int> pos_of(n, -1);
  for (int k = 0; k < n; ++k) pos_of[mu[k]] = k;
  std::vector<int> parent_pos(n, -1);
  for (int k = 1; k < n; ++k) parent_pos[k] = pos_of[phi[k - 1][mu[k]]];
  return RetractionSystem(space, mu, parent_pos);
}

// ---------------------------------------------------------------------------

Chain chain_to(const RetractionSystem& sys, int point) {
  std::vector<int> pts;
  int pos = sys.position(point);
  while (pos > 0) {
    pts.push_back(sys.point_at(pos));
    pos = sys.parent_pos(pos);
  }
  pts.push_back(sys.point_at(0));
  std::reverse(pts.begin(), pts.end());
  return Chain{std::move(pts)};
}

bool is_chain(const RetractionSystem& sys, const Chain& chain) {
  if (chain.points.empty()) return false;
  for (std::size_t t = 0; t < chain.points.size(); ++t) {
    const int p = chain.points[t];
    if (p < 0 || p >= sys.points()) return false;
    if (t == 0) continue;
    if (sys.position(chain.points[t - 1]) >= sys.position(p)) return false;
    if (sys.phi(sys.position(p) - 1, p) != chain.points[t - 1]) return false;
  }
  return true;
}

std::vector<int> fiber(const RetractionSystem& sys, int i, int p) {
  if (i < 0 || i > sys.levels()) throw std::out_of_range("retraction level out of range");
  if (sys.position(p) > i)
    throw std::invalid_argument(sys.space().label(p) + " is not in the image of phi_" + std::to_string(i));
  std::vector<int> out;
  for (int y = 0; y < sys.points(); ++y)
    if (sys.phi(i, y) == p) out.push_back(y);
  return out;
}

StepLemmaResult step_lemma_check(const RetractionSystem& sys, const Chain& chain,
                                 const std::vector<int>& path, const Rational& alpha,
                                 const std::optional<Rational>& k_override) {
  const auto& sp = sys.space();
  if (!is_chain(sys, chain)) throw std::invalid_argument("not a chain of this system");
  if (path.size() < 1) throw std::invalid_argument("empty path");
  if (path.front() != chain.final() || path.back() != chain.initial())
    throw std::invalid_argument("path must run from the chain's final point to its initial point");
  if (alpha <= 0) throw std::invalid_argument("alpha must be positive");
  {
    std::set<int> distinct(path.begin(), path.end());
    if (distinct.size() != path.size()) throw std::invalid_argument("path points must be distinct");
  }
  for (std::size_t t = 0; t + 1 < path.size(); ++t) {
    const Num step = sp.dist(path[t], path[t + 1]);
    const bool too_big = sp.exact() ? (step.rat() > alpha)
                                    : (step.dbl() > to_double(alpha) + 1e-9);
    if (too_big)
      throw std::invalid_argument("path step " + std::to_string(t) + " exceeds alpha");
  }

  // K = sup of Lip(phi_i) over the chain's position interval.
  const int lo = sys.position(chain.initial());
  const int hi = sys.position(chain.final());
  Num k = sys.lip_constant(lo);
  for (int i = lo + 1; i <= hi; ++i) k = max(k, sys.lip_constant(i));
  if (k_override) {
    const Num over = sp.exact() ? Num(*k_override) : Num(to_double(*k_override));
    if (over < k) throw std::invalid_argument("K override is smaller than the chain's Lipschitz sup");
    k = over;
  }

  StepLemmaResult res;
  res.lip_bound = k;
  if (sp.exact()) {
    res.threshold = Num(Rational(2) * k.rat() * alpha);
  } else {
    res.threshold = Num(2.0 * k.dbl() * to_double(alpha));
  }
  res.worst_gap = Num(Rational(0));
  res.worst_step = -1;
  for (std::size_t t = 0; t + 1 < chain.points.size(); ++t) {
    Num gap = sp.dist(chain.points[t], chain.points[t + 1]);
    if (res.worst_step < 0 || res.worst_gap < gap) {
      res.worst_gap = gap;
      res.worst_step = static_cast<int>(t);
    }
  }
  if (chain.points.size() < 2) res.worst_gap = sp.exact() ? Num(Rational(0)) : Num(0.0);
  res.ok = sp.exact() ? !(res.worst_gap > res.threshold)
                      : (res.worst_gap.dbl() <= res.threshold.dbl() + 1e-9);
  return res;
}

std::vector<Measure> basis_molecules(const RetractionSystem& sys) {
  std::vector<Measure> out;
  out.reserve(sys.levels());
  for (int k = 1; k <= sys.levels(); ++k) {
    out.push_back(Measure::molecule(sys.space(), sys.point_at(k), sys.point_at(sys.parent_pos(k))));
  }
  return out;
}

RetractionSystem grid_row_major_system(const PointedMetricSpace& grid, int m, int dim) {
  const int n = grid.size();
  long long expect = 1;
  for (int c = 0; c < dim; ++c) expect *= (m + 1);
  if (expect != n) throw std::invalid_argument("grid dimensions do not match the space");

  // Point index == lexicographic rank: digits base (m+1), most significant first.
  auto digits = [&](int idx) {
    std::vector<int> ds(dim);
    for (int c = dim - 1; c >= 0; --c) {
      ds[c] = idx % (m + 1);
      idx /= (m + 1);
    }
    return ds;
  };
  auto index_of = [&](const std::vector<int>& ds) {
    int idx = 0;
    for (int c = 0; c < dim; ++c) idx = idx * (m + 1) + ds[c];
    return idx;
  };

  std::vector<int> order(n), parent_pos(n, -1);
  for (int i = 0; i < n; ++i) order[i] = i;
  for (int i = 1; i < n; ++i) {
    auto ds = digits(i);
    for (int c = dim - 1; c >= 0; --c) {
      if (ds[c] > 0) {
        --ds[c];
        break;
      }
    }
    parent_pos[i] = index_of(ds);
  }
  return RetractionSystem(grid, order, parent_pos);
}

}  // namespace freelab
