#include "freelab/metric_space.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace freelab {

namespace {

void check_shape(const std::vector<std::string>& labels, std::size_t dist_size, int base) {
  const std::size_t n = labels.size();
  if (n == 0) throw std::invalid_argument("space needs at least one point");
  if (dist_size != n * n) throw std::invalid_argument("distance matrix is not square of the label count");
  if (base < 0 || static_cast<std::size_t>(base) >= n) throw std::invalid_argument("base index out of range");
  std::set<std::string> seen(labels.begin(), labels.end());
  if (seen.size() != n) throw std::invalid_argument("duplicate point labels");
}

}  // namespace

PointedMetricSpace::PointedMetricSpace(std::vector<std::string> labels, std::vector<Rational> dist, int base)
    : n_(static_cast<int>(labels.size())), base_(base), exact_(true), labels_(std::move(labels)), dq_(std::move(dist)) {
  check_shape(labels_, dq_.size(), base_);
  dd_.resize(dq_.size());
  for (std::size_t i = 0; i < dq_.size(); ++i) dd_[i] = to_double(dq_[i]);
  index_labels();
}

PointedMetricSpace::PointedMetricSpace(std::vector<std::string> labels, std::vector<double> dist, int base)
    : n_(static_cast<int>(labels.size())), base_(base), exact_(false), labels_(std::move(labels)), dd_(std::move(dist)) {
  check_shape(labels_, dd_.size(), base_);
  for (double v : dd_) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite distance entry");
  }
  index_labels();
}

void PointedMetricSpace::index_labels() {
  index_.reserve(labels_.size());
  for (int i = 0; i < n_; ++i) index_.emplace(labels_[i], i);
}

int PointedMetricSpace::index_of(std::string_view label) const {
  auto it = index_.find(std::string(label));
  return it == index_.end() ? -1 : it->second;
}

const Rational& PointedMetricSpace::dist_q(int i, int j) const {
  if (!exact_) throw std::logic_error("rational distance requested from a float space");
  return dq_[idx(i, j)];
}

// ---------------------------------------------------------------------------

std::string MetricReport::summary() const {
  std::ostringstream os;
  for (const auto& v : violations) {
    switch (v.kind) {
      case MetricViolation::Kind::Asymmetry: os << "asymmetry"; break;
      case MetricViolation::Kind::NonzeroDiagonal: os << "nonzero diagonal"; break;
      case MetricViolation::Kind::ZeroOffDiagonal: os << "separation failure"; break;
      case MetricViolation::Kind::TriangleViolation: os << "triangle violation"; break;
      case MetricViolation::Kind::NonFinite: os << "non-finite entry"; break;
      case MetricViolation::Kind::BadBase: os << "bad base"; break;
    }
    os << " at (" << v.i;
    if (v.j >= 0) os << "," << v.j;
    if (v.k >= 0) os << "," << v.k;
    os << ")";
    if (!v.detail.empty()) os << ": " << v.detail;
    os << "\n";
  }
  return os.str();
}

namespace {

template <class S>
void validate_axioms(const PointedMetricSpace& s, MetricReport& rep, S tri_slack) {
  const int n = s.size();
  const auto& d = s.raw<S>();
  auto at = [&](int i, int j) -> const S& { return d[i * n + j]; };
  for (int i = 0; i < n; ++i) {
    if (at(i, i) != S(0)) {
      rep.violations.push_back({MetricViolation::Kind::NonzeroDiagonal, i, i, -1,
                                s.label(i)});
    }
    for (int j = i + 1; j < n; ++j) {
      if (at(i, j) != at(j, i)) {
        rep.violations.push_back({MetricViolation::Kind::Asymmetry, i, j, -1,
                                  s.label(i) + "," + s.label(j)});
      }
      if (!(at(i, j) > S(0))) {
        rep.violations.push_back({MetricViolation::Kind::ZeroOffDiagonal, i, j, -1,
                                  s.label(i) + "," + s.label(j)});
      }
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      for (int k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        if (at(i, k) > at(i, j) + at(j, k) + tri_slack) {
          rep.violations.push_back({MetricViolation::Kind::TriangleViolation, i, j, k,
                                    s.label(i) + "," + s.label(j) + "," + s.label(k)});
        }
      }
    }
}

}  // namespace

MetricReport validate_metric(const PointedMetricSpace& s) {
  MetricReport rep;
  if (s.exact()) {
    validate_axioms<Rational>(s, rep, Rational(0));
  } else {
    for (int i = 0; i < s.size() * s.size(); ++i) {
      if (!std::isfinite(s.raw<double>()[i])) {
        rep.violations.push_back({MetricViolation::Kind::NonFinite, i / s.size(), i % s.size(), -1, ""});
      }
    }
    validate_axioms<double>(s, rep, 1e-9);
  }
  return rep;
}

// ---------------------------------------------------------------------------

long long circle_rim_distance(int n, int k, int l) {
  long long diff = std::llabs(static_cast<long long>(k) - l);
  return std::min(diff, n - diff);
}

PointedMetricSpace build_circle(int n) {
  if (n < 3) throw std::invalid_argument("circle needs n >= 3");
  const int pts = n + 1;
  std::vector<std::string> labels(pts);
  for (int i = 0; i < pts; ++i) labels[i] = "x" + std::to_string(i);
  std::vector<Rational> d(static_cast<std::size_t>(pts) * pts, Rational(0));
  for (int k = 1; k <= n; ++k) {
    d[0 * pts + k] = d[k * pts + 0] = Rational(n);
    for (int l = k + 1; l <= n; ++l) {
      Rational v(circle_rim_distance(n, k, l));
      d[k * pts + l] = d[l * pts + k] = v;
    }
  }
  return PointedMetricSpace(std::move(labels), std::move(d), 0);
}

CircleUnionLayout::CircleUnionLayout(int k_max_) : k_max(k_max_) {
  if (k_max < 1) throw std::invalid_argument("circle union needs k_max >= 1");
  sizes_.assign(k_max + 1, 0);
  firsts_.assign(k_max + 1, 0);
  int next = 1, size = 1;
  for (int k = 1; k <= k_max; ++k) {
    size *= 4;
    sizes_[k] = size;
    firsts_[k] = next;
    next += size;
  }
  total_ = next;
}

int CircleUnionLayout::level_of(int point) const {
  if (point == 0) return 0;
  for (int k = 1; k <= k_max; ++k)
    if (point < firsts_[k] + sizes_[k]) return k;
  throw std::out_of_range("point outside circle union");
}

int CircleUnionLayout::rim_of(int point) const {
  const int k = level_of(point);
  if (k == 0) throw std::out_of_range("centre has no rim index");
  return point - firsts_[k] + 1;
}

int CircleUnionLayout::point_of(int level, int rim) const {
  if (level < 1 || level > k_max) throw std::out_of_range("circle level out of range");
  if (rim < 1 || rim > sizes_[level]) throw std::out_of_range("rim index out of range");
  return firsts_[level] + rim - 1;
}

PointedMetricSpace build_circle_union(int k_max) {
  CircleUnionLayout lay(k_max);
  const int pts = lay.total_points();
  std::vector<std::string> labels(pts);
  for (int i = 0; i < pts; ++i) labels[i] = "x" + std::to_string(i);
  std::vector<Rational> d(static_cast<std::size_t>(pts) * pts, Rational(0));
  auto set = [&](int i, int j, long long v) {
    d[static_cast<std::size_t>(i) * pts + j] = Rational(v);
    d[static_cast<std::size_t>(j) * pts + i] = Rational(v);
  };
  for (int i = 1; i < pts; ++i) {
    const int ki = lay.level_of(i);
    set(0, i, lay.circle_size(ki));
    for (int j = i + 1; j < pts; ++j) {
      const int kj = lay.level_of(j);
      if (ki == kj) {
        set(i, j, circle_rim_distance(lay.circle_size(ki), lay.rim_of(i), lay.rim_of(j)));
      } else {
        set(i, j, std::max(lay.circle_size(ki), lay.circle_size(kj)));
      }
    }
  }
  return PointedMetricSpace(std::move(labels), std::move(d), 0);
}

PointedMetricSpace build_grid_net(int m, int dim, long long point_cap) {
  if (m < 1) throw std::invalid_argument("grid needs m >= 1");
  if (dim < 2) throw std::invalid_argument("grid needs dim >= 2");
  long long count = 1;
  for (int i = 0; i < dim; ++i) {
    count *= (m + 1);
    if (count > point_cap) throw std::invalid_argument("grid point count exceeds the cap");
  }
  const int pts = static_cast<int>(count);
  std::vector<std::vector<int>> coords(pts, std::vector<int>(dim, 0));
  for (int i = 1; i < pts; ++i) {
    coords[i] = coords[i - 1];
    for (int c = dim - 1; c >= 0; --c) {
      if (++coords[i][c] <= m) break;
      coords[i][c] = 0;
    }
  }
  std::vector<std::string> labels(pts);
  for (int i = 0; i < pts; ++i) {
    std::string s = "(";
    for (int c = 0; c < dim; ++c) {
      if (c) s += ",";
      s += std::to_string(coords[i][c]);
    }
    s += ")";
    labels[i] = s;
  }
  std::vector<double> d(static_cast<std::size_t>(pts) * pts, 0.0);
  for (int i = 0; i < pts; ++i)
    for (int j = i + 1; j < pts; ++j) {
      long long sq = 0;
      for (int c = 0; c < dim; ++c) {
        long long t = coords[i][c] - coords[j][c];
        sq += t * t;
      }
      double v = std::sqrt(static_cast<double>(sq));
      d[static_cast<std::size_t>(i) * pts + j] = v;
      d[static_cast<std::size_t>(j) * pts + i] = v;
    }
  return PointedMetricSpace(std::move(labels), std::move(d), 0);
}

// ---------------------------------------------------------------------------

namespace {

bool in_left_set(int n, int k, int l) {
  const int half = (n + 1) / 2;  // floor((n+1)/2)
  if (2 * k > n - 1) {
    // {k, k-1, ..., k - half + 1}
    return l <= k && l >= k - half + 1;
  }
  // {k, k-1, ..., 1} u {n, n-1, ..., n - half + k + 1}
  if (l <= k && l >= 1) return true;
  return l >= n - half + k + 1 && l <= n;
}

bool in_right_set(int n, int k, int l) {
  const int half = (n + 1) / 2;
  if (2 * k <= n - 1) {
    // {k, k+1, ..., k + half}
    return l >= k && l <= k + half;
  }
  // {k, ..., n} u {1, ..., half - (n - k + 1)}
  if (l >= k && l <= n) return true;
  return l >= 1 && l <= half - (n - k + 1);
}

}  // namespace

Orientation orientation(int n, int k, int l) {
  if (k < 1 || k > n || l < 1 || l > n) throw std::out_of_range("rim index out of range");
  const bool left = in_left_set(n, k, l);
  const bool right = in_right_set(n, k, l);
  if (left && right) return Orientation::Both;
  if (left) return Orientation::Left;
  if (right) return Orientation::Right;
  return Orientation::Neither;
}

long long directed_distance(int n, int x, int y, RimDirection dir) {
  if (x < 1 || x > n || y < 1 || y > n) throw std::out_of_range("rim index out of range");
  const long long fwd = ((y - x) % n + n) % n;  // steps going right
  return dir == RimDirection::Right ? fwd : (n - fwd) % n;
}

}  // namespace freelab
