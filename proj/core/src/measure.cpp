#include "freelab/measure.hpp"

#include <algorithm>

namespace freelab {

SparseVec sparse_normalize(SparseVec entries) {
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  SparseVec out;
  out.reserve(entries.size());
  for (auto& [i, v] : entries) {
    if (!out.empty() && out.back().first == i) {
      out.back().second += v;
      if (out.back().second == 0) out.pop_back();
    } else if (v != 0) {
      out.emplace_back(i, v);
    }
  }
  return out;
}

SparseVec sparse_add(const SparseVec& a, const SparseVec& b) {
  SparseVec out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.push_back(b[j++]);
    } else {
      Rational v = a[i].second + b[j].second;
      if (v != 0) out.emplace_back(a[i].first, v);
      ++i;
      ++j;
    }
  }
  return out;
}

SparseVec sparse_scale(const SparseVec& a, const Rational& c) {
  if (c == 0) return {};
  SparseVec out = a;
  for (auto& [i, v] : out) v *= c;
  return out;
}

Measure::Measure(const PointedMetricSpace& space, SparseVec coeffs)
    : space_(&space), coeffs_(sparse_normalize(std::move(coeffs))) {
  for (const auto& [i, v] : coeffs_) {
    if (i < 0 || i >= space.size()) throw std::out_of_range("measure support index out of range");
    if (i == space.base()) throw std::invalid_argument("measure support must exclude the base point");
  }
}

Measure Measure::dirac(const PointedMetricSpace& space, int point) {
  if (point == space.base()) return zero(space);
  return Measure(space, {{point, Rational(1)}});
}

Measure Measure::molecule(const PointedMetricSpace& space, int x, int y) {
  SparseVec v;
  if (x != space.base()) v.emplace_back(x, Rational(1));
  if (y != space.base()) v.emplace_back(y, Rational(-1));
  return Measure(space, std::move(v));
}

Rational Measure::total() const {
  Rational t(0);
  for (const auto& [i, v] : coeffs_) t += v;
  return t;
}

Measure Measure::scaled(const Rational& c) const { return Measure(*space_, sparse_scale(coeffs_, c)); }

Measure Measure::plus(const Measure& other) const {
  if (space_ != other.space_) throw std::invalid_argument("measures live on different spaces");
  return Measure(*space_, sparse_add(coeffs_, other.coeffs_));
}

LipschitzFunction::LipschitzFunction(const PointedMetricSpace& sp, std::vector<Rational> vals)
    : space(&sp), values(std::move(vals)) {
  if (static_cast<int>(values.size()) != sp.size())
    throw std::invalid_argument("function value count does not match the space");
  if (values[sp.base()] != 0) throw std::invalid_argument("Lipschitz function must vanish at the base");
}

Rational LipschitzFunction::pair_with(const Measure& mu) const {
  Rational s(0);
  for (const auto& [i, v] : mu.coeffs()) s += v * values[i];
  return s;
}

Rational LipschitzFunction::lip_norm() const {
  const auto& sp = *space;
  Rational best(0);
  for (int i = 0; i < sp.size(); ++i)
    for (int j = i + 1; j < sp.size(); ++j) {
      Rational r = abs(values[i] - values[j]) / sp.dist_q(i, j);
      if (r > best) best = r;
    }
  return best;
}

bool LipschitzFunction::lip_bounded_by(const Rational& bound) const {
  const auto& sp = *space;
  for (int i = 0; i < sp.size(); ++i)
    for (int j = i + 1; j < sp.size(); ++j) {
      if (abs(values[i] - values[j]) > bound * sp.dist_q(i, j)) return false;
    }
  return true;
}

}  // namespace freelab
