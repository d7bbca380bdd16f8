#include "freelab/linear_operator.hpp"

namespace freelab {

LinearOperator::LinearOperator(const PointedMetricSpace& space)
    : space_(&space), cols_(space.size()) {}

LinearOperator LinearOperator::identity(const PointedMetricSpace& space) {
  LinearOperator op(space);
  for (int x = 0; x < space.size(); ++x) {
    if (x == space.base()) continue;
    op.cols_[x] = {{x, Rational(1)}};
  }
  return op;
}

void LinearOperator::set_column(int x, SparseVec col) {
  col = sparse_normalize(std::move(col));
  for (const auto& [i, v] : col) {
    if (i < 0 || i >= space_->size() || i == space_->base())
      throw std::invalid_argument("operator column hits the base coordinate");
  }
  if (x == space_->base() && !col.empty())
    throw std::invalid_argument("the base column must stay zero");
  cols_[x] = std::move(col);
}

Measure LinearOperator::apply(const Measure& mu) const {
  SparseVec acc;
  for (const auto& [x, c] : mu.coeffs()) acc = sparse_add(acc, sparse_scale(cols_[x], c));
  return Measure(*space_, std::move(acc));
}

LinearOperator LinearOperator::compose(const LinearOperator& other) const {
  LinearOperator out(*space_);
  for (int x = 0; x < space_->size(); ++x) {
    SparseVec acc;
    for (const auto& [y, v] : other.cols_[x]) acc = sparse_add(acc, sparse_scale(cols_[y], v));
    out.cols_[x] = std::move(acc);
  }
  return out;
}

LinearOperator LinearOperator::plus(const LinearOperator& other) const {
  LinearOperator out(*space_);
  for (int x = 0; x < space_->size(); ++x) out.cols_[x] = sparse_add(cols_[x], other.cols_[x]);
  return out;
}

LinearOperator LinearOperator::minus(const LinearOperator& other) const {
  return plus(other.scaled(Rational(-1)));
}

LinearOperator LinearOperator::scaled(const Rational& c) const {
  LinearOperator out(*space_);
  for (int x = 0; x < space_->size(); ++x) out.cols_[x] = sparse_scale(cols_[x], c);
  return out;
}

bool LinearOperator::operator==(const LinearOperator& other) const {
  return space_ == other.space_ && cols_ == other.cols_;
}

int LinearOperator::rank() const {
  // Dense Gaussian elimination on the non-base block; columns are sparse so
  // most of the sweep is zero tests.
  const int n = space_->size();
  std::vector<int> coord(n, -1);
  std::vector<int> pts;
  for (int x = 0; x < n; ++x) {
    if (x == space_->base()) continue;
    coord[x] = static_cast<int>(pts.size());
    pts.push_back(x);
  }
  const int d = static_cast<int>(pts.size());
  std::vector<std::vector<Rational>> m(d, std::vector<Rational>(d, Rational(0)));
  for (int ci = 0; ci < d; ++ci)
    for (const auto& [row, v] : cols_[pts[ci]]) m[coord[row]][ci] = v;

  int rank = 0;
  for (int col = 0; col < d && rank < d; ++col) {
    int piv = -1;
    for (int r = rank; r < d; ++r)
      if (m[r][col] != 0) { piv = r; break; }
    if (piv < 0) continue;
    std::swap(m[piv], m[rank]);
    const Rational p = m[rank][col];
    for (int r = rank + 1; r < d; ++r) {
      if (m[r][col] == 0) continue;
      const Rational f = m[r][col] / p;
      for (int cc = col; cc < d; ++cc) m[r][cc] -= f * m[rank][cc];
    }
    ++rank;
  }
  return rank;
}

}  // namespace freelab
