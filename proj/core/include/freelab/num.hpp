// Tagged numeric value: an exact rational on exact spaces, a binary double
// on float spaces. Exact values never degrade silently; comparisons between
// two exact values are exact, anything involving a double compares as double.
#pragma once

#include "freelab/rational.hpp"

#include <compare>
#include <string>

namespace freelab {

class Num {
 public:
  Num() : exact_(true), q_(0), d_(0.0) {}
  explicit Num(Rational q) : exact_(true), q_(std::move(q)) { d_ = to_double(q_); }
  explicit Num(double d) : exact_(false), q_(0), d_(d) {}
  explicit Num(long long v) : exact_(true), q_(v), d_(static_cast<double>(v)) {}

  bool exact() const { return exact_; }
  const Rational& rat() const {
    if (!exact_) throw std::logic_error("Num: rational access on a float value");
    return q_;
  }
  double dbl() const { return d_; }

  std::string str() const { return exact_ ? rational_str(q_) : std::to_string(d_); }

  friend bool operator==(const Num& a, const Num& b) {
    if (a.exact_ && b.exact_) return a.q_ == b.q_;
    return a.d_ == b.d_;
  }
  friend std::partial_ordering operator<=>(const Num& a, const Num& b) {
    if (a.exact_ && b.exact_) {
      if (a.q_ < b.q_) return std::partial_ordering::less;
      if (a.q_ > b.q_) return std::partial_ordering::greater;
      return std::partial_ordering::equivalent;
    }
    return a.d_ <=> b.d_;
  }

  friend Num max(const Num& a, const Num& b) { return a < b ? b : a; }

 private:
  bool exact_;
  Rational q_;
  double d_;
};

namespace detail {

// Scalar glue shared by the templated solvers (S = Rational or double).
template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static Rational zero() { return Rational(0); }
  static Rational from_rational(const Rational& q) { return q; }
  static bool positive(const Rational& v) { return v > 0; }
  static bool negative(const Rational& v) { return v < 0; }
};

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  // Comparison slack for pivot/relaxation decisions on float spaces.
  static constexpr double eps = 1e-12;
  static double zero() { return 0.0; }
  static double from_rational(const Rational& q) { return to_double(q); }
  static bool positive(double v) { return v > eps; }
  static bool negative(double v) { return v < -eps; }
};

}  // namespace detail

inline Num make_num(const Rational& q) { return Num(q); }
inline Num make_num(double d) { return Num(d); }

}  // namespace freelab
