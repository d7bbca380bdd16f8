// Exact rational scalar used throughout the library, plus the canonical
// "p/q" text form used by every file format.
#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <stdexcept>
#include <string>

namespace freelab {

using Rational = boost::multiprecision::mpq_rational;

/// Parses "p/q" or a plain integer "p". Decimal notation ("0.75") is
/// rejected so that exact and float inputs cannot be mixed up silently.
inline Rational parse_rational(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  for (char c : text) {
    if (c == '.' || c == 'e' || c == 'E')
      throw std::invalid_argument("rational literal must be 'p/q' or an integer, got '" + text + "'");
  }
  try {
    Rational q(text);
    return q;
  } catch (const std::exception&) {
    throw std::invalid_argument("malformed rational literal '" + text + "'");
  }
}

/// Canonical text form: reduced "p/q", or "p" when the denominator is 1.
inline std::string rational_str(const Rational& q) { return q.str(); }

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

}  // namespace freelab
