#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

#include "lndkit/errors.hpp"

namespace lndkit {

// GMP keeps arithmetic results canonical: lowest terms, positive denominator,
// zero stored as 0/1.
using Rational = mpq_class;
using Integer = mpz_class;

inline Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline Rational make_rational(long num, long den = 1) {
  return make_rational(Integer(num), Integer(den));
}

/// Parses "a" or "a/b" with optional sign; throws DomainError on bad input.
inline Rational rational_from_string(const std::string& text) {
  Rational q;
  if (q.set_str(text, 10) != 0) throw DomainError("malformed rational literal '" + text + "'");
  if (q.get_den() == 0) throw DomainError("rational with zero denominator");
  q.canonicalize();
  return q;
}

inline std::string to_string(const Rational& q) { return q.get_str(10); }

inline Rational factorial(unsigned n) {
  Integer f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return Rational(f);
}

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

}  // namespace lndkit
