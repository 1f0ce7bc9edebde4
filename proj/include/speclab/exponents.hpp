// Exact rational arithmetic for the target growth exponents gamma(q), delta(q).
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace speclab {

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;  // den == 0 encodes infinity (num > 0)

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d);
  static Rational infinity() { return Rational(1, 0, true); }

  bool is_infinite() const { return den == 0; }
  double value() const;
  std::string str() const;

  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
  bool operator<(const Rational& o) const;

 private:
  Rational(std::int64_t n, std::int64_t d, bool raw) : num(n), den(d) { (void)raw; }
};

// gamma(q) = (2/3)(1/2 - 1/q), valid for q >= 2 (q = infinity allowed).
Rational gamma_exponent(const Rational& q);
// delta(q) = 2(1/2 - 1/q) - 1/2.
Rational delta_exponent(const Rational& q);

}  // namespace speclab
