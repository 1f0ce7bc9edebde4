#include "speclab/exponents.hpp"

#include <limits>
#include <numeric>

namespace speclab {

Rational::Rational(std::int64_t n, std::int64_t d) : num(n), den(d) {
  if (d == 0) throw std::invalid_argument("Rational: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
}

double Rational::value() const {
  if (is_infinite()) return std::numeric_limits<double>::infinity();
  return static_cast<double>(num) / static_cast<double>(den);
}

std::string Rational::str() const {
  if (is_infinite()) return "inf";
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

Rational Rational::operator+(const Rational& o) const {
  if (is_infinite() || o.is_infinite())
    throw std::invalid_argument("Rational: arithmetic with infinity");
  return Rational(num * o.den + o.num * den, den * o.den);
}

Rational Rational::operator-(const Rational& o) const {
  if (is_infinite() || o.is_infinite())
    throw std::invalid_argument("Rational: arithmetic with infinity");
  return Rational(num * o.den - o.num * den, den * o.den);
}

Rational Rational::operator*(const Rational& o) const {
  if (is_infinite() || o.is_infinite())
    throw std::invalid_argument("Rational: arithmetic with infinity");
  return Rational(num * o.num, den * o.den);
}

bool Rational::operator<(const Rational& o) const {
  if (is_infinite()) return false;
  if (o.is_infinite()) return true;
  return num * o.den < o.num * den;
}

static Rational reciprocal_or_zero(const Rational& q) {
  if (q.is_infinite()) return Rational(0, 1);
  return Rational(q.den, q.num);
}

static void require_q(const Rational& q) {
  if (!q.is_infinite() && q < Rational(2, 1))
    throw std::invalid_argument("exponent targets require q >= 2");
}

Rational gamma_exponent(const Rational& q) {
  require_q(q);
  return Rational(2, 3) * (Rational(1, 2) - reciprocal_or_zero(q));
}

Rational delta_exponent(const Rational& q) {
  require_q(q);
  return Rational(2, 1) * (Rational(1, 2) - reciprocal_or_zero(q)) - Rational(1, 2);
}

}  // namespace speclab
