#include "lll/exact.hpp"

#include <cmath>

#include "lll/errors.hpp"

namespace lll {

Rational to_rational(double x) {
  if (!std::isfinite(x)) throw InputError("cannot convert a non-finite value to a rational");
  int exp = 0;
  const double mant = std::frexp(x, &exp);
  // mant * 2^53 is an integer.
  const auto scaled = static_cast<long long>(std::ldexp(mant, 53));
  Rational r(scaled);
  exp -= 53;
  const Rational two(2);
  if (exp > 0) r *= pow_int(two, static_cast<unsigned>(exp));
  if (exp < 0) r /= pow_int(two, static_cast<unsigned>(-exp));
  return r;
}

BigInt floor_of(const Rational& x) {
  const BigInt num = boost::multiprecision::numerator(x);
  const BigInt den = boost::multiprecision::denominator(x);
  BigInt q = num / den;
  if (num % den != 0 && num < 0) --q;
  return q;
}

BigInt ceil_of(const Rational& x) {
  const BigInt f = floor_of(x);
  return Rational(f) == x ? f : f + 1;
}

std::string to_string(const Rational& x) {
  const BigInt num = boost::multiprecision::numerator(x);
  const BigInt den = boost::multiprecision::denominator(x);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

double to_double(const Rational& x) { return x.convert_to<double>(); }

Rational pow_int(const Rational& x, unsigned k) {
  Rational result(1);
  Rational base = x;
  while (k > 0) {
    if (k & 1U) result *= base;
    base *= base;
    k >>= 1U;
  }
  return result;
}

std::pair<Rational, Rational> log2_bracket(const Rational& x) {
  if (x <= 0) throw InputError("log2 of a non-positive value");
  const BigInt num = boost::multiprecision::numerator(x);
  const BigInt den = boost::multiprecision::denominator(x);
  auto power_of_two = [](const BigInt& v) { return v > 0 && (v & (v - 1)) == 0; };
  if (power_of_two(num) && power_of_two(den)) {
    const auto e = static_cast<long long>(boost::multiprecision::msb(num)) -
                   static_cast<long long>(boost::multiprecision::msb(den));
    return {Rational(e), Rational(e)};
  }
  const double l = std::log2(to_double(x));
  const double slack = 1e-9 * std::max(1.0, std::abs(l));
  return {to_rational(l - slack), to_rational(l + slack)};
}

}  // namespace lll
