#pragma once

#include <string>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

namespace lll {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Every finite double is a dyadic rational; this conversion is exact.
Rational to_rational(double x);

BigInt floor_of(const Rational& x);
BigInt ceil_of(const Rational& x);

std::string to_string(const Rational& x);
double to_double(const Rational& x);

// Rational bounds lo <= log2(x) <= hi for x > 0. Exact (lo == hi) when x is a
// power of two; otherwise a bracket of width about 1e-9 around the double log.
std::pair<Rational, Rational> log2_bracket(const Rational& x);

Rational pow_int(const Rational& x, unsigned k);

}  // namespace lll
