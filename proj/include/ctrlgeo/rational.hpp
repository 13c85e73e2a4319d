#pragma once

#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <string>

namespace ctrlgeo::symexpr {

/// Exact rational number on 64-bit parts, always stored normalized
/// (den > 0, gcd(num, den) == 1).  Arithmetic goes through 128-bit
/// intermediates and reports overflow instead of wrapping, so callers
/// can drop to floating point.
struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long n) : num(n), den(1) {}
  Rational(long long n, long long d);

  bool is_zero() const { return num == 0; }
  bool is_one() const { return num == 1 && den == 1; }
  bool is_integer() const { return den == 1; }
  double to_double() const { return double(num) / double(den); }
  std::string str() const;

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num == b.num && a.den == b.den;
  }
  friend bool operator<(const Rational& a, const Rational& b);
};

std::optional<Rational> rat_add(const Rational& a, const Rational& b);
std::optional<Rational> rat_mul(const Rational& a, const Rational& b);
std::optional<Rational> rat_div(const Rational& a, const Rational& b);
std::optional<Rational> rat_pow(const Rational& a, long long e);
Rational rat_neg(const Rational& a);

/// Rational gcd used when pulling common content out of sums:
/// gcd(p1/q1, p2/q2) = gcd(p1,p2)/lcm(q1,q2).
std::optional<Rational> rat_gcd(const Rational& a, const Rational& b);

/// Numeric scalar that stays exact as long as it can.  Exact rationals
/// survive +,*,/ until a 64-bit overflow, after which the value is a
/// plain double.
struct Number {
  bool exact = true;
  Rational rat;
  double flt = 0.0;

  Number() : exact(true), rat(0) {}
  Number(Rational r) : exact(true), rat(r) {}
  Number(double v) : exact(false), flt(v) {}

  double to_double() const { return exact ? rat.to_double() : flt; }
  bool is_zero() const { return exact ? rat.is_zero() : flt == 0.0; }
  bool is_one() const { return exact ? rat.is_one() : flt == 1.0; }
};

Number num_add(const Number& a, const Number& b);
Number num_mul(const Number& a, const Number& b);
Number num_div(const Number& a, const Number& b);
Number num_neg(const Number& a);

}  // namespace ctrlgeo::symexpr
