#include "ctrlgeo/rational.hpp"

namespace ctrlgeo::symexpr {

namespace {

constexpr long long kMax = 0x7fffffffffffffffLL;

bool fits(__int128 v) { return v <= (__int128)kMax && v >= -(__int128)kMax; }

std::optional<Rational> make_checked(__int128 num, __int128 den) {
  if (den == 0) return std::nullopt;
  if (den < 0) {
    num = -num;
    den = -den;
  }
  __int128 a = num < 0 ? -num : num, b = den;
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  if (a > 1) {
    num /= a;
    den /= a;
  }
  if (!fits(num) || !fits(den)) return std::nullopt;
  Rational r;
  r.num = (long long)num;
  r.den = (long long)den;
  return r;
}

}  // namespace

Rational::Rational(long long n, long long d) {
  auto r = make_checked(n, d);
  if (!r) {
    num = 0;
    den = 1;
    std::abort();  // constructor is only for literal-sized inputs
  }
  num = r->num;
  den = r->den;
}

std::string Rational::str() const {
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

bool operator<(const Rational& a, const Rational& b) {
  return (__int128)a.num * b.den < (__int128)b.num * a.den;
}

std::optional<Rational> rat_add(const Rational& a, const Rational& b) {
  return make_checked((__int128)a.num * b.den + (__int128)b.num * a.den,
                      (__int128)a.den * b.den);
}

std::optional<Rational> rat_mul(const Rational& a, const Rational& b) {
  return make_checked((__int128)a.num * b.num, (__int128)a.den * b.den);
}

std::optional<Rational> rat_div(const Rational& a, const Rational& b) {
  if (b.num == 0) return std::nullopt;
  return make_checked((__int128)a.num * b.den, (__int128)a.den * b.num);
}

std::optional<Rational> rat_pow(const Rational& a, long long e) {
  if (e == 0) return Rational(1);
  bool inv = e < 0;
  if (inv && a.num == 0) return std::nullopt;
  unsigned long long n = inv ? -(unsigned long long)e : (unsigned long long)e;
  Rational acc(1), base = a;
  while (n > 0) {
    if (n & 1) {
      auto r = rat_mul(acc, base);
      if (!r) return std::nullopt;
      acc = *r;
    }
    n >>= 1;
    if (n) {
      auto r = rat_mul(base, base);
      if (!r) return std::nullopt;
      base = *r;
    }
  }
  if (inv) return rat_div(Rational(1), acc);
  return acc;
}

Rational rat_neg(const Rational& a) {
  Rational r;
  r.num = -a.num;
  r.den = a.den;
  return r;
}

std::optional<Rational> rat_gcd(const Rational& a, const Rational& b) {
  long long g = std::gcd(std::llabs(a.num), std::llabs(b.num));
  if (g == 0) g = 1;
  __int128 l = (__int128)a.den / std::gcd(a.den, b.den) * b.den;
  return make_checked(g, l);
}

Number num_add(const Number& a, const Number& b) {
  if (a.exact && b.exact) {
    if (auto r = rat_add(a.rat, b.rat)) return Number(*r);
  }
  return Number(a.to_double() + b.to_double());
}

Number num_mul(const Number& a, const Number& b) {
  if (a.exact && b.exact) {
    if (auto r = rat_mul(a.rat, b.rat)) return Number(*r);
  }
  return Number(a.to_double() * b.to_double());
}

Number num_div(const Number& a, const Number& b) {
  if (a.exact && b.exact) {
    if (auto r = rat_div(a.rat, b.rat)) return Number(*r);
  }
  return Number(a.to_double() / b.to_double());
}

Number num_neg(const Number& a) {
  if (a.exact) return Number(rat_neg(a.rat));
  return Number(-a.flt);
}

}  // namespace ctrlgeo::symexpr
