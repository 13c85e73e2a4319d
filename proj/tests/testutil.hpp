#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "ctrlgeo/expr.hpp"

namespace testutil {

using namespace ctrlgeo::symexpr;

inline Expr rand_expr(std::mt19937_64& rng, int depth,
                      const std::vector<std::string>& vars) {
  std::uniform_int_distribution<int> pick(0, 99);
  int r = pick(rng);
  if (depth <= 0 || r < 22) {
    if (r % 2 == 0) {
      std::uniform_int_distribution<long long> num(-6, 6);
      std::uniform_int_distribution<long long> den(1, 4);
      return rational(Rational(num(rng), den(rng)));
    }
    std::uniform_int_distribution<std::size_t> v(0, vars.size() - 1);
    return var(vars[v(rng)]);
  }
  auto sub = [&](int d) { return rand_expr(rng, d, vars); };
  if (r < 42) return add({sub(depth - 1), sub(depth - 1)});
  if (r < 60) return mul({sub(depth - 1), sub(depth - 1)});
  if (r < 68) {
    std::uniform_int_distribution<long long> e(2, 3);
    return pow(sub(depth - 1), Rational(e(rng)));
  }
  if (r < 76) {
    // keep denominators away from zero on the sample box
    Expr d = sub(depth - 1);
    return div(sub(depth - 1), add({mul({d, d}), integer(1)}));
  }
  Expr a = sub(depth - 1);
  switch (r % 7) {
    case 0: return sin(a);
    case 1: return cos(a);
    case 2: return exp(mul({rational(Rational(1, 4)), a}));
    case 3: return ln(add({mul({a, a}), integer(1)}));
    case 4: return sqrt(add({mul({a, a}), integer(1)}));
    case 5: return arctan(a);
    default: return arccot(add({mul({a, a}), integer(1)}));
  }
}

inline Assignment rand_point(const std::vector<std::string>& vars,
                             std::mt19937_64& rng, double lo = 0.2,
                             double hi = 1.1) {
  std::uniform_real_distribution<double> u(lo, hi);
  Assignment a;
  for (const auto& v : vars) a[v] = u(rng);
  return a;
}

inline double central_diff(const Expr& e, const Assignment& at,
                           const std::string& v, double h = 1e-6) {
  Assignment p = at, m = at;
  p[v] += h;
  m[v] -= h;
  return (eval(e, p) - eval(e, m)) / (2 * h);
}

inline bool rel_close(double a, double b, double tol) {
  return std::fabs(a - b) <= tol * (1.0 + std::max(std::fabs(a), std::fabs(b)));
}

}  // namespace testutil
