#include <cmath>

#include "ctrlgeo/expr.hpp"

namespace ctrlgeo::symexpr {

namespace {

constexpr double kDivTol = 1e-12;

struct Evaluator {
  const Assignment& a;
  double scale = 0.0;

  double track(double v) {
    double m = std::fabs(v);
    if (m > scale) scale = m;
    return v;
  }

  double run(const Expr& e) {
    switch (e.kind()) {
      case Kind::Const:
        return track(e.value().to_double());
      case Kind::Var: {
        auto it = a.find(e.name());
        if (it == a.end()) throw EvalError("unbound variable '" + e.name() + "'");
        return track(it->second);
      }
      case Kind::Add: {
        double s = 0;
        for (const auto& k : e.kids()) s += run(k);
        return track(s);
      }
      case Kind::Mul: {
        double p = 1;
        for (const auto& k : e.kids()) p *= run(k);
        return track(p);
      }
      case Kind::Div: {
        double n = run(e.kids()[0]);
        double d = run(e.kids()[1]);
        if (std::fabs(d) < kDivTol)
          throw EvalError("division by near-zero denominator");
        return track(n / d);
      }
      case Kind::Pow: {
        double b = run(e.kids()[0]);
        const Rational& r = e.expo();
        if (r.is_integer()) {
          long long n = r.num;
          if (n < 0 && std::fabs(b) < kDivTol)
            throw EvalError("negative power of near-zero base");
          double v = 1.0, base = n < 0 ? 1.0 / b : b;
          unsigned long long m = n < 0 ? -(unsigned long long)n : (unsigned long long)n;
          while (m) {
            if (m & 1) v *= base;
            base *= base;
            m >>= 1;
          }
          return track(v);
        }
        if (b < 0) throw EvalError("fractional power of negative base");
        if (b < kDivTol && r.to_double() < 0)
          throw EvalError("negative power of near-zero base");
        return track(std::pow(b, r.to_double()));
      }
      case Kind::Func: {
        double x = run(e.kids()[0]);
        switch (e.fn()) {
          case Func1::Sin: return track(std::sin(x));
          case Func1::Cos: return track(std::cos(x));
          case Func1::Tan: {
            double c = std::cos(x);
            if (std::fabs(c) < kDivTol) throw EvalError("tan near pole");
            return track(std::sin(x) / c);
          }
          case Func1::Cot: {
            double s = std::sin(x);
            if (std::fabs(s) < kDivTol) throw EvalError("cot near pole");
            return track(std::cos(x) / s);
          }
          case Func1::Exp: return track(std::exp(x));
          case Func1::Ln:
            if (x <= 0) throw EvalError("ln of non-positive argument");
            return track(std::log(x));
          case Func1::Sqrt:
            if (x < 0) throw EvalError("sqrt of negative argument");
            return track(std::sqrt(x));
          case Func1::Arctan: return track(std::atan(x));
          case Func1::Arccot: return track(M_PI_2 - std::atan(x));  // range (0, pi)
        }
      }
    }
    throw EvalError("corrupt expression node");
  }
};

}  // namespace

double eval(const Expr& e, const Assignment& a) {
  Evaluator ev{a};
  return ev.run(e);
}

ScaledValue eval_scaled(const Expr& e, const Assignment& a) {
  Evaluator ev{a};
  double v = ev.run(e);
  return {v, ev.scale};
}

Expr subst(const Expr& e, const std::map<std::string, Expr>& repl) {
  switch (e.kind()) {
    case Kind::Const:
      return e;
    case Kind::Var: {
      auto it = repl.find(e.name());
      return it == repl.end() ? e : it->second;
    }
    case Kind::Func:
      return apply_fn(e.fn(), subst(e.kids()[0], repl));
    case Kind::Pow:
      return pow(subst(e.kids()[0], repl), e.expo());
    case Kind::Div:
      return div(subst(e.kids()[0], repl), subst(e.kids()[1], repl));
    case Kind::Mul: {
      std::vector<Expr> ks;
      ks.reserve(e.kids().size());
      for (const auto& k : e.kids()) ks.push_back(subst(k, repl));
      return mul(std::move(ks));
    }
    case Kind::Add: {
      std::vector<Expr> ks;
      ks.reserve(e.kids().size());
      for (const auto& k : e.kids()) ks.push_back(subst(k, repl));
      return add(std::move(ks));
    }
  }
  return e;
}

namespace {

Expr d(const Expr& e, const std::string& v) {
  switch (e.kind()) {
    case Kind::Const:
      return integer(0);
    case Kind::Var:
      return e.name() == v ? integer(1) : integer(0);
    case Kind::Add: {
      std::vector<Expr> ks;
      for (const auto& k : e.kids()) ks.push_back(d(k, v));
      return add(std::move(ks));
    }
    case Kind::Mul: {
      // product rule over n factors
      std::vector<Expr> terms;
      const auto& ks = e.kids();
      for (std::size_t i = 0; i < ks.size(); ++i) {
        if (!depends_on(ks[i], v)) continue;
        std::vector<Expr> f;
        for (std::size_t j = 0; j < ks.size(); ++j)
          f.push_back(j == i ? d(ks[j], v) : ks[j]);
        terms.push_back(mul(std::move(f)));
      }
      return add(std::move(terms));
    }
    case Kind::Div: {
      const Expr& n = e.kids()[0];
      const Expr& m = e.kids()[1];
      if (!depends_on(m, v)) return div(d(n, v), m);
      return div(d(n, v) * m - n * d(m, v), pow(m, Rational(2)));
    }
    case Kind::Pow: {
      const Expr& b = e.kids()[0];
      const Rational& r = e.expo();
      auto rm = rat_add(r, Rational(-1));
      Expr base_pow = rm ? pow(b, *rm) : div(pow(b, r), b);
      return rational(r) * base_pow * d(b, v);
    }
    case Kind::Func: {
      const Expr& u = e.kids()[0];
      Expr du = d(u, v);
      if (du.is_zero_const()) return integer(0);
      switch (e.fn()) {
        case Func1::Sin: return cos(u) * du;
        case Func1::Cos: return neg(sin(u)) * du;
        case Func1::Tan: return (integer(1) + pow(tan(u), Rational(2))) * du;
        case Func1::Cot:
          return neg(integer(1) + pow(cot(u), Rational(2))) * du;
        case Func1::Exp: return exp(u) * du;
        case Func1::Ln: return div(du, u);
        case Func1::Sqrt: return div(du, integer(2) * sqrt(u));
        case Func1::Arctan:
          return div(du, integer(1) + pow(u, Rational(2)));
        case Func1::Arccot:
          return div(neg(du), integer(1) + pow(u, Rational(2)));
      }
    }
  }
  return integer(0);
}

}  // namespace

Expr diff(const Expr& e, const std::string& v) {
  if (!depends_on(e, v)) return integer(0);
  return simplify_basic(d(e, v));
}

}  // namespace ctrlgeo::symexpr
