#include "ctrlgeo/expr.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>

namespace ctrlgeo::symexpr {

namespace {

std::size_t hash_mix(std::size_t h, std::size_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

std::size_t node_hash(const Node& n) {
  std::size_t h = (std::size_t)n.kind * 1099511628211ULL;
  switch (n.kind) {
    case Kind::Const:
      if (n.value.exact) {
        h = hash_mix(h, std::hash<long long>()(n.value.rat.num));
        h = hash_mix(h, std::hash<long long>()(n.value.rat.den));
      } else {
        h = hash_mix(h, std::hash<double>()(n.value.flt));
      }
      break;
    case Kind::Var:
      h = hash_mix(h, std::hash<std::string>()(n.name));
      break;
    case Kind::Func:
      h = hash_mix(h, (std::size_t)n.fn);
      break;
    case Kind::Pow:
      h = hash_mix(h, std::hash<long long>()(n.expo.num));
      h = hash_mix(h, std::hash<long long>()(n.expo.den));
      break;
    default:
      break;
  }
  for (const auto& k : n.kids) h = hash_mix(h, k.hash());
  return h;
}

Expr make(Node n) {
  n.hash = node_hash(n);
  return Expr(std::make_shared<const Node>(std::move(n)));
}

int cmp_ll(long long a, long long b) { return a < b ? -1 : (a > b ? 1 : 0); }

int kind_rank(Kind k) {
  switch (k) {
    case Kind::Const: return 0;
    case Kind::Var: return 1;
    case Kind::Func: return 2;
    case Kind::Pow: return 3;
    case Kind::Mul: return 4;
    case Kind::Div: return 5;
    case Kind::Add: return 6;
  }
  return 7;
}

}  // namespace

const char* func_name(Func1 f) {
  switch (f) {
    case Func1::Sin: return "sin";
    case Func1::Cos: return "cos";
    case Func1::Tan: return "tan";
    case Func1::Cot: return "cot";
    case Func1::Exp: return "exp";
    case Func1::Ln: return "ln";
    case Func1::Sqrt: return "sqrt";
    case Func1::Arctan: return "arctan";
    case Func1::Arccot: return "arccot";
  }
  return "?";
}

std::optional<Func1> func_from_name(std::string_view name) {
  static const std::pair<const char*, Func1> table[] = {
      {"sin", Func1::Sin},     {"cos", Func1::Cos},
      {"tan", Func1::Tan},     {"cot", Func1::Cot},
      {"exp", Func1::Exp},     {"ln", Func1::Ln},
      {"sqrt", Func1::Sqrt},   {"arctan", Func1::Arctan},
      {"arccot", Func1::Arccot}};
  for (const auto& [n, f] : table)
    if (name == n) return f;
  return std::nullopt;
}

Expr::Expr() {
  static const Expr zero = [] {
    Node n;
    n.kind = Kind::Const;
    n.value = Number(Rational(0));
    return make(std::move(n));
  }();
  p_ = zero.p_;
}

int compare(const Expr& a, const Expr& b) {
  if (a.kind() != b.kind())
    return kind_rank(a.kind()) < kind_rank(b.kind()) ? -1 : 1;
  switch (a.kind()) {
    case Kind::Const: {
      // compare by numeric value, exact numbers first among equals
      double dx = a.value().to_double(), dy = b.value().to_double();
      if (dx < dy) return -1;
      if (dx > dy) return 1;
      if (a.value().exact != b.value().exact) return a.value().exact ? -1 : 1;
      if (a.value().exact) {
        if (int c = cmp_ll(a.value().rat.num, b.value().rat.num)) return c;
        return cmp_ll(a.value().rat.den, b.value().rat.den);
      }
      return 0;
    }
    case Kind::Var:
      return a.name().compare(b.name()) < 0   ? -1
             : a.name().compare(b.name()) > 0 ? 1
                                              : 0;
    case Kind::Func:
      if (a.fn() != b.fn()) return (int)a.fn() < (int)b.fn() ? -1 : 1;
      return compare(a.kids()[0], b.kids()[0]);
    case Kind::Pow: {
      if (int c = compare(a.kids()[0], b.kids()[0])) return c;
      if (int c = cmp_ll(a.expo().num, b.expo().num)) return c;
      return cmp_ll(a.expo().den, b.expo().den);
    }
    default: {
      if (a.kids().size() != b.kids().size())
        return a.kids().size() < b.kids().size() ? -1 : 1;
      for (std::size_t i = 0; i < a.kids().size(); ++i)
        if (int c = compare(a.kids()[i], b.kids()[i])) return c;
      return 0;
    }
  }
}

bool identical(const Expr& a, const Expr& b) {
  if (a.hash() != b.hash()) return false;
  return compare(a, b) == 0;
}

Expr integer(long long n) { return rational(Rational(n)); }

Expr rational(const Rational& r) {
  Node n;
  n.kind = Kind::Const;
  n.value = Number(r);
  return make(std::move(n));
}

Expr number(const Number& v) {
  Node n;
  n.kind = Kind::Const;
  n.value = v;
  return make(std::move(n));
}

Expr real(double v) { return number(Number(v)); }

Expr var(const std::string& name) {
  Node n;
  n.kind = Kind::Var;
  n.name = name;
  return make(std::move(n));
}

Expr add(std::vector<Expr> kids) {
  std::vector<Expr> flat;
  Number c(Rational(0));
  bool have_const = false;
  std::function<void(const Expr&)> push = [&](const Expr& e) {
    if (e.kind() == Kind::Add) {
      for (const auto& k : e.kids()) push(k);
    } else if (e.is_const()) {
      c = num_add(c, e.value());
      have_const = true;
    } else {
      flat.push_back(e);
    }
  };
  for (const auto& k : kids) push(k);
  std::sort(flat.begin(), flat.end(),
            [](const Expr& a, const Expr& b) { return compare(a, b) < 0; });
  if (have_const && !c.is_zero()) flat.insert(flat.begin(), number(c));
  if (flat.empty()) return integer(0);
  if (flat.size() == 1) return flat[0];
  Node n;
  n.kind = Kind::Add;
  n.kids = std::move(flat);
  return make(std::move(n));
}

Expr mul(std::vector<Expr> kids) {
  std::vector<Expr> flat;
  Number c(Rational(1));
  std::function<void(const Expr&)> push = [&](const Expr& e) {
    if (e.kind() == Kind::Mul) {
      for (const auto& k : e.kids()) push(k);
    } else if (e.is_const()) {
      c = num_mul(c, e.value());
    } else {
      flat.push_back(e);
    }
  };
  for (const auto& k : kids) push(k);
  if (c.is_zero()) return integer(0);
  std::sort(flat.begin(), flat.end(),
            [](const Expr& a, const Expr& b) { return compare(a, b) < 0; });
  if (!c.is_one()) flat.insert(flat.begin(), number(c));
  if (flat.empty()) return number(c);
  if (flat.size() == 1) return flat[0];
  Node n;
  n.kind = Kind::Mul;
  n.kids = std::move(flat);
  return make(std::move(n));
}

Expr pow(const Expr& base, const Rational& e) {
  if (e.is_zero()) return integer(1);
  if (e.is_one()) return base;
  if (base.is_const()) {
    const Number& v = base.value();
    if (v.exact && e.is_integer()) {
      if (auto r = rat_pow(v.rat, e.num)) return rational(*r);
    }
    if (!v.exact || !e.is_integer()) {
      double d = std::pow(v.to_double(), e.to_double());
      if (std::isfinite(d)) return real(d);
    }
  }
  if (base.kind() == Kind::Pow && e.is_integer()) {
    if (auto r = rat_mul(base.expo(), e)) return pow(base.kids()[0], *r);
  }
  if (base.kind() == Kind::Mul && e.is_integer()) {
    std::vector<Expr> ks;
    ks.reserve(base.kids().size());
    for (const auto& k : base.kids()) ks.push_back(pow(k, e));
    return mul(std::move(ks));
  }
  Node n;
  n.kind = Kind::Pow;
  n.expo = e;
  n.kids = {base};
  return make(std::move(n));
}

Expr div(const Expr& num, const Expr& den) {
  if (den.is_one_const()) return num;
  if (num.is_const() && den.is_const() && !den.value().is_zero())
    return number(num_div(num.value(), den.value()));
  if (num.is_zero_const() && !(den.is_const() && den.value().is_zero()))
    return integer(0);
  // flatten nested quotients
  if (num.kind() == Kind::Div)
    return div(num.kids()[0], mul({num.kids()[1], den}));
  if (den.kind() == Kind::Div)
    return div(mul({num, den.kids()[1]}), den.kids()[0]);
  Node n;
  n.kind = Kind::Div;
  n.kids = {num, den};
  return make(std::move(n));
}

Expr neg(const Expr& e) {
  if (e.is_const()) return number(num_neg(e.value()));
  return mul({integer(-1), e});
}

Expr apply_fn(Func1 f, const Expr& arg) {
  if (arg.is_const()) {
    const Number& v = arg.value();
    if (v.exact && v.rat.is_zero()) {
      switch (f) {
        case Func1::Sin:
        case Func1::Tan:
        case Func1::Arctan:
        case Func1::Sqrt:
          return integer(0);
        case Func1::Cos:
        case Func1::Exp:
          return integer(1);
        default:
          break;  // ln/cot poles, arccot(0) irrational: keep node
      }
    }
    if (v.exact && v.rat.is_one()) {
      if (f == Func1::Ln) return integer(0);
      if (f == Func1::Sqrt) return integer(1);
    }
    if (!v.exact) {
      double x = v.flt, r = NAN;
      switch (f) {
        case Func1::Sin: r = std::sin(x); break;
        case Func1::Cos: r = std::cos(x); break;
        case Func1::Tan: r = std::tan(x); break;
        case Func1::Cot: r = std::cos(x) / std::sin(x); break;
        case Func1::Exp: r = std::exp(x); break;
        case Func1::Ln: r = x > 0 ? std::log(x) : NAN; break;
        case Func1::Sqrt: r = x >= 0 ? std::sqrt(x) : NAN; break;
        case Func1::Arctan: r = std::atan(x); break;
        case Func1::Arccot: r = M_PI_2 - std::atan(x); break;
      }
      if (std::isfinite(r)) return real(r);
    }
  }
  Node n;
  n.kind = Kind::Func;
  n.fn = f;
  n.kids = {arg};
  return make(std::move(n));
}

void collect_vars(const Expr& e, std::set<std::string>& out) {
  if (e.kind() == Kind::Var) {
    out.insert(e.name());
    return;
  }
  for (const auto& k : e.kids()) collect_vars(k, out);
}

std::set<std::string> free_vars(const Expr& e) {
  std::set<std::string> s;
  collect_vars(e, s);
  return s;
}

bool depends_on(const Expr& e, const std::string& v) {
  if (e.kind() == Kind::Var) return e.name() == v;
  for (const auto& k : e.kids())
    if (depends_on(k, v)) return true;
  return false;
}

// ---------------------------------------------------------------------------
// Rendering.  The printer and the parser are exact inverses on normalized
// trees; see the round-trip property tests.

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  std::string s = buf;
  // ensure it reparses as a float literal, not an integer
  if (s.find_first_of(".eE") == std::string::npos &&
      s.find_first_of("nN") == std::string::npos)
    s += ".0";
  return s;
}

std::string const_str(const Number& v) {
  return v.exact ? v.rat.str() : fmt_double(v.flt);
}

bool atomic_for_pow_base(const Expr& e) {
  if (e.kind() == Kind::Var) return true;
  if (e.kind() == Kind::Func) return true;
  if (e.is_const())
    return e.value().exact && e.value().rat.is_integer() &&
           e.value().rat.num >= 0;
  return false;
}

std::string rend(const Expr& e);

std::string rend_factor(const Expr& e) {
  // factor position inside Mul / Div numerator
  if (e.kind() == Kind::Add || e.kind() == Kind::Div) return "(" + rend(e) + ")";
  return rend(e);
}

std::string rend(const Expr& e) {
  switch (e.kind()) {
    case Kind::Const:
      return const_str(e.value());
    case Kind::Var:
      return e.name();
    case Kind::Func:
      return std::string(func_name(e.fn())) + "(" + rend(e.kids()[0]) + ")";
    case Kind::Pow: {
      std::string b = atomic_for_pow_base(e.kids()[0])
                          ? rend(e.kids()[0])
                          : "(" + rend(e.kids()[0]) + ")";
      const Rational& r = e.expo();
      if (r.is_integer() && r.num >= 0) return b + "^" + r.str();
      return b + "^(" + r.str() + ")";
    }
    case Kind::Mul: {
      const auto& ks = e.kids();
      std::size_t i = 0;
      std::string out;
      if (ks[0].is_const()) {
        const Number& c = ks[0].value();
        if (c.exact && c.rat.num == -1 && c.rat.den == 1) {
          out = "-";
          i = 1;
        }
      }
      bool first = true;
      for (; i < ks.size(); ++i) {
        if (!first) out += "*";
        out += rend_factor(ks[i]);
        first = false;
      }
      return out;
    }
    case Kind::Div: {
      std::string num = e.kids()[0].kind() == Kind::Add
                            ? "(" + rend(e.kids()[0]) + ")"
                            : rend(e.kids()[0]);
      const Expr& d = e.kids()[1];
      bool par = !(d.kind() == Kind::Var || d.kind() == Kind::Func ||
                   d.kind() == Kind::Pow ||
                   (d.is_const() && d.value().to_double() > 0));
      return num + "/" + (par ? "(" + rend(d) + ")" : rend(d));
    }
    case Kind::Add: {
      std::string out;
      bool first = true;
      for (const auto& k : e.kids()) {
        bool negative = false;
        if (k.is_const() && k.value().to_double() < 0) negative = true;
        if (k.kind() == Kind::Mul && k.kids()[0].is_const() &&
            k.kids()[0].value().to_double() < 0)
          negative = true;
        if (first) {
          out += rend(k);
          first = false;
        } else if (negative) {
          out += " - " + rend(neg(k));
        } else {
          out += " + " + rend(k);
        }
      }
      return out;
    }
  }
  return "?";
}

}  // namespace

std::string render(const Expr& e) { return rend(e); }

}  // namespace ctrlgeo::symexpr
