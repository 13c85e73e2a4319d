#include <algorithm>
#include <numeric>
#include <unordered_map>
#include <vector>

#include "ctrlgeo/expr.hpp"

namespace ctrlgeo::symexpr {

namespace {

// ---------------------------------------------------------------------------
// factor decomposition: e == coeff * prod(base_i ^ exp_i)

struct Factors {
  Number coeff{Rational(1)};
  std::vector<std::pair<Expr, Rational>> fs;
};

void push_factor(Factors& f, const Expr& base, const Rational& e) {
  for (auto& [b, r] : f.fs) {
    if (identical(b, base)) {
      if (auto s = rat_add(r, e)) {
        r = *s;
        return;
      }
    }
  }
  f.fs.emplace_back(base, e);
}

Factors to_factors(const Expr& e) {
  Factors f;
  if (e.is_const()) {
    f.coeff = e.value();
    return f;
  }
  if (e.kind() == Kind::Mul) {
    for (const auto& k : e.kids()) {
      if (k.is_const())
        f.coeff = num_mul(f.coeff, k.value());
      else if (k.kind() == Kind::Pow)
        push_factor(f, k.kids()[0], k.expo());
      else
        push_factor(f, k, Rational(1));
    }
    return f;
  }
  if (e.kind() == Kind::Pow) {
    push_factor(f, e.kids()[0], e.expo());
    return f;
  }
  push_factor(f, e, Rational(1));
  return f;
}

Expr from_factors(const Factors& f) {
  std::vector<Expr> ks;
  ks.push_back(number(f.coeff));
  for (const auto& [b, r] : f.fs)
    if (!r.is_zero()) ks.push_back(pow(b, r));
  return mul(std::move(ks));
}

// term decomposition: e == coeff * core, where core carries no leading
// constant (core == 1 for pure constants)

struct Term {
  Number coeff{Rational(1)};
  Expr core;  // defaults to 0; callers set it
};

Term to_term(const Expr& e) {
  Term t;
  if (e.is_const()) {
    t.coeff = e.value();
    t.core = integer(1);
    return t;
  }
  if (e.kind() == Kind::Mul && e.kids()[0].is_const()) {
    t.coeff = e.kids()[0].value();
    std::vector<Expr> rest(e.kids().begin() + 1, e.kids().end());
    t.core = mul(std::move(rest));
    return t;
  }
  if (e.kind() == Kind::Div && e.kids()[1].is_const() &&
      !e.kids()[1].value().is_zero()) {
    Term inner = to_term(e.kids()[0]);
    inner.coeff = num_div(inner.coeff, e.kids()[1].value());
    return inner;
  }
  t.coeff = Number(Rational(1));
  t.core = e;
  return t;
}

// ---------------------------------------------------------------------------
// collect pass

Expr collect_rec(const Expr& e);

Expr collect_mul(const std::vector<Expr>& kids) {
  Factors f;
  std::vector<Expr> exp_args;  // exp(a)*exp(b) -> exp(a+b)
  for (const auto& k : kids) {
    Factors kf = to_factors(k);
    f.coeff = num_mul(f.coeff, kf.coeff);
    for (auto& [b, r] : kf.fs) {
      if (b.kind() == Kind::Func && b.fn() == Func1::Exp) {
        exp_args.push_back(mul({rational(r), b.kids()[0]}));
        continue;
      }
      push_factor(f, b, r);
    }
  }
  if (!exp_args.empty()) {
    Expr total = add(std::move(exp_args));
    Expr merged = exp(total);
    if (!merged.is_one_const()) push_factor(f, merged, Rational(1));
  }
  return from_factors(f);
}

Expr collect_add(const std::vector<Expr>& kids) {
  std::vector<Expr> cores;  // insertion order
  std::unordered_map<Expr, Number, ExprHash, ExprEq> acc;
  for (const auto& k : kids) {
    Term t = to_term(k);
    auto it = acc.find(t.core);
    if (it == acc.end()) {
      acc.emplace(t.core, t.coeff);
      cores.push_back(t.core);
    } else {
      it->second = num_add(it->second, t.coeff);
    }
  }
  std::vector<Expr> terms;
  for (const auto& c : cores) {
    const Number& v = acc.at(c);
    if (v.is_zero()) continue;
    terms.push_back(mul({number(v), c}));
  }
  return add(std::move(terms));
}

Expr collect_rec(const Expr& e) {
  switch (e.kind()) {
    case Kind::Const:
    case Kind::Var:
      return e;
    case Kind::Func:
      return apply_fn(e.fn(), collect_rec(e.kids()[0]));
    case Kind::Pow:
      return pow(collect_rec(e.kids()[0]), e.expo());
    case Kind::Div:
      return div(collect_rec(e.kids()[0]), collect_rec(e.kids()[1]));
    case Kind::Mul: {
      std::vector<Expr> ks;
      for (const auto& k : e.kids()) ks.push_back(collect_rec(k));
      return collect_mul(ks);
    }
    case Kind::Add: {
      std::vector<Expr> ks;
      for (const auto& k : e.kids()) ks.push_back(collect_rec(k));
      return collect_add(ks);
    }
  }
  return e;
}

// ---------------------------------------------------------------------------
// sin^2 + cos^2 rewrite inside sums

bool number_eq(const Number& a, const Number& b) {
  if (a.exact && b.exact) return a.rat == b.rat;
  return a.to_double() == b.to_double();
}

// removes two powers of `base` from f if present with exponent >= 2
bool strip_square(Factors& f, Func1 fn, Expr* arg_out) {
  for (std::size_t i = 0; i < f.fs.size(); ++i) {
    const Expr& b = f.fs[i].first;
    const Rational& r = f.fs[i].second;
    if (b.kind() == Kind::Func && b.fn() == fn && r.is_integer() &&
        r.num >= 2) {
      *arg_out = b.kids()[0];
      if (r.num == 2)
        f.fs.erase(f.fs.begin() + i);
      else
        f.fs[i].second = Rational(r.num - 2);
      return true;
    }
  }
  return false;
}

Expr trig_pair_pass(const Expr& e);

Expr trig_add(const Expr& e) {
  std::vector<Term> terms;
  for (const auto& k : e.kids()) terms.push_back(to_term(k));
  bool changed = true;
  int guard = 0;
  while (changed && guard++ < 64) {
    changed = false;
    for (std::size_t i = 0; i < terms.size() && !changed; ++i) {
      Factors fi = to_factors(terms[i].core);
      Expr arg_i;
      Factors fi_stripped = fi;
      if (!strip_square(fi_stripped, Func1::Sin, &arg_i)) continue;
      Expr rest_i = from_factors(fi_stripped);
      for (std::size_t j = 0; j < terms.size() && !changed; ++j) {
        if (j == i || !number_eq(terms[i].coeff, terms[j].coeff)) continue;
        Factors fj = to_factors(terms[j].core);
        Expr arg_j;
        Factors fj_stripped = fj;
        if (!strip_square(fj_stripped, Func1::Cos, &arg_j)) continue;
        if (!identical(arg_i, arg_j)) continue;
        Expr rest_j = from_factors(fj_stripped);
        if (!identical(rest_i, rest_j)) continue;
        // c*sin(u)^2*R + c*cos(u)^2*R -> c*R
        Number c = terms[i].coeff;
        std::vector<Term> next;
        for (std::size_t m = 0; m < terms.size(); ++m)
          if (m != i && m != j) next.push_back(terms[m]);
        Term merged;
        merged.coeff = c;
        merged.core = rest_i;
        next.push_back(merged);
        terms = std::move(next);
        changed = true;
      }
    }
  }
  std::vector<Expr> out;
  for (const auto& t : terms) out.push_back(mul({number(t.coeff), t.core}));
  return collect_add(out);
}

Expr trig_pair_pass(const Expr& e) {
  switch (e.kind()) {
    case Kind::Const:
    case Kind::Var:
      return e;
    case Kind::Func:
      return apply_fn(e.fn(), trig_pair_pass(e.kids()[0]));
    case Kind::Pow:
      return pow(trig_pair_pass(e.kids()[0]), e.expo());
    case Kind::Div:
      return div(trig_pair_pass(e.kids()[0]), trig_pair_pass(e.kids()[1]));
    case Kind::Mul: {
      std::vector<Expr> ks;
      for (const auto& k : e.kids()) ks.push_back(trig_pair_pass(k));
      return collect_mul(ks);
    }
    case Kind::Add: {
      std::vector<Expr> ks;
      for (const auto& k : e.kids()) ks.push_back(trig_pair_pass(k));
      Expr s = add(std::move(ks));
      return s.kind() == Kind::Add ? trig_add(s) : s;
    }
  }
  return e;
}

// ---------------------------------------------------------------------------
// rational normal form: rewrite into num/den with a single quotient bar

struct RatForm {
  Expr num;
  Expr den;
};

Expr collapse(const RatForm& r) { return div(r.num, r.den); }

RatForm ratform(const Expr& e);

std::optional<Rational> rat_lcm(const Rational& a, const Rational& b) {
  // lcm over positive rationals: lcm(p1/q1, p2/q2) = lcm(p1,p2)/gcd(q1,q2)
  long long p1 = std::llabs(a.num), p2 = std::llabs(b.num);
  if (p1 == 0 || p2 == 0) return std::nullopt;
  long long g = std::gcd(p1, p2);
  __int128 l = (__int128)p1 / g * p2;
  if (l > (__int128)0x7fffffffffffffffLL) return std::nullopt;
  return Rational((long long)l, std::gcd(a.den, b.den));
}

RatForm ratform_add(const std::vector<RatForm>& parts) {
  bool trivial = true;
  for (const auto& p : parts)
    if (!p.den.is_one_const()) trivial = false;
  if (trivial) {
    std::vector<Expr> ks;
    for (const auto& p : parts) ks.push_back(p.num);
    return {collect_add(ks), integer(1)};
  }
  // least common multiple of the denominator factorizations
  std::vector<Factors> dfs;
  for (const auto& p : parts) dfs.push_back(to_factors(p.den));
  Factors lcm;
  bool exact_ok = true;
  for (const auto& df : dfs) {
    if (!df.coeff.exact) exact_ok = false;
    for (const auto& [b, r] : df.fs) {
      bool found = false;
      for (auto& [lb, lr] : lcm.fs)
        if (identical(lb, b)) {
          if (r.num * lr.den > lr.num * r.den) lr = r;  // max exponent
          found = true;
        }
      if (!found) lcm.fs.emplace_back(b, r);
    }
  }
  Number lc(Rational(1));
  if (exact_ok) {
    Rational acc(1);
    for (const auto& df : dfs) {
      auto l = rat_lcm(acc, df.coeff.rat);
      if (!l) {
        exact_ok = false;
        break;
      }
      acc = *l;
    }
    if (exact_ok) lc = Number(acc);
  }
  if (!exact_ok) {
    double p = 1;
    for (const auto& df : dfs) p *= df.coeff.to_double();
    lc = Number(p);
    // fall back to the plain product of all denominators
    lcm.fs.clear();
    for (const auto& df : dfs)
      for (const auto& [b, r] : df.fs) push_factor(lcm, b, r);
  }
  lcm.coeff = lc;
  std::vector<Expr> num_terms;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    // multiplier = lcm / den_i
    Factors m;
    m.coeff = num_div(lcm.coeff, dfs[i].coeff);
    for (const auto& [b, r] : lcm.fs) {
      Rational have(0);
      for (const auto& [db, dr] : dfs[i].fs)
        if (identical(db, b)) have = dr;
      auto rem = rat_add(r, rat_neg(have));
      if (rem && !rem->is_zero()) m.fs.emplace_back(b, *rem);
    }
    num_terms.push_back(collect_mul({parts[i].num, from_factors(m)}));
  }
  return {collect_add(num_terms), from_factors(lcm)};
}

RatForm ratform(const Expr& e) {
  switch (e.kind()) {
    case Kind::Const:
      if (e.value().exact && !e.value().rat.is_integer())
        return {integer(e.value().rat.num), integer(e.value().rat.den)};
      return {e, integer(1)};
    case Kind::Var:
      return {e, integer(1)};
    case Kind::Func:
      return {apply_fn(e.fn(), collapse(ratform(e.kids()[0]))), integer(1)};
    case Kind::Pow: {
      RatForm b = ratform(e.kids()[0]);
      const Rational& r = e.expo();
      if (r.is_integer()) {
        if (r.num > 0) return {pow(b.num, r), pow(b.den, r)};
        Rational m(-r.num);
        return {pow(b.den, m), pow(b.num, m)};
      }
      return {pow(collapse(b), r), integer(1)};
    }
    case Kind::Div: {
      RatForm n = ratform(e.kids()[0]);
      RatForm d = ratform(e.kids()[1]);
      return {collect_mul({n.num, d.den}), collect_mul({n.den, d.num})};
    }
    case Kind::Mul: {
      std::vector<Expr> nums, dens;
      for (const auto& k : e.kids()) {
        RatForm r = ratform(k);
        nums.push_back(r.num);
        dens.push_back(r.den);
      }
      return {collect_mul(nums), collect_mul(dens)};
    }
    case Kind::Add: {
      std::vector<RatForm> parts;
      for (const auto& k : e.kids()) parts.push_back(ratform(k));
      return ratform_add(parts);
    }
  }
  return {e, integer(1)};
}

// pulls the common structural factors and rational content out of a sum
void extract_content(Expr& e, Factors& out) {
  out = Factors{};
  if (e.kind() != Kind::Add) {
    out = to_factors(e);
    e = integer(1);
    return;
  }
  std::vector<Term> terms;
  for (const auto& k : e.kids()) terms.push_back(to_term(k));
  bool exact = true;
  for (const auto& t : terms)
    if (!t.coeff.exact) exact = false;
  Number content(Rational(1));
  if (exact) {
    Rational g = terms[0].coeff.rat;
    for (std::size_t i = 1; i < terms.size(); ++i) {
      auto r = rat_gcd(g, terms[i].coeff.rat);
      if (!r) {
        g = Rational(1);
        break;
      }
      g = *r;
    }
    if (terms[0].coeff.rat.num < 0) g = rat_neg(g);  // keep leading term positive
    if (!g.is_zero()) content = Number(g);
  }
  // common structural factors (minimum positive exponent across all terms)
  std::vector<Factors> tf;
  for (const auto& t : terms) tf.push_back(to_factors(t.core));
  Factors common;
  for (const auto& [b, r] : tf[0].fs) {
    Rational m = r;
    bool everywhere = true;
    for (std::size_t i = 1; i < tf.size(); ++i) {
      bool found = false;
      for (const auto& [b2, r2] : tf[i].fs)
        if (identical(b, b2)) {
          found = true;
          if (r2.num * m.den < m.num * r2.den) m = r2;
        }
      if (!found) everywhere = false;
    }
    if (everywhere && m.num > 0) common.fs.emplace_back(b, m);
  }
  if (content.is_one() && common.fs.empty()) {
    out.coeff = Number(Rational(1));
    return;
  }
  std::vector<Expr> new_terms;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    Factors f = tf[i];
    for (const auto& [b, m] : common.fs)
      for (auto& [fb, fr] : f.fs)
        if (identical(fb, b)) fr = *rat_add(fr, rat_neg(m));
    Number c = num_div(terms[i].coeff, content);
    new_terms.push_back(collect_mul({number(c), from_factors(f)}));
  }
  e = collect_add(new_terms);
  out = common;
  out.coeff = content;
}

Expr assemble(RatForm r) {
  Expr num = trig_pair_pass(r.num);
  Expr den = trig_pair_pass(r.den);
  Factors cn, cd;
  extract_content(num, cn);
  extract_content(den, cd);
  // cancel shared factors between the two contents
  for (auto& [b, rn] : cn.fs) {
    for (auto& [b2, rd] : cd.fs) {
      if (!identical(b, b2)) continue;
      Rational m = (rn.num * rd.den < rd.num * rn.den) ? rn : rd;
      rn = *rat_add(rn, rat_neg(m));
      rd = *rat_add(rd, rat_neg(m));
    }
  }
  // cancel an Add-block common to both sides
  if (!num.is_one_const() && identical(num, den)) {
    num = integer(1);
    den = integer(1);
  }
  Number q = num_div(cn.coeff, cd.coeff);
  Number qn(Rational(1)), qd(Rational(1));
  if (q.exact) {
    qn = Number(Rational(q.rat.num));
    qd = Number(Rational(q.rat.den));
  } else {
    qn = q;
  }
  Expr final_num = collect_mul({number(qn), from_factors({Number(Rational(1)), cn.fs}), num});
  Expr final_den = collect_mul({number(qd), from_factors({Number(Rational(1)), cd.fs}), den});
  return div(final_num, final_den);
}

}  // namespace

Expr simplify_basic(const Expr& e) { return collect_rec(e); }

Expr simplify(const Expr& e) {
  Expr c = collect_rec(e);
  Expr t = trig_pair_pass(c);
  return assemble(ratform(t));
}

}  // namespace ctrlgeo::symexpr
