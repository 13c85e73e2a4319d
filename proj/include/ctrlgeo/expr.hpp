#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ctrlgeo/rational.hpp"

namespace ctrlgeo::symexpr {

enum class Kind : unsigned char { Const, Var, Func, Pow, Mul, Div, Add };

enum class Func1 : unsigned char {
  Sin,
  Cos,
  Tan,
  Cot,
  Exp,
  Ln,
  Sqrt,
  Arctan,
  Arccot
};

const char* func_name(Func1 f);
std::optional<Func1> func_from_name(std::string_view name);

class Expr;

struct Node {
  Kind kind = Kind::Const;
  Func1 fn = Func1::Sin;
  Number value;           // Const
  std::string name;       // Var
  Rational expo{1};       // Pow exponent
  std::vector<Expr> kids; // Func: 1, Pow: 1 (base), Div: 2, Add/Mul: >= 2
  std::size_t hash = 0;
};

/// Immutable expression handle with value semantics.  All structural
/// invariants (flattened n-ary Add/Mul, folded constants, canonical child
/// order) are maintained by the free-function constructors below; a default
/// constructed Expr is the constant 0.
class Expr {
 public:
  Expr();
  explicit Expr(std::shared_ptr<const Node> p) : p_(std::move(p)) {}

  Kind kind() const { return p_->kind; }
  Func1 fn() const { return p_->fn; }
  const Number& value() const { return p_->value; }
  const std::string& name() const { return p_->name; }
  const Rational& expo() const { return p_->expo; }
  const std::vector<Expr>& kids() const { return p_->kids; }
  std::size_t hash() const { return p_->hash; }

  bool is_const() const { return p_->kind == Kind::Const; }
  bool is_zero_const() const { return is_const() && p_->value.is_zero(); }
  bool is_one_const() const { return is_const() && p_->value.is_one(); }

 private:
  std::shared_ptr<const Node> p_;
};

// Constructors.
Expr integer(long long n);
Expr rational(const Rational& r);
Expr number(const Number& n);
Expr real(double v);
Expr var(const std::string& name);
Expr add(std::vector<Expr> kids);
Expr mul(std::vector<Expr> kids);
Expr pow(const Expr& base, const Rational& e);
Expr div(const Expr& num, const Expr& den);
Expr neg(const Expr& e);
Expr apply_fn(Func1 f, const Expr& arg);

inline Expr operator+(const Expr& a, const Expr& b) { return add({a, b}); }
inline Expr operator-(const Expr& a, const Expr& b) { return add({a, neg(b)}); }
inline Expr operator*(const Expr& a, const Expr& b) { return mul({a, b}); }
inline Expr operator/(const Expr& a, const Expr& b) { return div(a, b); }
inline Expr operator-(const Expr& a) { return neg(a); }

inline Expr sin(const Expr& e) { return apply_fn(Func1::Sin, e); }
inline Expr cos(const Expr& e) { return apply_fn(Func1::Cos, e); }
inline Expr tan(const Expr& e) { return apply_fn(Func1::Tan, e); }
inline Expr cot(const Expr& e) { return apply_fn(Func1::Cot, e); }
inline Expr exp(const Expr& e) { return apply_fn(Func1::Exp, e); }
inline Expr ln(const Expr& e) { return apply_fn(Func1::Ln, e); }
inline Expr sqrt(const Expr& e) { return apply_fn(Func1::Sqrt, e); }
inline Expr arctan(const Expr& e) { return apply_fn(Func1::Arctan, e); }
inline Expr arccot(const Expr& e) { return apply_fn(Func1::Arccot, e); }

/// Total order on trees; defines the canonical child order of Add/Mul.
int compare(const Expr& a, const Expr& b);
bool identical(const Expr& a, const Expr& b);

struct ExprHash {
  std::size_t operator()(const Expr& e) const { return e.hash(); }
};
struct ExprEq {
  bool operator()(const Expr& a, const Expr& b) const { return identical(a, b); }
};

void collect_vars(const Expr& e, std::set<std::string>& out);
std::set<std::string> free_vars(const Expr& e);
bool depends_on(const Expr& e, const std::string& v);

using Assignment = std::map<std::string, double>;

struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
  std::size_t offset;
  ParseError(const std::string& msg, std::size_t off)
      : std::runtime_error(msg), offset(off) {}
};

double eval(const Expr& e, const Assignment& a);

struct ScaledValue {
  double value = 0.0;
  double scale = 0.0;  // max |subterm| seen during evaluation
};
ScaledValue eval_scaled(const Expr& e, const Assignment& a);

Expr diff(const Expr& e, const std::string& v);
Expr subst(const Expr& e, const std::map<std::string, Expr>& repl);

Expr parse(std::string_view text);
std::string render(const Expr& e);

/// Fast normalization: constant folding, flattening and like-term/factor
/// collection.  Used internally after differentiation and bracket
/// arithmetic to keep trees small.
Expr simplify_basic(const Expr& e);

/// Full fixed-pipeline simplifier: fold -> flatten -> collect ->
/// sin^2+cos^2 rewrite -> rational normal form.  Idempotent.
Expr simplify(const Expr& e);

}  // namespace ctrlgeo::symexpr
