#pragma once

#include <memory>
#include <string>
#include <vector>

#include "haarint/monomial.hpp"

namespace haarint {

/// Immutable expression tree with shared structure.
class Expr {
 public:
  enum class Kind {
    ScalarLit,  // exact scalar (covers integer literals)
    Symbol,     // bare matrix symbol
    Entry,      // indexed entry, with conjugation flag
    Conj,
    Abs,
    Re,
    Im,
    Tr,
    Adjoint,
    Sum,
    Product,
    Power,     // integer exponent
    Quotient,  // kids[0] / kids[1]
  };

  struct Node {
    Kind kind;
    Scalar scalar;
    std::string name;
    int row = 0, col = 0;
    bool conj = false;
    long exponent = 0;
    std::vector<Expr> kids;
  };

  Expr() : Expr(scalarLit(Scalar(0))) {}

  static Expr scalarLit(Scalar s);
  static Expr integer(long n) { return scalarLit(Scalar(n)); }
  static Expr symbol(std::string name);
  static Expr entry(std::string name, int row, int col, bool conj = false);
  static Expr conj(Expr e);
  static Expr abs(Expr e);
  static Expr re(Expr e);
  static Expr im(Expr e);
  static Expr tr(Expr e);
  static Expr adjoint(Expr e);
  static Expr sum(std::vector<Expr> kids);
  static Expr product(std::vector<Expr> kids);
  static Expr power(Expr base, long exponent);
  static Expr quotient(Expr num, Expr den);

  const Node& node() const { return *p_; }
  Kind kind() const { return p_->kind; }
  const std::vector<Expr>& kids() const { return p_->kids; }

  Expr operator+(const Expr& o) const { return sum({*this, o}); }
  Expr operator-(const Expr& o) const {
    return sum({*this, product({integer(-1), o})});
  }
  Expr operator*(const Expr& o) const { return product({*this, o}); }

  /// Structural equality.
  friend bool operator==(const Expr& a, const Expr& b);
  friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

  bool containsKind(Kind k) const;

  /// Grammar-compatible rendering; parse(render(e)) == e after normalization
  /// of literals.
  std::string str() const;

 private:
  explicit Expr(std::shared_ptr<const Node> p) : p_(std::move(p)) {}
  std::shared_ptr<const Node> p_;
};

/// Parses the expression grammar:
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := atom ('^' int)? | '-' factor
///   atom   := number | ident | ident '[' int ',' int ']' | atom '\''
///           | func '(' expr ')' | '(' expr ')'
///   func in {abs, conj, re, im, tr}
/// The adjoint mark ' binds tighter than '^'.  Division is accepted
/// syntactically; integrands may divide only by scalars.
Expr parse(const std::string& text);

/// Rewrites abs/re/im away, pushes conjugation to the leaves, folds adjoints
/// (entry adjoints become conjugated swapped entries), flattens sums and
/// products, and folds scalar subexpressions.  Idempotent.
Expr normalize(const Expr& e);

/// One expanded summand: scalar coefficient times entry factors (matrix
/// entries of any symbol; the dispatcher separates random from constant).
struct ExpandedTerm {
  Scalar coeff{1};
  std::vector<MonomialFactor> factors;
};

/// Distributes a normalized, trace-free, scalar-valued expression into a sum
/// of monomials with collected coefficients and merged like terms.
std::vector<ExpandedTerm> expand(const Expr& e);

}  // namespace haarint
