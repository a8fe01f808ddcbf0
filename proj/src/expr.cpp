#include "haarint/expr.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <sstream>

#include "haarint/errors.hpp"

namespace haarint {

namespace {

Expr::Node makeNode(Expr::Kind k) {
  Expr::Node n;
  n.kind = k;
  return n;
}

}  // namespace

Expr Expr::scalarLit(Scalar s) {
  auto n = std::make_shared<Node>(makeNode(Kind::ScalarLit));
  n->scalar = std::move(s);
  return Expr(std::move(n));
}

Expr Expr::symbol(std::string name) {
  auto n = std::make_shared<Node>(makeNode(Kind::Symbol));
  n->name = std::move(name);
  return Expr(std::move(n));
}

Expr Expr::entry(std::string name, int row, int col, bool conj) {
  auto n = std::make_shared<Node>(makeNode(Kind::Entry));
  n->name = std::move(name);
  n->row = row;
  n->col = col;
  n->conj = conj;
  return Expr(std::move(n));
}

#define HAARINT_UNARY(NAME, KIND)                       \
  Expr Expr::NAME(Expr e) {                             \
    auto n = std::make_shared<Node>(makeNode(KIND));    \
    n->kids.push_back(std::move(e));                    \
    return Expr(std::move(n));                          \
  }

HAARINT_UNARY(conj, Kind::Conj)
HAARINT_UNARY(abs, Kind::Abs)
HAARINT_UNARY(re, Kind::Re)
HAARINT_UNARY(im, Kind::Im)
HAARINT_UNARY(tr, Kind::Tr)
HAARINT_UNARY(adjoint, Kind::Adjoint)
#undef HAARINT_UNARY

Expr Expr::sum(std::vector<Expr> kids) {
  auto n = std::make_shared<Node>(makeNode(Kind::Sum));
  n->kids = std::move(kids);
  return Expr(std::move(n));
}

Expr Expr::product(std::vector<Expr> kids) {
  auto n = std::make_shared<Node>(makeNode(Kind::Product));
  n->kids = std::move(kids);
  return Expr(std::move(n));
}

Expr Expr::power(Expr base, long exponent) {
  auto n = std::make_shared<Node>(makeNode(Kind::Power));
  n->kids.push_back(std::move(base));
  n->exponent = exponent;
  return Expr(std::move(n));
}

Expr Expr::quotient(Expr num, Expr den) {
  auto n = std::make_shared<Node>(makeNode(Kind::Quotient));
  n->kids.push_back(std::move(num));
  n->kids.push_back(std::move(den));
  return Expr(std::move(n));
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.p_ == b.p_) return true;
  const Expr::Node& x = *a.p_;
  const Expr::Node& y = *b.p_;
  if (x.kind != y.kind || x.scalar != y.scalar || x.name != y.name || x.row != y.row ||
      x.col != y.col || x.conj != y.conj || x.exponent != y.exponent ||
      x.kids.size() != y.kids.size())
    return false;
  for (std::size_t i = 0; i < x.kids.size(); ++i)
    if (!(x.kids[i] == y.kids[i])) return false;
  return true;
}

bool Expr::containsKind(Kind k) const {
  if (kind() == k) return true;
  for (const Expr& c : kids())
    if (c.containsKind(k)) return true;
  return false;
}

// ---------------------------------------------------------------------------
// Rendering

namespace {

int precedence(Expr::Kind k) {
  switch (k) {
    case Expr::Kind::Sum:
      return 1;
    case Expr::Kind::Product:
    case Expr::Kind::Quotient:
      return 2;
    case Expr::Kind::Power:
      return 3;
    default:
      return 4;
  }
}

void render(const Expr& e, std::ostringstream& os, int parentPrec) {
  const auto& n = e.node();
  int prec = precedence(n.kind);
  bool paren = prec < parentPrec;
  if (paren) os << "(";
  switch (n.kind) {
    case Expr::Kind::ScalarLit:
      if (n.scalar.isReal() && denominator(n.scalar.re) == 1 && n.scalar.re >= 0) {
        os << n.scalar.re;
      } else {
        os << "(" << n.scalar.str() << ")";
      }
      break;
    case Expr::Kind::Symbol:
      os << n.name;
      break;
    case Expr::Kind::Entry:
      if (n.conj) os << "conj(";
      os << n.name << "[" << n.row << "," << n.col << "]";
      if (n.conj) os << ")";
      break;
    case Expr::Kind::Conj:
      os << "conj(";
      render(n.kids[0], os, 0);
      os << ")";
      break;
    case Expr::Kind::Abs:
      os << "abs(";
      render(n.kids[0], os, 0);
      os << ")";
      break;
    case Expr::Kind::Re:
      os << "re(";
      render(n.kids[0], os, 0);
      os << ")";
      break;
    case Expr::Kind::Im:
      os << "im(";
      render(n.kids[0], os, 0);
      os << ")";
      break;
    case Expr::Kind::Tr:
      os << "tr(";
      render(n.kids[0], os, 0);
      os << ")";
      break;
    case Expr::Kind::Adjoint:
      render(n.kids[0], os, 4);
      os << "'";
      break;
    case Expr::Kind::Sum:
      for (std::size_t i = 0; i < n.kids.size(); ++i) {
        if (i) os << " + ";
        render(n.kids[i], os, prec);
      }
      break;
    case Expr::Kind::Product:
      for (std::size_t i = 0; i < n.kids.size(); ++i) {
        if (i) os << " * ";
        render(n.kids[i], os, prec + 1);
      }
      break;
    case Expr::Kind::Quotient:
      render(n.kids[0], os, prec + 1);
      os << " / ";
      render(n.kids[1], os, prec + 1);
      break;
    case Expr::Kind::Power:
      render(n.kids[0], os, prec + 1);
      os << "^" << n.exponent;
      break;
  }
  if (paren) os << ")";
}

}  // namespace

std::string Expr::str() const {
  std::ostringstream os;
  render(*this, os, 0);
  return os.str();
}

// ---------------------------------------------------------------------------
// Parser

namespace {

struct Parser {
  const std::string& text;
  std::size_t pos = 0;

  explicit Parser(const std::string& t) : text(t) {}

  void skipWs() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  char peek() {
    skipWs();
    return pos < text.size() ? text[pos] : '\0';
  }
  bool eat(char c) {
    if (peek() == c) {
      ++pos;
      return true;
    }
    return false;
  }
  void expect(char c, const char* what) {
    if (!eat(c)) throw ParseError("unexpected input", pos, what);
  }

  long parseInt() {
    skipWs();
    std::size_t start = pos;
    if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) ++pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == start || (pos == start + 1 && !std::isdigit(static_cast<unsigned char>(text[start]))))
      throw ParseError("expected integer", start, "integer");
    return std::stol(text.substr(start, pos - start));
  }

  std::string parseIdent() {
    skipWs();
    std::size_t start = pos;
    if (pos >= text.size() || !std::isalpha(static_cast<unsigned char>(text[pos])))
      throw ParseError("expected identifier", pos, "identifier");
    while (pos < text.size() && std::isalnum(static_cast<unsigned char>(text[pos]))) ++pos;
    return text.substr(start, pos - start);
  }

  Expr parseExpr() {
    std::vector<Expr> terms;
    terms.push_back(parseTerm());
    while (true) {
      char c = peek();
      if (c == '+') {
        ++pos;
        terms.push_back(parseTerm());
      } else if (c == '-') {
        ++pos;
        Expr t = parseTerm();
        if (t.kind() == Expr::Kind::ScalarLit)
          terms.push_back(Expr::scalarLit(-t.node().scalar));
        else
          terms.push_back(Expr::product({Expr::integer(-1), t}));
      } else {
        break;
      }
    }
    return terms.size() == 1 ? terms[0] : Expr::sum(std::move(terms));
  }

  Expr parseTerm() {
    Expr acc = parseFactor();
    while (true) {
      char c = peek();
      if (c == '*') {
        ++pos;
        acc = Expr::product({acc, parseFactor()});
      } else if (c == '/') {
        ++pos;
        Expr rhs = parseFactor();
        // Fold scalar/scalar divisions so literals round-trip exactly.
        if (acc.kind() == Expr::Kind::ScalarLit && rhs.kind() == Expr::Kind::ScalarLit) {
          if (rhs.node().scalar.isZero()) throw ParseError("division by zero", pos);
          acc = Expr::scalarLit(acc.node().scalar / rhs.node().scalar);
        } else {
          acc = Expr::quotient(acc, rhs);
        }
      } else {
        break;
      }
    }
    return acc;
  }

  Expr parseFactor() {
    if (peek() == '-') {
      ++pos;
      Expr f = parseFactor();
      if (f.kind() == Expr::Kind::ScalarLit) return Expr::scalarLit(-f.node().scalar);
      return Expr::product({Expr::integer(-1), f});
    }
    Expr a = parseAtom();
    if (peek() == '^') {
      ++pos;
      long e = parseInt();
      return Expr::power(std::move(a), e);
    }
    return a;
  }

  Expr parseAtom() {
    char c = peek();
    Expr a = Expr::integer(0);
    if (c == '(') {
      ++pos;
      a = parseExpr();
      expect(')', "')'");
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      a = Expr::integer(parseInt());
    } else if (std::isalpha(static_cast<unsigned char>(c))) {
      std::string id = parseIdent();
      if (peek() == '(' &&
          (id == "abs" || id == "conj" || id == "re" || id == "im" || id == "tr")) {
        ++pos;
        Expr inner = parseExpr();
        expect(')', "')'");
        if (id == "abs")
          a = Expr::abs(std::move(inner));
        else if (id == "conj")
          a = Expr::conj(std::move(inner));
        else if (id == "re")
          a = Expr::re(std::move(inner));
        else if (id == "im")
          a = Expr::im(std::move(inner));
        else
          a = Expr::tr(std::move(inner));
      } else if (peek() == '[') {
        ++pos;
        long r = parseInt();
        expect(',', "','");
        long col = parseInt();
        expect(']', "']'");
        if (r < 1 || col < 1) throw ParseError("entry indices must be >= 1", pos);
        a = Expr::entry(id, static_cast<int>(r), static_cast<int>(col));
      } else {
        a = Expr::symbol(id);
      }
    } else {
      throw ParseError("unexpected character", pos, "number, identifier or '('");
    }
    // Adjoint marks bind tighter than '^'.
    while (peek() == '\'') {
      ++pos;
      a = Expr::adjoint(std::move(a));
    }
    return a;
  }
};

}  // namespace

Expr parse(const std::string& text) {
  Parser p(text);
  Expr e = p.parseExpr();
  p.skipWs();
  if (p.pos != text.size()) throw ParseError("trailing input", p.pos, "end of expression");
  return e;
}

// ---------------------------------------------------------------------------
// Normalization

namespace {

std::optional<Scalar> asScalar(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::ScalarLit:
      return e.node().scalar;
    case Expr::Kind::Conj: {
      auto v = asScalar(e.kids()[0]);
      if (v) return v->conj();
      return std::nullopt;
    }
    case Expr::Kind::Sum: {
      Scalar acc(0);
      for (const Expr& k : e.kids()) {
        auto v = asScalar(k);
        if (!v) return std::nullopt;
        acc += *v;
      }
      return acc;
    }
    case Expr::Kind::Product: {
      Scalar acc(1);
      for (const Expr& k : e.kids()) {
        auto v = asScalar(k);
        if (!v) return std::nullopt;
        acc *= *v;
      }
      return acc;
    }
    case Expr::Kind::Power: {
      auto v = asScalar(e.kids()[0]);
      if (!v) return std::nullopt;
      long ex = e.node().exponent;
      if (ex < 0) {
        if (v->isZero()) throw InvalidInputError("zero to a negative power");
        Scalar inv = Scalar(1) / *v;
        Scalar acc(1);
        for (long i = 0; i < -ex; ++i) acc *= inv;
        return acc;
      }
      Scalar acc(1);
      for (long i = 0; i < ex; ++i) acc *= *v;
      return acc;
    }
    case Expr::Kind::Quotient: {
      auto n = asScalar(e.kids()[0]);
      auto d = asScalar(e.kids()[1]);
      if (n && d) {
        if (d->isZero()) throw InvalidInputError("division by zero");
        return *n / *d;
      }
      return std::nullopt;
    }
    case Expr::Kind::Re: {
      auto v = asScalar(e.kids()[0]);
      if (v) return Scalar(v->re);
      return std::nullopt;
    }
    case Expr::Kind::Im: {
      auto v = asScalar(e.kids()[0]);
      if (v) return Scalar(v->im);
      return std::nullopt;
    }
    default:
      return std::nullopt;
  }
}

Expr normalizeRec(const Expr& e);

// conj distributed to the leaves; matrix atoms keep Conj directly above
// Symbol / Adjoint(Symbol).
Expr pushConj(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::ScalarLit:
      return Expr::scalarLit(e.node().scalar.conj());
    case Expr::Kind::Entry:
      return Expr::entry(e.node().name, e.node().row, e.node().col, !e.node().conj);
    case Expr::Kind::Conj:
      return e.kids()[0];
    case Expr::Kind::Symbol:
    case Expr::Kind::Adjoint:
      return Expr::conj(e);
    case Expr::Kind::Sum: {
      std::vector<Expr> kids;
      for (const Expr& k : e.kids()) kids.push_back(pushConj(k));
      return Expr::sum(std::move(kids));
    }
    case Expr::Kind::Product: {
      std::vector<Expr> kids;
      for (const Expr& k : e.kids()) kids.push_back(pushConj(k));
      return Expr::product(std::move(kids));
    }
    case Expr::Kind::Power:
      return Expr::power(pushConj(e.kids()[0]), e.node().exponent);
    case Expr::Kind::Quotient:
      return Expr::quotient(pushConj(e.kids()[0]), pushConj(e.kids()[1]));
    case Expr::Kind::Tr: {
      // conj(tr(w)) = tr(conj(w))
      return Expr::tr(pushConj(e.kids()[0]));
    }
    default:
      throw UnsupportedFormError("conjugation of an unnormalized node");
  }
}

// Adjoint distributed down to matrix atoms: (AB)' = B'A', (A')' = A,
// entry adjoints become conjugated swapped entries.
Expr pushAdjoint(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::ScalarLit:
      return Expr::scalarLit(e.node().scalar.conj());
    case Expr::Kind::Entry:
      return Expr::entry(e.node().name, e.node().col, e.node().row, !e.node().conj);
    case Expr::Kind::Symbol:
      return Expr::adjoint(e);
    case Expr::Kind::Adjoint:
      return e.kids()[0];
    case Expr::Kind::Conj: {
      // (conj(X))' : adjoint then conj; canonical order Conj(Adjoint(X)).
      Expr inner = pushAdjoint(e.kids()[0]);
      return pushConj(inner);
    }
    case Expr::Kind::Sum: {
      std::vector<Expr> kids;
      for (const Expr& k : e.kids()) kids.push_back(pushAdjoint(k));
      return Expr::sum(std::move(kids));
    }
    case Expr::Kind::Product: {
      std::vector<Expr> kids;
      for (auto it = e.kids().rbegin(); it != e.kids().rend(); ++it)
        kids.push_back(pushAdjoint(*it));
      return Expr::product(std::move(kids));
    }
    case Expr::Kind::Power:
      return Expr::power(pushAdjoint(e.kids()[0]), e.node().exponent);
    default:
      throw UnsupportedFormError("adjoint of an unsupported node");
  }
}

// Collects abs factors inside a product and pairs them; a leftover odd abs
// power stays in place and is rejected by the final normalize() check.
Expr rewriteAbsProduct(std::vector<Expr> kids) {
  std::vector<Expr> flat;
  std::map<std::string, std::pair<Expr, long>> absCount;  // keyed by rendering
  for (Expr& k : kids) {
    long exp = 1;
    Expr base = k;
    if (base.kind() == Expr::Kind::Power) {
      exp = base.node().exponent;
      base = base.kids()[0];
    }
    if (base.kind() == Expr::Kind::Abs && exp >= 1) {
      Expr inner = base.kids()[0];
      auto key = inner.str();
      auto it = absCount.find(key);
      if (it == absCount.end())
        absCount.emplace(key, std::make_pair(inner, exp));
      else
        it->second.second += exp;
    } else {
      flat.push_back(exp == 1 ? base : Expr::power(base, exp));
    }
  }
  for (auto& [key, v] : absCount) {
    (void)key;
    auto& [inner, total] = v;
    long half = total / 2;
    if (half > 0) {
      Expr pair = Expr::product({inner, Expr::conj(inner)});
      flat.push_back(half == 1 ? pair : Expr::power(pair, half));
    }
    if (total % 2 != 0) flat.push_back(Expr::abs(inner));
  }
  if (flat.empty()) return Expr::integer(1);
  return flat.size() == 1 ? flat[0] : Expr::product(std::move(flat));
}

Expr normalizeRec(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::ScalarLit:
    case Expr::Kind::Symbol:
    case Expr::Kind::Entry:
      return e;
    case Expr::Kind::Re: {
      Expr z = normalizeRec(e.kids()[0]);
      // re(z) -> (z + conj z) / 2
      return normalizeRec(Expr::product(
          {Expr::scalarLit(Scalar(Rat(1, 2))), Expr::sum({z, Expr::conj(z)})}));
    }
    case Expr::Kind::Im: {
      Expr z = normalizeRec(e.kids()[0]);
      // im(z) -> (z - conj z) / (2i)
      return normalizeRec(Expr::product(
          {Expr::scalarLit(Scalar(Rat(0), Rat(-1, 2))),
           Expr::sum({z, Expr::product({Expr::integer(-1), Expr::conj(z)})})}));
    }
    case Expr::Kind::Abs:
      // Kept as-is here; products pair abs factors up, and normalize()
      // rejects any leftover odd power at the end.
      return Expr::abs(normalizeRec(e.kids()[0]));
    case Expr::Kind::Conj:
      return pushConj(normalizeRec(e.kids()[0]));
    case Expr::Kind::Adjoint:
      return pushAdjoint(normalizeRec(e.kids()[0]));
    case Expr::Kind::Tr:
      return Expr::tr(normalizeRec(e.kids()[0]));
    case Expr::Kind::Sum: {
      std::vector<Expr> kids;
      Scalar scalarAcc(0);
      bool sawScalar = false;
      for (const Expr& k : e.kids()) {
        Expr nk = normalizeRec(k);
        if (nk.kind() == Expr::Kind::Sum) {
          for (const Expr& kk : nk.kids()) {
            if (auto v = asScalar(kk)) {
              scalarAcc += *v;
              sawScalar = true;
            } else {
              kids.push_back(kk);
            }
          }
        } else if (auto v = asScalar(nk)) {
          scalarAcc += *v;
          sawScalar = true;
        } else {
          kids.push_back(nk);
        }
      }
      if (sawScalar && !scalarAcc.isZero()) kids.push_back(Expr::scalarLit(scalarAcc));
      if (kids.empty()) return Expr::integer(0);
      return kids.size() == 1 ? kids[0] : Expr::sum(std::move(kids));
    }
    case Expr::Kind::Product: {
      std::vector<Expr> kids;
      Scalar scalarAcc(1);
      for (const Expr& k : e.kids()) {
        Expr nk = normalizeRec(k);
        if (nk.kind() == Expr::Kind::Product) {
          for (const Expr& kk : nk.kids()) {
            if (auto v = asScalar(kk))
              scalarAcc *= *v;
            else
              kids.push_back(kk);
          }
        } else if (auto v = asScalar(nk)) {
          scalarAcc *= *v;
        } else {
          kids.push_back(nk);
        }
      }
      if (scalarAcc.isZero()) return Expr::integer(0);
      Expr body = rewriteAbsProduct(std::move(kids));
      if (auto v = asScalar(body)) return Expr::scalarLit(scalarAcc * *v);
      if (scalarAcc.isOne()) return body;
      if (body.kind() == Expr::Kind::Product) {
        std::vector<Expr> out{Expr::scalarLit(scalarAcc)};
        for (const Expr& k : body.kids()) out.push_back(k);
        return Expr::product(std::move(out));
      }
      return Expr::product({Expr::scalarLit(scalarAcc), body});
    }
    case Expr::Kind::Power: {
      Expr base = normalizeRec(e.kids()[0]);
      long ex = e.node().exponent;
      if (auto v = asScalar(Expr::power(base, ex))) return Expr::scalarLit(*v);
      if (ex == 0) return Expr::integer(1);
      if (ex == 1) return base;
      if (ex < 0)
        throw UnsupportedFormError("negative powers of non-scalar expressions");
      if (base.kind() == Expr::Kind::Abs)
        return normalizeRec(rewriteAbsProduct({Expr::power(base, ex)}));
      if (base.containsKind(Expr::Kind::Abs)) {
        // Distribute the power so abs factors can pair across the copies.
        std::vector<Expr> copies(static_cast<std::size_t>(ex), base);
        return normalizeRec(Expr::product(std::move(copies)));
      }
      // Sums and products stay as powers; expansion distributes them later.
      return Expr::power(base, ex);
    }
    case Expr::Kind::Quotient: {
      Expr num = normalizeRec(e.kids()[0]);
      Expr den = normalizeRec(e.kids()[1]);
      if (auto d = asScalar(den)) {
        if (d->isZero()) throw InvalidInputError("division by zero");
        return normalizeRec(
            Expr::product({Expr::scalarLit(Scalar(1) / *d), num}));
      }
      // Non-scalar divisor: legal only in the raw rational-function front
      // end, never in an integrand.
      return Expr::quotient(num, den);
    }
  }
  throw UnsupportedFormError("unhandled node in normalize");
}

}  // namespace

Expr normalize(const Expr& e) {
  Expr n = normalizeRec(e);
  if (n.containsKind(Expr::Kind::Abs))
    throw UnsupportedFormError(
        "abs(...) appears with an odd total power; only even powers are "
        "polynomial");
  return n;
}

// ---------------------------------------------------------------------------
// Expansion

namespace {

std::vector<ExpandedTerm> mulTerms(const std::vector<ExpandedTerm>& a,
                                   const std::vector<ExpandedTerm>& b) {
  std::vector<ExpandedTerm> out;
  out.reserve(a.size() * b.size());
  for (const auto& x : a)
    for (const auto& y : b) {
      ExpandedTerm t;
      t.coeff = x.coeff * y.coeff;
      t.factors = x.factors;
      t.factors.insert(t.factors.end(), y.factors.begin(), y.factors.end());
      out.push_back(std::move(t));
    }
  return out;
}

std::vector<ExpandedTerm> expandRec(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::ScalarLit:
      return {{e.node().scalar, {}}};
    case Expr::Kind::Entry:
      return {{Scalar(1),
               {MonomialFactor{e.node().name, e.node().row, e.node().col, e.node().conj}}}};
    case Expr::Kind::Sum: {
      std::vector<ExpandedTerm> out;
      for (const Expr& k : e.kids()) {
        auto sub = expandRec(k);
        out.insert(out.end(), sub.begin(), sub.end());
      }
      return out;
    }
    case Expr::Kind::Product: {
      std::vector<ExpandedTerm> acc{{Scalar(1), {}}};
      for (const Expr& k : e.kids()) acc = mulTerms(acc, expandRec(k));
      return acc;
    }
    case Expr::Kind::Power: {
      long ex = e.node().exponent;
      if (ex < 0) throw UnsupportedFormError("negative power in expansion");
      std::vector<ExpandedTerm> acc{{Scalar(1), {}}};
      auto base = expandRec(e.kids()[0]);
      for (long i = 0; i < ex; ++i) acc = mulTerms(acc, base);
      return acc;
    }
    case Expr::Kind::Tr:
      throw UnsupportedFormError("trace inside an entrywise expansion");
    case Expr::Kind::Symbol:
    case Expr::Kind::Adjoint:
      throw UnsupportedFormError(
          "bare matrix symbol in a scalar expression; index it or wrap it in tr()");
    case Expr::Kind::Quotient:
      throw UnsupportedFormError("division by a non-scalar expression");
    default:
      throw UnsupportedFormError("unnormalized node in expansion");
  }
}

}  // namespace

std::vector<ExpandedTerm> expand(const Expr& e) {
  auto terms = expandRec(e);
  // Merge like monomials: canonical factor order, then collect coefficients.
  std::map<std::vector<MonomialFactor>, Scalar> merged;
  for (auto& t : terms) {
    std::sort(t.factors.begin(), t.factors.end());
    auto it = merged.find(t.factors);
    if (it == merged.end())
      merged.emplace(std::move(t.factors), t.coeff);
    else
      it->second += t.coeff;
  }
  std::vector<ExpandedTerm> out;
  for (auto& [factors, coeff] : merged) {
    if (coeff.isZero()) continue;
    out.push_back({coeff, factors});
  }
  return out;
}

}  // namespace haarint
