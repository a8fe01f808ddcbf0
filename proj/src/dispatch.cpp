#include "haarint/dispatch.hpp"

#include <functional>
#include <set>
#include <sstream>

namespace haarint {

IntegrationResult IntegrationResult::rational(RationalFunction r) {
  IntegrationResult res;
  res.kind = Kind::Rational;
  res.rat = std::move(r);
  return res;
}

IntegrationResult IntegrationResult::exact(Scalar s) {
  IntegrationResult res;
  res.kind = Kind::Scalar;
  res.scalar = std::move(s);
  return res;
}

IntegrationResult IntegrationResult::ofTrace(TraceExpr t) {
  IntegrationResult res;
  res.kind = Kind::Trace;
  res.trace = std::move(t);
  return res;
}

IntegrationResult IntegrationResult::ofMatrix(SymbolicMatrix m) {
  IntegrationResult res;
  res.kind = Kind::Matrix;
  res.matrix = std::move(m);
  return res;
}

std::string IntegrationResult::str() const {
  switch (kind) {
    case Kind::Rational:
      return rat.str();
    case Kind::Scalar:
      return scalar.str();
    case Kind::Trace:
      return trace.str();
    case Kind::Matrix: {
      std::ostringstream os;
      os << "[";
      for (long i = 0; i < matrix.rows(); ++i) {
        if (i) os << "; ";
        for (long j = 0; j < matrix.cols(); ++j) {
          if (j) os << ", ";
          os << matrix(i, j).str();
        }
      }
      os << "]";
      return os.str();
    }
  }
  return "";
}

namespace {

bool hasMatrixAtomOutsideTrace(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Symbol:
    case Expr::Kind::Adjoint:
      return true;
    case Expr::Kind::Conj:
      return hasMatrixAtomOutsideTrace(e.kids()[0]);
    case Expr::Kind::Tr:
      return false;
    default:
      for (const Expr& k : e.kids())
        if (hasMatrixAtomOutsideTrace(k)) return true;
      return false;
  }
}

void checkDimSymbolCollision(const Expr& normalized, const MeasureSpec& spec) {
  if (!spec.symbolicDim) return;
  std::set<std::string> syms;
  std::function<void(const Expr&)> walk = [&](const Expr& e) {
    if (e.kind() == Expr::Kind::Symbol || e.kind() == Expr::Kind::Entry)
      syms.insert(e.node().name);
    for (const Expr& k : e.kids()) walk(k);
  };
  walk(normalized);
  if (syms.count(spec.dimSymbol))
    throw DispatchError("the dimension symbol '" + spec.dimSymbol +
                        "' is reserved and cannot name a matrix");
}

}  // namespace

IntegrationResult integrate(const Expr& e, const MeasureSpec& spec,
                            const EngineOptions& opts) {
  spec.validate();
  Expr norm = normalize(e);
  checkDimSymbolCollision(norm, spec);

  // Pure scalar expressions integrate to themselves.
  if (norm.kind() == Expr::Kind::ScalarLit) {
    if (spec.symbolicDim)
      return IntegrationResult::rational(RationalFunction(norm.node().scalar));
    return IntegrationResult::exact(norm.node().scalar);
  }

  std::string note;
  if (spec.family == Family::SU)
    note =
        "SU integration covers balanced polynomials (equals U); unbalanced "
        "monomials return 0 (epsilon-tensor corrections are out of scope)";

  if (norm.containsKind(Expr::Kind::Tr)) {
    std::string sym = inferRandomSymbol(norm, spec);
    TraceExpr t = exprToTrace(norm, sym);
    std::string path;
    TraceExpr r = traceIntegrate(t, spec, opts, &path);
    IntegrationResult out = [&] {
      if (r.isScalar()) {
        RationalFunction v = r.scalarValue();
        if (!spec.symbolicDim) return IntegrationResult::exact(v.constantValue());
        return IntegrationResult::rational(v);
      }
      return IntegrationResult::ofTrace(r);
    }();
    out.enginePath = path;
    out.note = note;
    return out;
  }

  if (hasMatrixAtomOutsideTrace(norm)) {
    std::string path;
    SymbolicMatrix m = matrixIntegrate(norm, spec, opts, &path);
    IntegrationResult out = IntegrationResult::ofMatrix(std::move(m));
    out.enginePath = path;
    out.note = note;
    return out;
  }

  // Entrywise path: a single random symbol, no constants.
  std::set<std::string> syms;
  std::function<void(const Expr&)> walk = [&](const Expr& e2) {
    if (e2.kind() == Expr::Kind::Entry) syms.insert(e2.node().name);
    for (const Expr& k : e2.kids()) walk(k);
  };
  walk(norm);
  if (syms.size() != 1)
    throw DispatchError(
        "entrywise integrands must reference exactly one random-matrix "
        "symbol (constants are allowed inside tr)");
  std::string sym = *syms.begin();

  std::string path;
  RationalFunction acc;
  for (const ExpandedTerm& term : expand(norm)) {
    Monomial m;
    m.coeff = term.coeff;
    m.factors = term.factors;
    acc += integrateMonomial(m, spec, opts, &path);
  }
  IntegrationResult out = spec.symbolicDim
                              ? IntegrationResult::rational(acc)
                              : IntegrationResult::exact(acc.constantValue());
  out.enginePath = path;
  out.note = note;
  return out;
}

IntegrationResult integrate(const std::string& text, const MeasureSpec& spec,
                            const EngineOptions& opts) {
  return integrate(parse(text), spec, opts);
}

Scalar evaluate(const IntegrationResult& r, long n) {
  switch (r.kind) {
    case IntegrationResult::Kind::Rational:
      return r.rat.evalAt(Rat(n));
    case IntegrationResult::Kind::Scalar:
      return r.scalar;
    default:
      throw InvalidInputError(
          "evaluate applies to rational results; trace and matrix results "
          "need their constants substituted first");
  }
}

}  // namespace haarint
