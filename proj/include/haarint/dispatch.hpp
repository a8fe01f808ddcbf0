#pragma once

#include <string>

#include "haarint/trace_engine.hpp"

namespace haarint {

/// Result of an integration: a rational function of d, an exact scalar
/// (concrete dimension), a trace expression in constant matrices, or a
/// matrix of symbolic values.
struct IntegrationResult {
  enum class Kind { Rational, Scalar, Trace, Matrix };
  Kind kind = Kind::Rational;

  RationalFunction rat;
  Scalar scalar;
  TraceExpr trace;
  SymbolicMatrix matrix;

  std::string enginePath;
  std::string note;  // e.g. the SU unbalanced scope note

  static IntegrationResult rational(RationalFunction r);
  static IntegrationResult exact(Scalar s);
  static IntegrationResult ofTrace(TraceExpr t);
  static IntegrationResult ofMatrix(SymbolicMatrix m);

  std::string str() const;
};

/// Normalizes, expands and dispatches an expression to the measure engines.
/// Entrywise input yields a rational function (or exact scalar at concrete
/// dimension); tr(...) input routes through the trace graph engine; bare
/// matrix products yield matrix-valued results.
IntegrationResult integrate(const Expr& e, const MeasureSpec& spec,
                            const EngineOptions& opts = {});

IntegrationResult integrate(const std::string& text, const MeasureSpec& spec,
                            const EngineOptions& opts = {});

/// Exact evaluation of a rational result at d = n; removable singularities
/// are already cancelled by canonicalization, so any remaining zero of the
/// denominator is a genuine pole.
Scalar evaluate(const IntegrationResult& r, long n);

}  // namespace haarint
