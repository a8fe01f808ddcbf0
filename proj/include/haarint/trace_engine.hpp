#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "haarint/eigen_support.hpp"
#include "haarint/entrywise.hpp"
#include "haarint/expr.hpp"
#include "haarint/trace_expr.hpp"

namespace haarint {

/// Exact linear combination of products of constant matrix entries with
/// rational-function coefficients; the value type of matrix-valued
/// integration.
struct SymbolicValue {
  struct Term {
    RationalFunction coeff;
    std::vector<MonomialFactor> consts;  // sorted
  };
  std::vector<Term> terms;

  SymbolicValue() = default;
  SymbolicValue(RationalFunction r) {  // NOLINT: implicit by design
    if (!r.isZero()) terms.push_back({std::move(r), {}});
  }

  void add(RationalFunction coeff, std::vector<MonomialFactor> consts);
  void normalize();

  bool isZero() const { return terms.empty(); }
  bool isRational() const;
  RationalFunction rationalValue() const;

  SymbolicValue operator+(const SymbolicValue& o) const;

  friend bool operator==(const SymbolicValue& a, const SymbolicValue& b);

  std::string str() const;
};

using SymbolicMatrix = Eigen::Matrix<SymbolicValue, Eigen::Dynamic, Eigen::Dynamic>;
using ExprMatrix = Eigen::Matrix<Expr, Eigen::Dynamic, Eigen::Dynamic>;

/// Conventional random-symbol name for a measure family ("U", "O", "Sp",
/// "S", "H", "G", "P", "Y", "D", "psi", "V").
std::vector<std::string> conventionalSymbols(Family f);

/// Infers the random symbol of an expression: the unique symbol present, or
/// the family's conventional name when several appear.
std::string inferRandomSymbol(const Expr& normalized, const MeasureSpec& spec);

/// Converts a normalized scalar expression whose factors are traces (and
/// scalars) into a TraceExpr.  Unknown symbols inside tr default to constant
/// matrices.
TraceExpr exprToTrace(const Expr& normalized, const std::string& randomSym);

/// The graph engine: integrates a coordinate-free trace expression over the
/// measure by Weingarten/pair-partition/Wick re-wiring of the contraction
/// graph.  Output is a TraceExpr in constant matrices and powers of d.
TraceExpr traceIntegrate(const TraceExpr& t, const MeasureSpec& spec,
                         const EngineOptions& opts = {}, std::string* enginePath = nullptr);

/// Registered closed-form patterns (currently tr(U A U' B) and tr(U A U')).
/// Returns nothing when no pattern matches; the generic engine then runs.
std::optional<TraceExpr> libraryLookup(const TraceExpr& t, const MeasureSpec& spec);

/// Exact value of the pure trace moment E|tr U|^(2k) at concrete dimension n:
/// the sum of (f^lambda)^2 over partitions of k with at most n rows.
BigInt pureTraceMoment(int k, long n);

/// Integrates a scalar expression that may mix random-entry factors with
/// constant-entry factors; the random part goes through the monomial
/// engines, constants stay symbolic.
SymbolicValue integrateWithConstants(const Expr& normalized, const MeasureSpec& spec,
                                     const std::string& randomSym,
                                     const EngineOptions& opts = {},
                                     std::string* enginePath = nullptr);

/// Entrywise integration of a matrix-valued expression at concrete result
/// dimensions.
SymbolicMatrix matrixIntegrate(const Expr& matrixExpr, const MeasureSpec& spec,
                               const EngineOptions& opts = {},
                               std::string* enginePath = nullptr);

/// Builds the entry matrix of a matrix-valued expression (products, sums,
/// powers, adjoints of matrix symbols) at concrete dimension n.
ExprMatrix matrixExprEntries(const Expr& normalized, long n, const std::string& randomSym);

/// Partial trace over subsystem 1 or 2 of a (dA*dB) x (dA*dB) matrix under
/// the row-major tensor index convention (i,j) -> i*dB + j.  Works for any
/// scalar with +; entries of the reduced matrix are sums of input entries.
template <class Mat>
Mat partialTrace(const Mat& M, int dA, int dB, int subsystem) {
  if (M.rows() != M.cols() || M.rows() != static_cast<Eigen::Index>(dA) * dB)
    throw InvalidInputError("partial_trace: matrix size does not match dA*dB");
  if (subsystem != 1 && subsystem != 2)
    throw InvalidInputError("partial_trace: subsystem must be 1 or 2");
  if (subsystem == 1) {
    Mat R(dB, dB);
    for (int j = 0; j < dB; ++j)
      for (int jp = 0; jp < dB; ++jp) {
        auto acc = M(0 * dB + j, 0 * dB + jp);
        for (int i = 1; i < dA; ++i) acc = acc + M(i * dB + j, i * dB + jp);
        R(j, jp) = acc;
      }
    return R;
  }
  Mat R(dA, dA);
  for (int i = 0; i < dA; ++i)
    for (int ip = 0; ip < dA; ++ip) {
      auto acc = M(i * dB + 0, ip * dB + 0);
      for (int j = 1; j < dB; ++j) acc = acc + M(i * dB + j, ip * dB + j);
      R(i, ip) = acc;
    }
  return R;
}

/// Exact evaluation of a trace expression against concrete constant
/// matrices (tests and scalarization).  The reserved name "J" resolves to
/// the symplectic form of the matching size.
Scalar evalTraceExpr(const TraceExpr& t, long n,
                     const std::vector<std::pair<std::string, ScalarMatrix>>& constants);

}  // namespace haarint
