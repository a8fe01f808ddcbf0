#pragma once

#include <map>
#include <string>

#include "haarint/dispatch.hpp"

namespace haarint {

/// Truncated 1/d expansion of an integration result.  Scalar results carry a
/// single Laurent series; trace results group trace terms by inverse power.
struct AsymptoticResult {
  std::string symbol;  // expansion variable (fresh when the measure was concrete)
  long order = 0;
  bool isTrace = false;
  LaurentSeries series;
  std::map<long, TraceExpr> buckets;  // inverse power -> trace coefficient

  std::string str() const;
};

/// Integrates (when given a measure) and expands the exact result in inverse
/// powers of the dimension.  Concrete-dimension measures are re-run with a
/// fresh symbolic dimension, reported in `symbol`.  Pure trace moments are
/// rejected (step functions are outside this workflow).
AsymptoticResult asymptotic(const Expr& e, const MeasureSpec& measure, long order,
                            const EngineOptions& opts = {});

/// Expands a raw rational expression of a single symbol, e.g. 2n/(n^2+1).
AsymptoticResult asymptotic(const RationalFunction& r, const std::string& symbol,
                            long order);

/// Parses text as a rational function of `symbol` (the '/' operator is
/// interpreted over the rational-function field here).
RationalFunction parseRationalFunction(const std::string& text, const std::string& symbol);

}  // namespace haarint
