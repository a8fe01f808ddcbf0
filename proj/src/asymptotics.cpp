#include "haarint/asymptotics.hpp"

#include <functional>
#include <sstream>

namespace haarint {

std::string AsymptoticResult::str() const {
  if (!isTrace) return series.str(symbol);
  if (buckets.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, t] : buckets) {
    if (!first) os << " + ";
    os << "(" << t.str() << ")";
    if (m > 0) {
      os << "/" << symbol;
      if (m > 1) os << "^" << m;
    } else if (m < 0) {
      os << "*" << symbol;
      if (m < -1) os << "^" << -m;
    }
    first = false;
  }
  return os.str();
}

AsymptoticResult asymptotic(const RationalFunction& r, const std::string& symbol,
                            long order) {
  if (order < 0) throw InvalidInputError("expansion order must be >= 0");
  AsymptoticResult res;
  res.symbol = symbol;
  res.order = order;
  res.series = laurentExpand(r, order);
  return res;
}

AsymptoticResult asymptotic(const Expr& e, const MeasureSpec& measure, long order,
                            const EngineOptions& opts) {
  if (order < 0) throw InvalidInputError("expansion order must be >= 0");
  MeasureSpec symbolicMeasure = measure;
  std::string symbol = measure.dimSymbol;
  if (!measure.symbolicDim) {
    // Introduce a dummy symbolic dimension for the expansion.
    symbol = "d";
    symbolicMeasure = measure;
    symbolicMeasure.symbolicDim = true;
    symbolicMeasure.dim = 0;
    symbolicMeasure.dimSymbol = symbol;
  }
  IntegrationResult r = integrate(e, symbolicMeasure, opts);
  AsymptoticResult res;
  res.symbol = symbol;
  res.order = order;
  switch (r.kind) {
    case IntegrationResult::Kind::Rational:
      res.series = laurentExpand(r.rat, order);
      return res;
    case IntegrationResult::Kind::Trace: {
      res.isTrace = true;
      for (const TraceTerm& t : r.trace.terms) {
        LaurentSeries s = laurentExpand(t.coeff, order);
        for (const auto& [m, c] : s.terms()) {
          TraceTerm bucketTerm;
          bucketTerm.coeff = RationalFunction(c);
          bucketTerm.words = t.words;
          auto it = res.buckets.find(m);
          if (it == res.buckets.end()) {
            res.buckets.emplace(m, TraceExpr::single(std::move(bucketTerm)));
          } else {
            it->second.addTerm(std::move(bucketTerm));
            it->second.normalize();
          }
        }
      }
      return res;
    }
    default:
      throw NotRationalError(
          "asymptotic expansion applies to rational or trace-polynomial "
          "results");
  }
}

RationalFunction parseRationalFunction(const std::string& text, const std::string& symbol) {
  Expr e = parse(text);
  // Interpret the expression over the rational-function field in `symbol`.
  std::function<RationalFunction(const Expr&)> ev = [&](const Expr& x) -> RationalFunction {
    switch (x.kind()) {
      case Expr::Kind::ScalarLit:
        return RationalFunction(x.node().scalar);
      case Expr::Kind::Symbol:
        if (x.node().name == symbol) return RationalFunction::dimPower(1);
        throw DispatchError("unknown symbol '" + x.node().name +
                            "' in a rational expression of " + symbol);
      case Expr::Kind::Sum: {
        RationalFunction acc;
        for (const Expr& k : x.kids()) acc += ev(k);
        return acc;
      }
      case Expr::Kind::Product: {
        RationalFunction acc = RationalFunction::one();
        for (const Expr& k : x.kids()) acc *= ev(k);
        return acc;
      }
      case Expr::Kind::Quotient:
        return ev(x.kids()[0]) / ev(x.kids()[1]);
      case Expr::Kind::Power: {
        RationalFunction base = ev(x.kids()[0]);
        long ex = x.node().exponent;
        RationalFunction acc = RationalFunction::one();
        for (long i = 0; i < (ex >= 0 ? ex : -ex); ++i) acc *= base;
        return ex >= 0 ? acc : RationalFunction::one() / acc;
      }
      default:
        throw UnsupportedFormError("not a rational expression: " + x.str());
    }
  };
  return ev(e);
}

}  // namespace haarint
