#pragma once

#include <map>
#include <sstream>
#include <string>
#include <utility>

#include "haarint/polynomial.hpp"

namespace haarint {

/// Exact univariate rational function of the dimension symbol.  Canonical
/// form: numerator and denominator coprime, denominator monic; the zero
/// function is 0/1.
class RationalFunction {
 public:
  RationalFunction() : num_(), den_(DimPoly::one()) {}
  RationalFunction(DimPoly n, DimPoly d) { assign(std::move(n), std::move(d)); }
  RationalFunction(Scalar s) : num_(DimPoly(std::move(s))), den_(DimPoly::one()) {}  // NOLINT
  RationalFunction(int n) : RationalFunction(Scalar(n)) {}                           // NOLINT

  static RationalFunction zero() { return RationalFunction(); }
  static RationalFunction one() { return RationalFunction(Scalar(1)); }
  static RationalFunction fromPoly(DimPoly p) {
    RationalFunction r;
    r.num_ = std::move(p);
    return r;
  }
  /// d^e for e >= 0; 1/d^(-e) otherwise.
  static RationalFunction dimPower(int e) {
    if (e >= 0) return fromPoly(DimPoly::monomial(Scalar(1), e));
    return RationalFunction(DimPoly::one(), DimPoly::monomial(Scalar(1), -e));
  }

  const DimPoly& num() const { return num_; }
  const DimPoly& den() const { return den_; }

  bool isZero() const { return num_.isZero(); }
  bool isConstant() const { return num_.isConstant() && den_.isConstant(); }
  Scalar constantValue() const { return num_.constantValue() / den_.constantValue(); }
  bool isReal() const {
    for (const auto& c : num_.coeffs())
      if (!c.isReal()) return false;
    for (const auto& c : den_.coeffs())
      if (!c.isReal()) return false;
    return true;
  }

  RationalFunction operator-() const {
    RationalFunction r = *this;
    r.num_ = -r.num_;
    return r;
  }
  friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
    return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
    return RationalFunction(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
    return RationalFunction(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
    if (b.isZero()) throw InvalidInputError("division by the zero rational function");
    return RationalFunction(a.num_ * b.den_, a.den_ * b.num_);
  }
  RationalFunction& operator+=(const RationalFunction& o) { return *this = *this + o; }
  RationalFunction& operator-=(const RationalFunction& o) { return *this = *this - o; }
  RationalFunction& operator*=(const RationalFunction& o) { return *this = *this * o; }
  RationalFunction& operator/=(const RationalFunction& o) { return *this = *this / o; }

  /// Equality as the cross-multiplication identity.
  friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
    return a.num_ * b.den_ == b.num_ * a.den_;
  }
  friend bool operator!=(const RationalFunction& a, const RationalFunction& b) {
    return !(a == b);
  }

  /// Exact value at dimension n; canonical form means any remaining zero of
  /// the denominator is a genuine pole.
  Scalar evalAt(const Rat& n) const {
    Scalar x{n};
    Scalar dv = den_.eval(x);
    if (dv.isZero())
      throw PoleError("rational function has a pole at d = " + ratStr(n));
    return num_.eval(x) / dv;
  }

  /// Substitute d -> -d.
  RationalFunction substNegate() const {
    return RationalFunction(num_.substNegate(), den_.substNegate());
  }

  /// Canonical text form "N // D" with coprime integer-coefficient
  /// polynomials; plain "N" when the denominator is one.
  std::string str() const;

 private:
  void assign(DimPoly n, DimPoly d) {
    if (d.isZero()) throw InvalidInputError("zero denominator in rational function");
    if (n.isZero()) {
      num_ = DimPoly();
      den_ = DimPoly::one();
      return;
    }
    DimPoly g = polyGcd(n, d);
    if (g.degree() > 0) {
      n = n.divExact(g);
      d = d.divExact(g);
    }
    Scalar lc = d.leading();
    num_ = n * (Scalar(1) / lc);
    den_ = d * (Scalar(1) / lc);
  }

  DimPoly num_;
  DimPoly den_;
};

/// Truncated expansion in inverse powers of the dimension symbol.  Keys are
/// the exponent m of d^(-m); m may be negative for polynomial parts.  No
/// explicit zero terms are stored.
class LaurentSeries {
 public:
  LaurentSeries() = default;
  explicit LaurentSeries(long order) : order_(order) {}

  long order() const { return order_; }
  const std::map<long, Scalar>& terms() const { return terms_; }

  void setTerm(long m, Scalar c) {
    if (m > order_) return;
    if (c.isZero())
      terms_.erase(m);
    else
      terms_[m] = std::move(c);
  }
  Scalar term(long m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Scalar(0) : it->second;
  }

  LaurentSeries truncated(long newOrder) const {
    LaurentSeries s(newOrder);
    for (const auto& [m, c] : terms_)
      if (m <= newOrder) s.terms_[m] = c;
    return s;
  }

  /// Exact value of the truncated series at a concrete dimension.
  Scalar evalAt(const Rat& n) const {
    Scalar acc(0);
    for (const auto& [m, c] : terms_) {
      Rat p = 1;
      for (long i = 0; i < (m >= 0 ? m : -m); ++i) p *= n;
      acc += (m >= 0) ? c / Scalar(p) : c * Scalar(p);
    }
    return acc;
  }

  friend bool operator==(const LaurentSeries& a, const LaurentSeries& b) {
    return a.order_ == b.order_ && a.terms_ == b.terms_;
  }
  friend bool operator!=(const LaurentSeries& a, const LaurentSeries& b) { return !(a == b); }

  std::string str(const std::string& symbol = "d") const;

 private:
  std::map<long, Scalar> terms_;
  long order_ = 0;
};

/// ratfunc_normalize: the canonical representative of n/d.
inline RationalFunction ratfuncNormalize(const DimPoly& n, const DimPoly& d) {
  return RationalFunction(n, d);
}

/// Series S with r - S = O(d^-(order+1)) as d -> infinity, exact
/// coefficients.  Computed by substituting d -> 1/x and running exact power
/// series division at x = 0.
LaurentSeries laurentExpand(const RationalFunction& r, long order);

}  // namespace haarint
