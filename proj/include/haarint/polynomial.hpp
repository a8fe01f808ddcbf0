#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "haarint/scalar.hpp"

namespace haarint {

/// Dense univariate polynomial over an exact field scalar, ascending
/// coefficient order.  The zero polynomial is the empty vector; otherwise the
/// trailing (highest-degree) coefficient is nonzero.
template <class Coeff>
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Coeff> coeffs) : c_(std::move(coeffs)) { trim(); }
  Polynomial(Coeff constant) {  // NOLINT: implicit by design
    c_.push_back(std::move(constant));
    trim();
  }

  static Polynomial zero() { return Polynomial(); }
  static Polynomial one() { return Polynomial(Coeff(1)); }
  /// c * x^e
  static Polynomial monomial(Coeff c, int e) {
    std::vector<Coeff> v(static_cast<std::size_t>(e) + 1);
    v.back() = std::move(c);
    return Polynomial(std::move(v));
  }
  /// The variable itself.
  static Polynomial variable() { return monomial(Coeff(1), 1); }

  bool isZero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
  const Coeff& leading() const { return c_.back(); }
  Coeff coeff(int e) const {
    if (e < 0 || e >= static_cast<int>(c_.size())) return Coeff(0);
    return c_[static_cast<std::size_t>(e)];
  }
  const std::vector<Coeff>& coeffs() const { return c_; }

  bool isConstant() const { return c_.size() <= 1; }
  Coeff constantValue() const { return c_.empty() ? Coeff(0) : c_[0]; }

  Polynomial operator-() const {
    Polynomial r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<Coeff> v(std::max(a.c_.size(), b.c_.size()), Coeff(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) v[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) v[i] += b.c_[i];
    return Polynomial(std::move(v));
  }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    std::vector<Coeff> v(std::max(a.c_.size(), b.c_.size()), Coeff(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) v[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) v[i] -= b.c_[i];
    return Polynomial(std::move(v));
  }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.isZero() || b.isZero()) return Polynomial();
    std::vector<Coeff> v(a.c_.size() + b.c_.size() - 1, Coeff(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) v[i + j] += a.c_[i] * b.c_[j];
    return Polynomial(std::move(v));
  }
  friend Polynomial operator*(const Polynomial& a, const Coeff& s) {
    Polynomial r = a;
    for (auto& x : r.c_) x *= s;
    r.trim();
    return r;
  }
  friend Polynomial operator*(const Coeff& s, const Polynomial& a) { return a * s; }

  Polynomial& operator+=(const Polynomial& o) { return *this = *this + o; }
  Polynomial& operator-=(const Polynomial& o) { return *this = *this - o; }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }
  friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

  Coeff eval(const Coeff& x) const {
    Coeff acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  /// p(-x): negate odd coefficients.
  Polynomial substNegate() const {
    Polynomial r = *this;
    for (std::size_t i = 1; i < r.c_.size(); i += 2) r.c_[i] = -r.c_[i];
    return r;
  }

  /// x^deg * p(1/x): coefficient reversal (zero stays zero).
  Polynomial reversed() const {
    Polynomial r = *this;
    std::reverse(r.c_.begin(), r.c_.end());
    r.trim();
    return r;
  }

  /// Euclidean division over the coefficient field.
  std::pair<Polynomial, Polynomial> divMod(const Polynomial& b) const {
    if (b.isZero()) throw InvalidInputError("polynomial division by zero");
    Polynomial r = *this;
    if (r.degree() < b.degree()) return {Polynomial(), r};
    std::vector<Coeff> q(static_cast<std::size_t>(r.degree() - b.degree()) + 1, Coeff(0));
    while (!r.isZero() && r.degree() >= b.degree()) {
      int shift = r.degree() - b.degree();
      Coeff f = r.leading() / b.leading();
      q[static_cast<std::size_t>(shift)] = f;
      r -= monomial(f, shift) * b;
    }
    return {Polynomial(std::move(q)), r};
  }

  /// Exact quotient; the remainder is known to vanish (fraction-free
  /// elimination guarantees it).
  Polynomial divExact(const Polynomial& b) const {
    auto [q, r] = divMod(b);
    if (!r.isZero()) throw InvalidInputError("inexact polynomial division");
    return q;
  }

  Polynomial monic() const {
    if (isZero()) return *this;
    return *this * (Coeff(1) / leading());
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back().isZero()) c_.pop_back();
  }

  std::vector<Coeff> c_;
};

/// Polynomial in the formal dimension symbol with Gaussian-rational
/// coefficients.
using DimPoly = Polynomial<Scalar>;

namespace detail {

// Scales a polynomial by the lcm of all coefficient denominators so every
// coefficient becomes a Gaussian integer.  gcd is invariant up to units.
inline DimPoly clearDenominators(const DimPoly& p) {
  BigInt l = 1;
  for (const auto& c : p.coeffs()) {
    l = boost::multiprecision::lcm(l, denominator(c.re));
    l = boost::multiprecision::lcm(l, denominator(c.im));
  }
  return p * Scalar(Rat(l));
}

// Pseudo-remainder: lc(b)^(deg a - deg b + 1) * a mod b, computed without
// coefficient divisions.
inline DimPoly pseudoRem(DimPoly a, const DimPoly& b) {
  int e = a.degree() - b.degree() + 1;
  while (!a.isZero() && a.degree() >= b.degree()) {
    DimPoly t = DimPoly::monomial(a.leading(), a.degree() - b.degree());
    a = a * b.leading() - t * b;
    --e;
  }
  Scalar f(1);
  for (int i = 0; i < e; ++i) f *= b.leading();
  return a * f;
}

}  // namespace detail

/// Polynomial gcd via the subresultant remainder sequence on
/// denominator-cleared inputs; keeps intermediate coefficient growth
/// polynomial instead of exponential.  Result is monic.
inline DimPoly polyGcd(const DimPoly& a0, const DimPoly& b0) {
  if (a0.isZero()) return b0.monic();
  if (b0.isZero()) return a0.monic();
  DimPoly a = detail::clearDenominators(a0);
  DimPoly b = detail::clearDenominators(b0);
  if (a.degree() < b.degree()) std::swap(a, b);
  Scalar g(1), h(1);
  while (true) {
    int delta = a.degree() - b.degree();
    DimPoly r = detail::pseudoRem(a, b);
    if (r.isZero()) return b.monic();
    if (r.degree() == 0) return DimPoly::one();
    a = b;
    Scalar hd(1);
    for (int i = 0; i < delta; ++i) hd *= h;
    b = r * (Scalar(1) / (g * hd));
    g = a.leading();
    // h = g^delta * h^(1-delta)
    Scalar gp(1);
    for (int i = 0; i < delta; ++i) gp *= g;
    if (delta == 0)
      h = h;  // unchanged
    else if (delta == 1)
      h = gp;
    else {
      Scalar hp(1);
      for (int i = 0; i < delta - 1; ++i) hp *= h;
      h = gp / hp;
    }
  }
}

}  // namespace haarint
