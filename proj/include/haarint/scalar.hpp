#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <sstream>
#include <string>

#include "haarint/errors.hpp"

namespace haarint {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

/// Gaussian-rational scalar: re + im*i with arbitrary-precision rational
/// parts.  Canonical form is maintained by cpp_rational itself (coprime
/// numerator/denominator, positive denominator).
struct Scalar {
  Rat re;
  Rat im;

  Scalar() = default;
  Scalar(Rat r) : re(std::move(r)) {}  // NOLINT: implicit by design
  Scalar(long n) : re(n) {}            // NOLINT
  Scalar(int n) : re(n) {}             // NOLINT
  Scalar(BigInt n) : re(Rat(std::move(n))) {}  // NOLINT
  Scalar(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}

  static Scalar i() { return Scalar(Rat(0), Rat(1)); }

  bool isZero() const { return re == 0 && im == 0; }
  bool isOne() const { return re == 1 && im == 0; }
  bool isReal() const { return im == 0; }

  Scalar conj() const { return Scalar(re, -im); }

  Scalar operator-() const { return Scalar(-re, -im); }

  Scalar& operator+=(const Scalar& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Scalar& operator-=(const Scalar& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  Scalar& operator*=(const Scalar& o) {
    Rat r = re * o.re - im * o.im;
    Rat i = re * o.im + im * o.re;
    re = std::move(r);
    im = std::move(i);
    return *this;
  }
  Scalar& operator/=(const Scalar& o) {
    if (o.isZero()) throw InvalidInputError("division by zero scalar");
    Rat n2 = o.re * o.re + o.im * o.im;
    Rat r = (re * o.re + im * o.im) / n2;
    Rat i = (im * o.re - re * o.im) / n2;
    re = std::move(r);
    im = std::move(i);
    return *this;
  }

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }

  friend bool operator==(const Scalar& a, const Scalar& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }
  // Lexicographic order, used only as a map key / canonical sort order.
  friend bool operator<(const Scalar& a, const Scalar& b) {
    if (a.re != b.re) return a.re < b.re;
    return a.im < b.im;
  }

  double toDouble() const { return static_cast<double>(re); }

  std::string str() const {
    std::ostringstream os;
    if (im == 0) {
      os << re;
    } else if (re == 0) {
      os << im << "*i";
    } else {
      os << re << (im > 0 ? " + " : " - ");
      Rat a = im > 0 ? im : Rat(-im);
      os << a << "*i";
    }
    return os.str();
  }
};

inline std::string ratStr(const Rat& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

}  // namespace haarint
