#include "haarint/rational_function.hpp"

#include <vector>

namespace haarint {

namespace {

// Renders a Gaussian-integer-coefficient polynomial in descending powers,
// e.g. "d^3 - d" or "2".
std::string renderIntPoly(const DimPoly& p, const std::string& sym) {
  if (p.isZero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int e = p.degree(); e >= 0; --e) {
    Scalar c = p.coeff(e);
    if (c.isZero()) continue;
    bool negative = c.isReal() && c.re < 0;
    if (first) {
      if (negative) os << "-";
    } else {
      os << (negative ? " - " : " + ");
    }
    Scalar a = negative ? -c : c;
    std::string cs = a.isReal() ? ratStr(a.re) : "(" + a.str() + ")";
    if (e == 0) {
      os << cs;
    } else {
      if (cs != "1") os << cs << "*";
      os << sym;
      if (e > 1) os << "^" << e;
    }
    first = false;
  }
  return os.str();
}

}  // namespace

std::string RationalFunction::str() const {
  if (isZero()) return "0";
  // Scale to coprime integer coefficients: clear denominators, then divide
  // out the common integer content of both polynomials.
  BigInt l = 1;
  for (const auto& c : num_.coeffs()) {
    l = boost::multiprecision::lcm(l, denominator(c.re));
    l = boost::multiprecision::lcm(l, denominator(c.im));
  }
  for (const auto& c : den_.coeffs()) {
    l = boost::multiprecision::lcm(l, denominator(c.re));
    l = boost::multiprecision::lcm(l, denominator(c.im));
  }
  DimPoly n = num_ * Scalar(Rat(l));
  DimPoly d = den_ * Scalar(Rat(l));
  BigInt g = 0;
  auto addContent = [&g](const DimPoly& p) {
    for (const auto& c : p.coeffs()) {
      g = boost::multiprecision::gcd(g, numerator(c.re));
      g = boost::multiprecision::gcd(g, numerator(c.im));
    }
  };
  addContent(n);
  addContent(d);
  if (g > 1) {
    Scalar inv(Rat(BigInt(1), g));
    n = n * inv;
    d = d * inv;
  }
  // Keep the denominator's leading coefficient positive.
  Scalar lc = d.leading();
  if ((lc.isReal() && lc.re < 0) || (!lc.isReal() && lc.re == 0 && lc.im < 0)) {
    n = -n;
    d = -d;
  }
  if (d.isConstant() && d.constantValue().isOne()) return renderIntPoly(n, "d");
  return renderIntPoly(n, "d") + " // " + renderIntPoly(d, "d");
}

std::string LaurentSeries::str(const std::string& symbol) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    bool negative = c.isReal() && c.re < 0;
    if (first) {
      if (negative) os << "-";
    } else {
      os << (negative ? " - " : " + ");
    }
    Scalar a = negative ? -c : c;
    std::string cs = a.isReal() ? ratStr(a.re) : "(" + a.str() + ")";
    if (m == 0) {
      os << cs;
    } else if (m > 0) {
      os << cs << "/" << symbol;
      if (m > 1) os << "^" << m;
    } else {
      if (cs != "1") os << cs << "*";
      os << symbol;
      if (m < -1) os << "^" << -m;
    }
    first = false;
  }
  return os.str();
}

LaurentSeries laurentExpand(const RationalFunction& r, long order) {
  if (order < 0) throw InvalidInputError("laurent expansion order must be >= 0");
  LaurentSeries s(order);
  if (r.isZero()) return s;
  const DimPoly& n = r.num();
  const DimPoly& d = r.den();
  // r(1/x) = x^(deg d - deg n) * nrev(x) / drev(x), with drev(0) != 0.
  long lead = d.degree() - n.degree();
  DimPoly nrev = n.reversed();
  DimPoly drev = d.reversed();
  long k = order - lead;  // highest power series order needed
  if (k < 0) return s;
  std::vector<Scalar> t(static_cast<std::size_t>(k) + 1, Scalar(0));
  Scalar d0 = drev.coeff(0);
  for (long j = 0; j <= k; ++j) {
    Scalar acc = nrev.coeff(static_cast<int>(j));
    for (long i = 0; i < j; ++i)
      acc -= t[static_cast<std::size_t>(i)] * drev.coeff(static_cast<int>(j - i));
    t[static_cast<std::size_t>(j)] = acc / d0;
  }
  for (long j = 0; j <= k; ++j) s.setTerm(j + lead, t[static_cast<std::size_t>(j)]);
  return s;
}

}  // namespace haarint
