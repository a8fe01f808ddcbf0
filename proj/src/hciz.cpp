#include "haarint/hciz.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "haarint/combinatorics.hpp"
#include "haarint/errors.hpp"

namespace haarint {

Spectrum Spectrum::fromRationals(std::vector<Rat> v) {
  Spectrum s;
  s.mode = Mode::Exact;
  s.exact = std::move(v);
  return s;
}

Spectrum Spectrum::fromNumbers(std::vector<std::complex<double>> v) {
  Spectrum s;
  s.mode = Mode::Numeric;
  s.numeric = std::move(v);
  return s;
}

Spectrum Spectrum::fromSymbols(std::vector<std::string> v) {
  Spectrum s;
  s.mode = Mode::Formal;
  s.formal = std::move(v);
  return s;
}

std::size_t Spectrum::size() const {
  switch (mode) {
    case Mode::Exact:
      return exact.size();
    case Mode::Numeric:
      return numeric.size();
    case Mode::Formal:
      return formal.size();
  }
  return 0;
}

namespace {

BigInt superfactorial(int d) {
  BigInt p = 1;
  for (int i = 1; i <= d - 1; ++i) p *= factorial(i);
  return p;
}

std::vector<std::pair<int, Permutation>> signedPermutations(int d) {
  std::vector<std::pair<int, Permutation>> out;
  for (const Permutation& s : allPermutations(d)) {
    // parity = (-1)^(k - cycles)
    int sign = ((d - s.cycleCount()) % 2 == 0) ? 1 : -1;
    out.emplace_back(sign, s);
  }
  return out;
}

}  // namespace

Spectrum perturbDegenerate(const Spectrum& a) {
  if (a.mode != Spectrum::Mode::Numeric)
    throw InvalidInputError("perturbation applies to numeric spectra");
  std::vector<std::complex<double>> v = a.numeric;
  std::sort(v.begin(), v.end(), [](const auto& x, const auto& y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
  bool dup = false;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] == v[i - 1]) dup = true;
  if (!dup) return Spectrum::fromNumbers(std::move(v));
  double norm = 1.0;
  for (const auto& x : v) norm = std::max(norm, std::abs(x));
  double eps = norm * 1e-12;
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] += std::complex<double>(0.0, static_cast<double>(i + 1) * eps);
  return Spectrum::fromNumbers(std::move(v));
}

namespace {

HcizValue hcizNumeric(std::vector<std::complex<double>> a,
                      std::vector<std::complex<double>> b) {
  int d = static_cast<int>(a.size());
  HcizValue v;
  v.mode = HcizValue::Mode::Numeric;
  v.dim = d;
  if (d == 1) {
    v.numeric = std::exp(a[0] * b[0]);
    return v;
  }
  a = perturbDegenerate(Spectrum::fromNumbers(std::move(a))).numeric;
  b = perturbDegenerate(Spectrum::fromNumbers(std::move(b))).numeric;
  Eigen::MatrixXcd E(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      E(i, j) = std::exp(a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(j)]);
  std::complex<double> det = E.determinant();
  std::complex<double> vandA = 1.0, vandB = 1.0;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      vandA *= a[static_cast<std::size_t>(j)] - a[static_cast<std::size_t>(i)];
      vandB *= b[static_cast<std::size_t>(j)] - b[static_cast<std::size_t>(i)];
    }
  double pref = static_cast<double>(superfactorial(d));
  v.numeric = pref * det / (vandA * vandB);
  return v;
}

HcizValue hcizExact(const std::vector<Rat>& a, const std::vector<Rat>& b) {
  int d = static_cast<int>(a.size());
  HcizValue v;
  v.mode = HcizValue::Mode::Exact;
  v.dim = d;
  v.prefactor = Rat(superfactorial(d));
  Rat vand = 1;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      vand *= (a[static_cast<std::size_t>(j)] - a[static_cast<std::size_t>(i)]) *
              (b[static_cast<std::size_t>(j)] - b[static_cast<std::size_t>(i)]);
  if (vand == 0) {
    // Exact duplicates: fall back to the perturbed numeric path.
    std::vector<std::complex<double>> an, bn;
    for (const auto& x : a) an.emplace_back(static_cast<double>(x), 0.0);
    for (const auto& x : b) bn.emplace_back(static_cast<double>(x), 0.0);
    return hcizNumeric(std::move(an), std::move(bn));
  }
  v.vandermonde = vand;
  // det(e^{a_i b_j}) expanded over permutations, terms merged by exponent.
  std::map<Rat, Rat> terms;
  for (const auto& [sign, s] : signedPermutations(d)) {
    Rat expo = 0;
    for (int i = 0; i < d; ++i)
      expo += a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(s(i))];
    terms[expo] += sign;
  }
  for (const auto& [expo, coeff] : terms)
    if (coeff != 0) v.exactTerms.emplace_back(coeff, expo);
  return v;
}

HcizValue hcizFormalFromSymbols(const std::vector<std::string>& a,
                                const std::vector<std::string>& b) {
  int d = static_cast<int>(a.size());
  {
    std::set<std::string> sa(a.begin(), a.end()), sb(b.begin(), b.end());
    if (sa.size() != a.size() || sb.size() != b.size())
      throw DegenerateSpectrumError(
          "repeated symbolic eigenvalues make the Vandermonde denominator "
          "vanish; resolve the degenerate limit analytically (l'Hopital)");
  }
  HcizValue v;
  v.mode = HcizValue::Mode::Formal;
  v.dim = d;
  v.prefactor = Rat(superfactorial(d));
  for (const auto& [sign, s] : signedPermutations(d)) {
    std::ostringstream expo;
    for (int i = 0; i < d; ++i) {
      if (i) expo << " + ";
      expo << a[static_cast<std::size_t>(i)] << "*" << b[static_cast<std::size_t>(s(i))];
    }
    v.formalTerms.emplace_back(sign, expo.str());
  }
  std::ostringstream den;
  bool first = true;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      if (!first) den << "*";
      den << "(" << a[static_cast<std::size_t>(j)] << " - " << a[static_cast<std::size_t>(i)]
          << ")";
      first = false;
    }
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      den << "*(" << b[static_cast<std::size_t>(j)] << " - " << b[static_cast<std::size_t>(i)]
          << ")";
  v.formalDenominator = d == 1 ? "1" : den.str();
  return v;
}

}  // namespace

HcizValue hcizEigen(const Spectrum& a, const Spectrum& b) {
  if (a.size() != b.size() || a.size() == 0)
    throw InvalidInputError("hciz needs two spectra of equal length >= 1");
  if (a.mode == Spectrum::Mode::Formal || b.mode == Spectrum::Mode::Formal) {
    if (a.mode != b.mode)
      throw InvalidInputError("mixed symbolic/numeric spectra are not supported");
    return hcizFormalFromSymbols(a.formal, b.formal);
  }
  if (a.mode == Spectrum::Mode::Exact && b.mode == Spectrum::Mode::Exact)
    return hcizExact(a.exact, b.exact);
  // Mixed exact/numeric resolves numerically.
  auto toNum = [](const Spectrum& s) {
    std::vector<std::complex<double>> v;
    if (s.mode == Spectrum::Mode::Exact)
      for (const auto& x : s.exact) v.emplace_back(static_cast<double>(x), 0.0);
    else
      v = s.numeric;
    return v;
  };
  return hcizNumeric(toNum(a), toNum(b));
}

HcizValue hcizMatrices(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B) {
  if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows())
    throw InvalidInputError("hciz matrices must be square and of equal size");
  double asym = (A - A.adjoint()).norm();
  double bsym = (B - B.adjoint()).norm();
  if (asym > 1e-9 * (1 + A.norm()) || bsym > 1e-9 * (1 + B.norm()))
    throw InvalidInputError("numeric hciz inputs must be Hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ea(A), eb(B);
  std::vector<std::complex<double>> a, b;
  for (int i = 0; i < A.rows(); ++i) {
    a.emplace_back(ea.eigenvalues()(i), 0.0);
    b.emplace_back(eb.eigenvalues()(i), 0.0);
  }
  return hcizEigen(Spectrum::fromNumbers(a), Spectrum::fromNumbers(b));
}

namespace {

std::vector<std::string> symbolicEigenvalues(const std::vector<std::vector<std::string>>& M) {
  std::size_t d = M.size();
  for (const auto& row : M)
    if (row.size() != d) throw InvalidInputError("symbolic matrix is not square");
  bool diagonal = true;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      if (i != j && !M[i][j].empty() && M[i][j] != "0") diagonal = false;
  if (diagonal) {
    std::vector<std::string> eig;
    for (std::size_t i = 0; i < d; ++i) eig.push_back(M[i][i]);
    return eig;
  }
  if (d == 2) {
    // Quadratic formula on [[p, q], [r, s]].
    const std::string& p = M[0][0];
    const std::string& q = M[0][1];
    const std::string& r = M[1][0];
    const std::string& s = M[1][1];
    std::string disc = "sqrt((" + p + " - " + s + ")^2 + 4*(" + q + ")*(" + r + "))";
    return {"((" + p + " + " + s + ") - " + disc + ")/2",
            "((" + p + " + " + s + ") + " + disc + ")/2"};
  }
  throw UnsupportedFormError(
      "symbolic matrices larger than 2x2 must be diagonal; supply eigenvalues "
      "directly through the eigenvalue interface");
}

}  // namespace

HcizValue hcizMatricesSymbolic(const std::vector<std::vector<std::string>>& A,
                               const std::vector<std::vector<std::string>>& B) {
  return hcizEigen(Spectrum::fromSymbols(symbolicEigenvalues(A)),
                   Spectrum::fromSymbols(symbolicEigenvalues(B)));
}

HcizValue hcizFormal(int d) {
  if (d < 1)
    throw InvalidInputError(
        "hciz_formal needs a concrete integer dimension >= 1; symbolic "
        "dimensions are not supported here");
  std::vector<std::string> a, b;
  for (int i = 1; i <= d; ++i) {
    a.push_back("a" + std::to_string(i));
    b.push_back("b" + std::to_string(i));
  }
  return hcizFormalFromSymbols(a, b);
}

std::string HcizValue::str() const {
  std::ostringstream os;
  switch (mode) {
    case Mode::Numeric:
      os << numeric.real();
      if (numeric.imag() != 0.0) os << " + " << numeric.imag() << "i";
      return os.str();
    case Mode::Exact: {
      if (prefactor != 1) os << prefactor << " * ";
      os << "(";
      for (std::size_t i = 0; i < exactTerms.size(); ++i) {
        const auto& [c, e] = exactTerms[i];
        if (i) os << (c > 0 ? " + " : " - ");
        else if (c < 0)
          os << "-";
        Rat ac = c > 0 ? c : Rat(-c);
        if (ac != 1) os << ac << "*";
        if (e == 0)
          os << "1";
        else
          os << "e^(" << e << ")";
      }
      os << ")";
      if (vandermonde != 1) os << " / (" << vandermonde << ")";
      return os.str();
    }
    case Mode::Formal: {
      if (prefactor != 1) os << prefactor << " * ";
      os << "(";
      for (std::size_t i = 0; i < formalTerms.size(); ++i) {
        const auto& [s, e] = formalTerms[i];
        if (i)
          os << (s > 0 ? " + " : " - ");
        else if (s < 0)
          os << "-";
        os << "e^(" << e << ")";
      }
      os << ") / (" << formalDenominator << ")";
      return os.str();
    }
  }
  return "";
}

std::complex<double> HcizValue::toNumber() const {
  switch (mode) {
    case Mode::Numeric:
      return numeric;
    case Mode::Exact: {
      std::complex<double> acc = 0.0;
      for (const auto& [c, e] : exactTerms)
        acc += static_cast<double>(c) * std::exp(static_cast<double>(e));
      return static_cast<double>(prefactor) * acc / static_cast<double>(vandermonde);
    }
    case Mode::Formal:
      throw InvalidInputError("formal HCIZ values have no numeric value");
  }
  return 0.0;
}

}  // namespace haarint
