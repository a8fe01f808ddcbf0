#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "haarint/scalar.hpp"

namespace haarint {

/// Eigenvalue list for the HCIZ integral: exact rationals, floating point,
/// or formal symbols.  One homogeneous mode per spectrum.
struct Spectrum {
  enum class Mode { Exact, Numeric, Formal };
  Mode mode = Mode::Numeric;
  std::vector<Rat> exact;
  std::vector<std::complex<double>> numeric;
  std::vector<std::string> formal;

  static Spectrum fromRationals(std::vector<Rat> v);
  static Spectrum fromNumbers(std::vector<std::complex<double>> v);
  static Spectrum fromSymbols(std::vector<std::string> v);

  std::size_t size() const;
};

/// Closed-form value of the Haar average of exp(tr(A U B U*)): the
/// determinant of exponentials over both Vandermonde determinants, times the
/// superfactorial prefactor.  Numeric inputs give a number; exact and formal
/// inputs keep the exponentials as symbolic atoms.
struct HcizValue {
  enum class Mode { Exact, Numeric, Formal };
  Mode mode = Mode::Numeric;
  int dim = 0;

  std::complex<double> numeric{};

  // Exact mode: prefactor/denominator rational, terms coeff * e^{exponent}.
  Rat prefactor = 1;
  Rat vandermonde = 1;
  std::vector<std::pair<Rat, Rat>> exactTerms;  // (signed coefficient, exponent)

  // Formal mode: signed exponent strings over the eigenvalue symbols.
  std::vector<std::pair<int, std::string>> formalTerms;
  std::string formalDenominator;

  std::string str() const;
  /// Numeric value (Exact mode evaluates the exponentials in double).
  std::complex<double> toNumber() const;
};

/// Sorts a numeric spectrum by (re, im); when duplicates exist, entry i
/// (1-based) is shifted by i * eps along the imaginary axis with
/// eps = max(max|a|, 1) * 1e-12, which breaks every degeneracy.
Spectrum perturbDegenerate(const Spectrum& a);

/// HCIZ from eigenvalue lists.  Formal symbols must be pairwise distinct.
HcizValue hcizEigen(const Spectrum& a, const Spectrum& b);

/// HCIZ from numeric Hermitian matrices (standard diagonalization).
HcizValue hcizMatrices(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B);

/// HCIZ from symbolic matrices given as entry strings; supports diagonal
/// matrices of any size and general 2x2 via the quadratic formula.  Empty
/// strings denote zero entries.
HcizValue hcizMatricesSymbolic(const std::vector<std::vector<std::string>>& A,
                               const std::vector<std::vector<std::string>>& B);

/// The determinant-ratio expression over fresh formal eigenvalue symbols
/// a1..ad, b1..bd; the dimension must be a concrete integer.
HcizValue hcizFormal(int d);

}  // namespace haarint
