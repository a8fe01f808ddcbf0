#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "haarint/hciz.hpp"
#include "test_util.hpp"

using namespace haarint;

TEST_CASE("hciz 1x1 degenerates to exp(a b)") {
  HcizValue v = hcizEigen(Spectrum::fromSymbols({"s"}), Spectrum::fromSymbols({"t"}));
  REQUIRE(v.formalTerms.size() == 1);
  CHECK(v.formalTerms[0].first == 1);
  CHECK(v.formalTerms[0].second == "s*t");
  CHECK(v.prefactor == 1);

  HcizValue n = hcizEigen(Spectrum::fromNumbers({{0.5, 0.0}}),
                          Spectrum::fromNumbers({{2.0, 0.0}}));
  CHECK(n.toNumber().real() == doctest::Approx(std::exp(1.0)));
}

TEST_CASE("hciz d=2 with spectra (0,1): e - 1 exactly") {
  HcizValue v = hcizEigen(Spectrum::fromRationals({Rat(0), Rat(1)}),
                          Spectrum::fromRationals({Rat(0), Rat(1)}));
  REQUIRE(v.mode == HcizValue::Mode::Exact);
  CHECK(v.prefactor == 1);
  CHECK(v.vandermonde == 1);
  REQUIRE(v.exactTerms.size() == 2);
  // e^1 - e^0
  CHECK(v.exactTerms[0] == std::pair<Rat, Rat>(Rat(-1), Rat(0)));
  CHECK(v.exactTerms[1] == std::pair<Rat, Rat>(Rat(1), Rat(1)));
  CHECK(v.toNumber().real() == doctest::Approx(std::exp(1.0) - 1.0));
}

TEST_CASE("degenerate numeric spectra engage the perturbed path") {
  HcizValue v = hcizEigen(Spectrum::fromRationals({Rat(0), Rat(0)}),
                          Spectrum::fromNumbers({{0.3, 0.0}, {0.9, 0.0}}));
  CHECK(std::isfinite(v.toNumber().real()));
  // Analytic confluent limit by l'Hopital: with a = (0, 0),
  // f(a2) = (e^{a2 b2} - e^{a2 b1}) / (a2 (b2 - b1)) -> 1 as a2 -> 0.
  // The imaginary-axis perturbation keeps the cancellation exact in double
  // precision, so the perturbed value sits within O(1e-10) of the limit.
  CHECK(v.toNumber().real() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("perturb_degenerate sorts and separates") {
  Spectrum s = perturbDegenerate(Spectrum::fromNumbers({{1.0, 0.0}, {1.0, 0.0}}));
  REQUIRE(s.numeric.size() == 2);
  CHECK(s.numeric[0] == std::complex<double>(1.0, 1e-12));
  CHECK(s.numeric[1] == std::complex<double>(1.0, 2e-12));

  Spectrum t = perturbDegenerate(Spectrum::fromNumbers({{2.0, 0.0}, {1.0, 0.0}}));
  CHECK(t.numeric[0] == std::complex<double>(1.0, 0.0));  // sorted, unperturbed
  CHECK(t.numeric[1] == std::complex<double>(2.0, 0.0));

  Spectrum u = perturbDegenerate(
      Spectrum::fromNumbers({{0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}}));
  CHECK(u.numeric[0] != u.numeric[1]);
  CHECK(u.numeric[1] != u.numeric[2]);
}

TEST_CASE("permutation invariance") {
  // exact mode: shuffling both spectra leaves the canonical value unchanged
  HcizValue a = hcizEigen(Spectrum::fromRationals({Rat(0), Rat(1), Rat(2)}),
                          Spectrum::fromRationals({Rat(1), Rat(3), Rat(4)}));
  HcizValue b = hcizEigen(Spectrum::fromRationals({Rat(2), Rat(0), Rat(1)}),
                          Spectrum::fromRationals({Rat(4), Rat(1), Rat(3)}));
  CHECK(a.exactTerms == b.exactTerms);
  CHECK(a.vandermonde == b.vandermonde);
  CHECK(a.prefactor == b.prefactor);

  // numeric mode to 1e-10 relative
  HcizValue c = hcizEigen(Spectrum::fromNumbers({{0.2, 0}, {0.7, 0}, {-0.4, 0}}),
                          Spectrum::fromNumbers({{0.1, 0}, {-0.9, 0}, {0.5, 0}}));
  HcizValue d = hcizEigen(Spectrum::fromNumbers({{0.7, 0}, {-0.4, 0}, {0.2, 0}}),
                          Spectrum::fromNumbers({{-0.9, 0}, {0.5, 0}, {0.1, 0}}));
  CHECK(std::abs(c.toNumber() - d.toNumber()) <=
        1e-10 * std::max(1.0, std::abs(c.toNumber())));
}

TEST_CASE("hciz matrix interfaces") {
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(2, 2);
  A(1, 1) = 1.0;
  HcizValue v = hcizMatrices(A, A);
  CHECK(v.toNumber().real() == doctest::Approx(std::exp(1.0) - 1.0));

  // symbolic diagonal extraction
  HcizValue s = hcizMatricesSymbolic({{"s", ""}, {"", "t"}}, {{"u", ""}, {"", "v"}});
  REQUIRE(s.formalTerms.size() == 2);
  CHECK(s.formalTerms[0].second == "s*u + t*v");
  CHECK(s.formalTerms[1].second == "s*v + t*u");
  CHECK(s.formalDenominator == "(t - s)*(v - u)");

  // general symbolic 2x2 via the quadratic formula
  HcizValue q = hcizMatricesSymbolic({{"p", "q"}, {"r", "s"}}, {{"u", ""}, {"", "v"}});
  CHECK(q.formalTerms.size() == 2);
  CHECK(q.formalTerms[0].second.find("sqrt") != std::string::npos);

  // larger symbolic non-diagonal: unsupported
  CHECK_THROWS_AS(hcizMatricesSymbolic({{"a", "b", "c"}, {"d", "e", "f"}, {"g", "h", "i"}},
                                       {{"x", "", ""}, {"", "y", ""}, {"", "", "z"}}),
                  UnsupportedFormError);

  // non-Hermitian numeric input rejected
  Eigen::MatrixXcd NH = Eigen::MatrixXcd::Zero(2, 2);
  NH(0, 1) = 1.0;
  CHECK_THROWS_AS(hcizMatrices(NH, A), InvalidInputError);
}

TEST_CASE("hciz_formal builds the determinant expression over fresh symbols") {
  HcizValue v1 = hcizFormal(1);
  REQUIRE(v1.formalTerms.size() == 1);
  CHECK(v1.formalTerms[0].second == "a1*b1");

  HcizValue v2 = hcizFormal(2);
  REQUIRE(v2.formalTerms.size() == 2);
  CHECK(v2.prefactor == 1);
  CHECK(v2.formalTerms[0] == std::pair<int, std::string>(1, "a1*b1 + a2*b2"));
  CHECK(v2.formalTerms[1] == std::pair<int, std::string>(-1, "a1*b2 + a2*b1"));
  CHECK(v2.formalDenominator == "(a2 - a1)*(b2 - b1)");

  CHECK_THROWS_AS(hcizFormal(0), InvalidInputError);
}

TEST_CASE("repeated symbolic eigenvalues raise the degenerate-spectrum error") {
  CHECK_THROWS_WITH_AS(
      hcizEigen(Spectrum::fromSymbols({"s", "s"}), Spectrum::fromSymbols({"u", "v"})),
      doctest::Contains("l'Hopital"), DegenerateSpectrumError);
}

TEST_CASE("monte carlo agreement at d=2" * doctest::skip(false)) {
  // E[e^{tr(A U B U')}] over 1e5 Haar samples within 2% relative.
  std::mt19937_64 rng(59);
  std::vector<double> a{0.35, -0.6}, b{0.9, 0.15};
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(2, 2), B = Eigen::MatrixXcd::Zero(2, 2);
  A(0, 0) = a[0];
  A(1, 1) = a[1];
  B(0, 0) = b[0];
  B(1, 1) = b[1];
  double acc = 0.0;
  int N = 100000;
  for (int i = 0; i < N; ++i) {
    Eigen::MatrixXcd U = testutil::haarUnitary(2, rng);
    acc += std::exp((A * U * B * U.adjoint()).trace().real());
  }
  acc /= N;
  HcizValue v = hcizEigen(Spectrum::fromNumbers({{a[0], 0}, {a[1], 0}}),
                          Spectrum::fromNumbers({{b[0], 0}, {b[1], 0}}));
  CHECK(std::abs(acc - v.toNumber().real()) <= 0.02 * std::abs(v.toNumber().real()));
}
