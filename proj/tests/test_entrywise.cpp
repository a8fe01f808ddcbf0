#include <doctest.h>

#include <functional>

#include "haarint/entrywise.hpp"
#include "haarint/weingarten.hpp"
#include "test_util.hpp"

using namespace haarint;
using testutil::rf;

namespace {

Monomial mono(std::vector<MonomialFactor> fs, Scalar c = Scalar(1)) {
  Monomial m;
  m.coeff = std::move(c);
  m.factors = std::move(fs);
  return m;
}

MonomialFactor F(const std::string& s, int r, int c, bool conj = false) {
  return MonomialFactor{s, r, c, conj};
}

Monomial absPow(const std::string& s, int r, int c, int k) {
  Monomial m;
  for (int i = 0; i < k; ++i) {
    m.factors.push_back(F(s, r, c, false));
    m.factors.push_back(F(s, r, c, true));
  }
  return m;
}

}  // namespace

TEST_CASE("unitary golden values") {
  MeasureSpec u = MeasureSpec::symbolic(Family::U);
  CHECK(integrateUnitary(absPow("U", 1, 1, 1), u) == rf("1/d"));
  CHECK(integrateUnitary(absPow("U", 1, 1, 2), u) == rf("2/(d*(d+1))"));
  // mixed fourth moment U11 conj(U12) U22 conj(U21)
  Monomial mixed = mono({F("U", 1, 1), F("U", 1, 2, true), F("U", 2, 2), F("U", 2, 1, true)});
  CHECK(integrateUnitary(mixed, u) == rf("-1/(d*(d^2-1))"));
}

TEST_CASE("diagonal moments match the closed falling-product form") {
  // E|U11|^(2k) = k! / (d (d+1) ... (d+k-1)); independent of the Weingarten
  // sum, this is the classical beta-moment value.
  MeasureSpec u = MeasureSpec::symbolic(Family::U);
  for (int k = 1; k <= 5; ++k) {
    DimPoly den = DimPoly::one();
    for (int j = 0; j < k; ++j) den *= DimPoly(std::vector<Scalar>{Scalar(j), Scalar(1)});
    RationalFunction expect(DimPoly(Scalar(Rat(factorial(k)))), den);
    CHECK(integrateUnitary(absPow("U", 1, 1, k), u) == expect);
    // fast path and generic engine agree
    EngineOptions noFast;
    noFast.fastPaths = false;
    CHECK(integrateUnitary(absPow("U", 1, 1, k), u, noFast) == expect);
  }
}

TEST_CASE("unbalanced unitary monomials vanish") {
  MeasureSpec u = MeasureSpec::symbolic(Family::U);
  CHECK(integrateUnitary(mono({F("U", 1, 1)}), u).isZero());
  CHECK(integrateUnitary(mono({F("U", 1, 1), F("U", 2, 2)}), u).isZero());
  CHECK(integrateSU(mono({F("U", 1, 1)}), MeasureSpec::symbolic(Family::SU)).isZero());
  CHECK(integrateSU(mono({F("U", 1, 1), F("U", 2, 2)}), MeasureSpec::symbolic(Family::SU))
            .isZero());
}

TEST_CASE("SU balanced equals U") {
  MeasureSpec su = MeasureSpec::symbolic(Family::SU);
  CHECK(integrateSU(absPow("U", 1, 1, 1), su) == rf("1/d"));
  CHECK(integrateSU(absPow("U", 1, 1, 2), su) == rf("2/(d*(d+1))"));
}

TEST_CASE("row normalization: sum over a row of |U_1j|^2 is 1") {
  for (long n : {2L, 3L, 4L, 5L}) {
    MeasureSpec u = MeasureSpec::concrete(Family::U, n);
    RationalFunction acc;
    for (int j = 1; j <= n; ++j) acc += integrateUnitary(absPow("U", 1, j, 1), u);
    CHECK(acc == RationalFunction::one());
  }
}

TEST_CASE("orthogonal golden values") {
  MeasureSpec o = MeasureSpec::symbolic(Family::O);
  Monomial o2 = mono({F("O", 1, 1), F("O", 1, 1)});
  CHECK(integrateOrthogonal(o2, o) == rf("1/d"));
  Monomial o4 = mono({F("O", 1, 1), F("O", 1, 1), F("O", 1, 1), F("O", 1, 1)});
  CHECK(integrateOrthogonal(o4, o) == rf("3/(d*(d+2))"));
  Monomial o3 = mono({F("O", 1, 1), F("O", 1, 1), F("O", 1, 1)});
  CHECK(integrateOrthogonal(o3, o).isZero());
  // generic engine matches the diagonal fast path
  EngineOptions noFast;
  noFast.fastPaths = false;
  CHECK(integrateOrthogonal(o4, o, noFast) == rf("3/(d*(d+2))"));
}

TEST_CASE("orthogonal trace normalization: E[tr(O)^2] = 1") {
  for (long n : {2L, 3L, 4L}) {
    MeasureSpec o = MeasureSpec::concrete(Family::O, n);
    RationalFunction acc;
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j)
        acc += integrateOrthogonal(mono({F("O", i, i), F("O", j, j)}), o);
    CHECK(acc == RationalFunction::one());
  }
}

TEST_CASE("symplectic golden values") {
  MeasureSpec sp = MeasureSpec::symbolic(Family::Sp);
  CHECK(integrateSymplectic(absPow("Sp", 1, 1, 1), sp) == rf("1/d"));
  // |Sp11|^2 |Sp12|^2 -> 1/(d + d^2)
  Monomial m;
  m.factors = {F("Sp", 1, 1), F("Sp", 1, 1, true), F("Sp", 1, 2), F("Sp", 1, 2, true)};
  CHECK(integrateSymplectic(m, sp) == rf("1/(d + d^2)"));
  // odd degree vanishes
  CHECK(integrateSymplectic(mono({F("Sp", 1, 1)}), sp).isZero());
  // first-row moments agree with the unitary values (the first row of a
  // symplectic matrix is uniform on the unit sphere, as for U(d))
  CHECK(integrateSymplectic(absPow("Sp", 1, 1, 2), sp) == rf("2/(d*(d+1))"));
}

TEST_CASE("symplectic multi-row moment and Schur orthogonality checks") {
  MeasureSpec sp = MeasureSpec::symbolic(Family::Sp);
  // E|S11|^2|S22|^2 picks up the quaternionic correction (pole at d = 2)
  Monomial m;
  m.factors = {F("Sp", 1, 1), F("Sp", 1, 1, true), F("Sp", 2, 2), F("Sp", 2, 2, true)};
  CHECK(integrateSymplectic(m, sp) == rf("(d-1)/(d*(d+1)*(d-2))"));

  // E|tr S|^2 = 1 (fundamental representation is irreducible), and
  // E|tr S|^4 = 3 for d >= 4 (V tensor V splits into three irreducibles).
  for (long n : {4L, 6L}) {
    MeasureSpec spn = MeasureSpec::concrete(Family::Sp, n);
    RationalFunction acc2;
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j)
        acc2 += integrateSymplectic(mono({F("Sp", i, i), F("Sp", j, j, true)}), spn);
    CHECK(acc2 == RationalFunction::one());
  }
  {
    long n = 4;
    MeasureSpec spn = MeasureSpec::concrete(Family::Sp, n);
    RationalFunction acc4;
    for (int i1 = 1; i1 <= n; ++i1)
      for (int i2 = 1; i2 <= n; ++i2)
        for (int j1 = 1; j1 <= n; ++j1)
          for (int j2 = 1; j2 <= n; ++j2)
            acc4 += integrateSymplectic(
                mono({F("Sp", i1, i1), F("Sp", i2, i2), F("Sp", j1, j1, true),
                      F("Sp", j2, j2, true)}),
                spn);
    CHECK(acc4 == RationalFunction(Scalar(3)));
  }
}

TEST_CASE("symplectic assembly equals the term-by-term duality form") {
  // Same contraction sum with wgSymplectic replaced by
  // (-1)^loops * wgOrthogonal(-d), which is its definition.
  for (int k = 1; k <= 3; ++k)
    for (const auto& p : pairPartitions(2 * k)) {
      const auto& q = pairPartitions(2 * k)[0];
      RationalFunction viaDuality = wgOrthogonal(p, q).substNegate();
      if (loops(p, q) % 2) viaDuality = -viaDuality;
      CHECK(wgSymplectic(p, q) == viaDuality);
    }
}

TEST_CASE("symplectic odd concrete dimension is rejected") {
  CHECK_THROWS_AS(MeasureSpec::concrete(Family::Sp, 5), DimensionError);
}

TEST_CASE("permutation golden values and zero patterns") {
  MeasureSpec p = MeasureSpec::symbolic(Family::Perm);
  CHECK(integratePermutation(mono({F("P", 1, 1), F("P", 2, 2)}), p) == rf("1/(d*(d-1))"));
  CHECK(integratePermutation(mono({F("P", 1, 1), F("P", 1, 1), F("P", 1, 1)}), p) ==
        rf("1/d"));
  CHECK(integratePermutation(mono({F("P", 1, 1), F("P", 1, 2)}), p).isZero());
}

TEST_CASE("permutation brute-force oracle, d <= 5, degree <= 4") {
  // Exhaustive average over all d! permutation matrices for every monomial
  // over index pairs <= d up to degree 4 (multisets of pairs).
  for (long d : {3L, 4L, 5L}) {
    MeasureSpec spec = MeasureSpec::concrete(Family::Perm, d);
    std::vector<std::pair<int, int>> allPairs;
    for (int r = 1; r <= d; ++r)
      for (int c = 1; c <= d; ++c) allPairs.emplace_back(r, c);
    const auto& perms = allPermutations(static_cast<int>(d));

    std::vector<std::size_t> idx;
    std::function<void(std::size_t, int)> rec = [&](std::size_t start, int depth) {
      if (depth > 0) {
        Monomial m;
        for (std::size_t i : idx)
          m.factors.push_back(F("P", allPairs[i].first, allPairs[i].second));
        // brute force: count permutations with sigma(row) = col for all factors
        long count = 0;
        for (const Permutation& s : perms) {
          bool ok = true;
          for (std::size_t i : idx)
            ok = ok && s(allPairs[i].first - 1) == allPairs[i].second - 1;
          count += ok ? 1 : 0;
        }
        Rat expect(count, factorial(static_cast<int>(d)));
        CHECK(integratePermutation(m, spec).constantValue() == Scalar(expect));
      }
      if (depth == 4) return;
      for (std::size_t i = start; i < allPairs.size(); ++i) {
        idx.push_back(i);
        rec(i, depth + 1);
        idx.pop_back();
      }
    };
    rec(0, 0);
  }
}

TEST_CASE("centered permutation golden values and brute-force oracle") {
  MeasureSpec cp = MeasureSpec::symbolic(Family::CPerm);
  CHECK(integrateCenteredPermutation(mono({F("Y", 1, 1), F("Y", 1, 1)}), cp) ==
        rf("(d-1)/d^2"));
  CHECK(integrateCenteredPermutation(mono({F("Y", 1, 1)}), cp).isZero());

  // Y11^4 at d = 10 from the binomial expansion with E[P11^m] = 1/10
  MeasureSpec cp10 = MeasureSpec::concrete(Family::CPerm, 10);
  Monomial y4 = mono({F("Y", 1, 1), F("Y", 1, 1), F("Y", 1, 1), F("Y", 1, 1)});
  Rat p = Rat(1, 10);
  Rat expect = 0;
  for (int j = 0; j <= 4; ++j) {
    // C(4,j) * (-p)^(4-j) * E[P^j], with E[P^0] = 1, E[P^j] = p otherwise
    Rat c = Rat(factorial(4), factorial(j) * factorial(4 - j));
    Rat term = c;
    for (int t = 0; t < 4 - j; ++t) term *= -p;
    term *= (j == 0 ? Rat(1) : p);
    expect += term;
  }
  CHECK(integrateCenteredPermutation(y4, cp10).constantValue() == Scalar(expect));

  // exhaustive check at d = 3, 4
  for (long d : {3L, 4L}) {
    MeasureSpec spec = MeasureSpec::concrete(Family::CPerm, d);
    const auto& perms = allPermutations(static_cast<int>(d));
    Rat acc = 0;
    for (const Permutation& s : perms) {
      Rat v = (s(0) == 0 ? Rat(1) : Rat(0)) - Rat(1, d);
      acc += v * v * v * v;
    }
    acc /= Rat(factorial(static_cast<int>(d)));
    CHECK(integrateCenteredPermutation(y4, spec).constantValue() == Scalar(acc));
  }
}

TEST_CASE("diagonal unitary phases") {
  MeasureSpec du = MeasureSpec::symbolic(Family::DiagU);
  CHECK(integrateDiagUnitary(absPow("D", 1, 1, 1), du) == RationalFunction::one());
  CHECK(integrateDiagUnitary(mono({F("D", 1, 1), F("D", 2, 2, true)}), du).isZero());
  CHECK(integrateDiagUnitary(mono({F("D", 1, 2)}), du).isZero());
  CHECK(integrateDiagUnitary(mono({F("D", 1, 1), F("D", 1, 1), F("D", 1, 1, true)}), du)
            .isZero());
}

TEST_CASE("Stiefel and pure states delegate to the unitary engine") {
  MeasureSpec st = MeasureSpec::symbolic(Family::Stiefel, "d", 2);
  CHECK(integrateStiefel(absPow("V", 1, 1, 1), st) == rf("1/d"));
  CHECK_THROWS_AS(integrateStiefel(absPow("V", 1, 3, 1), st), InvalidInputError);

  MeasureSpec psi = MeasureSpec::symbolic(Family::Psi);
  CHECK(integrateStiefel(absPow("psi", 1, 1, 1), psi) == rf("1/d"));
  CHECK(integrateStiefel(absPow("psi", 1, 1, 2), psi) == rf("2/(d*(d+1))"));

  CHECK_THROWS_AS(MeasureSpec::concrete(Family::Stiefel, 2, 3), DimensionError);
}

TEST_CASE("Gaussian entrywise Wick values") {
  MeasureSpec gue = MeasureSpec::symbolic(Family::GUE);
  CHECK(integrateGaussian(mono({F("H", 1, 1), F("H", 1, 1)}), gue) == RationalFunction::one());
  CHECK(integrateGaussian(mono({F("H", 1, 2), F("H", 2, 1)}), gue) == RationalFunction::one());
  CHECK(integrateGaussian(mono({F("H", 1, 2), F("H", 1, 2, true)}), gue) ==
        RationalFunction::one());
  CHECK(integrateGaussian(mono({F("H", 1, 2), F("H", 1, 2)}), gue).isZero());
  CHECK(integrateGaussian(mono({F("H", 1, 1)}), gue).isZero());

  MeasureSpec goe = MeasureSpec::symbolic(Family::GOE);
  CHECK(integrateGaussian(mono({F("H", 1, 1), F("H", 1, 1)}), goe) ==
        RationalFunction(Scalar(2)));
  CHECK(integrateGaussian(mono({F("H", 1, 2), F("H", 1, 2)}), goe) == RationalFunction::one());

  CHECK_THROWS_AS(
      integrateGaussian(mono({F("H", 1, 1), F("H", 1, 1)}), MeasureSpec::symbolic(Family::GSE)),
      UnsupportedFormError);
}

TEST_CASE("Ginibre entrywise Wick values") {
  MeasureSpec gin = MeasureSpec::symbolic(Family::GinUE);
  CHECK(integrateGinibre(absPow("G", 1, 2, 1), gin) == RationalFunction::one());
  CHECK(integrateGinibre(mono({F("G", 1, 2), F("G", 2, 1)}), gin).isZero());
  CHECK(integrateGinibre(absPow("G", 1, 1, 2), gin) == RationalFunction(Scalar(2)));

  MeasureSpec gino = MeasureSpec::symbolic(Family::GinOE);
  CHECK(integrateGinibre(mono({F("G", 1, 2), F("G", 1, 2)}), gino) == RationalFunction::one());
  CHECK(integrateGinibre(mono({F("G", 1, 2), F("G", 2, 1)}), gino).isZero());
}

TEST_CASE("COE and CSE diagonal moments") {
  MeasureSpec coe = MeasureSpec::symbolic(Family::COE);
  CHECK(integrateCircular(absPow("S", 1, 1, 1), coe) == rf("2/(d+1)"));
  CHECK(integrateCircular(mono({F("S", 1, 1)}), coe).isZero());

  MeasureSpec cse = MeasureSpec::symbolic(Family::CSE);
  CHECK(integrateCircular(absPow("S", 1, 1, 1), cse) == rf("1/(d-1)"));
  CHECK_THROWS_AS(MeasureSpec::concrete(Family::CSE, 5), DimensionError);

  // grouped fast path equals the generic double sum
  EngineOptions noFast;
  noFast.fastPaths = false;
  for (int m : {1, 2}) {
    CHECK(integrateCircular(absPow("S", 1, 1, m), coe, noFast) ==
          integrateCircular(absPow("S", 1, 1, m), coe));
    CHECK(integrateCircular(absPow("S", 1, 1, m), cse, noFast) ==
          integrateCircular(absPow("S", 1, 1, m), cse));
  }
}

TEST_CASE("COE concrete dimension cross-check against the symbolic value") {
  for (long n : {3L, 5L}) {
    MeasureSpec coen = MeasureSpec::concrete(Family::COE, n);
    CHECK(integrateCircular(absPow("S", 1, 1, 1), coen).constantValue() ==
          rf("2/(d+1)").evalAt(Rat(n)));
  }
  for (long n : {4L, 6L}) {
    MeasureSpec csen = MeasureSpec::concrete(Family::CSE, n);
    CHECK(integrateCircular(absPow("S", 1, 1, 1), csen).constantValue() ==
          rf("1/(d-1)").evalAt(Rat(n)));
  }
}

TEST_CASE("COE off-diagonal second moment is nonzero") {
  // E|S12|^2 over COE: S symmetric unitary; the value 2/(d+1) * ... derived
  // from E[S S*] = I and symmetry: sum_j E|S1j|^2 = 1 with E|S11|^2 = 2/(d+1)
  // forces E|S12|^2 = (d-1)/((d-1)(d+1)) = 1/(d+1) by row exchange symmetry.
  MeasureSpec coe = MeasureSpec::symbolic(Family::COE);
  CHECK(integrateCircular(absPow("S", 1, 2, 1), coe) == rf("1/(d+1)"));
  // row normalization at concrete d as an independent identity
  for (long n : {3L, 4L}) {
    MeasureSpec coen = MeasureSpec::concrete(Family::COE, n);
    RationalFunction acc;
    for (int j = 1; j <= n; ++j) acc += integrateCircular(absPow("S", 1, j, 1), coen);
    CHECK(acc == RationalFunction::one());
  }
}

TEST_CASE("circular fourth moments validated by sampling") {
  // COE: E|S11|^4 = 8/((d+1)(d+3)); the d=2 CSE value is forced to 1 since
  // every self-dual 2x2 unitary is a phase times the identity.
  MeasureSpec coe = MeasureSpec::symbolic(Family::COE);
  CHECK(integrateCircular(absPow("S", 1, 1, 2), coe) == rf("8/((d+1)*(d+3))"));
  MeasureSpec cse = MeasureSpec::symbolic(Family::CSE);
  RationalFunction cse4 = integrateCircular(absPow("S", 1, 1, 2), cse);
  CHECK(cse4.evalAt(Rat(2)) == Scalar(1));
  CHECK(integrateCircular(absPow("S", 1, 1, 1), cse).evalAt(Rat(2)) == Scalar(1));

  // Monte-Carlo confirmation of the fourth moments.
  std::mt19937_64 rng(67);
  auto sampleCOE = [&](int d, int N) {
    double acc2 = 0, acc4 = 0;
    for (int s = 0; s < N; ++s) {
      Eigen::MatrixXcd U = testutil::haarUnitary(d, rng);
      std::complex<double> s11 = (U * U.transpose())(0, 0);
      double a = std::norm(s11);
      acc2 += a;
      acc4 += a * a;
    }
    return std::pair<double, double>(acc2 / N, acc4 / N);
  };
  auto sampleCSE = [&](int d, int N) {
    Eigen::MatrixXcd J = Eigen::MatrixXcd::Zero(d, d);
    for (int i = 0; i < d / 2; ++i) {
      J(i, i + d / 2) = 1.0;
      J(i + d / 2, i) = -1.0;
    }
    double acc2 = 0, acc4 = 0;
    for (int s = 0; s < N; ++s) {
      Eigen::MatrixXcd U = testutil::haarUnitary(d, rng);
      std::complex<double> s11 = (U * J * U.transpose() * J.transpose())(0, 0);
      double a = std::norm(s11);
      acc2 += a;
      acc4 += a * a;
    }
    return std::pair<double, double>(acc2 / N, acc4 / N);
  };
  {
    auto [m2, m4] = sampleCOE(3, 100000);
    CHECK(std::abs(m2 - rf("2/(d+1)").evalAt(Rat(3)).toDouble()) < 0.01);
    CHECK(std::abs(m4 - rf("8/((d+1)*(d+3))").evalAt(Rat(3)).toDouble()) < 0.01);
  }
  {
    auto [m2, m4] = sampleCSE(4, 100000);
    CHECK(std::abs(m2 - rf("1/(d-1)").evalAt(Rat(4)).toDouble()) < 0.01);
    CHECK(std::abs(m4 - cse4.evalAt(Rat(4)).toDouble()) < 0.01);
  }
}

TEST_CASE("design guards") {
  MeasureSpec d2 = MeasureSpec::symbolic(Family::Design, "d", 2);
  CHECK(integrateDesign(absPow("U", 1, 1, 1), d2) == rf("1/d"));
  CHECK(integrateDesign(absPow("U", 1, 1, 2), d2) == rf("2/(d*(d+1))"));
  CHECK_THROWS_AS(integrateDesign(absPow("U", 1, 1, 3), d2), DesignOrderError);
  MeasureSpec d1 = MeasureSpec::symbolic(Family::Design, "d", 1);
  CHECK(integrateDesign(mono({F("U", 1, 1)}), d1).isZero());
}

TEST_CASE("degree guard rejects 2k > 12") {
  MeasureSpec u = MeasureSpec::symbolic(Family::U);
  CHECK_THROWS_AS(integrateUnitary(absPow("U", 1, 1, 7), u), DegreeLimitError);
  EngineOptions wide;
  wide.maxDegree = 16;
  // a wider guard admits the degree (diagonal fast path keeps it cheap)
  CHECK(!integrateUnitary(absPow("U", 1, 1, 7), u, wide).isZero());
}

TEST_CASE("index validation against concrete dimensions") {
  MeasureSpec u3 = MeasureSpec::concrete(Family::U, 3);
  CHECK_THROWS_AS(integrateUnitary(absPow("U", 4, 1, 1), u3), InvalidInputError);
  CHECK_THROWS_AS(integrateUnitary(mono({F("U", 0, 1)}), u3), InvalidInputError);
}
