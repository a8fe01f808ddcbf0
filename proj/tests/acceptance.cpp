// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure.  Exact checks use the library's exact arithmetic; the statistical
// criterion samples Haar matrices.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include "haarint/asymptotics.hpp"
#include "haarint/bareiss.hpp"
#include "haarint/hciz.hpp"
#include "haarint/weingarten.hpp"
#include "test_util.hpp"

using namespace haarint;
using testutil::rf;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& name, bool pass,
            const std::string& detail = "") {
  std::cout << (pass ? "PASS" : "FAIL") << "  criterion " << criterion << ": " << name;
  if (!pass && !detail.empty()) std::cout << "  [" << detail << "]";
  std::cout << "\n";
  if (!pass) ++g_failures;
}

double msSince(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
      .count();
}

// --- criterion 1: golden symbolic values -----------------------------------

void criterion1() {
  struct Golden {
    const char* expr;
    const char* measure;
    const char* want;
  };
  const Golden cases[] = {
      {"abs(U[1,1])^2", "U(d)", "1/d"},
      {"U[1,1] * conj(U[1,2]) * U[2,2] * conj(U[2,1])", "U(d)", "-1/(d*(d^2-1))"},
      {"abs(U[1,1])^4", "U(d)", "2/(d*(d+1))"},
      {"O[1,1]^2", "O(d)", "1/d"},
      {"O[1,1]^4", "O(d)", "3/(d*(d+2))"},
      {"abs(Sp[1,1])^2 * abs(Sp[1,2])^2", "Sp(d)", "1/(d + d^2)"},
      {"abs(S[1,1])^2", "COE(d)", "2/(d+1)"},
      {"abs(S[1,1])^2", "CSE(d)", "1/(d-1)"},
      {"P[1,1] * P[2,2]", "Perm(d)", "1/(d*(d-1))"},
      {"Y[1,1]^2", "CPerm(d)", "(d-1)/d^2"},
      {"abs(D[1,1])^2", "DiagU(d)", "1"},
      {"abs(V[1,1])^2", "Stiefel(d,2)", "1/d"},
      {"tr(G * G')", "GinUE(d)", "d^2"},
      {"tr(H^4)", "GUE(d)", "2*d^3 + d"},
      {"tr(H^6)", "GUE(d)", "5*d^4 + 10*d^2"},
      {"tr(H^2)", "GOE(d)", "d^2 + d"},
      {"tr(H^2)", "GSE(d)", "d^2 - d"},
  };
  bool all = true;
  std::string detail;
  for (const Golden& c : cases) {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    try {
      IntegrationResult r = integrate(c.expr, parseMeasure(c.measure));
      ok = r.kind == IntegrationResult::Kind::Rational && r.rat == rf(c.want);
    } catch (const std::exception& e) {
      detail = std::string(c.expr) + ": " + e.what();
    }
    double ms = msSince(t0);
    if (!ok && detail.empty()) detail = c.expr;
    if (ms >= 1000.0) {
      ok = false;
      detail = std::string(c.expr) + " took " + std::to_string(ms) + " ms";
    }
    all = all && ok;
  }
  // tr(U A U' B) = tr(A) tr(B) / d, exact trace equality
  {
    auto t0 = std::chrono::steady_clock::now();
    IntegrationResult r =
        integrate("tr(U * A * U' * B)", MeasureSpec::symbolic(Family::U));
    TraceTerm want;
    want.coeff = rf("1/d");
    want.words.push_back(TraceWord({WordAtom{"A", false, false}}));
    want.words.push_back(TraceWord({WordAtom{"B", false, false}}));
    bool ok = r.kind == IntegrationResult::Kind::Trace &&
              r.trace == TraceExpr::single(want) && msSince(t0) < 1000.0;
    if (!ok) detail = "tr(UAU'B)";
    all = all && ok;
  }
  report(1, "golden symbolic values (exact, < 1 s each)", all, detail);
}

// --- criterion 2: concrete trace moments ------------------------------------

void criterion2() {
  bool all = true;
  std::string detail;
  try {
    all = all && integrate("abs(tr(U))^4", parseMeasure("U(10)")).scalar == Scalar(2);
    for (long n : {3L, 4L, 7L})
      all = all &&
            integrate("abs(tr(U))^6", MeasureSpec::concrete(Family::U, n)).scalar ==
                Scalar(6);
    all = all && integrate("abs(tr(U))^4", parseMeasure("U(1)")).scalar == Scalar(1);
  } catch (const std::exception& e) {
    all = false;
    detail = e.what();
  }
  bool threw = false;
  try {
    integrate("abs(tr(U))^4", parseMeasure("U(d)"));
  } catch (const NotRationalError&) {
    threw = true;
  } catch (const std::exception& e) {
    detail = e.what();
  }
  all = all && threw;
  report(2, "concrete pure trace moments and the symbolic-d argument error", all, detail);
}

// --- criterion 3: Weingarten-Gram inverse identities -------------------------

void criterion3() {
  auto t0 = std::chrono::steady_clock::now();
  bool all = true;
  std::string detail;
  // Unitary: (W G)(gamma, id) = [gamma = id]; by conjugation invariance of
  // the class functions this single row is the whole matrix identity.
  for (int k = 1; k <= 5 && all; ++k) {
    for (const Partition& gammaType : partitionsOf(k)) {
      std::vector<int> img;
      int off = 0;
      for (int part : gammaType.parts) {
        for (int i = 0; i < part; ++i) img.push_back(off + (i + 1) % part);
        off += part;
      }
      Permutation gamma(img);
      std::map<Partition, DimPoly> coeffs;
      for (const Permutation& tau : allPermutations(k))
        coeffs[(gamma * tau.inverse()).cycleType()] +=
            DimPoly::monomial(Scalar(1), tau.cycleCount());
      RationalFunction acc;
      for (const auto& [mu, c] : coeffs) acc += RationalFunction::fromPoly(c) * wgUnitary(mu);
      bool isId = gammaType.length() == k;
      if (!(acc == (isId ? RationalFunction::one() : RationalFunction::zero()))) {
        all = false;
        detail = "unitary k=" + std::to_string(k) + " class " + gammaType.str();
        break;
      }
    }
  }
  // Orthogonal: the full matrix identity over P_2k for 2k <= 6.
  for (int k = 1; k <= 3 && all; ++k) {
    const auto& pp = pairPartitions(2 * k);
    int m = static_cast<int>(pp.size());
    for (int i = 0; i < m && all; ++i)
      for (int j = 0; j < m; ++j) {
        RationalFunction acc;
        for (int l = 0; l < m; ++l)
          acc += RationalFunction::fromPoly(DimPoly::monomial(
                     Scalar(1), loops(pp[static_cast<std::size_t>(i)],
                                      pp[static_cast<std::size_t>(l)]))) *
                 wgOrthogonal(pp[static_cast<std::size_t>(l)], pp[static_cast<std::size_t>(j)]);
        if (!(acc == (i == j ? RationalFunction::one() : RationalFunction::zero()))) {
          all = false;
          detail = "orthogonal 2k=" + std::to_string(2 * k);
          break;
        }
      }
  }
  double ms = msSince(t0);
  if (ms >= 60000.0) {
    all = false;
    detail = "runtime " + std::to_string(ms) + " ms";
  }
  report(3, "Weingarten-Gram inverse identities (U k<=5, O 2k<=6, < 60 s)", all, detail);
}

// --- criterion 4: symplectic duality ----------------------------------------

void criterion4() {
  bool all = true;
  for (int k = 1; k <= 3 && all; ++k)
    for (const auto& p : pairPartitions(2 * k)) {
      for (const auto& q : pairPartitions(2 * k)) {
        RationalFunction dual = wgOrthogonal(p, q).substNegate();
        if (loops(p, q) % 2) dual = -dual;
        if (!(wgSymplectic(p, q) == dual)) {
          all = false;
          break;
        }
      }
      if (!all) break;
    }
  report(4, "duality Wg^Sp(p,q,d) = (-1)^loops Wg^O(p,q,-d), 2k <= 6", all);
}

// --- criterion 5: published asymptotic expansions ----------------------------

void criterion5() {
  bool all = true;
  std::string detail;
  try {
    AsymptoticResult a =
        asymptotic(parse("abs(U[1,1])^4"), MeasureSpec::symbolic(Family::U), 4);
    all = all && a.str() == "2/d^2 - 2/d^3 + 2/d^4";
    if (!all) detail = "got " + a.str();

    AsymptoticResult page = asymptotic(parseRationalFunction("2*n/(n^2+1)", "n"), "n", 5);
    bool ok = page.str() == "2/n - 2/n^3 + 2/n^5";
    if (!ok) detail = "page purity: " + page.str();
    all = all && ok;

    AsymptoticResult tp = asymptotic(parse("tr(U * A * U' * B * U * C * U' * D)"),
                                     MeasureSpec::symbolic(Family::U), 3);
    auto mkTerm = [](std::vector<std::vector<const char*>> words, long c) {
      TraceTerm t;
      t.coeff = RationalFunction(Scalar(c));
      for (auto& w : words) {
        std::vector<WordAtom> atoms;
        for (const char* nm : w) atoms.push_back(WordAtom{nm, false, false});
        t.words.push_back(TraceWord(std::move(atoms)));
      }
      return t;
    };
    TraceExpr b2, b3;
    b2.addTerm(mkTerm({{"A"}, {"C"}, {"B", "D"}}, 1));
    b2.addTerm(mkTerm({{"A", "C"}, {"B"}, {"D"}}, 1));
    b2.normalize();
    b3.addTerm(mkTerm({{"A"}, {"B"}, {"C"}, {"D"}}, -1));
    b3.addTerm(mkTerm({{"A", "C"}, {"B", "D"}}, -1));
    b3.normalize();
    bool okTp = tp.isTrace && tp.buckets.size() == 2 && tp.buckets.count(2) &&
                tp.buckets.count(3) && tp.buckets.at(2) == b2 && tp.buckets.at(3) == b3;
    if (!okTp) detail = "trace polynomial buckets";
    all = all && okTp;
  } catch (const std::exception& e) {
    all = false;
    detail = e.what();
  }
  report(5, "published 1/d expansions (|U11|^4, Page purity, trace polynomial)", all,
         detail);
}

// --- criterion 6: brute-force oracles ----------------------------------------

void criterion6() {
  bool all = true;
  std::string detail;
  // permutation-group integrals vs exhaustive averages, d <= 5, degree <= 4
  for (long d : {2L, 3L, 4L, 5L}) {
    MeasureSpec spec = MeasureSpec::concrete(Family::Perm, d);
    std::vector<std::pair<int, int>> allPairs;
    for (int r = 1; r <= d; ++r)
      for (int c = 1; c <= d; ++c) allPairs.emplace_back(r, c);
    const auto& perms = allPermutations(static_cast<int>(d));
    std::vector<std::size_t> idx;
    std::function<bool(std::size_t, int)> rec = [&](std::size_t start, int depth) -> bool {
      if (depth > 0) {
        Monomial m;
        for (std::size_t i : idx)
          m.factors.push_back(MonomialFactor{"P", allPairs[i].first, allPairs[i].second});
        long count = 0;
        for (const Permutation& s : perms) {
          bool ok = true;
          for (std::size_t i : idx)
            ok = ok && s(allPairs[i].first - 1) == allPairs[i].second - 1;
          count += ok ? 1 : 0;
        }
        Rat expect(count, factorial(static_cast<int>(d)));
        if (!(integrateMonomial(m, spec).constantValue() == Scalar(expect))) return false;
      }
      if (depth == 4) return true;
      for (std::size_t i = start; i < allPairs.size(); ++i) {
        idx.push_back(i);
        if (!rec(i, depth + 1)) return false;
        idx.pop_back();
      }
      return true;
    };
    if (!rec(0, 0)) {
      all = false;
      detail = "permutation oracle at d=" + std::to_string(d);
      break;
    }
  }
  // matrix integration E[U U'] = I at d = 2, 3
  for (long d : {2L, 3L}) {
    SymbolicMatrix m =
        matrixIntegrate(parse("U * U'"), MeasureSpec::concrete(Family::U, d));
    for (long i = 0; i < d; ++i)
      for (long j = 0; j < d; ++j) {
        bool ok = i == j ? m(i, j).rationalValue() == RationalFunction::one()
                         : m(i, j).isZero();
        if (!ok) {
          all = false;
          detail = "E[UU'] != I at d=" + std::to_string(d);
        }
      }
  }
  report(6, "brute-force oracles (permutation exhaustive, E[UU'] = I)", all, detail);
}

// --- criterion 7: purity pipeline --------------------------------------------

void criterion7() {
  bool all = true;
  std::string detail;
  for (long n : {2L, 3L}) {
    long d = n * n;
    MeasureSpec psi = MeasureSpec::concrete(Family::Psi, d);
    ExprMatrix rho(d, d);
    for (long i = 0; i < d; ++i)
      for (long j = 0; j < d; ++j)
        rho(i, j) = Expr::entry("psi", static_cast<int>(i) + 1, 1) *
                    Expr::entry("psi", static_cast<int>(j) + 1, 1, true);
    ExprMatrix rhoA = partialTrace(rho, static_cast<int>(n), static_cast<int>(n), 2);
    std::vector<Expr> terms;
    for (long i = 0; i < n; ++i)
      for (long j = 0; j < n; ++j) terms.push_back(rhoA(i, j) * rhoA(j, i));
    SymbolicValue v =
        integrateWithConstants(normalize(Expr::sum(std::move(terms))), psi, "psi");
    Rat expect = Rat(2 * n, n * n + 1);
    if (!(v.rationalValue() == RationalFunction(Scalar(expect)))) {
      all = false;
      detail = "n=" + std::to_string(n);
    }
  }
  report(7, "purity pipeline E[tr(rho_A^2)] = 2n/(n^2+1) at n = 2, 3", all, detail);
}

// --- criterion 8: statistical cross-checks (slow) -----------------------------

void criterion8() {
  bool all = true;
  std::string detail;
  std::mt19937_64 rng(61);
  const int N = 1000000;
  long d = 3;
  double m2 = 0, m4 = 0, mixedRe = 0;
  for (int s = 0; s < N; ++s) {
    Eigen::MatrixXcd U = testutil::haarUnitary(static_cast<int>(d), rng);
    double a2 = std::norm(U(0, 0));
    m2 += a2;
    m4 += a2 * a2;
    mixedRe += (U(0, 0) * std::conj(U(0, 1)) * U(1, 1) * std::conj(U(1, 0))).real();
  }
  m2 /= N;
  m4 /= N;
  mixedRe /= N;
  double e2 = rf("1/d").evalAt(Rat(d)).toDouble();
  double e4 = rf("2/(d*(d+1))").evalAt(Rat(d)).toDouble();
  double emix = rf("-1/(d*(d^2-1))").evalAt(Rat(d)).toDouble();
  if (std::abs(m2 - e2) > 5e-3) {
    all = false;
    detail = "|U11|^2 off by " + std::to_string(std::abs(m2 - e2));
  }
  if (std::abs(m4 - e4) > 5e-3) {
    all = false;
    detail = "|U11|^4 off by " + std::to_string(std::abs(m4 - e4));
  }
  if (std::abs(mixedRe - emix) > 5e-3) {
    all = false;
    detail = "mixed moment off by " + std::to_string(std::abs(mixedRe - emix));
  }

  // HCIZ d = 2 numeric within 2% at 1e5 samples
  std::vector<double> av{0.35, -0.6}, bv{0.9, 0.15};
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(2, 2), B = Eigen::MatrixXcd::Zero(2, 2);
  A(0, 0) = av[0];
  A(1, 1) = av[1];
  B(0, 0) = bv[0];
  B(1, 1) = bv[1];
  double acc = 0.0;
  for (int i = 0; i < 100000; ++i) {
    Eigen::MatrixXcd U = testutil::haarUnitary(2, rng);
    acc += std::exp((A * U * B * U.adjoint()).trace().real());
  }
  acc /= 100000;
  double exact = hcizEigen(Spectrum::fromNumbers({{av[0], 0}, {av[1], 0}}),
                           Spectrum::fromNumbers({{bv[0], 0}, {bv[1], 0}}))
                     .toNumber()
                     .real();
  if (std::abs(acc - exact) > 0.02 * std::abs(exact)) {
    all = false;
    detail = "HCIZ MC off by " + std::to_string(std::abs(acc - exact) / std::abs(exact));
  }
  report(8, "statistical cross-checks (slow: 1e6 Haar samples, HCIZ MC)", all, detail);
}

// --- criterion 9: performance sanity ------------------------------------------

void criterion9() {
  bool all = true;
  std::string detail;
  cacheClear();
  auto t0 = std::chrono::steady_clock::now();
  IntegrationResult r = integrate("abs(U[1,1])^10", MeasureSpec::symbolic(Family::U));
  double msU = msSince(t0);
  if (!(msU < 1000.0)) {
    all = false;
    detail = "|U11|^10 cold took " + std::to_string(msU) + " ms";
  }
  (void)r;

  cacheClear();
  t0 = std::chrono::steady_clock::now();
  IntegrationResult ro = integrate("O[1,1]^10", MeasureSpec::concrete(Family::O, 20));
  double msO = msSince(t0);
  if (!(msO < 1000.0)) {
    all = false;
    detail = "O11^10 at d=20 took " + std::to_string(msO) + " ms";
  }
  (void)ro;

  t0 = std::chrono::steady_clock::now();
  bool threw = false;
  try {
    integrate("abs(U[1,1])^14", MeasureSpec::symbolic(Family::U));
  } catch (const DegreeLimitError&) {
    threw = true;
  }
  double msGuard = msSince(t0);
  if (!threw || msGuard > 50.0) {
    all = false;
    detail = "degree guard not instant (" + std::to_string(msGuard) + " ms)";
  }
  report(9, "performance sanity (cold |U11|^10 < 1 s, O11^10 d=20 < 1 s, instant guard)",
         all, detail);
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  if (g_failures) {
    std::cout << g_failures << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all acceptance criteria passed\n";
  return 0;
}
