#include "haarint/entrywise.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "haarint/errors.hpp"
#include "haarint/weingarten.hpp"

namespace haarint {

namespace {

void setPath(std::string* enginePath, const char* tag) {
  if (enginePath) *enginePath = tag;
}

void checkDegree(std::size_t nFactors, const EngineOptions& opts) {
  if (static_cast<int>(nFactors) > opts.maxDegree)
    throw DegreeLimitError("monomial degree " + std::to_string(nFactors) +
                           " exceeds the engine guard 2k <= " +
                           std::to_string(opts.maxDegree));
}

void checkIndices(const Monomial& m, const MeasureSpec& spec) {
  for (const auto& f : m.factors) {
    if (f.row < 1 || f.col < 1)
      throw InvalidInputError("matrix entry indices must be >= 1, got " + f.str());
    if (!spec.symbolicDim && (f.row > spec.dim || f.col > spec.dim))
      throw InvalidInputError("entry index exceeds dimension " + std::to_string(spec.dim) +
                              ": " + f.str());
  }
}

void checkSingleSymbol(const Monomial& m) {
  for (const auto& f : m.factors)
    if (f.sym != m.factors.front().sym)
      throw DispatchError("monomial mixes matrix symbols '" + m.factors.front().sym +
                          "' and '" + f.sym + "'");
}

// Accumulator for sums of coeff(d) * Wg(type): symbolic mode keeps exact
// polynomial coefficients, concrete mode folds everything to a scalar.
struct WgSum {
  bool symbolic;
  long n = 0;
  std::map<Partition, DimPoly> coeffs;

  void add(const Partition& type, int dExponent, const BigInt& count) {
    if (count == 0) return;
    coeffs[type] += DimPoly::monomial(Scalar(Rat(count)), dExponent);
  }
  void addSigned(const Partition& type, long signedCount) {
    add(type, 0, BigInt(signedCount));
  }
};

RationalFunction finishUnitary(const WgSum& s) {
  if (s.symbolic) {
    RationalFunction acc;
    for (const auto& [mu, c] : s.coeffs)
      acc += RationalFunction::fromPoly(c) * wgUnitary(mu);
    return acc;
  }
  Rat acc = 0;
  for (const auto& [mu, c] : s.coeffs) {
    Scalar cv = c.eval(Scalar(Rat(s.n)));
    acc += cv.re * wgUnitary(mu, s.n);
  }
  return RationalFunction(Scalar(acc));
}

RationalFunction finishOrthogonal(const WgSum& s) {
  if (s.symbolic) {
    RationalFunction acc;
    for (const auto& [mu, c] : s.coeffs)
      acc += RationalFunction::fromPoly(c) * wgOrthogonalType(mu);
    return acc;
  }
  Rat acc = 0;
  for (const auto& [mu, c] : s.coeffs) {
    Scalar cv = c.eval(Scalar(Rat(s.n)));
    acc += cv.re * wgOrthogonalType(mu, s.n);
  }
  return RationalFunction(Scalar(acc));
}

RationalFunction finishSymplectic(const WgSum& s) {
  if (s.symbolic) {
    RationalFunction acc;
    for (const auto& [mu, c] : s.coeffs)
      acc += RationalFunction::fromPoly(c) * wgSymplecticType(mu);
    return acc;
  }
  Rat acc = 0;
  for (const auto& [mu, c] : s.coeffs) {
    Scalar cv = c.eval(Scalar(Rat(s.n)));
    acc += cv.re * wgSymplecticType(mu, s.n);
  }
  return RationalFunction(Scalar(acc));
}

// ---------------------------------------------------------------------------
// Unitary family

// Double permutation sum over row and column delta matchings, grouped by
// the cycle type of sigma tau^-1.
RationalFunction unitaryCore(const std::vector<std::pair<int, int>>& unconj,
                             const std::vector<std::pair<int, int>>& conj,
                             const MeasureSpec& spec, const EngineOptions& opts,
                             std::string* enginePath) {
  if (unconj.size() != conj.size()) {
    setPath(enginePath, "unitary-unbalanced");
    return RationalFunction::zero();
  }
  int k = static_cast<int>(unconj.size());
  if (k == 0) return RationalFunction::one();
  checkDegree(unconj.size() + conj.size(), opts);

  WgSum sum{spec.symbolicDim, spec.dim, {}};

  bool allSame = true;
  for (const auto& f : unconj) allSame = allSame && f == unconj.front();
  for (const auto& f : conj) allSame = allSame && f == unconj.front();
  if (opts.fastPaths && allSame) {
    // |M_rc|^(2k): every delta is satisfied, so the double sum collapses to
    // k! * sum over classes of |C_mu| * Wg(mu).
    setPath(enginePath, "unitary-diagonal-fast-path");
    BigInt kf = factorial(k);
    for (const Partition& mu : partitionsOf(k)) sum.add(mu, 0, kf * classSize(mu));
    return finishUnitary(sum);
  }

  setPath(enginePath, "unitary-weingarten");
  std::vector<Permutation> validSigma, validTauInv;
  for (const Permutation& s : allPermutations(k)) {
    bool ok = true;
    for (int i = 0; i < k && ok; ++i)
      ok = unconj[static_cast<std::size_t>(i)].first ==
           conj[static_cast<std::size_t>(s(i))].first;
    if (ok) validSigma.push_back(s);
  }
  if (validSigma.empty()) return RationalFunction::zero();
  for (const Permutation& t : allPermutations(k)) {
    bool ok = true;
    for (int i = 0; i < k && ok; ++i)
      ok = unconj[static_cast<std::size_t>(i)].second ==
           conj[static_cast<std::size_t>(t(i))].second;
    if (ok) validTauInv.push_back(t.inverse());
  }
  if (validTauInv.empty()) return RationalFunction::zero();

  std::map<Partition, BigInt> counts;
  for (const Permutation& s : validSigma)
    for (const Permutation& ti : validTauInv) counts[(s * ti).cycleType()] += 1;
  for (const auto& [mu, c] : counts) sum.add(mu, 0, c);
  return finishUnitary(sum);
}

std::vector<std::pair<int, int>> unconjPairs(const Monomial& m) {
  std::vector<std::pair<int, int>> v;
  for (const auto& f : m.factors)
    if (!f.conj) v.emplace_back(f.row, f.col);
  return v;
}

std::vector<std::pair<int, int>> conjPairs(const Monomial& m) {
  std::vector<std::pair<int, int>> v;
  for (const auto& f : m.factors)
    if (f.conj) v.emplace_back(f.row, f.col);
  return v;
}

// ---------------------------------------------------------------------------
// Orthogonal / symplectic

RationalFunction orthogonalCore(const std::vector<int>& rows, const std::vector<int>& cols,
                                const MeasureSpec& spec, const EngineOptions& opts,
                                std::string* enginePath) {
  std::size_t n = rows.size();
  if (n % 2 != 0) {
    setPath(enginePath, "orthogonal-odd-moment");
    return RationalFunction::zero();
  }
  if (n == 0) return RationalFunction::one();
  checkDegree(n, opts);
  int twoK = static_cast<int>(n);
  WgSum sum{spec.symbolicDim, spec.dim, {}};

  auto matches = [](const std::vector<int>& ix, const PairPartition& p) {
    for (const auto& [a, b] : p.pairs)
      if (ix[static_cast<std::size_t>(a)] != ix[static_cast<std::size_t>(b)]) return false;
    return true;
  };

  bool rowsSame = std::all_of(rows.begin(), rows.end(), [&](int r) { return r == rows[0]; });
  bool colsSame = std::all_of(cols.begin(), cols.end(), [&](int c) { return c == cols[0]; });
  if (opts.fastPaths && rowsSame && colsSame) {
    // All deltas hold; group the (2k-1)!!^2 pairs by loop type against a
    // fixed representative.
    setPath(enginePath, "orthogonal-diagonal-fast-path");
    PairPartition p0 = basePairing(twoK);
    BigInt total = doubleFactorialOdd(twoK);
    std::map<Partition, BigInt> counts;
    for (const PairPartition& q : pairPartitions(twoK)) counts[loopType(p0, q)] += 1;
    for (const auto& [mu, c] : counts) sum.add(mu, 0, total * c);
    return finishOrthogonal(sum);
  }

  setPath(enginePath, "orthogonal-gram");
  std::vector<const PairPartition*> validP, validQ;
  for (const PairPartition& p : pairPartitions(twoK)) {
    if (matches(rows, p)) validP.push_back(&p);
  }
  if (validP.empty()) return RationalFunction::zero();
  for (const PairPartition& q : pairPartitions(twoK)) {
    if (matches(cols, q)) validQ.push_back(&q);
  }
  if (validQ.empty()) return RationalFunction::zero();

  std::map<Partition, BigInt> counts;
  for (const PairPartition* p : validP)
    for (const PairPartition* q : validQ) counts[loopType(*p, *q)] += 1;
  for (const auto& [mu, c] : counts) sum.add(mu, 0, c);
  return finishOrthogonal(sum);
}

// Index slot of the symplectic engine: base index plus a formal +d/2 shift.
// For symbolic dimensions the shift stays formal; concretely the slot holds
// the actual index and half = d/2 resolves the J entries numerically.
struct SpSlot {
  int base;
  int shift;  // 0 or 1 (always 0 in concrete mode)
  friend bool operator==(const SpSlot& a, const SpSlot& b) {
    return a.base == b.base && a.shift == b.shift;
  }
};

// J entry between two slots under the block convention [[0, I], [-I, 0]];
// half == 0 means formal slots, otherwise actual indices.
int spJ(const SpSlot& a, const SpSlot& b, long half) {
  if (half == 0) {
    if (a.base != b.base || a.shift == b.shift) return 0;
    return a.shift == 0 ? 1 : -1;
  }
  if (b.base == a.base + half) return 1;
  if (b.base == a.base - half) return -1;
  return 0;
}

RationalFunction symplecticCore(const std::vector<SpSlot>& rows,
                                const std::vector<SpSlot>& cols, int globalSign,
                                const MeasureSpec& spec, const EngineOptions& opts,
                                std::string* enginePath) {
  std::size_t n = rows.size();
  if (n % 2 != 0) {
    setPath(enginePath, "symplectic-odd-moment");
    return RationalFunction::zero();
  }
  if (n == 0) return RationalFunction::one();
  checkDegree(n, opts);
  int twoK = static_cast<int>(n);
  setPath(enginePath, "symplectic-duality");
  WgSum sum{spec.symbolicDim, spec.dim, {}};
  long half = spec.symbolicDim ? 0 : spec.dim / 2;

  auto weights = [&](const std::vector<SpSlot>& ix) {
    std::vector<std::pair<const PairPartition*, int>> out;
    for (const PairPartition& p : pairPartitions(twoK)) {
      int w = 1;
      for (const auto& [a, b] : p.pairs) {
        w *= spJ(ix[static_cast<std::size_t>(a)], ix[static_cast<std::size_t>(b)], half);
        if (w == 0) break;
      }
      if (w != 0) out.emplace_back(&p, w);
    }
    return out;
  };

  auto validP = weights(rows);
  if (validP.empty()) return RationalFunction::zero();
  auto validQ = weights(cols);
  if (validQ.empty()) return RationalFunction::zero();

  // Kernel: the inverse of the signed Gram matrix.  Its magnitude is the
  // duality value wgSymplectic(loopType); the sign carries the extra
  // orientation cocycle of the J-contraction (see symplecticGramSign).
  std::map<Partition, long> counts;
  for (const auto& [p, wp] : validP)
    for (const auto& [q, wq] : validQ) {
      int eps = symplecticGramSign(*p, *q);
      counts[loopType(*p, *q)] += static_cast<long>(globalSign) * wp * wq * eps;
    }
  for (const auto& [mu, c] : counts) sum.addSigned(mu, c);
  return finishSymplectic(sum);
}

// ---------------------------------------------------------------------------
// Circular ensembles: expand S into Haar-unitary factors with internal
// summed column indices, then run the unitary Weingarten sum while resolving
// the internal delta network per tau.

struct CircOcc {
  int rowBase;
  int rowShift;  // CSE only
  int sym;       // internal column symbol
  int parOff;    // parity offset of this occurrence (CSE only)
};

// Union-find with parity offsets; contradictions flag the whole tau as zero.
struct ParityUF {
  std::vector<int> parent, rank_, par;
  bool contradiction = false;
  explicit ParityUF(int n) : parent(n), rank_(n, 0), par(n, 0) {
    for (int i = 0; i < n; ++i) parent[static_cast<std::size_t>(i)] = i;
  }
  std::pair<int, int> find(int x) {
    int p = 0;
    int r = x;
    while (parent[static_cast<std::size_t>(r)] != r) {
      p ^= par[static_cast<std::size_t>(r)];
      r = parent[static_cast<std::size_t>(r)];
    }
    return {r, p};
  }
  void unite(int a, int b, int offset) {
    auto [ra, pa] = find(a);
    auto [rb, pb] = find(b);
    if (ra == rb) {
      if ((pa ^ pb) != offset) contradiction = true;
      return;
    }
    if (rank_[static_cast<std::size_t>(ra)] < rank_[static_cast<std::size_t>(rb)]) {
      std::swap(ra, rb);
      std::swap(pa, pb);
    }
    parent[static_cast<std::size_t>(rb)] = ra;
    par[static_cast<std::size_t>(rb)] = pa ^ pb ^ offset;
    if (rank_[static_cast<std::size_t>(ra)] == rank_[static_cast<std::size_t>(rb)])
      rank_[static_cast<std::size_t>(ra)]++;
  }
};

RationalFunction circularCore(const Monomial& m, const MeasureSpec& spec,
                              const EngineOptions& opts, std::string* enginePath) {
  bool cse = spec.family == Family::CSE;
  setPath(enginePath, cse ? "cse-expansion" : "coe-expansion");
  int nS = 0, nSbar = 0;
  for (const auto& f : m.factors) (f.conj ? nSbar : nS)++;
  if (nS != nSbar) {
    setPath(enginePath, "circular-unbalanced");
    return RationalFunction::zero();
  }
  if (m.factors.empty()) return RationalFunction::one();
  int k = 2 * nS;  // degree in the underlying Haar unitary
  checkDegree(static_cast<std::size_t>(2 * k), opts);

  long half = spec.symbolicDim ? 0 : spec.dim / 2;
  int globalSign = 1;
  std::vector<CircOcc> un, co;
  int nextSym = 0;
  for (const auto& f : m.factors) {
    auto& list = f.conj ? co : un;
    int s = nextSym++;
    if (!cse) {
      // S = U U^T: S_ij = sum_a U_ia U_ja.
      list.push_back({f.row, 0, s, 0});
      list.push_back({f.col, 0, s, 0});
    } else {
      // S = U J U^T J^T: S_ij = sum_a U_ia U_{phi(j),phi(a)} J(a,phi(a)) J(j,phi(j)).
      if (spec.symbolicDim) {
        list.push_back({f.row, 0, s, 0});
        list.push_back({f.col, 1, s, 1});
        // J(j, phi(j)) = +1 for generic j <= d/2.
      } else {
        int j = f.col;
        int phiJ = j <= half ? j + static_cast<int>(half) : j - static_cast<int>(half);
        globalSign *= (j <= half) ? 1 : -1;
        list.push_back({f.row, 0, s, 0});
        list.push_back({phiJ, 0, s, 1});
      }
    }
  }

  // Row constraints are between concrete values.
  auto rowEq = [](const CircOcc& a, const CircOcc& b) {
    return a.rowBase == b.rowBase && a.rowShift == b.rowShift;
  };
  std::vector<Permutation> validSigma;
  for (const Permutation& s : allPermutations(k)) {
    bool ok = true;
    for (int i = 0; i < k && ok; ++i)
      ok = rowEq(un[static_cast<std::size_t>(i)], co[static_cast<std::size_t>(s(i))]);
    if (ok) validSigma.push_back(s);
  }
  if (validSigma.empty()) return RationalFunction::zero();

  int nSyms = nextSym;
  WgSum sum{spec.symbolicDim, spec.dim, {}};
  std::map<Partition, DimPoly>& coeffs = sum.coeffs;

  // When every sigma is row-valid (diagonal moments), the double sum
  // factorizes: #{sigma : type(sigma tau^-1) = mu} = |C_mu| for any tau, so
  // one pass over tau suffices.
  bool allSigma =
      validSigma.size() == static_cast<std::size_t>(allPermutations(k).size());

  DimPoly tauPoly;
  for (const Permutation& t : allPermutations(k)) {
    ParityUF uf(nSyms);
    for (int i = 0; i < k; ++i) {
      const CircOcc& a = un[static_cast<std::size_t>(i)];
      const CircOcc& b = co[static_cast<std::size_t>(t(i))];
      uf.unite(a.sym, b.sym, a.parOff ^ b.parOff);
    }
    if (uf.contradiction) continue;
    // Component weights: COE components contribute d each; CSE components
    // contribute +-d for even size (parity sum), 0 for odd.
    std::map<int, std::pair<int, int>> comp;  // root -> (size, parity sum)
    bool zero = false;
    for (int sIdx = 0; sIdx < nSyms; ++sIdx) {
      auto [root, parity] = uf.find(sIdx);
      auto& c = comp[root];
      c.first++;
      if (cse) c.second ^= parity;
    }
    int weightSign = 1;
    int freeComponents = 0;
    for (const auto& [root, sp] : comp) {
      (void)root;
      if (cse) {
        if (sp.first % 2 != 0) {
          zero = true;
          break;
        }
        // n * sum over the free parity of (-1)^(...) = (+-) d
        if (sp.second % 2 != 0) weightSign = -weightSign;
      }
      freeComponents++;
    }
    if (zero) continue;

    BigInt c = weightSign * globalSign;
    DimPoly w = DimPoly::monomial(Scalar(Rat(c)), freeComponents);
    if (allSigma && opts.fastPaths) {
      tauPoly += w;
      continue;
    }
    Permutation ti = t.inverse();
    for (const Permutation& s : validSigma) coeffs[(s * ti).cycleType()] += w;
  }
  if (allSigma && opts.fastPaths) {
    setPath(enginePath, cse ? "cse-grouped-fast-path" : "coe-grouped-fast-path");
    for (const Partition& mu : partitionsOf(k))
      coeffs[mu] = tauPoly * Scalar(Rat(classSize(mu)));
  }
  return finishUnitary(sum);
}

}  // namespace

// ---------------------------------------------------------------------------

RationalFunction integrateUnitary(const Monomial& m, const MeasureSpec& spec,
                                  const EngineOptions& opts, std::string* enginePath) {
  checkSingleSymbol(m);
  checkIndices(m, spec);
  RationalFunction core =
      unitaryCore(unconjPairs(m), conjPairs(m), spec, opts, enginePath);
  return RationalFunction(m.coeff) * core;
}

RationalFunction integrateSU(const Monomial& m, const MeasureSpec& spec,
                             const EngineOptions& opts, std::string* enginePath) {
  // Balanced polynomials agree with the full unitary group; unbalanced ones
  // would need epsilon-tensor contractions and evaluate to zero here.
  if (unconjPairs(m).size() != conjPairs(m).size()) {
    setPath(enginePath, "su-unbalanced-zero");
    return RationalFunction::zero();
  }
  return integrateUnitary(m, spec, opts, enginePath);
}

RationalFunction integrateOrthogonal(const Monomial& m, const MeasureSpec& spec,
                                     const EngineOptions& opts, std::string* enginePath) {
  checkSingleSymbol(m);
  checkIndices(m, spec);
  std::vector<int> rows, cols;
  for (const auto& f : m.factors) {  // real entries: conjugation flags ignored
    rows.push_back(f.row);
    cols.push_back(f.col);
  }
  return RationalFunction(m.coeff) * orthogonalCore(rows, cols, spec, opts, enginePath);
}

RationalFunction integrateSymplectic(const Monomial& m, const MeasureSpec& spec,
                                     const EngineOptions& opts, std::string* enginePath) {
  checkSingleSymbol(m);
  checkIndices(m, spec);
  std::vector<SpSlot> rows, cols;
  int globalSign = 1;
  long half = spec.symbolicDim ? 0 : spec.dim / 2;
  for (const auto& f : m.factors) {
    if (!f.conj) {
      rows.push_back({f.row, 0});
      cols.push_back({f.col, 0});
      continue;
    }
    // Self-duality conj(S) = J^T S J:
    // conj(S_ij) = J(phi(i),i) J(phi(j),j) S_{phi(i) phi(j)}.
    if (spec.symbolicDim) {
      // Generic indices i,j <= d/2: both J factors are -1, net +1.
      rows.push_back({f.row, 1});
      cols.push_back({f.col, 1});
    } else {
      auto phi = [&](int x) {
        return x <= half ? x + static_cast<int>(half) : x - static_cast<int>(half);
      };
      globalSign *= (f.row <= half ? -1 : 1) * (f.col <= half ? -1 : 1);
      rows.push_back({phi(f.row), 0});
      cols.push_back({phi(f.col), 0});
    }
  }
  return RationalFunction(m.coeff) *
         symplecticCore(rows, cols, globalSign, spec, opts, enginePath);
}

RationalFunction integratePermutation(const Monomial& m, const MeasureSpec& spec,
                                      const EngineOptions& opts, std::string* enginePath) {
  (void)opts;
  checkSingleSymbol(m);
  checkIndices(m, spec);
  setPath(enginePath, "permutation-collapse");
  std::set<std::pair<int, int>> pairs;
  for (const auto& f : m.factors) pairs.emplace(f.row, f.col);
  std::set<int> rows, cols;
  for (const auto& [r, c] : pairs) {
    if (!rows.insert(r).second || !cols.insert(c).second)
      return RationalFunction(m.coeff) * RationalFunction::zero();
  }
  int k = static_cast<int>(pairs.size());
  if (k == 0) return RationalFunction(m.coeff);
  // (d-k)!/d! = 1/(d(d-1)...(d-k+1))
  if (spec.symbolicDim) {
    DimPoly den = DimPoly::one();
    for (int j = 0; j < k; ++j)
      den *= DimPoly(std::vector<Scalar>{Scalar(-j), Scalar(1)});
    return RationalFunction(m.coeff) * RationalFunction(DimPoly::one(), den);
  }
  Rat v = 1;
  for (int j = 0; j < k; ++j) v /= Rat(spec.dim - j);
  return RationalFunction(m.coeff) * RationalFunction(Scalar(v));
}

RationalFunction integrateCenteredPermutation(const Monomial& m, const MeasureSpec& spec,
                                              const EngineOptions& opts,
                                              std::string* enginePath) {
  checkSingleSymbol(m);
  checkIndices(m, spec);
  setPath(enginePath, "centered-permutation-binomial");
  // Y_ij = P_ij - 1/d: expand over subsets of factors kept as P entries.
  RationalFunction invd = spec.symbolicDim
                              ? RationalFunction::dimPower(-1)
                              : RationalFunction(Scalar(Rat(1, spec.dim)));
  std::size_t n = m.factors.size();
  if (n > 30) throw DegreeLimitError("centered permutation degree too large");
  RationalFunction acc;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    Monomial sub;
    sub.coeff = Scalar(1);
    int dropped = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (std::size_t{1} << i))
        sub.factors.push_back(m.factors[i]);
      else
        ++dropped;
    }
    RationalFunction term = integratePermutation(sub, spec, opts, nullptr);
    for (int i = 0; i < dropped; ++i) term *= -invd;
    acc += term;
  }
  return RationalFunction(m.coeff) * acc;
}

RationalFunction integrateDiagUnitary(const Monomial& m, const MeasureSpec& spec,
                                      const EngineOptions& opts, std::string* enginePath) {
  (void)opts;
  checkSingleSymbol(m);
  checkIndices(m, spec);
  setPath(enginePath, "diagonal-phase");
  std::multiset<int> plain, conj;
  for (const auto& f : m.factors) {
    if (f.row != f.col) return RationalFunction::zero();  // off-diagonal entry
    (f.conj ? conj : plain).insert(f.row);
  }
  // Independent phases: nonzero iff the phase exponents cancel entrywise.
  return plain == conj ? RationalFunction(m.coeff) : RationalFunction::zero();
}

RationalFunction integrateStiefel(const Monomial& m, const MeasureSpec& spec,
                                  const EngineOptions& opts, std::string* enginePath) {
  checkSingleSymbol(m);
  checkIndices(m, spec);
  int width = spec.family == Family::Psi ? 1 : spec.extra;
  for (const auto& f : m.factors)
    if (f.col > width)
      throw InvalidInputError("column index " + std::to_string(f.col) +
                              " exceeds the frame width " + std::to_string(width));
  // Entries of the first `width` columns of a Haar unitary.
  RationalFunction r = integrateUnitary(m, spec, opts, enginePath);
  if (enginePath) *enginePath = "stiefel->" + *enginePath;
  return r;
}

RationalFunction integrateGaussian(const Monomial& m, const MeasureSpec& spec,
                                   const EngineOptions& opts, std::string* enginePath) {
  checkSingleSymbol(m);
  checkIndices(m, spec);
  if (spec.family == Family::GSE)
    throw UnsupportedFormError(
        "entrywise GSE moments are defined only at the trace level; "
        "use a trace expression");
  setPath(enginePath, "wick");
  std::vector<std::pair<int, int>> f;
  for (const auto& x : m.factors) {
    if (spec.family == Family::GUE && x.conj)
      f.emplace_back(x.col, x.row);  // Hermitian: conj(H_ij) = H_ji
    else
      f.emplace_back(x.row, x.col);
  }
  if (f.size() % 2 != 0) return RationalFunction::zero();
  if (f.empty()) return RationalFunction(m.coeff);
  checkDegree(f.size(), opts);
  BigInt count = 0;
  for (const PairPartition& p : pairPartitions(static_cast<int>(f.size()))) {
    BigInt w = 1;
    for (const auto& [a, b] : p.pairs) {
      auto [i, j] = f[static_cast<std::size_t>(a)];
      auto [k, l] = f[static_cast<std::size_t>(b)];
      int v;
      if (spec.family == Family::GUE)
        v = (i == l && j == k) ? 1 : 0;
      else  // GOE: <H_ij H_kl> = delta_ik delta_jl + delta_il delta_jk
        v = ((i == k && j == l) ? 1 : 0) + ((i == l && j == k) ? 1 : 0);
      w *= v;
      if (w == 0) break;
    }
    count += w;
  }
  return RationalFunction(m.coeff) * RationalFunction(Scalar(Rat(count)));
}

RationalFunction integrateGinibre(const Monomial& m, const MeasureSpec& spec,
                                  const EngineOptions& opts, std::string* enginePath) {
  checkSingleSymbol(m);
  checkIndices(m, spec);
  if (spec.family == Family::GinSE)
    throw UnsupportedFormError(
        "entrywise GinSE moments are defined only at the trace level; "
        "use a trace expression");
  setPath(enginePath, "wick");
  if (m.factors.empty()) return RationalFunction(m.coeff);
  checkDegree(m.factors.size(), opts);
  BigInt count = 0;
  if (spec.family == Family::GinUE) {
    // Only G -- conj(G) contractions survive: <G_ij conj(G)_kl> = d_ik d_jl.
    std::vector<std::pair<int, int>> g, gb;
    for (const auto& x : m.factors) (x.conj ? gb : g).emplace_back(x.row, x.col);
    if (g.size() != gb.size()) return RationalFunction::zero();
    int k = static_cast<int>(g.size());
    for (const Permutation& s : allPermutations(k)) {
      BigInt w = 1;
      for (int i = 0; i < k; ++i) {
        const auto& [r1, c1] = g[static_cast<std::size_t>(i)];
        const auto& [r2, c2] = gb[static_cast<std::size_t>(s(i))];
        if (r1 != r2 || c1 != c2) {
          w = 0;
          break;
        }
      }
      count += w;
    }
  } else {  // GinOE, real entries as printed: <G_ij G_kl> = d_ik d_jl
    std::vector<std::pair<int, int>> f;
    for (const auto& x : m.factors) f.emplace_back(x.row, x.col);
    if (f.size() % 2 != 0) return RationalFunction::zero();
    for (const PairPartition& p : pairPartitions(static_cast<int>(f.size()))) {
      BigInt w = 1;
      for (const auto& [a, b] : p.pairs) {
        if (f[static_cast<std::size_t>(a)] != f[static_cast<std::size_t>(b)]) {
          w = 0;
          break;
        }
      }
      count += w;
    }
  }
  return RationalFunction(m.coeff) * RationalFunction(Scalar(Rat(count)));
}

RationalFunction integrateCircular(const Monomial& m, const MeasureSpec& spec,
                                   const EngineOptions& opts, std::string* enginePath) {
  checkSingleSymbol(m);
  checkIndices(m, spec);
  return RationalFunction(m.coeff) * circularCore(m, spec, opts, enginePath);
}

RationalFunction integrateDesign(const Monomial& m, const MeasureSpec& spec,
                                 const EngineOptions& opts, std::string* enginePath) {
  std::size_t nu = unconjPairs(m).size(), nc = conjPairs(m).size();
  if (nu != nc) {
    // Haar-correct value for unbalanced integrands.
    setPath(enginePath, "design-unbalanced-zero");
    return RationalFunction::zero();
  }
  if (static_cast<int>(nu) > spec.extra)
    throw DesignOrderError("balanced degree " + std::to_string(nu) +
                           " exceeds the design order t = " + std::to_string(spec.extra));
  RationalFunction r = integrateUnitary(m, spec, opts, enginePath);
  if (enginePath) *enginePath = "design->" + *enginePath;
  return r;
}

RationalFunction integrateMonomial(const Monomial& m, const MeasureSpec& spec,
                                   const EngineOptions& opts, std::string* enginePath) {
  if (m.coeff.isZero()) return RationalFunction::zero();
  switch (spec.family) {
    case Family::U:
    case Family::CUE:
      return integrateUnitary(m, spec, opts, enginePath);
    case Family::SU:
      return integrateSU(m, spec, opts, enginePath);
    case Family::O:
      return integrateOrthogonal(m, spec, opts, enginePath);
    case Family::Sp:
      return integrateSymplectic(m, spec, opts, enginePath);
    case Family::COE:
    case Family::CSE:
      return integrateCircular(m, spec, opts, enginePath);
    case Family::GUE:
    case Family::GOE:
    case Family::GSE:
      return integrateGaussian(m, spec, opts, enginePath);
    case Family::GinUE:
    case Family::GinOE:
    case Family::GinSE:
      return integrateGinibre(m, spec, opts, enginePath);
    case Family::Perm:
      return integratePermutation(m, spec, opts, enginePath);
    case Family::CPerm:
      return integrateCenteredPermutation(m, spec, opts, enginePath);
    case Family::DiagU:
      return integrateDiagUnitary(m, spec, opts, enginePath);
    case Family::Psi:
    case Family::Stiefel:
      return integrateStiefel(m, spec, opts, enginePath);
    case Family::Design:
      return integrateDesign(m, spec, opts, enginePath);
  }
  throw DispatchError("unhandled measure family");
}

}  // namespace haarint
