#include "haarint/weingarten.hpp"

#include <mutex>

#include "haarint/bareiss.hpp"
#include "haarint/errors.hpp"

namespace haarint {

WeingartenCache& WeingartenCache::instance() {
  static WeingartenCache cache;
  return cache;
}

void WeingartenCache::clear() {
  std::unique_lock lock(mutex_);
  uSym_.clear();
  uCon_.clear();
  oSym_.clear();
  oCon_.clear();
}

namespace {

RationalFunction computeUnitarySymbolic(const Partition& mu) {
  int k = mu.size();
  BigInt kfact = factorial(k);
  RationalFunction acc;
  for (const Partition& lambda : partitionsOf(k)) {
    BigInt f = irrepDimension(lambda);
    BigInt chi = mnCharacter(lambda, mu);
    if (chi == 0) continue;
    Rat coeff(f * f * chi, kfact * kfact);
    acc += RationalFunction(DimPoly(Scalar(coeff)), schurAtOnes(lambda));
  }
  return acc;
}

Rat computeUnitaryConcrete(const Partition& mu, long n) {
  if (n < 1) throw DimensionError("unitary Weingarten needs dimension >= 1");
  int k = mu.size();
  BigInt kfact = factorial(k);
  Rat acc = 0;
  for (const Partition& lambda : partitionsOf(k)) {
    if (lambda.length() > n) continue;
    BigInt f = irrepDimension(lambda);
    BigInt chi = mnCharacter(lambda, mu);
    if (chi == 0) continue;
    Scalar s = schurAtOnes(lambda).eval(Scalar(Rat(n)));
    acc += Rat(f * f * chi, kfact * kfact) / s.re;
  }
  return acc;
}

// Representative pairing r with loopType(basePairing, r) = nu: each part of
// size m contributes one cycle through a block of 2m consecutive elements.
PairPartition loopTypeRepresentative(const Partition& nu) {
  std::vector<std::pair<int, int>> pairs;
  int off = 0;
  for (int m : nu.parts) {
    for (int i = 0; i < m - 1; ++i) pairs.emplace_back(off + 2 * i + 1, off + 2 * i + 2);
    pairs.emplace_back(off + 2 * m - 1, off);
    off += 2 * m;
  }
  return PairPartition(std::move(pairs));
}

// Reduced loop-type system for Wg^O at degree k: with p0 the base pairing
// and r_nu representatives, the row of the inverse-Gram identity reads
//   sum over q of d^loops(p0,q) * w(loopType(q, r_nu)) = [nu == 1^k].
// One equation per type nu, one unknown per type mu.
std::map<Partition, RationalFunction> solveOrthogonalSymbolic(int k) {
  const auto& types = partitionsOf(k);
  int m = static_cast<int>(types.size());
  PairPartition p0 = basePairing(2 * k);
  PolyMatrix A(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) A(i, j) = DimPoly();
  PolyVector rhs(m);
  for (int i = 0; i < m; ++i) rhs(i) = DimPoly();
  std::map<Partition, int> index;
  for (int i = 0; i < m; ++i) index[types[static_cast<std::size_t>(i)]] = i;

  for (int i = 0; i < m; ++i) {
    PairPartition r = loopTypeRepresentative(types[static_cast<std::size_t>(i)]);
    for (const PairPartition& q : pairPartitions(2 * k)) {
      int e = loops(p0, q);
      int j = index.at(loopType(q, r));
      A(i, j) += DimPoly::monomial(Scalar(1), e);
    }
    if (types[static_cast<std::size_t>(i)].parts == std::vector<int>(static_cast<std::size_t>(k), 1))
      rhs(i) = DimPoly::one();
  }
  RatFuncVector w = bareissSolve(A, rhs);
  std::map<Partition, RationalFunction> out;
  for (int j = 0; j < m; ++j) out[types[static_cast<std::size_t>(j)]] = w(j);
  return out;
}

std::map<Partition, Rat> solveOrthogonalConcrete(int k, long n) {
  if (n == 0) throw DimensionError("orthogonal Weingarten undefined at dimension 0");
  const auto& types = partitionsOf(k);
  int m = static_cast<int>(types.size());
  PairPartition p0 = basePairing(2 * k);
  PolyMatrix A(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) A(i, j) = DimPoly();
  PolyVector rhs(m);
  for (int i = 0; i < m; ++i) rhs(i) = DimPoly();
  std::map<Partition, int> index;
  for (int i = 0; i < m; ++i) index[types[static_cast<std::size_t>(i)]] = i;

  for (int i = 0; i < m; ++i) {
    PairPartition r = loopTypeRepresentative(types[static_cast<std::size_t>(i)]);
    for (const PairPartition& q : pairPartitions(2 * k)) {
      Rat p = 1;
      for (int e = loops(p0, q); e > 0; --e) p *= n;
      int j = index.at(loopType(q, r));
      A(i, j) += DimPoly(Scalar(p));
    }
    if (types[static_cast<std::size_t>(i)].parts == std::vector<int>(static_cast<std::size_t>(k), 1))
      rhs(i) = DimPoly::one();
  }
  RatFuncVector w;
  try {
    w = bareissSolve(A, rhs);
  } catch (const SingularSystemError&) {
    throw DimensionError("orthogonal Weingarten system singular at dimension " +
                         std::to_string(n));
  }
  std::map<Partition, Rat> out;
  for (int j = 0; j < m; ++j) {
    Scalar v = w(j).constantValue();
    out[types[static_cast<std::size_t>(j)]] = v.re;
  }
  return out;
}

}  // namespace

RationalFunction WeingartenCache::unitarySymbolic(const Partition& mu) {
  {
    std::shared_lock lock(mutex_);
    auto it = uSym_.find(mu);
    if (it != uSym_.end()) {
      hits_++;
      return it->second;
    }
  }
  RationalFunction v = computeUnitarySymbolic(mu);
  std::unique_lock lock(mutex_);
  uSym_.emplace(mu, v);
  return v;
}

Rat WeingartenCache::unitaryConcrete(const Partition& mu, long n) {
  std::pair<Partition, long> key(mu, n);
  {
    std::shared_lock lock(mutex_);
    auto it = uCon_.find(key);
    if (it != uCon_.end()) {
      hits_++;
      return it->second;
    }
  }
  Rat v = computeUnitaryConcrete(mu, n);
  std::unique_lock lock(mutex_);
  uCon_.emplace(std::move(key), v);
  return v;
}

std::map<Partition, RationalFunction> WeingartenCache::orthogonalSymbolic(int k) {
  {
    std::shared_lock lock(mutex_);
    auto it = oSym_.find(k);
    if (it != oSym_.end()) {
      hits_++;
      return it->second;
    }
  }
  auto v = solveOrthogonalSymbolic(k);
  std::unique_lock lock(mutex_);
  oSym_.emplace(k, v);
  return v;
}

std::map<Partition, Rat> WeingartenCache::orthogonalConcrete(int k, long n) {
  std::pair<int, long> key(k, n);
  {
    std::shared_lock lock(mutex_);
    auto it = oCon_.find(key);
    if (it != oCon_.end()) {
      hits_++;
      return it->second;
    }
  }
  auto v = solveOrthogonalConcrete(k, n);
  std::unique_lock lock(mutex_);
  oCon_.emplace(std::move(key), v);
  return v;
}

RationalFunction wgUnitary(const Partition& mu) {
  if (mu.size() < 1) throw InvalidInputError("Weingarten degree must be >= 1");
  return WeingartenCache::instance().unitarySymbolic(mu);
}

Rat wgUnitary(const Partition& mu, long n) {
  if (mu.size() < 1) throw InvalidInputError("Weingarten degree must be >= 1");
  return WeingartenCache::instance().unitaryConcrete(mu, n);
}

RationalFunction wgOrthogonalType(const Partition& type) {
  return WeingartenCache::instance().orthogonalSymbolic(type.size()).at(type);
}

Rat wgOrthogonalType(const Partition& type, long n) {
  return WeingartenCache::instance().orthogonalConcrete(type.size(), n).at(type);
}

RationalFunction wgOrthogonal(const PairPartition& p, const PairPartition& q) {
  return wgOrthogonalType(loopType(p, q));
}

Rat wgOrthogonal(const PairPartition& p, const PairPartition& q, long n) {
  return wgOrthogonalType(loopType(p, q), n);
}

RationalFunction wgSymplecticType(const Partition& type) {
  RationalFunction o = wgOrthogonalType(type).substNegate();
  return (type.length() % 2) ? -o : o;
}

Rat wgSymplecticType(const Partition& type, long n) {
  if (n % 2 != 0)
    throw DimensionError("symplectic dimension must be even, got " + std::to_string(n));
  Rat o = wgOrthogonalType(type, -n);
  return (type.length() % 2) ? Rat(-o) : o;
}

RationalFunction wgSymplectic(const PairPartition& p, const PairPartition& q) {
  return wgSymplecticType(loopType(p, q));
}

Rat wgSymplectic(const PairPartition& p, const PairPartition& q, long n) {
  return wgSymplecticType(loopType(p, q), n);
}

}  // namespace haarint
