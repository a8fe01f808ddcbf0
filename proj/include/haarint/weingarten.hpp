#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <shared_mutex>

#include "haarint/combinatorics.hpp"
#include "haarint/rational_function.hpp"

namespace haarint {

/// Memo store for characters-free reuse of Weingarten data.  Keys are
/// (family, degree, cycle/loop type, dimension mode); values are canonical
/// rational functions (symbolic mode) or exact scalars (concrete mode).
/// Readers are concurrent; duplicate computation of a key is allowed and
/// harmless since canonical values are identical.
class WeingartenCache {
 public:
  static WeingartenCache& instance();

  void clear();
  std::uint64_t hits() const { return hits_.load(); }
  void resetHits() { hits_.store(0); }

  RationalFunction unitarySymbolic(const Partition& mu);
  Rat unitaryConcrete(const Partition& mu, long n);

  /// Whole solved loop-type system for degree k (symbolic dimension).
  std::map<Partition, RationalFunction> orthogonalSymbolic(int k);
  /// Same at a concrete dimension; n may be negative (symplectic reuse).
  std::map<Partition, Rat> orthogonalConcrete(int k, long n);

 private:
  WeingartenCache() = default;

  mutable std::shared_mutex mutex_;
  std::atomic<std::uint64_t> hits_{0};
  std::map<Partition, RationalFunction> uSym_;
  std::map<std::pair<Partition, long>, Rat> uCon_;
  std::map<int, std::map<Partition, RationalFunction>> oSym_;
  std::map<std::pair<int, long>, std::map<Partition, Rat>> oCon_;
};

/// Wg^U of a cycle type, symbolic dimension: the character sum
/// (1/(k!)^2) sum over lambda of (f^lambda)^2 chi_lambda(mu) / s_lambda(1^d).
RationalFunction wgUnitary(const Partition& mu);

/// Wg^U at a concrete dimension n >= 1.  The sum restricts to partitions
/// with at most n rows (the Gram pseudo-inverse below the stable range).
Rat wgUnitary(const Partition& mu, long n);

/// Wg^O(p, q, d): the (p,q) entry of the inverse of the Gram matrix
/// d^loops(p,q), a function of the loop type only.  Solved once per degree
/// through the reduced loop-type system and cached.
RationalFunction wgOrthogonal(const PairPartition& p, const PairPartition& q);
Rat wgOrthogonal(const PairPartition& p, const PairPartition& q, long n);
RationalFunction wgOrthogonalType(const Partition& type);
Rat wgOrthogonalType(const Partition& type, long n);

/// Wg^Sp(p, q, d) = (-1)^loops(p,q) * Wg^O(p, q, -d).
RationalFunction wgSymplectic(const PairPartition& p, const PairPartition& q);
Rat wgSymplectic(const PairPartition& p, const PairPartition& q, long n);
RationalFunction wgSymplecticType(const Partition& type);
Rat wgSymplecticType(const Partition& type, long n);

inline void cacheClear() { WeingartenCache::instance().clear(); }

}  // namespace haarint
