#pragma once

#include <string>
#include <utility>
#include <vector>

#include "haarint/polynomial.hpp"

namespace haarint {

/// Integer partition: weakly decreasing positive parts.  Doubles as the
/// cycle type of a permutation and the loop type of a pairing union.
struct Partition {
  std::vector<int> parts;

  Partition() = default;
  explicit Partition(std::vector<int> p);

  int size() const;                 // sum of parts
  int length() const { return static_cast<int>(parts.size()); }
  bool empty() const { return parts.empty(); }

  friend bool operator==(const Partition& a, const Partition& b) { return a.parts == b.parts; }
  friend bool operator!=(const Partition& a, const Partition& b) { return !(a == b); }
  friend bool operator<(const Partition& a, const Partition& b) { return a.parts < b.parts; }

  std::string str() const;  // "[2,1]"
};

/// All partitions of k in reverse-lexicographic order ([k] first, [1..1] last).
const std::vector<Partition>& partitionsOf(int k);

/// Dimension f^lambda of the S_k irreducible: k! / product of hook lengths.
BigInt irrepDimension(const Partition& lambda);

/// Schur polynomial at d ones via the hook-content product:
/// prod over cells (d + j - i) / hook(i,j).
DimPoly schurAtOnes(const Partition& lambda);

/// Murnaghan-Nakayama character chi_lambda(mu), border strips removed
/// largest part of mu first.  Memoized.
BigInt mnCharacter(const Partition& lambda, const Partition& mu);

/// Conjugacy class size of cycle type mu in S_k: k! / prod(m_j! * j^m_j).
BigInt classSize(const Partition& mu);

BigInt factorial(int n);
BigInt doubleFactorialOdd(int twoKMinus1);  // (2k-1)!! from 2k

/// Permutation of {0..k-1} in one-line notation (images).
struct Permutation {
  std::vector<int> img;

  Permutation() = default;
  explicit Permutation(std::vector<int> images);
  static Permutation identity(int k);
  /// From 1-based one-line notation on {1..k}, validated as a bijection.
  static Permutation fromOneLine(const std::vector<int>& oneBased);

  int size() const { return static_cast<int>(img.size()); }
  int operator()(int i) const { return img[static_cast<std::size_t>(i)]; }

  Permutation inverse() const;
  /// (a * b)(i) = a(b(i)).
  friend Permutation operator*(const Permutation& a, const Permutation& b);

  Partition cycleType() const;
  int cycleCount() const { return cycleType().length(); }

  friend bool operator==(const Permutation& a, const Permutation& b) { return a.img == b.img; }
};

/// All k! permutations of {0..k-1}, lexicographic.
const std::vector<Permutation>& allPermutations(int k);

/// Perfect matching of {0..2k-1}: pairs with a < b, sorted by first element.
struct PairPartition {
  std::vector<std::pair<int, int>> pairs;

  PairPartition() = default;
  explicit PairPartition(std::vector<std::pair<int, int>> p);

  int groundSize() const { return 2 * static_cast<int>(pairs.size()); }
  /// Partner of element x.
  int partner(int x) const;

  friend bool operator==(const PairPartition& a, const PairPartition& b) {
    return a.pairs == b.pairs;
  }
  friend bool operator<(const PairPartition& a, const PairPartition& b) {
    return a.pairs < b.pairs;
  }

  std::string str() const;  // 1-based, "{(1,2),(3,4)}"
};

/// The base pairing {(0,1),(2,3),...}.
PairPartition basePairing(int twoK);

/// All (2k-1)!! canonical pairings of {0..2k-1}, deterministic order.
const std::vector<PairPartition>& pairPartitions(int twoK);

/// Number of connected cycles in the multigraph union of p and q.
int loops(const PairPartition& p, const PairPartition& q);

/// Half-lengths of the union cycles as a partition of k; the class invariant
/// of the pair (loops = its length).
Partition loopType(const PairPartition& p, const PairPartition& q);

/// Sign of the J-contraction around the union cycles: per cycle of
/// half-length m traversed with r edges against their (a < b) orientation the
/// closed chain of J factors contributes (-1)^(m + r) * d, because J^T = -J
/// and J^2 = -I.  Product over cycles.
int symplecticGramSign(const PairPartition& p, const PairPartition& q);

}  // namespace haarint
