#include "haarint/combinatorics.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>

#include "haarint/errors.hpp"

namespace haarint {

namespace {
std::mutex g_comb_mutex;  // guards the memo tables below
}

Partition::Partition(std::vector<int> p) : parts(std::move(p)) {
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i] < 1) throw InvalidInputError("partition parts must be >= 1");
    if (i > 0 && parts[i] > parts[i - 1])
      throw InvalidInputError("partition parts must be weakly decreasing");
  }
}

int Partition::size() const { return std::accumulate(parts.begin(), parts.end(), 0); }

std::string Partition::str() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < parts.size(); ++i) os << (i ? "," : "") << parts[i];
  os << "]";
  return os.str();
}

namespace {

void genPartitions(int remaining, int maxPart, std::vector<int>& cur,
                   std::vector<Partition>& out) {
  if (remaining == 0) {
    out.push_back(Partition(cur));
    return;
  }
  for (int p = std::min(remaining, maxPart); p >= 1; --p) {
    cur.push_back(p);
    genPartitions(remaining - p, p, cur, out);
    cur.pop_back();
  }
}

}  // namespace

const std::vector<Partition>& partitionsOf(int k) {
  if (k < 0) throw InvalidInputError("partitions_of needs k >= 0");
  static std::map<int, std::vector<Partition>> cache;
  std::lock_guard lock(g_comb_mutex);
  auto it = cache.find(k);
  if (it != cache.end()) return it->second;
  std::vector<Partition> out;
  std::vector<int> cur;
  genPartitions(k, k == 0 ? 1 : k, cur, out);
  return cache.emplace(k, std::move(out)).first->second;
}

BigInt factorial(int n) {
  BigInt r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

BigInt doubleFactorialOdd(int twoK) {
  BigInt r = 1;
  for (int i = twoK - 1; i >= 1; i -= 2) r *= i;
  return r;
}

namespace {

// Hook lengths cell by cell; lambda' computed on the fly.
std::vector<std::pair<int, int>> hookAndContent(const Partition& lambda) {
  std::vector<std::pair<int, int>> cells;  // (hook, content)
  int rows = lambda.length();
  std::vector<int> colLen;
  if (rows > 0) {
    colLen.resize(static_cast<std::size_t>(lambda.parts[0]), 0);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < lambda.parts[static_cast<std::size_t>(i)]; ++j)
        colLen[static_cast<std::size_t>(j)]++;
  }
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < lambda.parts[static_cast<std::size_t>(i)]; ++j) {
      int hook = (lambda.parts[static_cast<std::size_t>(i)] - j) +
                 (colLen[static_cast<std::size_t>(j)] - i) - 1;
      cells.emplace_back(hook, j - i);
    }
  }
  return cells;
}

}  // namespace

BigInt irrepDimension(const Partition& lambda) {
  static std::map<Partition, BigInt> cache;
  {
    std::lock_guard lock(g_comb_mutex);
    auto it = cache.find(lambda);
    if (it != cache.end()) return it->second;
  }
  BigInt num = factorial(lambda.size());
  BigInt den = 1;
  for (const auto& [hook, content] : hookAndContent(lambda)) {
    (void)content;
    den *= hook;
  }
  BigInt f = num / den;
  std::lock_guard lock(g_comb_mutex);
  cache.emplace(lambda, f);
  return f;
}

DimPoly schurAtOnes(const Partition& lambda) {
  static std::map<Partition, DimPoly> cache;
  {
    std::lock_guard lock(g_comb_mutex);
    auto it = cache.find(lambda);
    if (it != cache.end()) return it->second;
  }
  DimPoly p = DimPoly::one();
  BigInt hooks = 1;
  for (const auto& [hook, content] : hookAndContent(lambda)) {
    p *= DimPoly(std::vector<Scalar>{Scalar(content), Scalar(1)});  // d + c
    hooks *= hook;
  }
  p = p * Scalar(Rat(BigInt(1), hooks));
  std::lock_guard lock(g_comb_mutex);
  cache.emplace(lambda, p);
  return p;
}

namespace {

// Beta-set (first-column hook length) form of the Murnaghan-Nakayama
// recursion: removing a border strip of length t maps some beta value
// b -> b - t, with sign (-1)^(number of beta values jumped over).
BigInt mnBeta(std::vector<int> beta, const std::vector<int>& mu, std::size_t idx);

std::map<std::pair<std::vector<int>, std::vector<int>>, BigInt> g_mn_cache;

BigInt mnBetaMemo(const std::vector<int>& beta, const std::vector<int>& mu, std::size_t idx) {
  std::vector<int> muRest(mu.begin() + static_cast<long>(idx), mu.end());
  std::pair<std::vector<int>, std::vector<int>> key(beta, muRest);
  {
    std::lock_guard lock(g_comb_mutex);
    auto it = g_mn_cache.find(key);
    if (it != g_mn_cache.end()) return it->second;
  }
  BigInt v = mnBeta(beta, mu, idx);
  std::lock_guard lock(g_comb_mutex);
  g_mn_cache.emplace(std::move(key), v);
  return v;
}

BigInt mnBeta(std::vector<int> beta, const std::vector<int>& mu, std::size_t idx) {
  if (idx == mu.size()) return 1;  // empty diagram, trivial character
  int t = mu[idx];
  BigInt acc = 0;
  std::set<int> present(beta.begin(), beta.end());
  for (std::size_t i = 0; i < beta.size(); ++i) {
    int b = beta[i];
    int nb = b - t;
    if (nb < 0 || present.count(nb)) continue;
    // Height change: count beta values strictly between nb and b.
    int jumped = 0;
    for (int x : beta)
      if (x > nb && x < b) ++jumped;
    std::vector<int> nbeta = beta;
    nbeta[i] = nb;
    std::sort(nbeta.begin(), nbeta.end(), std::greater<int>());
    // Strip trailing zeros pattern: normalize the beta set by removing a
    // full run 0,1,..,m-1 only when it encodes empty rows; easier to keep
    // beta length fixed since signs are computed from the set itself.
    BigInt sub = mnBetaMemo(nbeta, mu, idx + 1);
    if (jumped % 2)
      acc -= sub;
    else
      acc += sub;
  }
  return acc;
}

std::vector<int> betaSet(const Partition& lambda) {
  int l = lambda.length();
  std::vector<int> beta(static_cast<std::size_t>(l));
  for (int i = 0; i < l; ++i)
    beta[static_cast<std::size_t>(i)] = lambda.parts[static_cast<std::size_t>(i)] + (l - 1 - i);
  return beta;
}

}  // namespace

BigInt mnCharacter(const Partition& lambda, const Partition& mu) {
  if (lambda.size() != mu.size())
    throw InvalidInputError("character requires |lambda| = |mu|, got " + lambda.str() +
                            " vs " + mu.str());
  if (lambda.size() == 0) return 1;
  return mnBetaMemo(betaSet(lambda), mu.parts, 0);
}

BigInt classSize(const Partition& mu) {
  int k = mu.size();
  BigInt den = 1;
  int run = 0;
  for (std::size_t i = 0; i < mu.parts.size(); ++i) {
    run++;
    BigInt j = mu.parts[i];
    den *= j;
    if (i + 1 == mu.parts.size() || mu.parts[i + 1] != mu.parts[i]) {
      den *= factorial(run);
      run = 0;
    }
  }
  return factorial(k) / den;
}

Permutation::Permutation(std::vector<int> images) : img(std::move(images)) {}

Permutation Permutation::identity(int k) {
  std::vector<int> v(static_cast<std::size_t>(k));
  std::iota(v.begin(), v.end(), 0);
  return Permutation(std::move(v));
}

Permutation Permutation::fromOneLine(const std::vector<int>& oneBased) {
  int k = static_cast<int>(oneBased.size());
  std::vector<bool> seen(static_cast<std::size_t>(k), false);
  std::vector<int> v(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    int x = oneBased[static_cast<std::size_t>(i)];
    if (x < 1 || x > k || seen[static_cast<std::size_t>(x - 1)])
      throw InvalidInputError("not a bijection of {1..k}");
    seen[static_cast<std::size_t>(x - 1)] = true;
    v[static_cast<std::size_t>(i)] = x - 1;
  }
  return Permutation(std::move(v));
}

Permutation Permutation::inverse() const {
  std::vector<int> v(img.size());
  for (std::size_t i = 0; i < img.size(); ++i)
    v[static_cast<std::size_t>(img[i])] = static_cast<int>(i);
  return Permutation(std::move(v));
}

Permutation operator*(const Permutation& a, const Permutation& b) {
  std::vector<int> v(a.img.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = a.img[static_cast<std::size_t>(b.img[i])];
  return Permutation(std::move(v));
}

Partition Permutation::cycleType() const {
  std::vector<bool> seen(img.size(), false);
  std::vector<int> lens;
  for (std::size_t i = 0; i < img.size(); ++i) {
    if (seen[i]) continue;
    int len = 0;
    std::size_t j = i;
    while (!seen[j]) {
      seen[j] = true;
      j = static_cast<std::size_t>(img[j]);
      ++len;
    }
    lens.push_back(len);
  }
  std::sort(lens.begin(), lens.end(), std::greater<int>());
  return Partition(std::move(lens));
}

const std::vector<Permutation>& allPermutations(int k) {
  static std::map<int, std::vector<Permutation>> cache;
  std::lock_guard lock(g_comb_mutex);
  auto it = cache.find(k);
  if (it != cache.end()) return it->second;
  std::vector<Permutation> out;
  std::vector<int> v(static_cast<std::size_t>(k));
  std::iota(v.begin(), v.end(), 0);
  do {
    out.push_back(Permutation(v));
  } while (std::next_permutation(v.begin(), v.end()));
  return cache.emplace(k, std::move(out)).first->second;
}

PairPartition::PairPartition(std::vector<std::pair<int, int>> p) : pairs(std::move(p)) {
  for (auto& [a, b] : pairs)
    if (a > b) std::swap(a, b);
  std::sort(pairs.begin(), pairs.end());
  std::vector<bool> seen(static_cast<std::size_t>(groundSize()), false);
  for (const auto& [a, b] : pairs) {
    if (a < 0 || b >= groundSize() || a == b || seen[static_cast<std::size_t>(a)] ||
        seen[static_cast<std::size_t>(b)])
      throw InvalidInputError("not a pair partition of {1..2k}");
    seen[static_cast<std::size_t>(a)] = seen[static_cast<std::size_t>(b)] = true;
  }
}

int PairPartition::partner(int x) const {
  for (const auto& [a, b] : pairs) {
    if (a == x) return b;
    if (b == x) return a;
  }
  throw InvalidInputError("element outside the pairing ground set");
}

std::string PairPartition::str() const {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < pairs.size(); ++i)
    os << (i ? "," : "") << "(" << pairs[i].first + 1 << "," << pairs[i].second + 1 << ")";
  os << "}";
  return os.str();
}

PairPartition basePairing(int twoK) {
  std::vector<std::pair<int, int>> p;
  for (int i = 0; i < twoK; i += 2) p.emplace_back(i, i + 1);
  return PairPartition(std::move(p));
}

namespace {

void genPairings(std::vector<int>& free, std::vector<std::pair<int, int>>& cur,
                 std::vector<PairPartition>& out) {
  if (free.empty()) {
    out.push_back(PairPartition(cur));
    return;
  }
  int a = free.front();
  for (std::size_t i = 1; i < free.size(); ++i) {
    int b = free[i];
    std::vector<int> rest;
    for (std::size_t j = 1; j < free.size(); ++j)
      if (j != i) rest.push_back(free[j]);
    cur.emplace_back(a, b);
    genPairings(rest, cur, out);
    cur.pop_back();
  }
}

}  // namespace

const std::vector<PairPartition>& pairPartitions(int twoK) {
  if (twoK < 0 || twoK % 2 != 0)
    throw InvalidInputError("pair partitions need an even nonnegative ground size");
  static std::map<int, std::vector<PairPartition>> cache;
  std::lock_guard lock(g_comb_mutex);
  auto it = cache.find(twoK);
  if (it != cache.end()) return it->second;
  std::vector<PairPartition> out;
  std::vector<int> free(static_cast<std::size_t>(twoK));
  std::iota(free.begin(), free.end(), 0);
  std::vector<std::pair<int, int>> cur;
  genPairings(free, cur, out);
  return cache.emplace(twoK, std::move(out)).first->second;
}

namespace {

void checkSameGround(const PairPartition& p, const PairPartition& q) {
  if (p.groundSize() != q.groundSize())
    throw InvalidInputError("pair partitions over different ground sets");
}

}  // namespace

int loops(const PairPartition& p, const PairPartition& q) {
  return loopType(p, q).length();
}

Partition loopType(const PairPartition& p, const PairPartition& q) {
  checkSameGround(p, q);
  int n = p.groundSize();
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  std::vector<int> halves;
  for (int s = 0; s < n; ++s) {
    if (seen[static_cast<std::size_t>(s)]) continue;
    int len = 0;
    int x = s;
    bool useP = true;
    do {
      seen[static_cast<std::size_t>(x)] = true;
      x = useP ? p.partner(x) : q.partner(x);
      seen[static_cast<std::size_t>(x)] = true;
      useP = !useP;
      ++len;
    } while (x != s);
    halves.push_back(len / 2);
  }
  std::sort(halves.begin(), halves.end(), std::greater<int>());
  return Partition(std::move(halves));
}

int symplecticGramSign(const PairPartition& p, const PairPartition& q) {
  checkSameGround(p, q);
  int n = p.groundSize();
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  int sign = 1;
  for (int s = 0; s < n; ++s) {
    if (seen[static_cast<std::size_t>(s)]) continue;
    int edges = 0;
    int reversed = 0;
    int x = s;
    bool useP = true;
    do {
      seen[static_cast<std::size_t>(x)] = true;
      const PairPartition& part = useP ? p : q;
      int y = part.partner(x);
      // Edge (min,max) is oriented min -> max; traversing max -> min is a
      // transposed J in the chain.
      if (x > y) ++reversed;
      seen[static_cast<std::size_t>(y)] = true;
      x = y;
      useP = !useP;
      ++edges;
    } while (x != s);
    int halfLen = edges / 2;
    if ((halfLen + reversed) % 2) sign = -sign;
  }
  return sign;
}

}  // namespace haarint
