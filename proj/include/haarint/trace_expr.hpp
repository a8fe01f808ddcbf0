#pragma once

#include <string>
#include <vector>

#include "haarint/rational_function.hpp"

namespace haarint {

/// One occurrence inside a trace word: a named operator, possibly
/// conjugated and/or transposed.  (conj && transp) is the adjoint.
struct WordAtom {
  std::string name;
  bool conj = false;
  bool transp = false;

  friend bool operator==(const WordAtom& a, const WordAtom& b) {
    return a.name == b.name && a.conj == b.conj && a.transp == b.transp;
  }
  friend bool operator<(const WordAtom& a, const WordAtom& b) {
    if (a.name != b.name) return a.name < b.name;
    if (a.conj != b.conj) return a.conj < b.conj;
    return a.transp < b.transp;
  }
  std::string str() const;
};

/// Cyclic word under a trace.  Canonical form: the lexicographically least
/// sequence over all rotations and over rotations of the reversed-transposed
/// word (tr W = tr W^T).
struct TraceWord {
  std::vector<WordAtom> atoms;

  TraceWord() = default;
  explicit TraceWord(std::vector<WordAtom> a) : atoms(std::move(a)) { canonicalize(); }

  void canonicalize();

  friend bool operator==(const TraceWord& a, const TraceWord& b) { return a.atoms == b.atoms; }
  friend bool operator<(const TraceWord& a, const TraceWord& b) { return a.atoms < b.atoms; }

  std::string str() const;
};

/// coefficient (rational in d) times a multiset of trace atoms.
struct TraceTerm {
  RationalFunction coeff = RationalFunction::one();
  std::vector<TraceWord> words;  // kept sorted

  void sortWords();
  std::string str() const;
};

/// Sum of products of traces of matrix words: the coordinate-free currency
/// of the graph engine.
struct TraceExpr {
  std::vector<TraceTerm> terms;

  static TraceExpr zero() { return {}; }
  static TraceExpr single(TraceTerm t);

  void addTerm(TraceTerm t);
  /// Merge equal word-multisets, drop zero coefficients, sort terms.
  void normalize();

  bool isZero() const { return terms.empty(); }
  /// True when no term carries a trace atom (pure rational value).
  bool isScalar() const;
  RationalFunction scalarValue() const;

  TraceExpr operator+(const TraceExpr& o) const;
  TraceExpr operator*(const RationalFunction& c) const;

  friend bool operator==(const TraceExpr& a, const TraceExpr& b);

  std::string str() const;
};

}  // namespace haarint
