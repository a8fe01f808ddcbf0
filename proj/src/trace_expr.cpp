#include "haarint/trace_expr.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "haarint/errors.hpp"

namespace haarint {

std::string WordAtom::str() const {
  std::string s = name;
  if (conj && transp) return s + "'";
  if (transp) return "transp(" + s + ")";
  if (conj) return "conj(" + s + ")";
  return s;
}

void TraceWord::canonicalize() {
  if (atoms.empty()) return;
  auto rotations = [](const std::vector<WordAtom>& w) {
    std::vector<std::vector<WordAtom>> out;
    std::size_t n = w.size();
    for (std::size_t r = 0; r < n; ++r) {
      std::vector<WordAtom> rot;
      rot.reserve(n);
      for (std::size_t i = 0; i < n; ++i) rot.push_back(w[(r + i) % n]);
      out.push_back(std::move(rot));
    }
    return out;
  };
  std::vector<WordAtom> reversedT;
  for (auto it = atoms.rbegin(); it != atoms.rend(); ++it) {
    WordAtom a = *it;
    a.transp = !a.transp;
    reversedT.push_back(std::move(a));
  }
  std::vector<WordAtom> best = atoms;
  for (auto& cand : rotations(atoms))
    if (cand < best) best = cand;
  for (auto& cand : rotations(reversedT))
    if (cand < best) best = cand;
  atoms = std::move(best);
}

std::string TraceWord::str() const {
  std::ostringstream os;
  os << "tr(";
  for (std::size_t i = 0; i < atoms.size(); ++i) os << (i ? "*" : "") << atoms[i].str();
  os << ")";
  return os.str();
}

void TraceTerm::sortWords() { std::sort(words.begin(), words.end()); }

std::string TraceTerm::str() const {
  std::ostringstream os;
  bool one = coeff == RationalFunction::one();
  bool minusOne = coeff == -RationalFunction::one();
  if (words.empty() || (!one && !minusOne)) {
    os << "(" << coeff.str() << ")";
    for (const auto& w : words) os << "*" << w.str();
    return os.str();
  }
  if (minusOne) os << "-";
  for (std::size_t i = 0; i < words.size(); ++i) os << (i ? "*" : "") << words[i].str();
  return os.str();
}

TraceExpr TraceExpr::single(TraceTerm t) {
  TraceExpr e;
  e.addTerm(std::move(t));
  e.normalize();
  return e;
}

void TraceExpr::addTerm(TraceTerm t) {
  t.sortWords();
  terms.push_back(std::move(t));
}

void TraceExpr::normalize() {
  std::map<std::vector<TraceWord>, RationalFunction> merged;
  for (auto& t : terms) {
    t.sortWords();
    auto it = merged.find(t.words);
    if (it == merged.end())
      merged.emplace(t.words, t.coeff);
    else
      it->second += t.coeff;
  }
  terms.clear();
  for (auto& [words, coeff] : merged) {
    if (coeff.isZero()) continue;
    TraceTerm t;
    t.coeff = coeff;
    t.words = words;
    terms.push_back(std::move(t));
  }
}

bool TraceExpr::isScalar() const {
  for (const auto& t : terms)
    if (!t.words.empty()) return false;
  return true;
}

RationalFunction TraceExpr::scalarValue() const {
  RationalFunction acc;
  for (const auto& t : terms) {
    if (!t.words.empty())
      throw InvalidInputError("trace expression is not a plain scalar: " + str());
    acc += t.coeff;
  }
  return acc;
}

TraceExpr TraceExpr::operator+(const TraceExpr& o) const {
  TraceExpr e = *this;
  for (const auto& t : o.terms) e.terms.push_back(t);
  e.normalize();
  return e;
}

TraceExpr TraceExpr::operator*(const RationalFunction& c) const {
  TraceExpr e = *this;
  for (auto& t : e.terms) t.coeff *= c;
  e.normalize();
  return e;
}

bool operator==(const TraceExpr& a, const TraceExpr& b) {
  TraceExpr x = a, y = b;
  x.normalize();
  y.normalize();
  if (x.terms.size() != y.terms.size()) return false;
  for (std::size_t i = 0; i < x.terms.size(); ++i) {
    if (!(x.terms[i].words == y.terms[i].words)) return false;
    if (x.terms[i].coeff != y.terms[i].coeff) return false;
  }
  return true;
}

std::string TraceExpr::str() const {
  if (terms.empty()) return "0";
  std::ostringstream os;
  for (std::size_t i = 0; i < terms.size(); ++i) os << (i ? " + " : "") << terms[i].str();
  return os.str();
}

}  // namespace haarint
