#include "haarint/trace_engine.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "haarint/weingarten.hpp"

namespace haarint {

// ---------------------------------------------------------------------------
// SymbolicValue

void SymbolicValue::add(RationalFunction coeff, std::vector<MonomialFactor> consts) {
  if (coeff.isZero()) return;
  std::sort(consts.begin(), consts.end());
  terms.push_back({std::move(coeff), std::move(consts)});
  normalize();
}

void SymbolicValue::normalize() {
  std::map<std::vector<MonomialFactor>, RationalFunction> merged;
  for (auto& t : terms) {
    std::sort(t.consts.begin(), t.consts.end());
    auto it = merged.find(t.consts);
    if (it == merged.end())
      merged.emplace(t.consts, t.coeff);
    else
      it->second += t.coeff;
  }
  terms.clear();
  for (auto& [c, r] : merged) {
    if (r.isZero()) continue;
    terms.push_back({r, c});
  }
}

bool SymbolicValue::isRational() const {
  for (const auto& t : terms)
    if (!t.consts.empty()) return false;
  return true;
}

RationalFunction SymbolicValue::rationalValue() const {
  RationalFunction acc;
  for (const auto& t : terms) {
    if (!t.consts.empty())
      throw InvalidInputError("symbolic value still references constant entries: " + str());
    acc += t.coeff;
  }
  return acc;
}

SymbolicValue SymbolicValue::operator+(const SymbolicValue& o) const {
  SymbolicValue v = *this;
  for (const auto& t : o.terms) v.terms.push_back(t);
  v.normalize();
  return v;
}

bool operator==(const SymbolicValue& a, const SymbolicValue& b) {
  SymbolicValue x = a, y = b;
  x.normalize();
  y.normalize();
  if (x.terms.size() != y.terms.size()) return false;
  for (std::size_t i = 0; i < x.terms.size(); ++i) {
    if (!(x.terms[i].consts == y.terms[i].consts)) return false;
    if (x.terms[i].coeff != y.terms[i].coeff) return false;
  }
  return true;
}

std::string SymbolicValue::str() const {
  if (terms.empty()) return "0";
  std::string s;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (i) s += " + ";
    if (terms[i].consts.empty()) {
      s += terms[i].coeff.str();
      continue;
    }
    s += "(" + terms[i].coeff.str() + ")";
    for (const auto& f : terms[i].consts) s += "*" + f.str();
  }
  return s;
}

// ---------------------------------------------------------------------------
// Random-symbol inference and expression -> trace conversion

std::vector<std::string> conventionalSymbols(Family f) {
  switch (f) {
    case Family::U:
    case Family::SU:
    case Family::CUE:
    case Family::Design:
      return {"U", "u"};
    case Family::Stiefel:
      return {"V", "U"};
    case Family::Psi:
      return {"psi", "Psi"};
    case Family::O:
      return {"O"};
    case Family::Sp:
      return {"Sp", "S"};
    case Family::COE:
    case Family::CSE:
      return {"S"};
    case Family::GUE:
    case Family::GOE:
    case Family::GSE:
      return {"H"};
    case Family::GinUE:
    case Family::GinOE:
    case Family::GinSE:
      return {"G"};
    case Family::Perm:
      return {"P"};
    case Family::CPerm:
      return {"Y"};
    case Family::DiagU:
      return {"D"};
  }
  return {};
}

namespace {

void collectSymbols(const Expr& e, std::set<std::string>& out) {
  if (e.kind() == Expr::Kind::Symbol || e.kind() == Expr::Kind::Entry)
    out.insert(e.node().name);
  for (const Expr& k : e.kids()) collectSymbols(k, out);
}

}  // namespace

std::string inferRandomSymbol(const Expr& normalized, const MeasureSpec& spec) {
  std::set<std::string> syms;
  collectSymbols(normalized, syms);
  if (spec.symbolicDim) syms.erase(spec.dimSymbol);
  if (syms.empty()) throw DispatchError("expression references no matrix symbol");
  if (syms.size() == 1) {
    if (spec.symbolicDim && *syms.begin() == spec.dimSymbol)
      throw DispatchError("matrix symbol collides with the dimension symbol '" +
                          spec.dimSymbol + "'");
    return *syms.begin();
  }
  for (const std::string& c : conventionalSymbols(spec.family))
    if (syms.count(c)) return c;
  throw DispatchError(
      "cannot identify the random matrix among several symbols; use the "
      "conventional name for " +
      familyName(spec.family));
}

namespace {

// A matrix atom inside a trace word: Symbol with optional Conj/Adjoint marks.
std::optional<WordAtom> wordAtomOf(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Symbol:
      return WordAtom{e.node().name, false, false};
    case Expr::Kind::Adjoint: {
      const Expr& k = e.kids()[0];
      if (k.kind() == Expr::Kind::Symbol) return WordAtom{k.node().name, true, true};
      return std::nullopt;
    }
    case Expr::Kind::Conj: {
      const Expr& k = e.kids()[0];
      if (k.kind() == Expr::Kind::Symbol) return WordAtom{k.node().name, true, false};
      if (k.kind() == Expr::Kind::Adjoint &&
          k.kids()[0].kind() == Expr::Kind::Symbol)
        return WordAtom{k.kids()[0].node().name, false, true};  // conj of adjoint = transpose
      return std::nullopt;
    }
    default:
      return std::nullopt;
  }
}

void collectWordAtoms(const Expr& e, std::vector<WordAtom>& atoms) {
  if (e.kind() == Expr::Kind::Product) {
    for (const Expr& f : e.kids()) collectWordAtoms(f, atoms);
    return;
  }
  if (e.kind() == Expr::Kind::Power) {
    if (e.node().exponent < 1)
      throw UnsupportedFormError("unsupported factor inside tr(): " + e.str());
    std::vector<WordAtom> base;
    collectWordAtoms(e.kids()[0], base);
    for (long i = 0; i < e.node().exponent; ++i)
      atoms.insert(atoms.end(), base.begin(), base.end());
    return;
  }
  auto a = wordAtomOf(e);
  if (!a) throw UnsupportedFormError("unsupported factor inside tr(): " + e.str());
  atoms.push_back(*a);
}

TraceWord traceWordOf(const Expr& inner) {
  std::vector<WordAtom> atoms;
  collectWordAtoms(inner, atoms);
  return TraceWord(std::move(atoms));
}

}  // namespace

namespace {

void collectTraceFactors(const Expr& f, TraceTerm& term, long mult) {
  switch (f.kind()) {
    case Expr::Kind::ScalarLit: {
      RationalFunction c(f.node().scalar);
      for (long i = 0; i < mult; ++i) term.coeff *= c;
      return;
    }
    case Expr::Kind::Tr: {
      TraceWord w = traceWordOf(f.kids()[0]);
      for (long i = 0; i < mult; ++i) term.words.push_back(w);
      return;
    }
    case Expr::Kind::Product:
      for (const Expr& k : f.kids()) collectTraceFactors(k, term, mult);
      return;
    case Expr::Kind::Power: {
      long e = f.node().exponent;
      if (e < 0) throw UnsupportedFormError("negative power of a trace product");
      collectTraceFactors(f.kids()[0], term, mult * e);
      return;
    }
    default:
      throw UnsupportedFormError(
          "trace expressions cannot mix entry factors with traces: " + f.str());
  }
}

}  // namespace

TraceExpr exprToTrace(const Expr& normalized, const std::string& randomSym) {
  (void)randomSym;
  TraceExpr out;
  std::vector<Expr> summands;
  if (normalized.kind() == Expr::Kind::Sum)
    summands = normalized.kids();
  else
    summands.push_back(normalized);
  for (const Expr& s : summands) {
    TraceTerm term;
    collectTraceFactors(s, term, 1);
    out.addTerm(std::move(term));
  }
  out.normalize();
  return out;
}

// ---------------------------------------------------------------------------
// Contraction graph

namespace {

struct Occurrence {
  bool conjugated;  // underlying symbol carries a bar
  bool transposed;  // port roles swapped
  int inPort;
  int outPort;
  int rowPort() const { return transposed ? outPort : inPort; }
  int colPort() const { return transposed ? inPort : outPort; }
};

struct Chain {
  std::vector<WordAtom> atoms;
  int fromPort;
  int toPort;
};

// The wiring of one trace term: occurrences of the random symbol with their
// ports, constant chains between them, and the constant-only traces that
// pass through untouched.
struct ContractionGraph {
  std::vector<Occurrence> occ;
  std::vector<Chain> chains;
  std::vector<TraceWord> constWords;
  int nPorts = 0;

  int newPort() { return nPorts++; }
};

ContractionGraph buildGraph(const TraceTerm& term, const std::string& sym) {
  ContractionGraph g;
  for (const TraceWord& w : term.words) {
    std::vector<int> occIdx;
    for (std::size_t i = 0; i < w.atoms.size(); ++i)
      if (w.atoms[i].name == sym) occIdx.push_back(static_cast<int>(i));
    if (occIdx.empty()) {
      g.constWords.push_back(w);
      continue;
    }
    int base = static_cast<int>(g.occ.size());
    for (int idx : occIdx) {
      const WordAtom& a = w.atoms[static_cast<std::size_t>(idx)];
      Occurrence o;
      o.conjugated = a.conj;
      o.transposed = a.transp;
      o.inPort = g.newPort();
      o.outPort = g.newPort();
      g.occ.push_back(o);
    }
    int m = static_cast<int>(occIdx.size());
    int n = static_cast<int>(w.atoms.size());
    for (int t = 0; t < m; ++t) {
      // Constant run between occurrence t and the next one, cyclically.
      Chain c;
      c.fromPort = g.occ[static_cast<std::size_t>(base + t)].outPort;
      c.toPort = g.occ[static_cast<std::size_t>(base + (t + 1) % m)].inPort;
      int start = occIdx[static_cast<std::size_t>(t)] + 1;
      int stop = occIdx[static_cast<std::size_t>((t + 1) % m)];
      for (int i = start; i % n != stop % n; ++i) c.atoms.push_back(w.atoms[static_cast<std::size_t>(i % n)]);
      g.chains.push_back(std::move(c));
    }
  }
  return g;
}

// Traverses the cycles formed by chains plus the port links; returns the
// product of the resulting trace atoms and the free-cycle d-power.
// linkAtom, when set, supplies an atom inserted while crossing a link
// (the symplectic J).
struct CycleResult {
  int dExponent = 0;
  int sign = 1;
  bool zero = false;
  std::vector<TraceWord> words;
};

// Reduce J runs inside a cyclic word: J^T = -J, then JJ = -I.
void simplifyJ(std::vector<WordAtom>& atoms, int& sign) {
  for (auto& a : atoms) {
    if (a.name == "J") {
      if (a.transp) {
        sign = -sign;
        a.transp = false;
      }
      a.conj = false;  // J is real
    }
  }
  bool changed = true;
  while (changed && atoms.size() >= 2) {
    changed = false;
    std::size_t n = atoms.size();
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t j = (i + 1) % n;
      if (atoms[i].name == "J" && !atoms[i].transp && atoms[j].name == "J" &&
          !atoms[j].transp) {
        if (j > i) {
          atoms.erase(atoms.begin() + static_cast<long>(j));
          atoms.erase(atoms.begin() + static_cast<long>(i));
        } else {
          atoms.erase(atoms.begin() + static_cast<long>(i));
          atoms.erase(atoms.begin());
        }
        sign = -sign;
        changed = true;
        break;
      }
    }
  }
}

CycleResult traverseCycles(
    const ContractionGraph& g, const std::vector<int>& link,
    const std::map<std::pair<int, int>, WordAtom>* linkAtoms = nullptr) {
  CycleResult res;
  // Map each port to its chain and end role.
  std::vector<std::pair<int, bool>> chainAt(static_cast<std::size_t>(g.nPorts),
                                            {-1, false});  // (chain index, isFrom)
  for (std::size_t c = 0; c < g.chains.size(); ++c) {
    chainAt[static_cast<std::size_t>(g.chains[c].fromPort)] = {static_cast<int>(c), true};
    chainAt[static_cast<std::size_t>(g.chains[c].toPort)] = {static_cast<int>(c), false};
  }
  std::vector<bool> visited(g.chains.size(), false);
  for (std::size_t c0 = 0; c0 < g.chains.size(); ++c0) {
    if (visited[c0]) continue;
    std::vector<WordAtom> cycle;
    int c = static_cast<int>(c0);
    bool forward = true;
    while (true) {
      visited[static_cast<std::size_t>(c)] = true;
      const Chain& ch = g.chains[static_cast<std::size_t>(c)];
      if (forward) {
        for (const auto& a : ch.atoms) cycle.push_back(a);
      } else {
        for (auto it = ch.atoms.rbegin(); it != ch.atoms.rend(); ++it) {
          WordAtom a = *it;
          a.transp = !a.transp;
          cycle.push_back(a);
        }
      }
      int endPort = forward ? ch.toPort : ch.fromPort;
      int lp = link[static_cast<std::size_t>(endPort)];
      if (linkAtoms) {
        auto it = linkAtoms->find({endPort, lp});
        if (it != linkAtoms->end()) cycle.push_back(it->second);
      }
      auto [nc, isFrom] = chainAt[static_cast<std::size_t>(lp)];
      if (nc == static_cast<int>(c0) && isFrom) break;
      c = nc;
      forward = isFrom;
    }
    int sign = 1;
    simplifyJ(cycle, sign);
    res.sign *= sign;
    if (cycle.empty()) {
      res.dExponent++;
    } else if (cycle.size() == 1 && cycle[0].name == "J") {
      res.zero = true;  // tr(J) = 0
      return res;
    } else {
      res.words.push_back(TraceWord(std::move(cycle)));
    }
  }
  return res;
}

RationalFunction dPower(const MeasureSpec& spec, int e) {
  if (spec.symbolicDim) return RationalFunction::dimPower(e);
  Rat v = 1;
  for (int i = 0; i < e; ++i) v *= spec.dim;
  return RationalFunction(Scalar(v));
}

// ---------------------------------------------------------------------------
// Unitary-family graph integration of one term.

TraceExpr unitaryGraphTerm(const TraceTerm& term, const std::string& sym,
                           const MeasureSpec& spec, const EngineOptions& opts) {
  ContractionGraph g = buildGraph(term, sym);
  std::vector<int> uOcc, ubarOcc;
  for (std::size_t i = 0; i < g.occ.size(); ++i)
    (g.occ[i].conjugated ? ubarOcc : uOcc).push_back(static_cast<int>(i));
  TraceExpr out;
  if (uOcc.size() != ubarOcc.size()) return out;  // unbalanced: vanishes
  int k = static_cast<int>(uOcc.size());
  if (k == 0) {
    TraceTerm t;
    t.coeff = term.coeff;
    t.words = g.constWords;
    out.addTerm(std::move(t));
    out.normalize();
    return out;
  }
  if (2 * k > opts.maxDegree)
    throw DegreeLimitError("trace degree " + std::to_string(2 * k) +
                           " exceeds the engine guard 2k <= " + std::to_string(opts.maxDegree));

  std::vector<int> link(static_cast<std::size_t>(g.nPorts), -1);
  for (const Permutation& s : allPermutations(k)) {
    for (const Permutation& t : allPermutations(k)) {
      for (int i = 0; i < k; ++i) {
        int u = uOcc[static_cast<std::size_t>(i)];
        int vs = ubarOcc[static_cast<std::size_t>(s(i))];
        int vt = ubarOcc[static_cast<std::size_t>(t(i))];
        int a = g.occ[static_cast<std::size_t>(u)].rowPort();
        int b = g.occ[static_cast<std::size_t>(vs)].rowPort();
        link[static_cast<std::size_t>(a)] = b;
        link[static_cast<std::size_t>(b)] = a;
        a = g.occ[static_cast<std::size_t>(u)].colPort();
        b = g.occ[static_cast<std::size_t>(vt)].colPort();
        link[static_cast<std::size_t>(a)] = b;
        link[static_cast<std::size_t>(b)] = a;
      }
      CycleResult cyc = traverseCycles(g, link);
      if (cyc.zero) continue;
      Partition mu = (s * t.inverse()).cycleType();
      RationalFunction wg = spec.symbolicDim
                                ? wgUnitary(mu)
                                : RationalFunction(Scalar(wgUnitary(mu, spec.dim)));
      TraceTerm o;
      o.coeff = term.coeff * wg * dPower(spec, cyc.dExponent) *
                RationalFunction(Scalar(cyc.sign));
      o.words = cyc.words;
      for (const auto& w : g.constWords) o.words.push_back(w);
      out.addTerm(std::move(o));
    }
  }
  out.normalize();
  return out;
}

// Orthogonal: pairings of row ports and of column ports.
TraceExpr orthogonalGraphTerm(const TraceTerm& term, const std::string& sym,
                              const MeasureSpec& spec, const EngineOptions& opts) {
  ContractionGraph g = buildGraph(term, sym);
  int m = static_cast<int>(g.occ.size());
  TraceExpr out;
  if (m == 0) {
    TraceTerm t;
    t.coeff = term.coeff;
    t.words = g.constWords;
    out.addTerm(std::move(t));
    out.normalize();
    return out;
  }
  if (m % 2 != 0) return out;  // odd moments vanish
  if (m > opts.maxDegree)
    throw DegreeLimitError("trace degree " + std::to_string(m) +
                           " exceeds the engine guard 2k <= " + std::to_string(opts.maxDegree));

  std::vector<int> link(static_cast<std::size_t>(g.nPorts), -1);
  for (const PairPartition& p : pairPartitions(m)) {
    for (const PairPartition& q : pairPartitions(m)) {
      for (const auto& [a, b] : p.pairs) {
        int pa = g.occ[static_cast<std::size_t>(a)].rowPort();
        int pb = g.occ[static_cast<std::size_t>(b)].rowPort();
        link[static_cast<std::size_t>(pa)] = pb;
        link[static_cast<std::size_t>(pb)] = pa;
      }
      for (const auto& [a, b] : q.pairs) {
        int pa = g.occ[static_cast<std::size_t>(a)].colPort();
        int pb = g.occ[static_cast<std::size_t>(b)].colPort();
        link[static_cast<std::size_t>(pa)] = pb;
        link[static_cast<std::size_t>(pb)] = pa;
      }
      CycleResult cyc = traverseCycles(g, link);
      if (cyc.zero) continue;
      Partition mu = loopType(p, q);
      RationalFunction wg = spec.symbolicDim
                                ? wgOrthogonalType(mu)
                                : RationalFunction(Scalar(wgOrthogonalType(mu, spec.dim)));
      TraceTerm o;
      o.coeff = term.coeff * wg * dPower(spec, cyc.dExponent) *
                RationalFunction(Scalar(cyc.sign));
      o.words = cyc.words;
      for (const auto& w : g.constWords) o.words.push_back(w);
      out.addTerm(std::move(o));
    }
  }
  out.normalize();
  return out;
}

// Symplectic: conjugated occurrences are first rewritten through the
// self-duality conj(S) = J^T S J, then pairings act with J insertions and
// the orientation-cocycle kernel sign.
TraceExpr symplecticGraphTerm(const TraceTerm& term, const std::string& sym,
                              const MeasureSpec& spec, const EngineOptions& opts) {
  TraceTerm rewritten;
  rewritten.coeff = term.coeff;
  for (const TraceWord& w : term.words) {
    std::vector<WordAtom> atoms;
    for (const WordAtom& a : w.atoms) {
      if (a.name == sym && a.conj) {
        // conj(S) = J^T S J; adjoint adds the transpose on top.
        atoms.push_back({"J", false, true});
        atoms.push_back({sym, false, a.transp});
        atoms.push_back({"J", false, false});
      } else {
        atoms.push_back(a);
      }
    }
    rewritten.words.push_back(TraceWord(std::move(atoms)));
  }

  ContractionGraph g = buildGraph(rewritten, sym);
  int m = static_cast<int>(g.occ.size());
  TraceExpr out;
  if (m == 0) {
    TraceTerm t;
    t.coeff = rewritten.coeff;
    t.words = g.constWords;
    out.addTerm(std::move(t));
    out.normalize();
    return out;
  }
  if (m % 2 != 0) return out;
  if (m > opts.maxDegree)
    throw DegreeLimitError("trace degree " + std::to_string(m) +
                           " exceeds the engine guard 2k <= " + std::to_string(opts.maxDegree));

  std::vector<int> link(static_cast<std::size_t>(g.nPorts), -1);
  std::map<std::pair<int, int>, WordAtom> linkAtoms;
  for (const PairPartition& p : pairPartitions(m)) {
    for (const PairPartition& q : pairPartitions(m)) {
      linkAtoms.clear();
      for (const auto& [a, b] : p.pairs) {
        int pa = g.occ[static_cast<std::size_t>(a)].rowPort();
        int pb = g.occ[static_cast<std::size_t>(b)].rowPort();
        link[static_cast<std::size_t>(pa)] = pb;
        link[static_cast<std::size_t>(pb)] = pa;
        linkAtoms[{pa, pb}] = WordAtom{"J", false, false};
        linkAtoms[{pb, pa}] = WordAtom{"J", false, true};
      }
      for (const auto& [a, b] : q.pairs) {
        int pa = g.occ[static_cast<std::size_t>(a)].colPort();
        int pb = g.occ[static_cast<std::size_t>(b)].colPort();
        link[static_cast<std::size_t>(pa)] = pb;
        link[static_cast<std::size_t>(pb)] = pa;
        linkAtoms[{pa, pb}] = WordAtom{"J", false, false};
        linkAtoms[{pb, pa}] = WordAtom{"J", false, true};
      }
      CycleResult cyc = traverseCycles(g, link, &linkAtoms);
      if (cyc.zero) continue;
      Partition mu = loopType(p, q);
      int eps = symplecticGramSign(p, q);
      RationalFunction wg = spec.symbolicDim
                                ? wgSymplecticType(mu)
                                : RationalFunction(Scalar(wgSymplecticType(mu, spec.dim)));
      TraceTerm o;
      o.coeff = rewritten.coeff * wg * dPower(spec, cyc.dExponent) *
                RationalFunction(Scalar(cyc.sign * eps));
      o.words = cyc.words;
      for (const auto& w : g.constWords) o.words.push_back(w);
      out.addTerm(std::move(o));
    }
  }
  out.normalize();
  return out;
}

// Wick engines for Gaussian and Ginibre families.
TraceExpr wickGraphTerm(const TraceTerm& term, const std::string& sym,
                        const MeasureSpec& spec, const EngineOptions& opts) {
  Family f = spec.family;
  // Hermitian/real symmetry folds conj into transposition (GUE) or drops the
  // flags entirely (GOE, GinOE).
  TraceTerm folded;
  folded.coeff = term.coeff;
  for (const TraceWord& w : term.words) {
    std::vector<WordAtom> atoms;
    for (WordAtom a : w.atoms) {
      if (a.name == sym) {
        if (f == Family::GUE) {
          a.transp = a.conj != a.transp;
          a.conj = false;
        } else if (f == Family::GOE || f == Family::GinOE) {
          a.conj = false;
          if (f == Family::GOE) a.transp = false;  // symmetric
        }
      }
      atoms.push_back(a);
    }
    folded.words.push_back(TraceWord(std::move(atoms)));
  }

  ContractionGraph g = buildGraph(folded, sym);
  int m = static_cast<int>(g.occ.size());
  TraceExpr out;
  if (m == 0) {
    TraceTerm t;
    t.coeff = folded.coeff;
    t.words = g.constWords;
    out.addTerm(std::move(t));
    out.normalize();
    return out;
  }
  if (m % 2 != 0) return out;
  if (m > opts.maxDegree)
    throw DegreeLimitError("trace degree " + std::to_string(m) +
                           " exceeds the engine guard 2k <= " + std::to_string(opts.maxDegree));

  std::vector<int> link(static_cast<std::size_t>(g.nPorts), -1);
  auto emit = [&](int dExp, int sign) {
    CycleResult cyc = traverseCycles(g, link);
    if (cyc.zero) return;
    TraceTerm o;
    o.coeff = folded.coeff * dPower(spec, cyc.dExponent + dExp) *
              RationalFunction(Scalar(sign * cyc.sign));
    o.words = cyc.words;
    for (const auto& w : g.constWords) o.words.push_back(w);
    out.addTerm(std::move(o));
  };

  auto linkDirect = [&](int u, int v) {  // <X_ij X_kl> = d_ik d_jl
    int a = g.occ[static_cast<std::size_t>(u)].rowPort();
    int b = g.occ[static_cast<std::size_t>(v)].rowPort();
    link[static_cast<std::size_t>(a)] = b;
    link[static_cast<std::size_t>(b)] = a;
    a = g.occ[static_cast<std::size_t>(u)].colPort();
    b = g.occ[static_cast<std::size_t>(v)].colPort();
    link[static_cast<std::size_t>(a)] = b;
    link[static_cast<std::size_t>(b)] = a;
  };
  auto linkExchange = [&](int u, int v) {  // <X_ij X_kl> = d_il d_jk
    int a = g.occ[static_cast<std::size_t>(u)].rowPort();
    int b = g.occ[static_cast<std::size_t>(v)].colPort();
    link[static_cast<std::size_t>(a)] = b;
    link[static_cast<std::size_t>(b)] = a;
    a = g.occ[static_cast<std::size_t>(u)].colPort();
    b = g.occ[static_cast<std::size_t>(v)].rowPort();
    link[static_cast<std::size_t>(a)] = b;
    link[static_cast<std::size_t>(b)] = a;
  };

  if (f == Family::GUE) {
    for (const PairPartition& p : pairPartitions(m)) {
      for (const auto& [a, b] : p.pairs) linkExchange(a, b);
      emit(0, 1);
    }
  } else if (f == Family::GOE) {
    for (const PairPartition& p : pairPartitions(m)) {
      int nPairs = static_cast<int>(p.pairs.size());
      for (int mask = 0; mask < (1 << nPairs); ++mask) {
        for (int i = 0; i < nPairs; ++i) {
          const auto& [a, b] = p.pairs[static_cast<std::size_t>(i)];
          if (mask & (1 << i))
            linkExchange(a, b);
          else
            linkDirect(a, b);
        }
        emit(0, 1);
      }
    }
  } else if (f == Family::GinUE) {
    std::vector<int> gs, gbars;
    for (int i = 0; i < m; ++i)
      (g.occ[static_cast<std::size_t>(i)].conjugated ? gbars : gs).push_back(i);
    if (gs.size() != gbars.size()) return out;  // only G -- conj(G) contractions
    int k = static_cast<int>(gs.size());
    for (const Permutation& s : allPermutations(k)) {
      for (int i = 0; i < k; ++i)
        linkDirect(gs[static_cast<std::size_t>(i)], gbars[static_cast<std::size_t>(s(i))]);
      emit(0, 1);
    }
  } else if (f == Family::GinOE) {
    for (const PairPartition& p : pairPartitions(m)) {
      for (const auto& [a, b] : p.pairs) linkDirect(a, b);
      emit(0, 1);
    }
  }
  out.normalize();
  return out;
}

// GSE / GinSE trace moments come from the even-moment duality with the
// real ensemble at dimension -d.
TraceExpr quaternionDualTerm(const TraceTerm& term, const std::string& sym,
                             const MeasureSpec& spec, const EngineOptions& opts) {
  int m = 0;
  for (const TraceWord& w : term.words)
    for (const WordAtom& a : w.atoms)
      if (a.name == sym) {
        if (spec.family == Family::GSE && a.conj != a.transp)
          throw UnsupportedFormError(
              "GSE supports Hermitian atoms only (plain H or its adjoint)");
        ++m;
      }
  if (m == 0) return TraceExpr::single(term);  // constant term passes through
  if (m % 2 != 0) return TraceExpr::zero();
  if (spec.family == Family::GSE) {
    for (const TraceWord& w : term.words)
      for (const WordAtom& a : w.atoms)
        if (a.name != sym)
          throw UnsupportedFormError(
              "GSE trace moments support pure powers of the matrix only");
  }
  MeasureSpec dual = spec;
  dual.family = spec.family == Family::GSE ? Family::GOE : Family::GinOE;
  dual.symbolicDim = true;  // expand symbolically, then substitute -d
  TraceExpr base = spec.family == Family::GSE || spec.family == Family::GinSE
                       ? wickGraphTerm(term, sym, dual, opts)
                       : TraceExpr::zero();
  // sign (-1)^(m/2 + 1), dimension negated
  int half = m / 2;
  int sign = (half + 1) % 2 == 0 ? 1 : -1;
  TraceExpr out;
  for (TraceTerm t : base.terms) {
    t.coeff = t.coeff.substNegate() * RationalFunction(Scalar(sign));
    if (!spec.symbolicDim) {
      Scalar v = t.coeff.evalAt(Rat(spec.dim));
      t.coeff = RationalFunction(v);
    }
    out.addTerm(std::move(t));
  }
  out.normalize();
  return out;
}

// Identifies the measure's random symbol inside a trace expression, or ""
// when no atoms are present.
std::string traceSymbolFor(const TraceExpr& t, const MeasureSpec& spec) {
  std::set<std::string> syms;
  for (const auto& term : t.terms)
    for (const auto& w : term.words)
      for (const auto& a : w.atoms) syms.insert(a.name);
  if (syms.empty()) return "";
  for (const std::string& c : conventionalSymbols(spec.family))
    if (syms.count(c)) return c;
  if (syms.size() == 1) return *syms.begin();
  throw DispatchError(
      "cannot identify the random matrix inside the trace expression; use "
      "the conventional symbol for " +
      familyName(spec.family));
}

bool isPurePowerOfTrU(const TraceTerm& term, const std::string& sym, int& kOut) {
  int plain = 0, conj = 0;
  for (const TraceWord& w : term.words) {
    if (w.atoms.size() != 1 || w.atoms[0].name != sym) return false;
    (w.atoms[0].conj ? conj : plain)++;
  }
  if (plain != conj) return false;
  kOut = plain;
  return plain > 0;
}

}  // namespace

BigInt pureTraceMoment(int k, long n) {
  if (k < 0) throw InvalidInputError("trace moment order must be >= 0");
  if (k == 0) return 1;
  BigInt acc = 0;
  for (const Partition& lambda : partitionsOf(k)) {
    if (lambda.length() > n) continue;
    BigInt f = irrepDimension(lambda);
    acc += f * f;
  }
  return acc;
}

std::optional<TraceExpr> libraryLookup(const TraceExpr& t, const MeasureSpec& spec) {
  bool unitaryFamily = spec.family == Family::U || spec.family == Family::SU ||
                       spec.family == Family::CUE || spec.family == Family::Design;
  if (!unitaryFamily) return std::nullopt;
  std::string sym = traceSymbolFor(t, spec);
  if (sym.empty()) return std::nullopt;
  TraceExpr out;
  for (const TraceTerm& term : t.terms) {
    bool hasRandom = false;
    for (const auto& w : term.words)
      for (const auto& a : w.atoms) hasRandom = hasRandom || a.name == sym;
    if (!hasRandom) {
      out.addTerm(term);
      continue;
    }
    if (term.words.size() != 1) return std::nullopt;
    const auto& atoms = term.words[0].atoms;
    // tr(U A U' B): one plain U, one adjoint U, two constant runs between
    // them.  tr(U A U'): same with one empty run.
    std::vector<int> uPos, plainPos;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      if (atoms[i].name != sym) continue;
      if (atoms[i].conj && atoms[i].transp)
        uPos.push_back(static_cast<int>(i));
      else if (!atoms[i].conj && !atoms[i].transp)
        plainPos.push_back(static_cast<int>(i));
      else
        return std::nullopt;
    }
    if (uPos.size() != 1) return std::nullopt;
    if (plainPos.size() != 1) return std::nullopt;
    int n = static_cast<int>(atoms.size());
    int pu = plainPos[0], pv = uPos[0];
    std::vector<WordAtom> segA, segB;  // U [segA] U' [segB] cyclically
    for (int i = (pu + 1) % n; i != pv; i = (i + 1) % n) {
      const auto& a = atoms[static_cast<std::size_t>(i)];
      if (a.name == sym) return std::nullopt;
      segA.push_back(a);
    }
    for (int i = (pv + 1) % n; i != pu; i = (i + 1) % n) {
      const auto& a = atoms[static_cast<std::size_t>(i)];
      if (a.name == sym) return std::nullopt;
      segB.push_back(a);
    }
    if (segA.empty() && segB.empty()) return std::nullopt;  // |tr U|-type, not registered
    RationalFunction invd = spec.symbolicDim
                                ? RationalFunction::dimPower(-1)
                                : RationalFunction(Scalar(Rat(1, spec.dim)));
    TraceTerm o;
    if (segA.empty() || segB.empty()) {
      // E[tr(U A U')] = tr(A)
      o.coeff = term.coeff;
      o.words.push_back(TraceWord(segA.empty() ? segB : segA));
    } else {
      // E[tr(U A U' B)] = tr(A) tr(B) / d
      o.coeff = term.coeff * invd;
      o.words.push_back(TraceWord(segA));
      o.words.push_back(TraceWord(segB));
    }
    out.addTerm(std::move(o));
  }
  out.normalize();
  return out;
}

TraceExpr traceIntegrate(const TraceExpr& t, const MeasureSpec& spec,
                         const EngineOptions& opts, std::string* enginePath) {
  std::string sym = traceSymbolFor(t, spec);
  if (sym.empty()) {
    if (enginePath) *enginePath = "trace-constant";
    return t;
  }

  switch (spec.family) {
    case Family::U:
    case Family::SU:
    case Family::CUE:
    case Family::Design: {
      if (opts.fastPaths) {
        auto lib = libraryLookup(t, spec);
        if (lib) {
          if (enginePath) *enginePath = "library-lookup";
          // Design order still applies: patterns are degree 1.
          if (spec.family == Family::Design && spec.extra < 1)
            throw DesignOrderError("design order must be >= 1");
          return *lib;
        }
      }
      if (enginePath) *enginePath = "trace-graph-weingarten";
      TraceExpr out;
      for (const TraceTerm& term : t.terms) {
        int kU = 0, kUbar = 0;
        for (const auto& w : term.words)
          for (const auto& a : w.atoms)
            if (a.name == sym) (a.conj ? kUbar : kU)++;
        if (spec.family == Family::Design && kU == kUbar && kU > spec.extra)
          throw DesignOrderError("balanced degree " + std::to_string(kU) +
                                 " exceeds the design order t = " +
                                 std::to_string(spec.extra));
        if (kU != kUbar) continue;  // unbalanced vanishes (SU: documented scope)
        int kk = 0;
        if (isPurePowerOfTrU(term, sym, kk)) {
          // |tr U|^(2k) is a step function of the dimension, not a rational
          // function; it needs a concrete integer.
          if (spec.symbolicDim)
            throw NotRationalError(
                "pure trace moments depend on the dimension as a step function; "
                "use a concrete integer dimension");
          if (opts.fastPaths) {
            if (enginePath) *enginePath = "pure-trace-moment";
            TraceTerm o;
            o.coeff = term.coeff *
                      RationalFunction(Scalar(Rat(pureTraceMoment(kk, spec.dim))));
            out.addTerm(std::move(o));
            continue;
          }
        }
        TraceExpr sub = unitaryGraphTerm(term, sym, spec, opts);
        for (auto& x : sub.terms) out.addTerm(std::move(x));
      }
      out.normalize();
      return out;
    }
    case Family::O: {
      if (enginePath) *enginePath = "trace-graph-orthogonal";
      TraceExpr out;
      for (const TraceTerm& term : t.terms) {
        TraceExpr sub = orthogonalGraphTerm(term, sym, spec, opts);
        for (auto& x : sub.terms) out.addTerm(std::move(x));
      }
      out.normalize();
      return out;
    }
    case Family::Sp: {
      if (enginePath) *enginePath = "trace-graph-symplectic";
      TraceExpr out;
      for (const TraceTerm& term : t.terms) {
        TraceExpr sub = symplecticGraphTerm(term, sym, spec, opts);
        for (auto& x : sub.terms) out.addTerm(std::move(x));
      }
      out.normalize();
      return out;
    }
    case Family::GUE:
    case Family::GOE:
    case Family::GinUE:
    case Family::GinOE: {
      if (enginePath) *enginePath = "trace-wick";
      TraceExpr out;
      for (const TraceTerm& term : t.terms) {
        TraceExpr sub = wickGraphTerm(term, sym, spec, opts);
        for (auto& x : sub.terms) out.addTerm(std::move(x));
      }
      out.normalize();
      return out;
    }
    case Family::GSE:
    case Family::GinSE: {
      if (enginePath) *enginePath = "trace-wick-duality";
      TraceExpr out;
      for (const TraceTerm& term : t.terms) {
        TraceExpr sub = quaternionDualTerm(term, sym, spec, opts);
        for (auto& x : sub.terms) out.addTerm(std::move(x));
      }
      out.normalize();
      return out;
    }
    default:
      throw DispatchError("trace expressions are not supported over " +
                          familyName(spec.family));
  }
}

// ---------------------------------------------------------------------------
// Mixed random/constant scalar integration and matrix integration.

SymbolicValue integrateWithConstants(const Expr& normalized, const MeasureSpec& spec,
                                     const std::string& randomSym,
                                     const EngineOptions& opts, std::string* enginePath) {
  SymbolicValue out;
  for (const ExpandedTerm& term : expand(normalized)) {
    Monomial random;
    random.coeff = term.coeff;
    std::vector<MonomialFactor> consts;
    for (const auto& f : term.factors) {
      if (f.sym == randomSym)
        random.factors.push_back(f);
      else
        consts.push_back(f);
    }
    RationalFunction r = integrateMonomial(random, spec, opts, enginePath);
    out.add(std::move(r), std::move(consts));
  }
  out.normalize();
  return out;
}

ExprMatrix matrixExprEntries(const Expr& e, long n, const std::string& randomSym) {
  auto entryMatrix = [&](const std::string& name, bool conj, bool transp) {
    ExprMatrix M(n, n);
    for (long i = 0; i < n; ++i)
      for (long j = 0; j < n; ++j) {
        int r = static_cast<int>(transp ? j : i) + 1;
        int c = static_cast<int>(transp ? i : j) + 1;
        M(i, j) = Expr::entry(name, r, c, conj);
      }
    return M;
  };
  auto mul = [&](const ExprMatrix& A, const ExprMatrix& B) {
    ExprMatrix C(n, n);
    for (long i = 0; i < n; ++i)
      for (long j = 0; j < n; ++j) {
        std::vector<Expr> terms;
        for (long k = 0; k < n; ++k) terms.push_back(A(i, k) * B(k, j));
        C(i, j) = Expr::sum(std::move(terms));
      }
    return C;
  };
  (void)randomSym;

  switch (e.kind()) {
    case Expr::Kind::Symbol:
      return entryMatrix(e.node().name, false, false);
    case Expr::Kind::Adjoint:
      if (e.kids()[0].kind() == Expr::Kind::Symbol)
        return entryMatrix(e.kids()[0].node().name, true, true);
      break;
    case Expr::Kind::Conj:
      if (e.kids()[0].kind() == Expr::Kind::Symbol)
        return entryMatrix(e.kids()[0].node().name, true, false);
      if (e.kids()[0].kind() == Expr::Kind::Adjoint &&
          e.kids()[0].kids()[0].kind() == Expr::Kind::Symbol)
        return entryMatrix(e.kids()[0].kids()[0].node().name, false, true);
      break;
    case Expr::Kind::Product: {
      ExprMatrix acc;
      bool first = true;
      Expr scalar = Expr::integer(1);
      for (const Expr& k : e.kids()) {
        if (k.kind() == Expr::Kind::ScalarLit) {
          scalar = scalar * k;
          continue;
        }
        ExprMatrix M = matrixExprEntries(k, n, randomSym);
        if (first) {
          acc = M;
          first = false;
        } else {
          acc = mul(acc, M);
        }
      }
      if (first) throw UnsupportedFormError("scalar-only product is not matrix-valued");
      for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) acc(i, j) = scalar * acc(i, j);
      return acc;
    }
    case Expr::Kind::Sum: {
      ExprMatrix acc(n, n);
      for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) acc(i, j) = Expr::integer(0);
      for (const Expr& k : e.kids()) {
        ExprMatrix M = matrixExprEntries(k, n, randomSym);
        for (long i = 0; i < n; ++i)
          for (long j = 0; j < n; ++j) acc(i, j) = acc(i, j) + M(i, j);
      }
      return acc;
    }
    case Expr::Kind::Power: {
      long ex = e.node().exponent;
      if (ex < 1) throw UnsupportedFormError("matrix power must be >= 1");
      ExprMatrix base = matrixExprEntries(e.kids()[0], n, randomSym);
      ExprMatrix acc = base;
      for (long i = 1; i < ex; ++i) acc = mul(acc, base);
      return acc;
    }
    default:
      break;
  }
  throw UnsupportedFormError("not a matrix-valued expression: " + e.str());
}

SymbolicMatrix matrixIntegrate(const Expr& matrixExpr, const MeasureSpec& spec,
                               const EngineOptions& opts, std::string* enginePath) {
  if (spec.symbolicDim)
    throw DimensionError(
        "matrix-valued integration needs concrete result dimensions; "
        "scalarize the expression (e.g. with tr) for symbolic d");
  Expr norm = normalize(matrixExpr);
  std::string sym = inferRandomSymbol(norm, spec);
  ExprMatrix entries = matrixExprEntries(norm, spec.dim, sym);
  SymbolicMatrix out(spec.dim, spec.dim);
  if (enginePath) *enginePath = "matrix-entrywise";
  for (long i = 0; i < spec.dim; ++i)
    for (long j = 0; j < spec.dim; ++j)
      out(i, j) = integrateWithConstants(normalize(entries(i, j)), spec, sym, opts);
  return out;
}

Scalar evalTraceExpr(const TraceExpr& t, long n,
                     const std::vector<std::pair<std::string, ScalarMatrix>>& constants) {
  auto lookup = [&](const std::string& name) -> ScalarMatrix {
    for (const auto& [nm, m] : constants)
      if (nm == name) return m;
    if (name == "J") {
      if (n % 2 != 0) throw DimensionError("J needs an even dimension");
      ScalarMatrix J(n, n);
      for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) J(i, j) = Scalar(0);
      for (long i = 0; i < n / 2; ++i) {
        J(i, i + n / 2) = Scalar(1);
        J(i + n / 2, i) = Scalar(-1);
      }
      return J;
    }
    throw InvalidInputError("no value supplied for constant matrix " + name);
  };
  Scalar acc(0);
  for (const TraceTerm& term : t.terms) {
    Scalar v = term.coeff.isConstant() ? term.coeff.constantValue()
                                       : term.coeff.evalAt(Rat(n));
    for (const TraceWord& w : term.words) {
      ScalarMatrix prod(n, n);
      for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) prod(i, j) = Scalar(i == j ? 1 : 0);
      for (const WordAtom& a : w.atoms) {
        ScalarMatrix M = lookup(a.name);
        if (a.transp) M = ScalarMatrix(M.transpose());
        if (a.conj)
          for (long i = 0; i < n; ++i)
            for (long j = 0; j < n; ++j) M(i, j) = M(i, j).conj();
        ScalarMatrix next(n, n);
        for (long i = 0; i < n; ++i)
          for (long j = 0; j < n; ++j) {
            Scalar s(0);
            for (long k = 0; k < n; ++k) s += prod(i, k) * M(k, j);
            next(i, j) = s;
          }
        prod = next;
      }
      Scalar tr(0);
      for (long i = 0; i < n; ++i) tr += prod(i, i);
      v *= tr;
    }
    acc += v;
  }
  return acc;
}

}  // namespace haarint
