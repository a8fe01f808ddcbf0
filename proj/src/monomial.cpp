#include "haarint/monomial.hpp"

#include <array>
#include <cctype>

#include "haarint/errors.hpp"

namespace haarint {

namespace {

constexpr std::array<std::pair<Family, const char*>, 19> kFamilies{{
    {Family::U, "U"},
    {Family::SU, "SU"},
    {Family::O, "O"},
    {Family::Sp, "Sp"},
    {Family::CUE, "CUE"},
    {Family::COE, "COE"},
    {Family::CSE, "CSE"},
    {Family::GUE, "GUE"},
    {Family::GOE, "GOE"},
    {Family::GSE, "GSE"},
    {Family::GinUE, "GinUE"},
    {Family::GinOE, "GinOE"},
    {Family::GinSE, "GinSE"},
    {Family::Perm, "Perm"},
    {Family::CPerm, "CPerm"},
    {Family::DiagU, "DiagU"},
    {Family::Psi, "Psi"},
    {Family::Stiefel, "Stiefel"},
    {Family::Design, "Design"},
}};

}  // namespace

std::string familyName(Family f) {
  for (const auto& [fam, name] : kFamilies)
    if (fam == f) return name;
  return "?";
}

std::optional<Family> familyFromName(const std::string& name) {
  for (const auto& [fam, n] : kFamilies)
    if (name == n) return fam;
  return std::nullopt;
}

MeasureSpec MeasureSpec::symbolic(Family f, std::string symbol, int extra) {
  MeasureSpec m;
  m.family = f;
  m.symbolicDim = true;
  m.dimSymbol = std::move(symbol);
  m.extra = extra;
  m.validate();
  return m;
}

MeasureSpec MeasureSpec::concrete(Family f, long n, int extra) {
  MeasureSpec m;
  m.family = f;
  m.symbolicDim = false;
  m.dim = n;
  m.extra = extra;
  m.validate();
  return m;
}

void MeasureSpec::validate() const {
  bool needsEven = family == Family::Sp || family == Family::CSE || family == Family::GSE ||
                   family == Family::GinSE;
  if (!symbolicDim) {
    if (dim < 1) throw DimensionError("measure dimension must be >= 1");
    if (needsEven && dim % 2 != 0)
      throw DimensionError(familyName(family) + " requires an even dimension, got " +
                           std::to_string(dim));
    if (family == Family::Stiefel && extra > dim)
      throw DimensionError("Stiefel width " + std::to_string(extra) +
                           " exceeds dimension " + std::to_string(dim));
  }
  if (family == Family::Stiefel && extra < 1)
    throw InvalidInputError("Stiefel measure needs a width >= 1");
  if (family == Family::Design && extra < 1)
    throw InvalidInputError("design order t must be >= 1");
}

std::string MeasureSpec::str() const {
  std::string d = symbolicDim ? dimSymbol : std::to_string(dim);
  std::string e;
  if (family == Family::Stiefel || family == Family::Design)
    e = "," + std::to_string(extra);
  return familyName(family) + "(" + d + e + ")";
}

MeasureSpec parseMeasure(const std::string& text) {
  std::size_t i = 0;
  auto skipWs = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skipWs();
  std::size_t start = i;
  while (i < text.size() && std::isalnum(static_cast<unsigned char>(text[i]))) ++i;
  std::string name = text.substr(start, i - start);
  auto fam = familyFromName(name);
  if (!fam) throw ParseError("unknown measure family '" + name + "'", start);
  skipWs();
  if (i >= text.size() || text[i] != '(') throw ParseError("malformed measure", i, "'('");
  ++i;
  skipWs();
  start = i;
  while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) ||
                             text[i] == '_'))
    ++i;
  std::string dimTok = text.substr(start, i - start);
  if (dimTok.empty()) throw ParseError("missing dimension", i, "integer or symbol");
  bool symbolic = !std::isdigit(static_cast<unsigned char>(dimTok[0]));
  long dim = symbolic ? 0 : std::stol(dimTok);
  int extra = 0;
  skipWs();
  if (i < text.size() && text[i] == ',') {
    ++i;
    skipWs();
    start = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    if (start == i) throw ParseError("missing extra measure parameter", i, "integer");
    extra = std::stoi(text.substr(start, i - start));
    skipWs();
  }
  if (i >= text.size() || text[i] != ')') throw ParseError("malformed measure", i, "')'");
  ++i;
  skipWs();
  if (i != text.size()) throw ParseError("trailing characters after measure", i);
  if (*fam == Family::Stiefel || *fam == Family::Design) {
    if (extra == 0)
      throw ParseError(familyName(*fam) + " needs a second parameter", i, "integer");
  } else if (extra != 0) {
    throw ParseError(familyName(*fam) + " takes a single parameter", i);
  }
  MeasureSpec m = symbolic ? MeasureSpec::symbolic(*fam, dimTok, extra)
                           : MeasureSpec::concrete(*fam, dim, extra);
  return m;
}

}  // namespace haarint
