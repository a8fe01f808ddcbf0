#pragma once

#include <optional>
#include <string>
#include <vector>

#include "haarint/scalar.hpp"

namespace haarint {

/// One indexed matrix-entry factor, possibly conjugated.
struct MonomialFactor {
  std::string sym;
  int row = 1;
  int col = 1;
  bool conj = false;

  friend bool operator==(const MonomialFactor& a, const MonomialFactor& b) {
    return a.sym == b.sym && a.row == b.row && a.col == b.col && a.conj == b.conj;
  }
  friend bool operator<(const MonomialFactor& a, const MonomialFactor& b) {
    if (a.sym != b.sym) return a.sym < b.sym;
    if (a.row != b.row) return a.row < b.row;
    if (a.col != b.col) return a.col < b.col;
    return a.conj < b.conj;
  }
  std::string str() const {
    std::string s = sym + "[" + std::to_string(row) + "," + std::to_string(col) + "]";
    return conj ? "conj(" + s + ")" : s;
  }
};

/// Scalar coefficient times an ordered list of entry factors.
struct Monomial {
  Scalar coeff{1};
  std::vector<MonomialFactor> factors;
};

enum class Family {
  U,
  SU,
  O,
  Sp,
  CUE,
  COE,
  CSE,
  GUE,
  GOE,
  GSE,
  GinUE,
  GinOE,
  GinSE,
  Perm,
  CPerm,
  DiagU,
  Psi,
  Stiefel,
  Design,
};

std::string familyName(Family f);
std::optional<Family> familyFromName(const std::string& name);

/// Tagged description of the integration measure: family, dimension
/// (symbolic or concrete), and the extra parameter for Stiefel width or
/// design order.
struct MeasureSpec {
  Family family = Family::U;
  bool symbolicDim = true;
  long dim = 0;                 // valid when !symbolicDim
  std::string dimSymbol = "d";  // name of the formal dimension
  int extra = 0;                // Stiefel k or Design t

  static MeasureSpec symbolic(Family f, std::string symbol = "d", int extra = 0);
  static MeasureSpec concrete(Family f, long n, int extra = 0);

  /// Enforces the catalogue constraints: even concrete dimensions for
  /// Sp/CSE/GSE/GinSE, Stiefel width <= dim, design order >= 1.
  void validate() const;

  std::string str() const;
};

/// Parses the catalogue grammar Family '(' dim [',' extra] ')',
/// e.g. "U(d)", "Sp(6)", "Stiefel(d,2)", "Design(d,3)".
MeasureSpec parseMeasure(const std::string& text);

}  // namespace haarint
