#pragma once

#include "haarint/eigen_support.hpp"

namespace haarint {

/// Fraction-free exact solver for A x = b over the polynomial ring:
/// Bareiss one-step elimination with row pivoting, dividing only by the
/// previous pivot (always exact), followed by back substitution over the
/// rational-function field.
///
/// Throws SingularSystemError when A is singular over the field.
inline RatFuncVector bareissSolve(const PolyMatrix& A, const PolyVector& b) {
  const Eigen::Index n = A.rows();
  if (A.cols() != n || b.size() != n)
    throw InvalidInputError("bareiss_solve needs a square system");
  PolyMatrix M(n, n + 1);
  M.leftCols(n) = A;
  M.col(n) = b;

  DimPoly prev = DimPoly::one();
  for (Eigen::Index k = 0; k < n; ++k) {
    if (M(k, k).isZero()) {
      Eigen::Index r = k + 1;
      while (r < n && M(r, k).isZero()) ++r;
      if (r == n) throw SingularSystemError("singular system in bareiss_solve");
      M.row(k).swap(M.row(r));
    }
    for (Eigen::Index i = k + 1; i < n; ++i) {
      for (Eigen::Index j = k + 1; j <= n; ++j)
        M(i, j) = (M(k, k) * M(i, j) - M(i, k) * M(k, j)).divExact(prev);
      M(i, k) = DimPoly();
    }
    prev = M(k, k);
  }

  RatFuncVector x(n);
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    RationalFunction acc = RationalFunction::fromPoly(M(i, n));
    for (Eigen::Index j = i + 1; j < n; ++j)
      acc -= RationalFunction::fromPoly(M(i, j)) * x(j);
    x(i) = acc / RationalFunction::fromPoly(M(i, i));
  }
  return x;
}

}  // namespace haarint
