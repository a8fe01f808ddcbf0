#pragma once

#include <Eigen/Core>

#include "haarint/rational_function.hpp"

// NumTraits so the exact scalar types can live inside Eigen dense matrices.

namespace Eigen {

template <>
struct NumTraits<haarint::Scalar> : GenericNumTraits<haarint::Scalar> {
  using Real = haarint::Scalar;
  using NonInteger = haarint::Scalar;
  using Nested = haarint::Scalar;
  using Literal = int;
  enum {
    IsComplex = 0,  // conjugation handled explicitly by the library
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 8,
    MulCost = 16,
  };
  static inline Real epsilon() { return haarint::Scalar(0); }
  static inline Real dummy_precision() { return haarint::Scalar(0); }
  static inline int digits10() { return 0; }
};

template <>
struct NumTraits<haarint::DimPoly> : GenericNumTraits<haarint::DimPoly> {
  using Real = haarint::DimPoly;
  using NonInteger = haarint::DimPoly;
  using Nested = haarint::DimPoly;
  using Literal = int;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 32,
    MulCost = 64,
  };
  static inline Real epsilon() { return haarint::DimPoly(); }
  static inline Real dummy_precision() { return haarint::DimPoly(); }
  static inline int digits10() { return 0; }
};

template <>
struct NumTraits<haarint::RationalFunction> : GenericNumTraits<haarint::RationalFunction> {
  using Real = haarint::RationalFunction;
  using NonInteger = haarint::RationalFunction;
  using Nested = haarint::RationalFunction;
  using Literal = int;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 64,
    MulCost = 128,
  };
  static inline Real epsilon() { return haarint::RationalFunction(); }
  static inline Real dummy_precision() { return haarint::RationalFunction(); }
  static inline int digits10() { return 0; }
};

}  // namespace Eigen

namespace haarint {

using ScalarMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
using ScalarVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
using PolyMatrix = Eigen::Matrix<DimPoly, Eigen::Dynamic, Eigen::Dynamic>;
using PolyVector = Eigen::Matrix<DimPoly, Eigen::Dynamic, 1>;
using RatFuncMatrix = Eigen::Matrix<RationalFunction, Eigen::Dynamic, Eigen::Dynamic>;
using RatFuncVector = Eigen::Matrix<RationalFunction, Eigen::Dynamic, 1>;

}  // namespace haarint
