#pragma once

#include <string>

#include "haarint/monomial.hpp"
#include "haarint/rational_function.hpp"

namespace haarint {

struct EngineOptions {
  /// Refuse contractions with more than this many random factors (2k).
  int maxDegree = 12;
  bool fastPaths = true;
};

/// Integrates a single monomial against the measure.  The result is an
/// exact rational function of the dimension symbol; at a concrete dimension
/// it is the constant value.  enginePath, when given, receives a short tag
/// of the code path taken.
RationalFunction integrateMonomial(const Monomial& m, const MeasureSpec& spec,
                                   const EngineOptions& opts = {},
                                   std::string* enginePath = nullptr);

// Per-family engines; factors must all reference one matrix symbol.
RationalFunction integrateUnitary(const Monomial& m, const MeasureSpec& spec,
                                  const EngineOptions& opts = {},
                                  std::string* enginePath = nullptr);
RationalFunction integrateSU(const Monomial& m, const MeasureSpec& spec,
                             const EngineOptions& opts = {},
                             std::string* enginePath = nullptr);
RationalFunction integrateOrthogonal(const Monomial& m, const MeasureSpec& spec,
                                     const EngineOptions& opts = {},
                                     std::string* enginePath = nullptr);
RationalFunction integrateSymplectic(const Monomial& m, const MeasureSpec& spec,
                                     const EngineOptions& opts = {},
                                     std::string* enginePath = nullptr);
RationalFunction integratePermutation(const Monomial& m, const MeasureSpec& spec,
                                      const EngineOptions& opts = {},
                                      std::string* enginePath = nullptr);
RationalFunction integrateCenteredPermutation(const Monomial& m, const MeasureSpec& spec,
                                              const EngineOptions& opts = {},
                                              std::string* enginePath = nullptr);
RationalFunction integrateDiagUnitary(const Monomial& m, const MeasureSpec& spec,
                                      const EngineOptions& opts = {},
                                      std::string* enginePath = nullptr);
/// Stiefel frames; pure states are the width-1 case.
RationalFunction integrateStiefel(const Monomial& m, const MeasureSpec& spec,
                                  const EngineOptions& opts = {},
                                  std::string* enginePath = nullptr);
RationalFunction integrateGaussian(const Monomial& m, const MeasureSpec& spec,
                                   const EngineOptions& opts = {},
                                   std::string* enginePath = nullptr);
RationalFunction integrateGinibre(const Monomial& m, const MeasureSpec& spec,
                                  const EngineOptions& opts = {},
                                  std::string* enginePath = nullptr);
RationalFunction integrateCircular(const Monomial& m, const MeasureSpec& spec,
                                   const EngineOptions& opts = {},
                                   std::string* enginePath = nullptr);
RationalFunction integrateDesign(const Monomial& m, const MeasureSpec& spec,
                                 const EngineOptions& opts = {},
                                 std::string* enginePath = nullptr);

}  // namespace haarint
