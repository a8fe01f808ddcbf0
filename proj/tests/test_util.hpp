#pragma once

#include <random>
#include <vector>

#include <Eigen/Dense>

#include "haarint/asymptotics.hpp"
#include "haarint/eigen_support.hpp"

namespace haarint::testutil {

/// Golden rational functions written as readable text, e.g. "2/(d*(d+1))".
inline RationalFunction rf(const std::string& text) {
  return parseRationalFunction(text, "d");
}

inline DimPoly poly(std::vector<long> coeffs) {
  std::vector<Scalar> c;
  for (long x : coeffs) c.emplace_back(x);
  return DimPoly(std::move(c));
}

/// Haar-distributed unitary via QR of a complex Ginibre sample with the
/// phase normalization of the R diagonal.
inline Eigen::MatrixXcd haarUnitary(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXcd Z(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) Z(i, j) = std::complex<double>(g(rng), g(rng));
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(Z);
  Eigen::MatrixXcd Q = qr.householderQ();
  Eigen::MatrixXcd R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < d; ++j) {
    std::complex<double> r = R(j, j);
    std::complex<double> phase = std::abs(r) == 0.0 ? 1.0 : r / std::abs(r);
    Q.col(j) *= phase;
  }
  return Q;
}

inline Rat randomRat(std::mt19937_64& rng, int lim = 10) {
  std::uniform_int_distribution<int> num(-lim, lim);
  std::uniform_int_distribution<int> den(1, lim);
  return Rat(num(rng), den(rng));
}

inline DimPoly randomPoly(std::mt19937_64& rng, int maxDeg = 4, int lim = 10) {
  std::uniform_int_distribution<int> degDist(0, maxDeg);
  int deg = degDist(rng);
  std::vector<Scalar> c;
  for (int i = 0; i <= deg; ++i) c.emplace_back(randomRat(rng, lim));
  return DimPoly(std::move(c));
}

}  // namespace haarint::testutil
