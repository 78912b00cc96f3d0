#pragma once

#include <gtest/gtest.h>

#include <random>

#include "mereology/errors.hpp"
#include "mereology/linalg.hpp"

namespace mereology::testing {

inline double max_abs_diff(const MatrixXcd& a, const MatrixXcd& b) { return (a - b).cwiseAbs().maxCoeff(); }
inline double max_abs_diff(const VectorXcd& a, const VectorXcd& b) { return (a - b).cwiseAbs().maxCoeff(); }

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

// Pauli matrices indexed 0..3 = I, X, Y, Z.
inline MatrixXcd pauli(int k) {
  MatrixXcd p(2, 2);
  switch (k) {
    case 0: p << 1.0, 0.0, 0.0, 1.0; break;
    case 1: p << 0.0, 1.0, 1.0, 0.0; break;
    case 2: p << 0.0, -kI, kI, 0.0; break;
    default: p << 1.0, 0.0, 0.0, -1.0; break;
  }
  return p;
}

}  // namespace mereology::testing

#define EXPECT_ERROR_KIND(stmt, expected_kind)                                      \
  do {                                                                              \
    try {                                                                           \
      stmt;                                                                         \
      ADD_FAILURE() << "no exception from " #stmt;                                  \
    } catch (const ::mereology::Error& e) {                                         \
      EXPECT_EQ(e.kind(), expected_kind) << e.what();                               \
    }                                                                               \
  } while (0)
