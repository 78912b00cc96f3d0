#pragma once

#include <cmath>

#include "mereology/errors.hpp"
#include "mereology/linalg.hpp"
#include "mereology/tps.hpp"
#include "mereology/trajectory.hpp"

namespace mereology {

inline constexpr double kStationarityStep = 1e-5;

inline void require_operator(const MatrixXcd& h, HilbertDims dims, const char* what) {
  require_hermitian(h, kHermitianTolerance, what);
  if (h.rows() != dims.n()) {
    fail(ErrorKind::kDimensionMismatch, std::string(what) + " is " + std::to_string(h.rows()) + "x" +
                                            std::to_string(h.cols()) + ", dims " + to_string(dims) + " need " +
                                            std::to_string(dims.n()));
  }
}

/// U H U^dag: H expressed in the basis defining the TPS.
inline MatrixXcd rebase_operator(const TPSpec& tps, const MatrixXcd& h) {
  require_operator(h, tps.dims(), "operator");
  const MatrixXcd& u = tps.basis_change();
  const MatrixXcd out = u * h * u.adjoint();
  return 0.5 * (out + out.adjoint());
}

/// Tr_2 H, an n1 x n1 matrix.
inline MatrixXcd partial_trace_second(const MatrixXcd& h, HilbertDims dims) {
  MatrixXcd out = MatrixXcd::Zero(dims.n1, dims.n1);
  for (int i = 0; i < dims.n1; ++i)
    for (int k = 0; k < dims.n1; ++k)
      for (int j = 0; j < dims.n2; ++j) out(i, k) += h(dims.index(i, j), dims.index(k, j));
  return out;
}

/// Tr_1 H, an n2 x n2 matrix.
inline MatrixXcd partial_trace_first(const MatrixXcd& h, HilbertDims dims) {
  MatrixXcd out = MatrixXcd::Zero(dims.n2, dims.n2);
  for (int j = 0; j < dims.n2; ++j)
    for (int l = 0; l < dims.n2; ++l)
      for (int i = 0; i < dims.n1; ++i) out(j, l) += h(dims.index(i, j), dims.index(i, l));
  return out;
}

/// H = h1 (x) 1 + 1 (x) h2 + trace_part 1 + interaction, with h1, h2 traceless and
/// the interaction Frobenius-orthogonal to every separable operator.
struct SeparableDecomposition {
  MatrixXcd h1;
  MatrixXcd h2;
  double trace_part = 0.0;
  MatrixXcd interaction;
  double interaction_norm = 0.0;

  MatrixXcd separable_part() const {
    const auto n1 = h1.rows();
    const auto n2 = h2.rows();
    return kron(h1, MatrixXcd::Identity(n2, n2)) + kron(MatrixXcd::Identity(n1, n1), h2) +
           trace_part * MatrixXcd::Identity(n1 * n2, n1 * n2);
  }
};

namespace detail {

// No validation; the stationarity finite differences call this in a tight loop.
inline SeparableDecomposition project_unchecked(const MatrixXcd& h, HilbertDims dims) {
  SeparableDecomposition d;
  d.trace_part = h.trace().real() / dims.n();
  d.h1 = partial_trace_second(h, dims) / static_cast<double>(dims.n2) -
         d.trace_part * MatrixXcd::Identity(dims.n1, dims.n1);
  d.h2 = partial_trace_first(h, dims) / static_cast<double>(dims.n1) -
         d.trace_part * MatrixXcd::Identity(dims.n2, dims.n2);
  d.interaction = h - d.separable_part();
  d.interaction_norm = d.interaction.norm();
  return d;
}

}  // namespace detail

inline SeparableDecomposition separable_projection(const MatrixXcd& h, HilbertDims dims) {
  require_operator(h, dims, "operator");
  return detail::project_unchecked(0.5 * (h + h.adjoint()), dims);
}

inline double interaction_norm(const MatrixXcd& h, HilbertDims dims) {
  return separable_projection(h, dims).interaction_norm;
}

/// Norm of the gradient of f(V) = ||interaction(V H V^dag)||_F^2 at V = 1 over
/// u(n), by central differences with step 1e-5 along an orthonormal basis.
inline double stationarity_gradient(const MatrixXcd& h, HilbertDims dims, double step = kStationarityStep) {
  require_operator(h, dims, "operator");
  const MatrixXcd herm = 0.5 * (h + h.adjoint());
  auto f = [&](const MatrixXcd& v) {
    const double r = detail::project_unchecked(v * herm * v.adjoint(), dims).interaction_norm;
    return r * r;
  };
  double sq = 0.0;
  for (const MatrixXcd& e : anti_hermitian_basis(dims.n())) {
    const double g = (f(expm_anti_hermitian(step * e)) - f(expm_anti_hermitian(-step * e))) / (2.0 * step);
    sq += g * g;
  }
  return std::sqrt(sq);
}

}  // namespace mereology
