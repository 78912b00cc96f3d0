#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "mereology/errors.hpp"

namespace mereology {

using cplx = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

inline constexpr cplx kI{0.0, 1.0};

inline MatrixXcd kron(const MatrixXcd& a, const MatrixXcd& b) {
  MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline VectorXcd kron(const VectorXcd& a, const VectorXcd& b) {
  VectorXcd out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

inline double unitarity_deviation(const MatrixXcd& u) {
  if (u.rows() != u.cols()) return std::numeric_limits<double>::infinity();
  return (u.adjoint() * u - MatrixXcd::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

inline double hermiticity_deviation(const MatrixXcd& h) {
  if (h.rows() != h.cols()) return std::numeric_limits<double>::infinity();
  return (h - h.adjoint()).cwiseAbs().maxCoeff();
}

inline void require_hermitian(const MatrixXcd& h, double tol, const char* what) {
  if (h.rows() != h.cols()) fail(ErrorKind::kDimensionMismatch, std::string(what) + " is not square");
  if (hermiticity_deviation(h) > tol) {
    fail(ErrorKind::kNotHermitian, std::string(what) + " deviates from its adjoint by " +
                                       std::to_string(hermiticity_deviation(h)));
  }
}

/// Reshuffle an operator on C^{n1} (x) C^{n2} into the n1^2 x n2^2 matrix
/// R[(i,k),(j,l)] = V[(i,j),(k,l)]. Its singular values are the operator-Schmidt
/// coefficients; V = A (x) B iff R has rank one.
inline MatrixXcd reshuffle(const MatrixXcd& v, int n1, int n2) {
  MatrixXcd r(n1 * n1, n2 * n2);
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j)
      for (int k = 0; k < n1; ++k)
        for (int l = 0; l < n2; ++l) r(i * n1 + k, j * n2 + l) = v(i * n2 + j, k * n2 + l);
  return r;
}

/// Orthonormal basis of u(n) under the Frobenius inner product Re tr(X^dag Y).
inline std::vector<MatrixXcd> anti_hermitian_basis(int n) {
  std::vector<MatrixXcd> basis;
  basis.reserve(static_cast<std::size_t>(n) * n);
  const double s = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      MatrixXcd e = MatrixXcd::Zero(n, n);
      e(j, k) = s;
      e(k, j) = -s;
      basis.push_back(e);
      e(j, k) = kI * s;
      e(k, j) = kI * s;
      basis.push_back(e);
    }
    MatrixXcd d = MatrixXcd::Zero(n, n);
    d(j, j) = kI;
    basis.push_back(d);
  }
  return basis;
}

inline MatrixXcd combine(const std::vector<MatrixXcd>& basis, const VectorXd& coords) {
  MatrixXcd out = MatrixXcd::Zero(basis.front().rows(), basis.front().cols());
  for (std::size_t j = 0; j < basis.size(); ++j) out += coords(static_cast<Eigen::Index>(j)) * basis[j];
  return out;
}

/// exp(A) for anti-Hermitian A, through the Hermitian eigendecomposition of -iA.
inline MatrixXcd expm_anti_hermitian(const MatrixXcd& a) {
  const MatrixXcd h = -kI * a;
  Eigen::SelfAdjointEigenSolver<MatrixXcd> eig(0.5 * (h + h.adjoint()));
  const VectorXcd phases = (kI * eig.eigenvalues().cast<cplx>()).array().exp().matrix();
  return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

/// exp(i t H) for Hermitian H.
inline MatrixXcd expm_i_hermitian(const MatrixXcd& h, double t) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> eig(0.5 * (h + h.adjoint()));
  const VectorXcd phases = (kI * t * eig.eigenvalues().cast<cplx>()).array().exp().matrix();
  return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

/// Haar-distributed unitary (QR of a Ginibre matrix with the phase fix).
template <class Rng>
MatrixXcd random_unitary(int n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  MatrixXcd z(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) z(i, j) = cplx(normal(rng), normal(rng));
  Eigen::HouseholderQR<MatrixXcd> qr(z);
  MatrixXcd q = qr.householderQ();
  const MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

template <class Rng>
VectorXcd random_unit_vector(int n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  VectorXcd v(n);
  for (int i = 0; i < n; ++i) v(i) = cplx(normal(rng), normal(rng));
  return v / v.norm();
}

template <class Rng>
MatrixXcd random_hermitian(int n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  MatrixXcd z(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) z(i, j) = cplx(normal(rng), normal(rng));
  return 0.5 * (z + z.adjoint());
}

/// Orthonormal basis (as columns) for the numerical column space of `m`, and for
/// its orthogonal complement. Rank is counted relative to the largest singular value.
struct SubspaceSplit {
  MatrixXcd span;
  MatrixXcd complement;
};

inline SubspaceSplit split_column_space(const MatrixXcd& m, double rel_tol) {
  Eigen::JacobiSVD<MatrixXcd> svd(m, Eigen::ComputeFullU);
  const VectorXd& s = svd.singularValues();
  Eigen::Index rank = 0;
  const double top = s.size() > 0 ? s(0) : 0.0;
  for (Eigen::Index k = 0; k < s.size(); ++k)
    if (top > 0.0 && s(k) > rel_tol * top) ++rank;
  const MatrixXcd& u = svd.matrixU();
  return {u.leftCols(rank), u.rightCols(u.cols() - rank)};
}

/// splitmix64: decorrelates per-task seeds derived from (seed, index).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace mereology
