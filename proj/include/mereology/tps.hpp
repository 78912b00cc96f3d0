#pragma once

#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "mereology/detail/lbfgs.hpp"
#include "mereology/errors.hpp"
#include "mereology/linalg.hpp"

namespace mereology {

inline constexpr double kUnitarityTolerance = 1e-10;
inline constexpr double kNormTolerance = 1e-12;

/// Bipartite dimension bookkeeping for H = C^{n1} (x) C^{n2}.
struct HilbertDims {
  int n1 = 2;
  int n2 = 2;

  static HilbertDims make(int n1, int n2) {
    if (n1 < 2 || n2 < 2) {
      fail(ErrorKind::kInvalidArgument,
           "factor dimensions must be >= 2, got (" + std::to_string(n1) + "," + std::to_string(n2) + ")");
    }
    return {n1, n2};
  }

  int n() const { return n1 * n2; }
  /// Row-major flat index of the basis label |i j>.
  int index(int i, int j) const { return i * n2 + j; }

  friend bool operator==(const HilbertDims&, const HilbertDims&) = default;
};

inline std::string to_string(const HilbertDims& d) {
  return "(" + std::to_string(d.n1) + "," + std::to_string(d.n2) + ")";
}

inline void require_same_dims(const HilbertDims& a, const HilbertDims& b, const char* what) {
  if (!(a == b)) fail(ErrorKind::kDimensionMismatch, std::string(what) + ": " + to_string(a) + " vs " + to_string(b));
}

/// Unit vector of H, amplitudes in the row-major |i j> ordering.
class StateVector {
 public:
  StateVector(VectorXcd amplitudes, HilbertDims dims) : amplitudes_(std::move(amplitudes)), dims_(dims) {
    if (amplitudes_.size() != dims_.n()) {
      fail(ErrorKind::kDimensionMismatch, "state has " + std::to_string(amplitudes_.size()) +
                                              " amplitudes, dims " + to_string(dims_) + " need " +
                                              std::to_string(dims_.n()));
    }
    const double deviation = std::abs(amplitudes_.norm() - 1.0);
    if (!(deviation <= kNormTolerance)) {
      fail(ErrorKind::kNotNormalizable, "state norm deviates from 1 by " + std::to_string(deviation));
    }
  }

  /// Rescales to unit norm; only the zero vector is rejected.
  static StateVector normalized(const VectorXcd& amplitudes, HilbertDims dims) {
    const double norm = amplitudes.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) fail(ErrorKind::kNotNormalizable, "zero or non-finite vector");
    return StateVector(amplitudes / norm, dims);
  }

  const VectorXcd& amplitudes() const { return amplitudes_; }
  const HilbertDims& dims() const { return dims_; }
  cplx operator[](Eigen::Index k) const { return amplitudes_(k); }

 private:
  VectorXcd amplitudes_;
  HilbertDims dims_;
};

/// Representative of a TPS class: the unitary U taking reference-basis
/// coordinates to coordinates in the new product basis.
class TPSpec {
 public:
  const MatrixXcd& basis_change() const { return basis_change_; }
  const HilbertDims& dims() const { return dims_; }

  static TPSpec identity(HilbertDims dims) { return TPSpec(MatrixXcd::Identity(dims.n(), dims.n()), dims); }

 private:
  TPSpec(MatrixXcd u, HilbertDims dims) : basis_change_(std::move(u)), dims_(dims) {}
  friend TPSpec make_tps(const MatrixXcd& u, HilbertDims dims);

  MatrixXcd basis_change_;
  HilbertDims dims_;
};

inline TPSpec make_tps(const MatrixXcd& u, HilbertDims dims) {
  if (u.rows() != u.cols() || u.rows() != dims.n()) {
    fail(ErrorKind::kDimensionMismatch, "basis change is " + std::to_string(u.rows()) + "x" +
                                            std::to_string(u.cols()) + ", dims " + to_string(dims) + " need " +
                                            std::to_string(dims.n()) + "x" + std::to_string(dims.n()));
  }
  const double dev = unitarity_deviation(u);
  if (!(dev <= kUnitarityTolerance)) {
    fail(ErrorKind::kNotUnitary, "U^dag U deviates from identity by " + std::to_string(dev));
  }
  return TPSpec(u, dims);
}

struct CoefficientMatrix {
  MatrixXcd entries;  // n1 x n2, entries(i, j) = <i j|psi>
};

inline CoefficientMatrix reshape_coefficients(const VectorXcd& amplitudes, HilbertDims dims) {
  CoefficientMatrix m{MatrixXcd(dims.n1, dims.n2)};
  for (int i = 0; i < dims.n1; ++i)
    for (int j = 0; j < dims.n2; ++j) m.entries(i, j) = amplitudes(dims.index(i, j));
  return m;
}

inline CoefficientMatrix reshape_coefficients(const StateVector& psi) {
  return reshape_coefficients(psi.amplitudes(), psi.dims());
}

inline VectorXcd flatten(const CoefficientMatrix& m) {
  const int n1 = static_cast<int>(m.entries.rows());
  const int n2 = static_cast<int>(m.entries.cols());
  VectorXcd out(n1 * n2);
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j) out(i * n2 + j) = m.entries(i, j);
  return out;
}

inline StateVector rebase_state(const TPSpec& tps, const StateVector& psi) {
  require_same_dims(tps.dims(), psi.dims(), "rebase_state");
  return StateVector::normalized(tps.basis_change() * psi.amplitudes(), psi.dims());
}

/// Operator-Schmidt coefficients of V on C^{n1} (x) C^{n2}, non-increasing.
inline VectorXd operator_schmidt_values(const MatrixXcd& v, HilbertDims dims) {
  if (v.rows() != dims.n() || v.cols() != dims.n()) fail(ErrorKind::kDimensionMismatch, "operator size vs dims");
  Eigen::JacobiSVD<MatrixXcd> svd(reshuffle(v, dims.n1, dims.n2));
  return svd.singularValues();
}

/// True iff V = V1 (x) V2, decided by sigma_2 < tol * sigma_1 of the reshuffled V.
inline bool is_local_product_unitary(const MatrixXcd& v, HilbertDims dims, double tol) {
  if (v.rows() != dims.n() || v.cols() != dims.n()) fail(ErrorKind::kDimensionMismatch, "operator size vs dims");
  const double dev = unitarity_deviation(v);
  if (!(dev <= kUnitarityTolerance)) fail(ErrorKind::kNotUnitary, "deviation " + std::to_string(dev));
  const VectorXd s = operator_schmidt_values(v, dims);
  return s.size() < 2 || s(1) < tol * s(0);
}

/// Same TPS class: U2 U1^dag is a product of local unitaries.
inline bool tps_equivalent(const TPSpec& t1, const TPSpec& t2, double tol) {
  require_same_dims(t1.dims(), t2.dims(), "tps_equivalent");
  return is_local_product_unitary(t2.basis_change() * t1.basis_change().adjoint(), t1.dims(), tol);
}

// ---------------------------------------------------------------------------
// Freedom on the complement of a subspace.
//
// A TPS that disentangles a trajectory is only constrained on the span S of the
// trajectory. Right-multiplying U by R = P_S + Q K Q^dag (Q an orthonormal basis
// of S^perp, K unitary) keeps the trajectory untouched but can change the class.

/// How non-local U R T^dag is, as a value to minimize:
///   kFourthPower: 1 - sum s_k^4 / n^2, smooth everywhere.
///   kTail: sum_{k>=2} s_k^2 / n, zero exactly on local products and sharp there.
enum class AlignObjective { kFourthPower, kTail };

struct ComplementAlignment {
  MatrixXcd rotation;  // R, acts as identity on S
  double residual = 0.0;
};

namespace detail {

inline double nonlocality(const MatrixXcd& m, HilbertDims dims, AlignObjective objective) {
  const VectorXd s = operator_schmidt_values(m, dims);
  const double n = dims.n();
  if (objective == AlignObjective::kFourthPower) return 1.0 - s.array().pow(4).sum() / (n * n);
  return s.tail(s.size() - 1).squaredNorm() / n;
}

}  // namespace detail

/// Finds the complement rotation R that makes U R T^dag as close to a local
/// product as possible. Deterministic: fixed multistart seeded by `seed`.
inline ComplementAlignment align_complement(const MatrixXcd& u, const MatrixXcd& complement, const MatrixXcd& target,
                                            HilbertDims dims, AlignObjective objective,
                                            std::uint64_t seed = 7, int starts = 8) {
  const int n = dims.n();
  const int k = static_cast<int>(complement.cols());
  const MatrixXcd span_projector = MatrixXcd::Identity(n, n) - complement * complement.adjoint();
  auto rotation_of = [&](const MatrixXcd& kmat) -> MatrixXcd {
    return span_projector + complement * kmat * complement.adjoint();
  };
  if (k == 0) {
    const MatrixXcd id = MatrixXcd::Identity(n, n);
    return {id, detail::nonlocality(u * target.adjoint(), dims, objective)};
  }
  const auto basis = anti_hermitian_basis(k);
  auto score = [&](const MatrixXcd& kmat) {
    return detail::nonlocality(u * rotation_of(kmat) * target.adjoint(), dims, objective);
  };
  auto eval = [&](const MatrixXcd& kmat, VectorXd& grad) {
    const double h = 1e-6;
    grad.resize(static_cast<Eigen::Index>(basis.size()));
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const MatrixXcd plus = expm_anti_hermitian(h * basis[j]) * kmat;
      const MatrixXcd minus = expm_anti_hermitian(-h * basis[j]) * kmat;
      grad(static_cast<Eigen::Index>(j)) = (score(plus) - score(minus)) / (2.0 * h);
    }
    return score(kmat);
  };
  auto retract = [&](const MatrixXcd& kmat, const VectorXd& step) -> MatrixXcd {
    return expm_anti_hermitian(combine(basis, step)) * kmat;
  };
  std::mt19937_64 rng(seed);
  detail::LbfgsOptions opt;
  opt.max_iterations = 200;
  opt.gradient_tol = 1e-13;
  ComplementAlignment best{rotation_of(MatrixXcd::Identity(k, k)), std::numeric_limits<double>::infinity()};
  for (int s = 0; s < starts; ++s) {
    const MatrixXcd start = s == 0 ? MatrixXcd::Identity(k, k) : random_unitary(k, rng);
    auto res = detail::minimize_lbfgs(start, eval, retract, opt, [](int, const MatrixXcd&, double) {});
    const double value = score(res.point);
    if (value < best.residual - 1e-15) best = {rotation_of(res.point), value};
  }
  return best;
}

/// Canonical completion: among all unitaries agreeing with U on span(S), the one
/// least operator-entangled relative to the reference TPS.
inline MatrixXcd canonical_completion(const MatrixXcd& u, const MatrixXcd& complement, HilbertDims dims) {
  const auto aligned = align_complement(u, complement, MatrixXcd::Identity(dims.n(), dims.n()), dims,
                                          AlignObjective::kFourthPower);
  return u * aligned.rotation;
}

/// Local-unitary equivalence of two TPSs restricted to a subspace: true iff some
/// unitary acting only on the orthogonal complement of `span` makes t1 and t2
/// equivalent. `span` holds an orthonormal basis as columns.
inline bool tps_equivalent_on_subspace(const TPSpec& t1, const TPSpec& t2, const MatrixXcd& span, double tol) {
  require_same_dims(t1.dims(), t2.dims(), "tps_equivalent_on_subspace");
  const int n = t1.dims().n();
  if (span.rows() != n) fail(ErrorKind::kDimensionMismatch, "span basis has wrong row count");
  const MatrixXcd complement = split_column_space(MatrixXcd::Identity(n, n) - span * span.adjoint(), 1e-8).span;
  const auto aligned = align_complement(t2.basis_change(), complement, t1.basis_change(), t1.dims(), AlignObjective::kTail);
  const MatrixXcd rotated = t2.basis_change() * aligned.rotation;
  return is_local_product_unitary(rotated * t1.basis_change().adjoint(), t1.dims(), tol);
}

}  // namespace mereology
