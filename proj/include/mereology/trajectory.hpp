#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "mereology/errors.hpp"
#include "mereology/linalg.hpp"
#include "mereology/tps.hpp"

namespace mereology {

inline constexpr double kTrajectoryNormTolerance = 1e-9;
inline constexpr double kHermitianTolerance = 1e-10;

struct Harmonic {
  int frequency = 1;
  VectorXcd cos_coeffs;
  VectorXcd sin_coeffs;
};

/// Psi(t) = constant + sum_h [cos(f_h t) c_h + sin(f_h t) s_h] on [0, t_max].
struct TrigTrajectory {
  HilbertDims dims;
  VectorXcd constant;
  std::vector<Harmonic> harmonics;
  double t_max = 1.0;

  VectorXcd evaluate(double t) const {
    VectorXcd v = constant;
    for (const auto& h : harmonics) {
      v += std::cos(h.frequency * t) * h.cos_coeffs + std::sin(h.frequency * t) * h.sin_coeffs;
    }
    return v;
  }
};

/// Checks shapes and that |Psi(t)| stays within 1e-9 of 1 on a dense grid.
inline void validate(const TrigTrajectory& traj, int check_points = 257) {
  const int n = traj.dims.n();
  if (traj.constant.size() != n) fail(ErrorKind::kDimensionMismatch, "trig constant has wrong length");
  for (const auto& h : traj.harmonics) {
    if (h.frequency <= 0) fail(ErrorKind::kInvalidArgument, "harmonic frequency must be a positive integer");
    if (h.cos_coeffs.size() != n || h.sin_coeffs.size() != n) {
      fail(ErrorKind::kDimensionMismatch, "harmonic coefficient vector has wrong length");
    }
  }
  if (!(traj.t_max > 0.0)) fail(ErrorKind::kInvalidArgument, "t_max must be positive");
  for (int k = 0; k < check_points; ++k) {
    const double t = traj.t_max * k / (check_points - 1);
    const double dev = std::abs(traj.evaluate(t).norm() - 1.0);
    if (dev > kTrajectoryNormTolerance) {
      fail(ErrorKind::kNotNormalizable, "trajectory norm deviates from 1 by " + std::to_string(dev) +
                                            " at t=" + std::to_string(t));
    }
  }
}

/// Evolution Psi(t) = exp(+i H t) Psi(0). The sign follows the C-NOT example
/// (exp(i H_CNOT t) maps (1,0,1,0)/sqrt2 to (1,0,cos t,sin t)/sqrt2), which is the
/// opposite of the usual Schroedinger convention.
struct HamiltonianTrajectory {
  HilbertDims dims;
  MatrixXcd hamiltonian;
  StateVector initial;
  double t_max = 1.0;
};

struct SampledTrajectory {
  HilbertDims dims;
  std::vector<double> times;
  std::vector<StateVector> states;

  std::size_t size() const { return times.size(); }
};

inline void validate(const SampledTrajectory& traj) {
  if (traj.times.size() != traj.states.size()) fail(ErrorKind::kInvalidArgument, "times/states length mismatch");
  if (traj.times.size() < 2) fail(ErrorKind::kInvalidArgument, "a sampled trajectory needs at least 2 samples");
  for (std::size_t k = 0; k < traj.size(); ++k) {
    if (k > 0 && !(traj.times[k] > traj.times[k - 1])) {
      fail(ErrorKind::kInvalidArgument, "times must be strictly increasing (index " + std::to_string(k) + ")");
    }
    require_same_dims(traj.states[k].dims(), traj.dims, "sampled state");
  }
}

inline std::vector<double> uniform_grid(double t_max, int num_samples) {
  if (num_samples < 2) fail(ErrorKind::kInvalidArgument, "num_samples must be >= 2");
  std::vector<double> t(static_cast<std::size_t>(num_samples));
  for (int k = 0; k < num_samples; ++k) t[static_cast<std::size_t>(k)] = t_max * k / (num_samples - 1);
  t.back() = t_max;
  return t;
}

inline SampledTrajectory sample_trig(const TrigTrajectory& traj, int num_samples) {
  SampledTrajectory out{traj.dims, uniform_grid(traj.t_max, num_samples), {}};
  out.states.reserve(out.times.size());
  for (double t : out.times) {
    const VectorXcd v = traj.evaluate(t);
    const double dev = std::abs(v.norm() - 1.0);
    if (dev > kTrajectoryNormTolerance) {
      fail(ErrorKind::kNotNormalizable, "trajectory norm deviates from 1 by " + std::to_string(dev) +
                                            " at t=" + std::to_string(t));
    }
    out.states.push_back(StateVector::normalized(v, traj.dims));
  }
  return out;
}

inline SampledTrajectory evolve_under_hamiltonian(const HamiltonianTrajectory& traj, int num_samples) {
  require_hermitian(traj.hamiltonian, kHermitianTolerance, "Hamiltonian");
  if (traj.hamiltonian.rows() != traj.dims.n()) fail(ErrorKind::kDimensionMismatch, "Hamiltonian size vs dims");
  require_same_dims(traj.initial.dims(), traj.dims, "initial state");
  const MatrixXcd h = 0.5 * (traj.hamiltonian + traj.hamiltonian.adjoint());
  Eigen::SelfAdjointEigenSolver<MatrixXcd> eig(h);
  const VectorXcd in_eigenbasis = eig.eigenvectors().adjoint() * traj.initial.amplitudes();
  SampledTrajectory out{traj.dims, uniform_grid(traj.t_max, num_samples), {}};
  out.states.reserve(out.times.size());
  for (double t : out.times) {
    VectorXcd phased = in_eigenbasis;
    for (Eigen::Index k = 0; k < phased.size(); ++k) phased(k) *= std::exp(kI * (eig.eigenvalues()(k) * t));
    out.states.push_back(StateVector::normalized(eig.eigenvectors() * phased, traj.dims));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Trigonometric polynomial form: a + b cos t + c sin t = e^{-it} P(e^{it}) with
// P = ((b - i c)/2) X^2 + a X + (b + i c)/2.

struct QuadraticPoly {
  std::array<cplx, 3> coeffs{};  // coefficients of X^2, X, 1

  cplx leading() const { return coeffs[0]; }
  cplx operator()(cplx z) const { return (coeffs[0] * z + coeffs[1]) * z + coeffs[2]; }
  int degree(double tol = 0.0) const {
    if (std::abs(coeffs[0]) > tol) return 2;
    if (std::abs(coeffs[1]) > tol) return 1;
    return 0;
  }
};

/// Rebased component i equals e^{-it} polys[i](e^{it}).
struct PolynomialSystem {
  std::vector<QuadraticPoly> polys;

  std::vector<cplx> leading_coeffs() const {
    std::vector<cplx> k;
    for (const auto& p : polys) k.push_back(p.leading());
    return k;
  }

  cplx component(std::size_t i, double t) const {
    const cplx z = std::exp(kI * t);
    return polys[i](z) / z;
  }
};

inline QuadraticPoly trig_to_quadratic(cplx constant, cplx cos_coeff, cplx sin_coeff) {
  return {{(cos_coeff - kI * sin_coeff) / 2.0, constant, (cos_coeff + kI * sin_coeff) / 2.0}};
}

/// Requires dims (2,2) and at most one harmonic, of frequency 1.
inline void require_single_frequency(const TrigTrajectory& traj) {
  if (traj.dims.n1 != 2 || traj.dims.n2 != 2) {
    fail(ErrorKind::kUnsupportedForm, "polynomial form is implemented for two qubits only, got dims " +
                                          to_string(traj.dims));
  }
  if (traj.harmonics.size() > 1) {
    fail(ErrorKind::kUnsupportedForm, "trajectory has " + std::to_string(traj.harmonics.size()) +
                                          " harmonics, need a single frequency-1 harmonic");
  }
  if (traj.harmonics.size() == 1 && traj.harmonics.front().frequency != 1) {
    fail(ErrorKind::kUnsupportedForm, "harmonic frequency " + std::to_string(traj.harmonics.front().frequency) +
                                          " is not 1");
  }
}

/// (alpha, beta, gamma) with Psi(t) = alpha + beta cos t + gamma sin t.
inline std::array<VectorXcd, 3> trig_coefficients(const TrigTrajectory& traj) {
  require_single_frequency(traj);
  const Eigen::Index n = traj.dims.n();
  if (traj.harmonics.empty()) return {traj.constant, VectorXcd::Zero(n), VectorXcd::Zero(n)};
  return {traj.constant, traj.harmonics.front().cos_coeffs, traj.harmonics.front().sin_coeffs};
}

inline PolynomialSystem trig_to_polynomials(const TrigTrajectory& traj, const TPSpec& tps) {
  require_same_dims(tps.dims(), traj.dims, "trig_to_polynomials");
  const auto [alpha, beta, gamma] = trig_coefficients(traj);
  const MatrixXcd& u = tps.basis_change();
  const VectorXcd a = u * alpha, b = u * beta, c = u * gamma;
  PolynomialSystem sys;
  for (Eigen::Index i = 0; i < a.size(); ++i) sys.polys.push_back(trig_to_quadratic(a(i), b(i), c(i)));
  return sys;
}

}  // namespace mereology
