#pragma once

#include <cmath>
#include <numbers>

#include "mereology/construct.hpp"
#include "mereology/linalg.hpp"
#include "mereology/tps.hpp"
#include "mereology/trajectory.hpp"

/// Fixed inputs shared by tests, the acceptance suite, the CLI and the demos.
namespace mereology::cases {

inline constexpr HilbertDims kQubits{2, 2};

/// The two-qubit disentangler for the C-NOT trajectory.
inline MatrixXcd cnot_disentangler() {
  MatrixXcd u(4, 4);
  u << -1.0, 0.0, 1.0, 0.0,
       0.0, kI, 0.0, kI,
       0.0, -kI, 0.0, kI,
       1.0, 0.0, 1.0, 0.0;
  return u / std::sqrt(2.0);
}

/// Psi(t) = (1, 0, cos t, sin t) / sqrt2 on [0, pi/2].
inline TrigTrajectory cnot_trajectory() {
  const double s = 1.0 / std::sqrt(2.0);
  TrigTrajectory t{kQubits, VectorXcd::Zero(4), {}, std::numbers::pi / 2.0};
  t.constant(0) = s;
  Harmonic h{1, VectorXcd::Zero(4), VectorXcd::Zero(4)};
  h.cos_coeffs(2) = s;
  h.sin_coeffs(3) = s;
  t.harmonics.push_back(h);
  return t;
}

/// Generator of the C-NOT trajectory under exp(+iHt).
inline MatrixXcd cnot_hamiltonian() {
  MatrixXcd h = MatrixXcd::Zero(4, 4);
  h(2, 3) = kI;
  h(3, 2) = -kI;
  return h;
}

inline StateVector cnot_initial_state() {
  VectorXcd v = VectorXcd::Zero(4);
  v(0) = 1.0;
  v(2) = 1.0;
  return StateVector::normalized(v, kQubits);
}

inline HamiltonianTrajectory cnot_hamiltonian_trajectory() {
  return {kQubits, cnot_hamiltonian(), cnot_initial_state(), std::numbers::pi / 2.0};
}

/// Rows are the conjugated eigenvectors of the C-NOT Hamiltonian for the
/// eigenvalues (0, 0, 1, -1), so U H U^dag = diag(0, 0, 1, -1).
inline MatrixXcd cnot_eigenbasis() {
  const double s = 1.0 / std::sqrt(2.0);
  MatrixXcd v = MatrixXcd::Zero(4, 4);  // eigenvectors as columns
  v(0, 0) = 1.0;
  v(1, 1) = 1.0;
  v(2, 2) = kI * s;
  v(3, 2) = s;
  v(2, 3) = -kI * s;
  v(3, 3) = s;
  return v.adjoint();
}

inline MatrixXcd eigenbasis_hamiltonian() {
  VectorXcd d(4);
  d << 0.0, 0.0, 1.0, -1.0;
  return d.asDiagonal();
}

inline MatrixXcd sigma_x() {
  MatrixXcd x(2, 2);
  x << 0.0, 1.0, 1.0, 0.0;
  return x;
}

/// X (x) 1 + 1 (x) X.
inline MatrixXcd local_x_sum() {
  const MatrixXcd id = MatrixXcd::Identity(2, 2);
  return kron(sigma_x(), id) + kron(id, sigma_x());
}

/// (1, e^{it}, e^{3it}, e^{7it}) / 2 on [0, 2 pi]: all ten pairwise frequency
/// sums are distinct.
inline TrigTrajectory sidon_trajectory() {
  TrigTrajectory t{kQubits, VectorXcd::Zero(4), {}, 2.0 * std::numbers::pi};
  t.constant(0) = 0.5;
  const int freqs[] = {1, 3, 7};
  for (int k = 0; k < 3; ++k) {
    Harmonic h{freqs[k], VectorXcd::Zero(4), VectorXcd::Zero(4)};
    h.cos_coeffs(k + 1) = 0.5;
    h.sin_coeffs(k + 1) = 0.5 * kI;
    t.harmonics.push_back(h);
  }
  return t;
}

/// (cos t, sin t, 0, 0) = |0> (x) (cos t |0> + sin t |1>).
inline TrigTrajectory lowdim_trajectory() {
  TrigTrajectory t{kQubits, VectorXcd::Zero(4), {}, std::numbers::pi};
  Harmonic h{1, VectorXcd::Zero(4), VectorXcd::Zero(4)};
  h.cos_coeffs(0) = 1.0;
  h.sin_coeffs(1) = 1.0;
  t.harmonics.push_back(h);
  return t;
}

/// cos t |00> + sin t |11>: entangled in the reference TPS, span of dimension 2.
inline TrigTrajectory lowdim_entangled_trajectory() {
  TrigTrajectory t{kQubits, VectorXcd::Zero(4), {}, std::numbers::pi / 2.0};
  Harmonic h{1, VectorXcd::Zero(4), VectorXcd::Zero(4)};
  h.cos_coeffs(0) = 1.0;
  h.sin_coeffs(3) = 1.0;
  t.harmonics.push_back(h);
  return t;
}

/// (sqrt(1 - r^2), 0, r cos t, r sin t) with r^2 = 0.8. No disentangling TPS
/// exists for r^2 > 1/2.
inline TrigTrajectory adversarial_trajectory(double r_squared = 0.8) {
  const double r = std::sqrt(r_squared);
  TrigTrajectory t{kQubits, VectorXcd::Zero(4), {}, std::numbers::pi / 2.0};
  t.constant(0) = std::sqrt(1.0 - r_squared);
  Harmonic h{1, VectorXcd::Zero(4), VectorXcd::Zero(4)};
  h.cos_coeffs(2) = r;
  h.sin_coeffs(3) = r;
  t.harmonics.push_back(h);
  return t;
}

/// The C-NOT trajectory at doubled frequency; outside the constructor's form.
inline TrigTrajectory multifrequency_trajectory() {
  TrigTrajectory t = cnot_trajectory();
  t.harmonics.front().frequency = 2;
  return t;
}

/// Constant |00>.
inline TrigTrajectory constant_product_trajectory() {
  TrigTrajectory t{kQubits, VectorXcd::Zero(4), {}, 1.0};
  t.constant(0) = 1.0;
  return t;
}

/// kappa_i = 1/4 (rebased component = e^{-it} P_i(e^{it})), roots a = c = 1,
/// b = d = -1, pattern (AC, AD, BC, BD).
inline RootPairing cnot_pairing() {
  RootPairing p;
  p.pattern = 0;
  p.kappa = {0.25, 0.25, 0.25, 0.25};
  p.roots = {1.0, -1.0, 1.0, -1.0};
  return p;
}

/// e^{-it}/4 [(z - 1), (z + 1)] (x) [(z - 1), (z + 1)], z = e^{it}.
inline VectorXcd cnot_closed_form(double t) {
  const cplx z = std::exp(kI * t);
  VectorXcd f(2);
  f << z - 1.0, z + 1.0;
  return kron(f, f) * (std::exp(-kI * t) / 4.0);
}

}  // namespace mereology::cases
