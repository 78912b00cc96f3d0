#pragma once

#include <algorithm>
#include <cmath>
#include <ostream>
#include <vector>

#include "mereology/linalg.hpp"
#include "mereology/tps.hpp"
#include "mereology/trajectory.hpp"

namespace mereology {

/// psi = sum_k coefficients[k] * left.col(k) (x) right.col(k). Vectors carry the
/// usual phase/rotation gauge; only the coefficients feed the measures.
struct SchmidtDecomposition {
  VectorXd coefficients;  // non-increasing, length min(n1, n2)
  MatrixXcd left;         // n1 x min(n1, n2)
  MatrixXcd right;        // n2 x min(n1, n2)

  VectorXcd reconstruct() const {
    VectorXcd out = VectorXcd::Zero(left.rows() * right.rows());
    for (Eigen::Index k = 0; k < coefficients.size(); ++k) {
      out += coefficients(k) * kron(VectorXcd(left.col(k)), VectorXcd(right.col(k)));
    }
    return out;
  }

  /// sum_{k>=2} sigma_k^2; equals 1 - sigma_1^2 without the cancellation.
  double tail_weight() const { return coefficients.tail(coefficients.size() - 1).squaredNorm(); }
};

inline SchmidtDecomposition schmidt_decompose(const VectorXcd& amplitudes, HilbertDims dims) {
  const CoefficientMatrix m = reshape_coefficients(amplitudes, dims);
  Eigen::JacobiSVD<MatrixXcd> svd(m.entries, Eigen::ComputeThinU | Eigen::ComputeThinV);
  // psi = sum s_k u_k v_k^dag reshaped, i.e. right vectors are conj(v_k).
  return {svd.singularValues(), svd.matrixU(), svd.matrixV().conjugate()};
}

inline SchmidtDecomposition schmidt_decompose(const StateVector& psi) {
  return schmidt_decompose(psi.amplitudes(), psi.dims());
}

inline double entropy_from_schmidt(const VectorXd& sigma) {
  double s = 0.0;
  for (Eigen::Index k = 0; k < sigma.size(); ++k) {
    const double p = sigma(k) * sigma(k);
    if (p > 0.0) s -= p * std::log(p);
  }
  return std::max(0.0, s);
}

/// sqrt(2 - 2 sigma_1) written as sqrt(2 tail / (1 + sigma_1)).
inline double distance_from_schmidt(const SchmidtDecomposition& sd) {
  const double s1 = sd.coefficients(0);
  return std::sqrt(2.0 * sd.tail_weight() / (1.0 + s1));
}

inline double entanglement_entropy(const StateVector& psi) { return entropy_from_schmidt(schmidt_decompose(psi).coefficients); }

inline double product_distance(const StateVector& psi) { return distance_from_schmidt(schmidt_decompose(psi)); }

inline double max_minor_modulus(const CoefficientMatrix& m) {
  const auto& e = m.entries;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < e.rows(); ++i)
    for (Eigen::Index k = i + 1; k < e.rows(); ++k)
      for (Eigen::Index j = 0; j < e.cols(); ++j)
        for (Eigen::Index l = j + 1; l < e.cols(); ++l)
          worst = std::max(worst, std::abs(e(i, j) * e(k, l) - e(i, l) * e(k, j)));
  return worst;
}

/// Every 2x2 minor of the coefficient matrix below `tol`. The minors are the
/// entries of the second compound matrix, whose singular values are sigma_i sigma_j,
/// so max|minor| <= sigma_1 sigma_2 <= sqrt(#minors) max|minor|. For two qubits the
/// single minor is the determinant and |det| = sigma_1 sigma_2 exactly.
inline bool is_product_state(const StateVector& psi, double tol) {
  return max_minor_modulus(reshape_coefficients(psi)) < tol;
}

struct EntanglementProfile {
  std::vector<double> times;
  std::vector<double> entropy;
  std::vector<double> product_distance;
  std::vector<double> sigma2;
  std::vector<double> max_minor;
  double max_entropy = 0.0;
  double max_distance = 0.0;
  double max_sigma2 = 0.0;
  double max_minor_modulus = 0.0;
};

inline EntanglementProfile entanglement_profile(const SampledTrajectory& traj, const TPSpec& tps) {
  require_same_dims(tps.dims(), traj.dims, "entanglement_profile");
  EntanglementProfile p;
  p.times = traj.times;
  const std::size_t k = traj.size();
  p.entropy.resize(k);
  p.product_distance.resize(k);
  p.sigma2.resize(k);
  p.max_minor.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    const StateVector rebased = rebase_state(tps, traj.states[i]);
    const SchmidtDecomposition sd = schmidt_decompose(rebased);
    p.entropy[i] = entropy_from_schmidt(sd.coefficients);
    p.product_distance[i] = distance_from_schmidt(sd);
    p.sigma2[i] = sd.coefficients.size() > 1 ? sd.coefficients(1) : 0.0;
    p.max_minor[i] = max_minor_modulus(reshape_coefficients(rebased));
  }
  auto top = [](const std::vector<double>& v) { return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end()); };
  p.max_entropy = top(p.entropy);
  p.max_distance = top(p.product_distance);
  p.max_sigma2 = top(p.sigma2);
  p.max_minor_modulus = top(p.max_minor);
  return p;
}

inline void write_profile_csv(std::ostream& os, const EntanglementProfile& p) {
  const auto flags = os.flags();
  const auto prec = os.precision();
  os.precision(17);
  os << "t,entropy,product_distance\n";
  for (std::size_t i = 0; i < p.times.size(); ++i) {
    os << p.times[i] << ',' << p.entropy[i] << ',' << p.product_distance[i] << '\n';
  }
  os.flags(flags);
  os.precision(prec);
}

}  // namespace mereology
