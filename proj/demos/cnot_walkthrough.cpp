// Walks through the C-NOT trajectory: entanglement in the reference TPS, the
// disentangling TPS, its Hamiltonian, the obstruction test and the optimizer.

#include <cmath>
#include <cstdio>
#include <string>

#include "mereology/mereology.hpp"
#include "mereology/reference_cases.hpp"

using namespace mereology;

int main() {
  const TrigTrajectory traj = cases::cnot_trajectory();
  const SampledTrajectory grid = sample_trig(traj, 101);
  const TPSpec reference = TPSpec::identity(cases::kQubits);
  const TPSpec disentangler = make_tps(cases::cnot_disentangler(), cases::kQubits);

  const auto before = entanglement_profile(grid, reference);
  const auto after = entanglement_profile(grid, disentangler);
  std::printf("max entropy, reference TPS:     %.6f (ln 2 = %.6f)\n", before.max_entropy, std::log(2.0));
  std::printf("max entropy, disentangling TPS: %.3e\n", after.max_entropy);

  const MatrixXcd h = rebase_operator(disentangler, cases::cnot_hamiltonian());
  const auto split = separable_projection(h, cases::kQubits);
  std::printf("interaction norm after rebasing: %.3e, trace part %.3f\n", split.interaction_norm, split.trace_part);
  const MatrixXcd diag = cases::eigenbasis_hamiltonian();
  std::printf("eigenbasis: interaction norm %.6f, stationarity gradient %.3e\n", interaction_norm(diag, cases::kQubits),
              stationarity_gradient(diag, cases::kQubits));

  const auto cnot_cert = certify_no_disentangling(sample_trig(traj, 400));
  const auto sidon_cert = certify_no_disentangling(sample_trig(cases::sidon_trajectory(), 400));
  std::printf("certificate C-NOT: %s (rank %d/%d)\n", std::string(to_string(cnot_cert.verdict)).c_str(),
              cnot_cert.numerical_rank, cnot_cert.full_rank);
  std::printf("certificate Sidon: %s (rank %d/%d)\n", std::string(to_string(sidon_cert.verdict)).c_str(),
              sidon_cert.numerical_rank, sidon_cert.full_rank);

  const auto built = construct_disentangler(traj);
  std::printf("constructor: %s at restart %d, max sigma_2 %.3e\n", std::string(to_string(built.status)).c_str(),
              built.restart, built.verification.max_sigma2);

  OptimizerConfig config;
  config.restarts = 4;
  const auto best = optimize_tps(sample_trig(traj, 200), config);
  std::printf("optimizer: worst product distance %.3e (restart %d)\n", best.objective, best.restart_index);
  return 0;
}
