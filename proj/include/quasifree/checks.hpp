#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "quasifree/momentum.hpp"
#include "quasifree/riccati.hpp"
#include "quasifree/states.hpp"
#include "quasifree/weyl.hpp"

namespace qf::checks {

struct CheckResult {
  std::string name;
  bool pass = false;
  double worst = 0.0;  // worst residual / margin seen, property-specific
  std::string detail;
};

// Seeded random inputs used by the property suite (and tests).
using Rng = std::mt19937_64;

QuadHamiltonianPQ random_hamiltonian_pq(Rng& rng, int modes, double scale = 1.0);
QuadHamiltonianAA random_hamiltonian_aa(Rng& rng, int modes, double scale = 1.0);
MatrixXcd random_contraction(Rng& rng, int modes, double max_norm);
// Contraction with Kᵀ = K, so the derived PQ form is a real state.
MatrixXcd random_symmetric_contraction(Rng& rng, int modes, double max_norm);
VectorXd random_real_vector(Rng& rng, int size, double scale = 1.0);
// Random regular quadratic state (minimal majorant, ||K|| <= max_norm < 1).
QuadraticState random_regular_state(Rng& rng, int modes, double max_norm = 0.9);

// Full invariant suite; trials_scale multiplies the per-check sample
// counts (1 = the documented defaults).
std::vector<CheckResult> run_all_checks(std::uint64_t seed, int trials_scale = 1);

}  // namespace qf::checks
