#pragma once

#include <optional>
#include <vector>

#include "quasifree/hamiltonian.hpp"

namespace qf {

// One momentum label of the pairing model: dispersion omega(p) and pairing
// amplitude delta(p), with omega and delta even in p.
struct ModeRecord {
  double p = 0.0;
  double omega = 0.0;
  double delta = 0.0;
  std::optional<int> epsilon;  // per-mode branch override, ±1
};

// Symmetric grid: every p has its -p partner with matching omega and delta.
class DispersionGrid {
 public:
  DispersionGrid(std::vector<ModeRecord> modes, int global_epsilon = +1);

  const std::vector<ModeRecord>& records() const { return modes_; }
  int global_epsilon() const { return global_epsilon_; }
  // Index of the -p partner of record i.
  int partner(int i) const { return partner_[i]; }

 private:
  std::vector<ModeRecord> modes_;
  std::vector<int> partner_;
  int global_epsilon_;
};

enum class ModeRegion {
  Zero,        // omega = delta = 0: any contraction works
  Trivial,     // delta = 0, omega != 0: k0 = 0
  Elliptic,    // omega² >= delta², delta != 0: real rotation, |k0| <= 1
  Hyperbolic,  // omega² < delta²: two unimodular branches
};

struct ModeSolution {
  double p = 0.0;
  ModeRegion region = ModeRegion::Zero;
  bool free_parameter = false;  // Zero region: k0 unconstrained
  Complex k0{0.0, 0.0};
  int epsilon = +1;
  double residual = 0.0;  // |-delta + 2 omega k0 - delta k0²|
};

// Closed-form per-mode angular function.
ModeSolution k0_of_mode(double p, double omega, double delta, int epsilon);

struct GridSummary {
  int zero = 0;
  int trivial = 0;
  int elliptic = 0;
  int hyperbolic = 0;
  bool continuum_of_states = false;  // some zero-region mode exists
  bool two_per_mode = false;         // hyperbolic modes carry two branches
};

struct GridClassification {
  std::vector<ModeSolution> modes;  // ordered by p ascending
  GridSummary summary;
};

GridClassification classify_grid(const DispersionGrid& grid);

// The 4x4 AA generator of one (p, -p) pair: S = diag(omega, omega),
// T = -delta * J0 with J0 the p <-> -p swap. Its graph solutions include
// the anti-diagonal K = [[0, k0], [k0, 0]] for each k0 branch.
Generator mode_block_generator(double omega, double delta);

}  // namespace qf
