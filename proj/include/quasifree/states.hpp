#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "quasifree/quadratic_form.hpp"

namespace qf {

// Quadratic (quasi-free-like) state: characteristic functional
// chi(f) = exp(-q(f)/4) for an extended-valued majorant q, held in the
// PQ basis with R = CRC (a real state). Non-regular states are the ones
// whose q takes the value infinity.
class QuadraticState {
 public:
  explicit QuadraticState(ExtendedQuadraticForm q);

  const ExtendedQuadraticForm& form() const { return q_; }
  int modes() const { return q_.modes(); }

  double char_fn(const PhaseVector& f) const;
  double char_fn(const VectorXd& f) const;

 private:
  ExtendedQuadraticForm q_;
};

// chi(f) = exp(-|f|²/4), the standard Fock state (R = I/2).
QuadraticState fock_state(int modes);

// The indicator of f = 0 (R = 0); invariant under every Bogoliubov
// transformation.
QuadraticState trivial_state(int modes);

// State with form q∘V: the pullback under the Bogoliubov transformation
// of a real symplectic propagator.
QuadraticState pullback(const QuadraticState& w, const Propagator& v);

enum class ProbeClass { Converged, Decayed, Indeterminate };

struct ProbeRecord {
  VectorXd direction;
  std::vector<double> values;  // chi(V_t f) along the doubling schedule
  ProbeClass classification = ProbeClass::Indeterminate;
  double limit_value = 0.0;  // meaningful for Converged
};

struct LimitReport {
  int direction = +1;  // sign of t -> ±infinity
  std::vector<ProbeRecord> probes;
  bool has_limit = false;
  std::optional<QuadraticState> limit;
  std::string note;
};

struct TimeLimitOptions {
  int random_probes = 8;
  std::uint64_t seed = 12345;
  int max_doublings = 20;  // schedule t = 1, 2, ..., 2^max_doublings
};

// Pointwise limit of chi(V_t f) as t -> direction * infinity along the
// doubling schedule, over canonical, Schur/eigen and random probe
// directions. When the convergent directions span a subspace carrying a
// finite quadratic form and everything off it decays, the limit state is
// assembled and cross-checked against every probe.
LimitReport time_limit(const QuadraticState& w, const Generator& g, int direction,
                       const TimeLimitOptions& opt = {});

struct PositivityReport {
  int trials = 0;
  double min_relative_eigenvalue = 0.0;  // min over sets of min_eig / ||A||
  bool all_psd = true;
};

// Gram-matrix PSD sampling over random point sets of sizes 2..6.
PositivityReport positivity_suite(const QuadraticState& w, int trials, std::uint64_t seed);

// N=1 description of a state: finite coefficients of x_p², x_p x_q, x_q²
// plus the support line of an infinite direction, e.g.
// "q = 2 x_p^2 + 0.5 x_q^2" or "support: -2 x_p + x_q = 0".
std::string describe_form_1mode(const ExtendedQuadraticForm& q);

}  // namespace qf
