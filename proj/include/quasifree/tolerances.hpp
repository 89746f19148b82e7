#pragma once

namespace qf::tol {

// Global multiplier for residual tolerances. Exploratory CLI runs may widen
// it (QUASIFREE_TOL_SCALE); the `check` command always pins it back to 1.
double scale();
void set_scale(double s);

// Input symmetry/hermiticity checks on user-supplied matrices.
inline double sym(double norm) { return 1e-12 * (1.0 + norm); }

// Residual checks on computed quantities.
inline double res(double norm) { return 1e-9 * (1.0 + norm) * scale(); }

// Relative eigenvalue cutoff separating a form's domain from its
// infinite directions.
inline constexpr double kernel_cut = 1e-10;

// Rounding quantum for Weyl-word keys.
inline constexpr double key_quantum = 1e-12;

// Eigenvalues closer than this (relative to the operand norm) are one cluster.
inline constexpr double cluster_rel = 1e-8;

// Angular-operator deduplication.
inline double dedupe(double norm) { return 1e-8 * (1.0 + norm); }

}  // namespace qf::tol
