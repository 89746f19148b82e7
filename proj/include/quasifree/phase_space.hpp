#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>

#include "quasifree/linalg.hpp"

namespace qf {

using la::Complex;
using la::MatrixXcd;
using la::MatrixXd;
using la::VectorXcd;
using la::VectorXd;

// Coefficient basis of phase space: momentum/position pairs (PQ) or
// creation/annihilation pairs (AA).
enum class Basis { PQ, AA };

std::string to_string(Basis b);

// A length-2N coefficient vector x_p ⊕ x_q (PQ) or u⁺ ⊕ u⁻ (AA).
// Real entries are only meaningful in the PQ basis; the AA basis is
// intrinsically complex. The basis tag is fixed at construction.
class PhaseVector {
 public:
  PhaseVector(Basis basis, VectorXcd entries);
  PhaseVector(Basis basis, const VectorXd& entries);

  Basis basis() const { return basis_; }
  const VectorXcd& entries() const { return v_; }
  int modes() const { return static_cast<int>(v_.size()) / 2; }

  bool is_real() const;
  // Real view; throws if any entry has a nonzero imaginary part.
  VectorXd real() const;

 private:
  Basis basis_;
  VectorXcd v_;
};

// Fundamental symmetry of the basis: J_pq = [[0,-I],[I,0]],
// J_aa = [[I,0],[0,-I]].
MatrixXcd metric_j(Basis basis, int modes);

// Coefficient transform PQ -> AA: u = U x with
// U = (1/sqrt2) [[iI, I], [-iI, I]]; unitary.
MatrixXcd basis_unitary(int modes);

// Symplectic form s(f,g) = (f, J_pq g)₀ with the plain bilinear dot
// product; defined for PQ vectors (real or complexified).
Complex symplectic_form(const PhaseVector& f, const PhaseVector& g);

// Indefinite product <u',u> = (u', J_aa u), conjugate-linear in the
// first slot; defined for AA vectors.
Complex indefinite_product(const PhaseVector& u1, const PhaseVector& u2);

// True iff the blocks satisfy T = [[Phi, Psi], [conj(Psi), conj(Phi)]]
// within the residual tolerance. Such operators are the complexifications
// of real PQ-picture maps.
bool is_cross_matrix(const MatrixXcd& m);

}  // namespace qf
