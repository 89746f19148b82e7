#pragma once

#include "quasifree/dynamics.hpp"
#include "quasifree/extended_real.hpp"

namespace qf {

// N x N contraction K whose graph {x ⊕ Kx} is a maximal positive
// subspace; parametrizes minimal majorants.
struct AngularOperator {
  MatrixXcd k;

  explicit AngularOperator(MatrixXcd k_in);
  int modes() const { return static_cast<int>(k.rows()); }
  double norm() const { return la::opnorm(k); }
};

// ||Kᵀ - K|| small: the condition K* = conj(K) under which the minimal
// majorant is the complexification of a real form (a physical state).
bool reality_check(const AngularOperator& k);

// Extended-valued quadratic form q : phase space -> [0, inf], held via
// its contraction R (0 <= R <= I, self-adjoint): q = ||Q^{1/2} x||² with
// Q = R⁻¹ - I on Ran R and q = inf off the closure of Ran R.
class ExtendedQuadraticForm {
 public:
  static ExtendedQuadraticForm from_r(Basis basis, const MatrixXcd& r);

  // R assembled from an orthonormal domain basis (2N x d) and the finite
  // form operator on it (d x d hermitian PSD): R = W (I + Q)⁻¹ W*.
  static ExtendedQuadraticForm from_domain_operator(Basis basis, const MatrixXcd& domain,
                                                    const MatrixXcd& op);

  Basis basis() const { return basis_; }
  int modes() const { return static_cast<int>(r_.rows()) / 2; }
  const MatrixXcd& r() const { return r_; }

  // Eigen cache of R, ascending eigenvalues.
  const VectorXd& r_eigenvalues() const { return evals_; }
  const MatrixXcd& r_eigenvectors() const { return evecs_; }

  int domain_dim() const { return domain_dim_; }
  // Columns spanning the form domain (eigenvalues above the kernel cut).
  MatrixXcd domain_basis() const;
  // Columns spanning the infinite directions.
  MatrixXcd kernel_basis() const;
  // Finite-form operator in the domain_basis coordinates: diag(1/r - 1).
  VectorXd domain_operator_diagonal() const;

  ExtReal eval(const VectorXcd& f) const;
  ExtReal eval(const PhaseVector& f) const;

 private:
  ExtendedQuadraticForm(Basis basis, MatrixXcd r);

  Basis basis_;
  MatrixXcd r_;
  VectorXd evals_;
  MatrixXcd evecs_;
  int domain_dim_;
};

// Half-identity block forms: the minimal majorant attached to an
// angular operator, in either basis.
ExtendedQuadraticForm r_from_k(const AngularOperator& k, Basis basis);

// Recover K from a minimal majorant (2x lower-left block in the AA basis).
AngularOperator angular_of_minimal(const ExtendedQuadraticForm& q);

// Majorant predicates: R + J*RJ <= I (majorant), = I (minimal), with
// J* = -J in the PQ basis and J* = J in the AA basis.
double minimality_residual(const ExtendedQuadraticForm& q);
bool is_majorant(const ExtendedQuadraticForm& q);
bool is_minimal(const ExtendedQuadraticForm& q);

// Pointwise 2|s(f,g)| <= q(f) + q(g) with infinity absorbing; f, g real PQ.
bool dominates_s(const ExtendedQuadraticForm& q, const PhaseVector& f, const PhaseVector& g);

// Invariance of q under V, tested as (I-R)VR = RV^{-*}(I-R).
double invariance_residual(const ExtendedQuadraticForm& q, const Propagator& v);
bool is_invariant(const ExtendedQuadraticForm& q, const Propagator& v);

// R = CRC tests: entrywise-real R in the PQ basis, cross-matrix R in the
// AA basis. Such forms are complexifications of real forms.
bool is_real_compatible(const ExtendedQuadraticForm& q);

// The real form behind a real-compatible PQ form (its R, entrywise real).
MatrixXd realify(const ExtendedQuadraticForm& q);

// q_C(f + ig) = q(f) + q(g): the complexification of a real PQ form.
ExtendedQuadraticForm complexify(const MatrixXd& r_real);

// U-similarity between the two block pictures.
ExtendedQuadraticForm change_basis(const ExtendedQuadraticForm& q, Basis target);

}  // namespace qf
