#pragma once

#include "quasifree/hamiltonian.hpp"

namespace qf {

// Finite-time flow V_t = exp(tG) (PQ) or exp(itG) (AA). Symplectic in the
// PQ basis; J-unitary and a cross-matrix in the AA basis.
class Propagator {
 public:
  Propagator(Basis basis, MatrixXcd v, double t);

  Basis basis() const { return basis_; }
  const MatrixXcd& matrix() const { return v_; }
  double time() const { return t_; }
  int modes() const { return static_cast<int>(v_.rows()) / 2; }

  // Residual of the defining invariant: ||VᵀJV - J|| (PQ) or
  // ||V*JV - J|| (AA).
  double metric_residual() const;

 private:
  Basis basis_;
  MatrixXcd v_;
  double t_;
};

Propagator propagator(const Generator& g, double t);

PhaseVector apply(const Propagator& v, const PhaseVector& x);

// Coefficient vectors map by u = Ux (PQ->AA) and back by x = U*u;
// generators satisfy i·G_aa = U·G_pq·U⁻¹; propagators map by plain
// similarity. Source basis must differ from the target.
PhaseVector change_basis(const PhaseVector& x, Basis target);
Generator change_basis(const Generator& g, Basis target);
Propagator change_basis(const Propagator& v, Basis target);

}  // namespace qf
