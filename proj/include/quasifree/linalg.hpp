#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace qf::la {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;
using Complex = std::complex<double>;

// exp(A) by Padé approximation with scaling and squaring (Higham 2005).
// Accurate to ~1e-13 relative for the desk-scale norms used here.
MatrixXcd expm(const MatrixXcd& a);

// Largest singular value.
double opnorm(const MatrixXcd& a);

// Orthonormal basis of the column span (thin Q of a Householder QR).
MatrixXcd orthonormal_columns(const MatrixXcd& x);

// Orthonormal basis of the null space, singular values below
// rel_tol * sigma_max (or an absolute floor for the zero matrix).
MatrixXcd null_space(const MatrixXcd& a, double rel_tol);

// Numerical rank at the same threshold rule.
int rank(const MatrixXcd& a, double rel_tol);

// Complex Schur form a = q t q^* with machinery to reorder eigenvalues.
struct SchurForm {
  MatrixXcd q;  // unitary
  MatrixXcd t;  // upper triangular

  VectorXcd eigenvalues() const { return t.diagonal(); }

  // Swap the diagonal entries at positions k and k+1 by a unitary
  // similarity, keeping t triangular and updating q.
  void swap_adjacent(int k);

  // Bring the diagonal entries listed in `select` (indices into the
  // current ordering) to the leading positions, preserving their
  // relative order. Leading select.size() columns of q then span the
  // corresponding invariant subspace.
  void reorder_to_front(std::vector<int> select);
};

SchurForm schur(const MatrixXcd& a);

}  // namespace qf::la
