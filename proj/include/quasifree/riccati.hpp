#pragma once

#include <vector>

#include "quasifree/quadratic_form.hpp"

namespace qf {

// Graph-invariance problem for an AA-basis block operator
// [[A, B], [C, D]]: find all contractions K with
// C + DK = K(A + BK). For a generator the blocks are those of G_aa;
// for a propagator those of V.
class RiccatiProblem {
 public:
  enum class Mode { Generator, Propagator };

  static RiccatiProblem from_generator(const Generator& g);
  static RiccatiProblem from_propagator(const Propagator& v);

  Mode mode() const { return mode_; }
  const MatrixXcd& operand() const { return op_; }
  int modes() const { return static_cast<int>(op_.rows()) / 2; }

  MatrixXcd a() const;
  MatrixXcd b() const;
  MatrixXcd c() const;
  MatrixXcd d() const;

 private:
  RiccatiProblem(Mode mode, MatrixXcd op);
  Mode mode_;
  MatrixXcd op_;
};

// Frobenius norm of C + DK - KA - KBK.
double residual(const RiccatiProblem& p, const MatrixXcd& k);

struct Solution {
  AngularOperator k;
  bool on_unit_sphere;   // ||K|| = 1
  bool real_symmetric;   // Kᵀ = K (state-reality condition)
  double residual;
};

struct SolutionSet {
  std::vector<Solution> solutions;
  bool unique = false;      // exactly one solution and enumeration complete
  bool continuum = false;   // every ||K|| <= 1 solves (operand is scalar)
  bool incomplete = false;  // clusters admitting non-enumerated subspaces
};

// All roots of the N=1 scalar equation (quadratic, linear, or identically
// zero) with |K| <= 1.
SolutionSet solve_scalar(const RiccatiProblem& p);

// Enumerates invariant graph subspaces through Schur-form eigenvalue
// reordering: whole eigenvalue clusters, plus leading partial chains of
// clusters with geometric multiplicity one. Subspaces whose top block is
// not invertible (not graphs over H+) are discarded; solutions are
// filtered to ||K|| <= 1, deduplicated and sorted canonically.
SolutionSet solve_spectral(const RiccatiProblem& p, int max_modes = 6);

}  // namespace qf
