#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "quasifree/quadratic_form.hpp"

namespace qf {

// Finite complex combination of Weyl symbols eps^f over real PQ vectors,
// with the relations eps^f eps^g = exp(-is(f,g)/2) eps^{f+g} and
// (eps^f)* = eps^{-f}. Exponent vectors closer than the rounding quantum
// merge into one term, so symbols stay stable under the arithmetic noise
// of repeated sums. Words stay small, so lookup is a linear scan.
class WeylWord {
 public:
  explicit WeylWord(int modes);

  static WeylWord unit(int modes);                 // eps^0
  static WeylWord symbol(const VectorXd& f, Complex coeff = 1.0);

  int modes() const { return modes_; }
  int term_count() const { return static_cast<int>(terms_.size()); }

  WeylWord& add_term(const VectorXd& f, Complex coeff);
  Complex coeff_at(const VectorXd& f) const;

  struct Term {
    VectorXd vector;
    Complex coeff;
  };
  // Terms in a canonical (entrywise lexicographic) order.
  std::vector<Term> terms() const;

 private:
  int modes_;
  std::vector<Term> terms_;
};

// Bilinear extension of the cocycle product.
WeylWord weyl_mul(const WeylWord& a, const WeylWord& b);

// Conjugate-linear involution.
WeylWord weyl_star(const WeylWord& w);

// Strictly upper triangular 3x3 with a at (1,2), b at (2,3), c at (1,3);
// [A,B] is central, so exp(t(A+B)) = exp(tA) exp(tB) exp(-t²/2 [A,B]).
struct HeisenbergTriple {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  Eigen::Matrix3d matrix() const;
};

// Residual of the displaced-exponential identity in the 3x3 representation.
double bch_check(const HeisenbergTriple& a, const HeisenbergTriple& b, double t);

// A_jk = omega(eps^{f_j}* eps^{f_k}) = exp(is(f_j,f_k)/2) exp(-q(f_k-f_j)/4)
// for the quadratic functional with form q; hermitian, and PSD exactly when
// q majorizes s on the sampled span.
MatrixXcd gram_matrix(const ExtendedQuadraticForm& q, const std::vector<VectorXd>& points);

// omega applied to a word: the linear extension of eps^f -> exp(-q(f)/4).
Complex apply_functional(const ExtendedQuadraticForm& q, const WeylWord& w);

struct PositivityWitness {
  std::vector<VectorXd> points;
  double min_eigenvalue = 0.0;
  VectorXd pair_f;  // the majorant-violating pair that seeded the search
  VectorXd pair_g;
};

// For a q that is not a majorant: search random pairs for the strongest
// violation of 2|s(f,g)| <= q(f)+q(g), then scan point sets built from the
// winning pair for a Gram matrix with a negative eigenvalue.
std::optional<PositivityWitness> find_positivity_witness(const ExtendedQuadraticForm& q,
                                                         int trials, std::uint64_t seed);

}  // namespace qf
