#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "quasifree/checks.hpp"
#include "quasifree/riccati.hpp"
#include "quasifree/states.hpp"

using namespace qf;

namespace {

AngularOperator scalar_k(Complex v) {
  MatrixXcd m(1, 1);
  m << v;
  return AngularOperator(m);
}

QuadHamiltonianPQ oscillator(double w) {
  return QuadHamiltonianPQ(MatrixXd::Identity(1, 1), MatrixXd::Zero(1, 1),
                           MatrixXd(w * w * MatrixXd::Identity(1, 1)));
}

VectorXcd cv2(double a, double b) {
  VectorXcd v(2);
  v << Complex(a, 0), Complex(b, 0);
  return v;
}

}  // namespace

TEST_CASE("extended-real arithmetic follows the stated conventions") {
  const ExtReal inf = ExtReal::infinity();
  CHECK(inf.is_inf());
  CHECK((inf + inf).is_inf());
  CHECK((ExtReal(2.0) + inf).is_inf());
  CHECK(scale(0.0, inf).raw() == 0.0);  // 0 * inf = 0
  CHECK(scale(3.0, ExtReal(2.0)).finite() == 6.0);
  CHECK(inf.exp_quarter() == 0.0);      // exp(-inf) = 0
  CHECK(ExtReal(0.0).exp_quarter() == 1.0);
  CHECK_THROWS_AS(ExtReal(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(inf.finite(), std::domain_error);
}

TEST_CASE("block forms of the closed-form angular operators") {
  SUBCASE("oscillator") {
    const double w = 2.0;
    const double k = -(1.0 - w) / (1.0 + w);
    const ExtendedQuadraticForm r = r_from_k(scalar_k(k), Basis::PQ);
    MatrixXcd expected = MatrixXcd::Zero(2, 2);
    expected(0, 0) = 1.0 / (1.0 + w);
    expected(1, 1) = w / (1.0 + w);
    CHECK((r.r() - expected).norm() < 1e-14);
    CHECK(is_majorant(r));
    CHECK(is_minimal(r));
  }

  SUBCASE("free evolution, K = -1") {
    const ExtendedQuadraticForm r = r_from_k(scalar_k(-1.0), Basis::PQ);
    MatrixXcd expected = MatrixXcd::Zero(2, 2);
    expected(0, 0) = 1.0;
    CHECK((r.r() - expected).norm() < 1e-14);
  }

  SUBCASE("fock: K = 0 in the aa picture") {
    const ExtendedQuadraticForm r = r_from_k(scalar_k(0.0), Basis::AA);
    CHECK((r.r() - 0.5 * MatrixXcd::Identity(2, 2)).norm() < 1e-15);
    CHECK(is_minimal(r));
  }

  CHECK_THROWS_AS(scalar_k(1.5), std::invalid_argument);
}

TEST_CASE("majorant and minimality predicates") {
  // R = I is not a majorant in either picture: I - R - J*RJ = -I.
  const ExtendedQuadraticForm qzero_pq =
      ExtendedQuadraticForm::from_r(Basis::PQ, MatrixXcd::Identity(2, 2));
  const ExtendedQuadraticForm qzero_aa =
      ExtendedQuadraticForm::from_r(Basis::AA, MatrixXcd::Identity(2, 2));
  CHECK_FALSE(is_majorant(qzero_pq));
  CHECK_FALSE(is_majorant(qzero_aa));

  // R = I/2 in the aa picture is minimal.
  const ExtendedQuadraticForm half =
      ExtendedQuadraticForm::from_r(Basis::AA, MatrixXcd(0.5 * MatrixXcd::Identity(2, 2)));
  CHECK(is_minimal(half));

  // Scaled-down minimal majorants stay majorants but lose minimality.
  checks::Rng rng(2);
  for (int i = 0; i < 30; ++i) {
    const int n = 1 + static_cast<int>(rng() % 3);
    const ExtendedQuadraticForm minimal =
        r_from_k(AngularOperator(checks::random_contraction(rng, n, 1.0)), Basis::AA);
    CHECK(minimality_residual(minimal) <= 1e-10);
    const ExtendedQuadraticForm scaled =
        ExtendedQuadraticForm::from_r(Basis::AA, MatrixXcd(0.6 * minimal.r()));
    CHECK(is_majorant(scaled));
    CHECK_FALSE(is_minimal(scaled));
  }
}

TEST_CASE("eval of the closed forms, finite and infinite") {
  const double w = 2.0;
  const ExtendedQuadraticForm osc = r_from_k(scalar_k(-(1.0 - w) / (1.0 + w)), Basis::PQ);
  // q = w x_p² + x_q²/w.
  CHECK(osc.eval(cv2(1, 0)).finite() == doctest::Approx(w).epsilon(1e-12));
  CHECK(osc.eval(cv2(0, 1)).finite() == doctest::Approx(1.0 / w).epsilon(1e-12));
  CHECK(osc.eval(cv2(0.7, -0.3)).finite() ==
        doctest::Approx(w * 0.49 + 0.09 / w).epsilon(1e-12));

  const ExtendedQuadraticForm line = r_from_k(scalar_k(-1.0), Basis::PQ);
  CHECK(line.eval(cv2(1.3, 0)).finite() == doctest::Approx(0.0));
  CHECK(line.eval(cv2(1.3, 1e-3)).is_inf());
  CHECK(line.eval(cv2(0, 0)).finite() == 0.0);

  // Any form vanishes at 0.
  checks::Rng rng(9);
  const ExtendedQuadraticForm rand_form =
      r_from_k(AngularOperator(checks::random_contraction(rng, 2, 1.0)), Basis::AA);
  CHECK(rand_form.eval(VectorXcd::Zero(4)).finite() == 0.0);
}

TEST_CASE("domination of the symplectic form") {
  const PhaseVector f(Basis::PQ, VectorXd(cv2(1, 0).real()));
  const PhaseVector g(Basis::PQ, VectorXd(cv2(0, 1).real()));

  // Trivial form: q = inf off 0, dominates everything.
  const ExtendedQuadraticForm trivial =
      ExtendedQuadraticForm::from_r(Basis::PQ, MatrixXcd::Zero(2, 2));
  CHECK(dominates_s(trivial, f, g));

  // q = 0 fails at a pair with s != 0.
  const ExtendedQuadraticForm zero =
      ExtendedQuadraticForm::from_r(Basis::PQ, MatrixXcd::Identity(2, 2));
  CHECK_FALSE(dominates_s(zero, f, g));

  // The oscillator solution dominates over many random pairs.
  const ExtendedQuadraticForm osc = r_from_k(scalar_k(-1.0 / 3.0), Basis::PQ);
  checks::Rng rng(13);
  for (int i = 0; i < 10000; ++i) {
    const PhaseVector a(Basis::PQ, checks::random_real_vector(rng, 2));
    const PhaseVector b(Basis::PQ, checks::random_real_vector(rng, 2));
    CHECK(dominates_s(osc, a, b));
  }
}

TEST_CASE("invariance residual against closed-form flows") {
  const double w = 2.0;
  const Generator g = generator_pq(oscillator(w));
  const ExtendedQuadraticForm r = r_from_k(scalar_k(-(1.0 - w) / (1.0 + w)), Basis::PQ);
  for (double t : {0.3, 1.0, -2.2}) {
    CHECK(is_invariant(r, propagator(g, t)));
  }

  // The Fock form is not invariant under the dilation flow.
  const Generator dil = generator_pq(QuadHamiltonianPQ(
      MatrixXd::Zero(1, 1), -MatrixXd::Identity(1, 1), MatrixXd::Zero(1, 1)));
  const ExtendedQuadraticForm fock =
      ExtendedQuadraticForm::from_r(Basis::PQ, MatrixXcd(0.5 * MatrixXcd::Identity(2, 2)));
  CHECK_FALSE(is_invariant(fock, propagator(dil, 0.9)));

  // Anything is invariant under V = I.
  CHECK(is_invariant(fock, Propagator(Basis::PQ, MatrixXcd::Identity(2, 2), 0.0)));
}

TEST_CASE("reality condition and complexification round trip") {
  CHECK(reality_check(scalar_k(Complex(0.3, -0.8))));  // 1x1 is always symmetric
  MatrixXcd nonsym = MatrixXcd::Zero(2, 2);
  nonsym(0, 1) = 1.0;
  CHECK_FALSE(reality_check(AngularOperator(nonsym)));

  const double w = 2.0;
  for (Complex k : {Complex(-(1.0 - w) / (1.0 + w), 0.0),
                    -(Complex(1.0, -w) / Complex(1.0, w))}) {
    CHECK(reality_check(scalar_k(k)));
    const ExtendedQuadraticForm q = r_from_k(scalar_k(k), Basis::PQ);
    CHECK(is_real_compatible(q));
    const MatrixXd real_r = realify(q);
    const ExtendedQuadraticForm again = complexify(real_r);
    CHECK((again.r() - q.r()).norm() < 1e-13);
  }

  // An aa form built from a symmetric K is a cross-matrix, hence real.
  checks::Rng rng(21);
  const ExtendedQuadraticForm qaa =
      r_from_k(AngularOperator(checks::random_symmetric_contraction(rng, 2, 0.9)), Basis::AA);
  CHECK(is_real_compatible(qaa));
  CHECK(is_real_compatible(change_basis(qaa, Basis::PQ)));

  // Non-symmetric K: realify must refuse.
  MatrixXcd skew = MatrixXcd::Zero(2, 2);
  skew(0, 1) = 0.5;
  skew(1, 0) = -0.5;
  const ExtendedQuadraticForm bad = r_from_k(AngularOperator(skew), Basis::AA);
  CHECK_THROWS_AS(realify(bad), std::invalid_argument);
}

TEST_CASE("angular recovery and the basis similarity of the block forms") {
  checks::Rng rng(4);
  for (int i = 0; i < 40; ++i) {
    const int n = 1 + static_cast<int>(rng() % 3);
    const MatrixXcd k = checks::random_contraction(rng, n, 1.0);
    const ExtendedQuadraticForm raa = r_from_k(AngularOperator(k), Basis::AA);
    const ExtendedQuadraticForm rpq = r_from_k(AngularOperator(k), Basis::PQ);
    const MatrixXcd u = basis_unitary(n);
    CHECK((u * rpq.r() * u.adjoint() - raa.r()).norm() < 1e-12);
    CHECK((angular_of_minimal(raa).k - k).norm() < 1e-10);
    CHECK((angular_of_minimal(rpq).k - k).norm() < 1e-10);
  }
}

TEST_CASE("regularity is a strict-contraction property") {
  checks::Rng rng(6);
  for (int i = 0; i < 20; ++i) {
    const ExtendedQuadraticForm q =
        r_from_k(AngularOperator(checks::random_contraction(rng, 2, 0.9)), Basis::PQ);
    CHECK(q.domain_dim() == 4);
    for (int m = 0; m < 10; ++m) {
      CHECK(q.eval(VectorXcd(checks::random_real_vector(rng, 4).cast<Complex>())).is_finite());
    }
  }
}
