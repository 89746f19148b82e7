#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "quasifree/checks.hpp"
#include "quasifree/riccati.hpp"
#include "quasifree/states.hpp"

using namespace qf;

namespace {

QuadHamiltonianPQ pq_ham(double m, double l, double k) {
  return QuadHamiltonianPQ(MatrixXd(m * MatrixXd::Identity(1, 1)),
                           MatrixXd(l * MatrixXd::Identity(1, 1)),
                           MatrixXd(k * MatrixXd::Identity(1, 1)));
}

VectorXd v2(double a, double b) {
  VectorXd v(2);
  v << a, b;
  return v;
}

MatrixXcd line_projector(double a, double b) {
  // R of the state supported (with q = 0) on span{(a, b)}.
  VectorXd v = v2(a, b);
  v.normalize();
  return (v * v.transpose()).cast<Complex>();
}

}  // namespace

TEST_CASE("named states and their characteristic values") {
  const QuadraticState fock = fock_state(1);
  CHECK(fock.char_fn(v2(1, 1)) == doctest::Approx(std::exp(-0.5)).epsilon(1e-14));
  CHECK(fock.char_fn(v2(0, 0)) == 1.0);

  const QuadraticState delta0 = trivial_state(1);
  CHECK(delta0.char_fn(v2(0.3, 0)) == 0.0);
  CHECK(delta0.char_fn(v2(0, 0)) == 1.0);

  // The oscillator invariant state at w = 2: chi = exp(-(2x_p² + x_q²/2)/4).
  MatrixXcd k(1, 1);
  k << 1.0 / 3.0;
  const QuadraticState osc(r_from_k(AngularOperator(k), Basis::PQ));
  CHECK(osc.char_fn(v2(1.0, -0.5)) ==
        doctest::Approx(std::exp(-(2.0 + 0.125) / 4.0)).epsilon(1e-12));
}

TEST_CASE("state constructor rejects non-states") {
  // q = 0 is not a majorant.
  CHECK_THROWS_AS(QuadraticState(ExtendedQuadraticForm::from_r(Basis::PQ, MatrixXcd::Identity(2, 2))),
                  std::invalid_argument);
  // aa-basis forms are not accepted directly.
  CHECK_THROWS_AS(
      QuadraticState(ExtendedQuadraticForm::from_r(Basis::AA, MatrixXcd(0.5 * MatrixXcd::Identity(2, 2)))),
      std::invalid_argument);
}

TEST_CASE("pullback matches direct evaluation along the flow") {
  const double w = 2.0;
  const Generator g = generator_pq(pq_ham(1.0, 0.0, w * w));
  const QuadraticState fock = fock_state(1);
  checks::Rng rng(3);
  std::uniform_real_distribution<double> tdist(-5.0, 5.0);
  std::uniform_real_distribution<double> xdist(-2.0, 2.0);
  for (int i = 0; i < 20; ++i) {
    const double t = tdist(rng);
    const Propagator v = propagator(g, t);
    const QuadraticState evolved = pullback(fock, v);
    const double xp = xdist(rng), xq = xdist(rng);
    // The rotated gaussian, written out.
    const double c = std::cos(w * t), s = std::sin(w * t);
    const double a = c * xp + s / w * xq;
    const double b = -w * s * xp + c * xq;
    const double expected = std::exp(-(a * a + b * b) / 4.0);
    CHECK(std::abs(evolved.char_fn(v2(xp, xq)) - expected) < 1e-10);
    // Identity pullback changes nothing.
    const QuadraticState same = pullback(fock, Propagator(Basis::PQ, MatrixXcd::Identity(2, 2), 0.0));
    CHECK(same.char_fn(v2(xp, xq)) == doctest::Approx(fock.char_fn(v2(xp, xq))).epsilon(1e-14));
  }
}

TEST_CASE("pullback group law, including a non-regular state") {
  checks::Rng rng(5);
  const Generator g = generator_pq(checks::random_hamiltonian_pq(rng, 2, 0.8));
  const QuadraticState w = checks::random_regular_state(rng, 2, 0.9);
  // A non-regular state: infinite direction along e_q of the first mode.
  MatrixXcd r0 = MatrixXcd::Zero(4, 4);
  r0(0, 0) = 0.5;
  r0(1, 1) = 0.4;
  r0(2, 2) = 0.0;  // infinite direction
  r0(3, 3) = 0.6;
  const QuadraticState nonreg{[&] {
    // Build a majorant with one infinite direction by flattening a
    // minimal one.
    MatrixXcd k(2, 2);
    k << 1.0, 0.0, 0.0, 0.3;
    return ExtendedQuadraticForm(r_from_k(AngularOperator(k), Basis::PQ));
  }()};
  for (const QuadraticState& state : {w, nonreg}) {
    for (double t : {0.4, -1.1}) {
      for (double s : {0.7, -0.2}) {
        const QuadraticState two_step =
            pullback(pullback(state, propagator(g, t)), propagator(g, s));
        const QuadraticState one_step = pullback(state, propagator(g, t + s));
        for (int i = 0; i < 10; ++i) {
          const VectorXd f = checks::random_real_vector(rng, 4);
          CHECK(std::abs(two_step.char_fn(f) - one_step.char_fn(f)) < 1e-8);
        }
      }
    }
  }
}

TEST_CASE("time limit of the fock state under the free evolution") {
  const Generator g = generator_pq(pq_ham(1.0, 0.0, 0.0));
  const QuadraticState fock = fock_state(1);
  for (int dir : {+1, -1}) {
    const LimitReport rep = time_limit(fock, g, dir);
    REQUIRE(rep.has_limit);
    const QuadraticState& lim = *rep.limit;
    // chi_inf(x_p, 0) = exp(-x_p²/4); 0 off the line.
    CHECK(std::abs(lim.char_fn(v2(1.0, 0.0)) - std::exp(-0.25)) < 1e-9);
    CHECK(std::abs(lim.char_fn(v2(-2.0, 0.0)) - std::exp(-1.0)) < 1e-9);
    CHECK(lim.char_fn(v2(0.3, 0.5)) == 0.0);
    // The limit is a state but not pure: majorant, not minimal.
    CHECK(is_majorant(lim.form()));
    CHECK_FALSE(is_minimal(lim.form()));
    // R of the limit is diag(1/2, 0).
    MatrixXcd expected = MatrixXcd::Zero(2, 2);
    expected(0, 0) = 0.5;
    CHECK((lim.form().r() - expected).norm() < 1e-8);
  }
}

TEST_CASE("time limits under the dilation flow, fock and random regular") {
  const Generator g = generator_pq(pq_ham(0.0, -1.0, 0.0));
  checks::Rng rng(8);
  std::vector<QuadraticState> states;
  states.push_back(fock_state(1));
  for (int i = 0; i < 10; ++i) states.push_back(checks::random_regular_state(rng, 1, 0.9));
  for (const auto& w : states) {
    const LimitReport plus = time_limit(w, g, +1);
    REQUIRE(plus.has_limit);
    CHECK((plus.limit->form().r() - line_projector(1, 0)).norm() < 1e-8);
    const LimitReport minus = time_limit(w, g, -1);
    REQUIRE(minus.has_limit);
    CHECK((minus.limit->form().r() - line_projector(0, 1)).norm() < 1e-8);
  }
}

TEST_CASE("two-mode limit with a plane of support") {
  // Mode 1 is the dilation flow, mode 2 the free evolution: as t -> +inf
  // the fock state localizes on span{e_p1, e_p2}, carrying q = x_p2² there
  // (the dilation direction contracts to q = 0, the shear leaves x_p2).
  MatrixXd m = MatrixXd::Zero(2, 2), l = MatrixXd::Zero(2, 2), k = MatrixXd::Zero(2, 2);
  m(1, 1) = 1.0;
  l(0, 0) = -1.0;
  const Generator g = generator_pq(QuadHamiltonianPQ(m, l, k));
  const LimitReport rep = time_limit(fock_state(2), g, +1);
  REQUIRE(rep.has_limit);
  MatrixXcd expected = MatrixXcd::Zero(4, 4);
  expected(0, 0) = 1.0;  // q = 0 along e_p1
  expected(1, 1) = 0.5;  // q = x_p2² along e_p2
  CHECK((rep.limit->form().r() - expected).norm() < 1e-8);
  CHECK(is_majorant(rep.limit->form()));
  CHECK_FALSE(is_minimal(rep.limit->form()));

  VectorXd f(4);
  f << 0.4, 1.0, 0.0, 0.0;
  CHECK(std::abs(rep.limit->char_fn(f) - std::exp(-0.25)) < 1e-8);
  f << 0.4, 1.0, 0.3, 0.0;
  CHECK(rep.limit->char_fn(f) == 0.0);
}

TEST_CASE("no limit for the oscillator at w = 2, but a fixed point at w = 1") {
  const QuadraticState fock = fock_state(1);
  const LimitReport rep = time_limit(fock, generator_pq(pq_ham(1.0, 0.0, 4.0)), +1);
  CHECK_FALSE(rep.has_limit);

  // At w = 1 the fock state is itself invariant, so the limit is fock.
  const LimitReport fixed = time_limit(fock, generator_pq(pq_ham(1.0, 0.0, 1.0)), +1);
  REQUIRE(fixed.has_limit);
  CHECK((fixed.limit->form().r() - 0.5 * MatrixXcd::Identity(2, 2)).norm() < 1e-8);
}

TEST_CASE("positivity sampling") {
  CHECK(positivity_suite(fock_state(2), 100, 7).all_psd);
  CHECK(positivity_suite(trivial_state(1), 100, 7).all_psd);
  checks::Rng rng(19);
  CHECK(positivity_suite(checks::random_regular_state(rng, 2, 0.95), 200, 11).all_psd);
}

TEST_CASE("one-mode descriptions") {
  MatrixXcd k(1, 1);
  k << 1.0 / 3.0;
  CHECK(describe_form_1mode(r_from_k(AngularOperator(k), Basis::PQ)) ==
        "q = 2 x_p^2 + 0.5 x_q^2");
  CHECK(describe_form_1mode(trivial_state(1).form()) ==
        "q = infinity off 0 (trivial state form)");
  k << -1.0;
  CHECK(describe_form_1mode(r_from_k(AngularOperator(k), Basis::PQ)) == "support: x_q = 0");
}
