#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "quasifree/checks.hpp"
#include "quasifree/states.hpp"
#include "quasifree/weyl.hpp"

using namespace qf;

namespace {
VectorXd v2(double a, double b) {
  VectorXd v(2);
  v << a, b;
  return v;
}
}  // namespace

TEST_CASE("cocycle product, hand-checked sign") {
  // eps^{(1,0)} eps^{(0,1)} = exp(-i s((1,0),(0,1))/2) eps^{(1,1)} with
  // s = -1, so the phase is exp(i/2).
  const WeylWord a = WeylWord::symbol(v2(1, 0));
  const WeylWord b = WeylWord::symbol(v2(0, 1));
  const WeylWord ab = weyl_mul(a, b);
  CHECK(ab.term_count() == 1);
  CHECK(std::abs(ab.coeff_at(v2(1, 1)) - std::exp(Complex(0.0, 0.5))) < 1e-15);

  // eps^f eps^{-f} = eps^0 since s(f, f) = 0.
  const WeylWord c = weyl_mul(WeylWord::symbol(v2(0.3, -1.2)), WeylWord::symbol(v2(-0.3, 1.2)));
  CHECK(c.term_count() == 1);
  CHECK(std::abs(c.coeff_at(v2(0, 0)) - Complex(1.0, 0.0)) < 1e-15);

  // eps^0 is the unit on sums.
  WeylWord sum(1);
  sum.add_term(v2(1, 0), Complex(2.0, 0.0));
  sum.add_term(v2(0, 1), Complex(0.0, 1.0));
  const WeylWord same = weyl_mul(sum, WeylWord::unit(1));
  CHECK(std::abs(same.coeff_at(v2(1, 0)) - Complex(2.0, 0.0)) < 1e-15);
  CHECK(std::abs(same.coeff_at(v2(0, 1)) - Complex(0.0, 1.0)) < 1e-15);

  CHECK_THROWS_AS(weyl_mul(WeylWord::unit(1), WeylWord::unit(2)), std::invalid_argument);
}

TEST_CASE("involution") {
  const WeylWord w = WeylWord::symbol(v2(0.5, -2.0), Complex(1.0, 3.0));
  const WeylWord star = weyl_star(w);
  CHECK(std::abs(star.coeff_at(v2(-0.5, 2.0)) - Complex(1.0, -3.0)) < 1e-15);
  const WeylWord unit_star = weyl_star(WeylWord::unit(1));
  CHECK(std::abs(unit_star.coeff_at(v2(0, 0)) - Complex(1.0, 0.0)) < 1e-15);

  checks::Rng rng(5);
  for (int i = 0; i < 20; ++i) {
    WeylWord a(1), b(1);
    a.add_term(checks::random_real_vector(rng, 2), Complex(1.0, -0.5));
    a.add_term(checks::random_real_vector(rng, 2), Complex(0.2, 0.7));
    b.add_term(checks::random_real_vector(rng, 2), Complex(-1.0, 0.1));
    const WeylWord lhs = weyl_star(weyl_mul(a, b));
    const WeylWord rhs = weyl_mul(weyl_star(b), weyl_star(a));
    for (const auto& t : lhs.terms()) {
      CHECK(std::abs(t.coeff - rhs.coeff_at(t.vector)) < 1e-12);
    }
  }
}

TEST_CASE("displaced-exponential identity in the 3x3 representation") {
  CHECK(bch_check({1, 0, 0}, {0, 1, 0}, 1.0) < 1e-12);
  CHECK(bch_check({0.7, -0.4, 1.1}, {0, 0, 0}, 2.3) < 1e-14);
  CHECK(bch_check({0.7, -0.4, 1.1}, {-0.2, 0.9, 0.0}, 0.0) == 0.0);

  checks::Rng rng(17);
  std::uniform_real_distribution<double> coeff(-2.0, 2.0);
  std::uniform_real_distribution<double> tdist(-5.0, 5.0);
  for (int i = 0; i < 50; ++i) {
    const HeisenbergTriple a{coeff(rng), coeff(rng), coeff(rng)};
    const HeisenbergTriple b{coeff(rng), coeff(rng), coeff(rng)};
    const double t = tdist(rng);
    CHECK(bch_check(a, b, t) <=
          1e-12 * std::exp(std::abs(t) * (a.matrix().norm() + b.matrix().norm())));
  }
}

TEST_CASE("gram matrices of the named states") {
  // Single point f = 0.
  const QuadraticState fock = fock_state(1);
  const MatrixXcd single = gram_matrix(fock.form(), {v2(0, 0)});
  CHECK(std::abs(single(0, 0) - Complex(1.0, 0.0)) < 1e-15);

  // Trivial state over {0, f}: exactly the identity.
  const QuadraticState delta0 = trivial_state(1);
  const MatrixXcd tri = gram_matrix(delta0.form(), {v2(0, 0), v2(0.4, -1.0)});
  CHECK((tri - MatrixXcd::Identity(2, 2)).norm() < 1e-15);

  // Fock state: PSD on random point sets.
  checks::Rng rng(23);
  for (int i = 0; i < 30; ++i) {
    std::vector<VectorXd> pts;
    const int m = 2 + static_cast<int>(rng() % 5);
    for (int j = 0; j < m; ++j) pts.push_back(checks::random_real_vector(rng, 2));
    const MatrixXcd a = gram_matrix(fock.form(), pts);
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es((a + a.adjoint()) / 2.0);
    CHECK(es.eigenvalues().minCoeff() >= -1e-9 * la::opnorm(a));
  }
}

TEST_CASE("gram entries equal the functional applied to word products") {
  // Independent route: A_jk = omega(eps^{f_j}* eps^{f_k}) computed with
  // the word arithmetic itself.
  checks::Rng rng(31);
  const QuadraticState w = checks::random_regular_state(rng, 1, 0.8);
  std::vector<VectorXd> pts;
  for (int j = 0; j < 4; ++j) pts.push_back(checks::random_real_vector(rng, 2));
  const MatrixXcd a = gram_matrix(w.form(), pts);
  for (int j = 0; j < 4; ++j) {
    for (int k = 0; k < 4; ++k) {
      const WeylWord prod =
          weyl_mul(weyl_star(WeylWord::symbol(pts[j])), WeylWord::symbol(pts[k]));
      const Complex direct = apply_functional(w.form(), prod);
      CHECK(std::abs(a(j, k) - direct) < 1e-12);
    }
  }
}

TEST_CASE("witness search finds non-majorants") {
  // q = 0 everywhere (R = I).
  const auto w1 = find_positivity_witness(
      ExtendedQuadraticForm::from_r(Basis::PQ, MatrixXcd::Identity(2, 2)), 1000, 99);
  REQUIRE(w1.has_value());
  CHECK(w1->min_eigenvalue < 0.0);

  // Uncertainty-violating gaussian: R = 0.75 I, q = |f|²/3.
  const auto w2 = find_positivity_witness(
      ExtendedQuadraticForm::from_r(Basis::PQ, MatrixXcd(0.75 * MatrixXcd::Identity(2, 2))),
      1000, 99);
  REQUIRE(w2.has_value());
  CHECK(w2->min_eigenvalue < 0.0);

  // A genuine majorant yields no violating pair at all.
  checks::Rng rng(3);
  const QuadraticState ok = checks::random_regular_state(rng, 1, 0.9);
  CHECK_FALSE(find_positivity_witness(ok.form(), 500, 1).has_value());
}
