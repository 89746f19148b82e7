#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "quasifree/checks.hpp"
#include "quasifree/momentum.hpp"
#include "quasifree/riccati.hpp"

using namespace qf;

TEST_CASE("region classification and the closed forms") {
  // delta = 0, omega != 0.
  const ModeSolution trivial = k0_of_mode(0.2, 1.0, 0.0, +1);
  CHECK(trivial.region == ModeRegion::Trivial);
  CHECK(std::abs(trivial.k0) == 0.0);

  // omega = delta = 0: free.
  const ModeSolution zero = k0_of_mode(0.0, 0.0, 0.0, +1);
  CHECK(zero.region == ModeRegion::Zero);
  CHECK(zero.free_parameter);

  // omega = 0, delta = 1, eps = +1: k0 = 1/i = -i, unimodular.
  const ModeSolution hyp = k0_of_mode(0.5, 0.0, 1.0, +1);
  CHECK(hyp.region == ModeRegion::Hyperbolic);
  CHECK(std::abs(hyp.k0 - Complex(0.0, -1.0)) < 1e-15);
  CHECK(std::abs(std::abs(hyp.k0) - 1.0) < 1e-15);

  // Elliptic bound, strict when omega² > delta².
  const ModeSolution ell = k0_of_mode(0.1, 5.0, 3.0, +1);
  CHECK(ell.region == ModeRegion::Elliptic);
  CHECK(std::abs(ell.k0) < 1.0);
  CHECK(std::abs(ell.k0 - Complex(3.0 / 9.0, 0.0)) < 1e-15);  // 3/(5+4)

  // Boundary omega² = delta² sits in the elliptic branch with |k0| = 1.
  const ModeSolution edge = k0_of_mode(0.0, 2.0, 2.0, +1);
  CHECK(edge.region == ModeRegion::Elliptic);
  CHECK(std::abs(std::abs(edge.k0) - 1.0) < 1e-15);
}

TEST_CASE("the two closed-form branches agree wherever both are defined") {
  checks::Rng rng(41);
  std::uniform_real_distribution<double> val(-4.0, 4.0);
  for (int i = 0; i < 500; ++i) {
    const double omega = val(rng);
    double delta = val(rng);
    if (std::abs(delta) < 1e-3) delta = delta < 0 ? -1e-3 : 1e-3;
    for (int eps : {+1, -1}) {
      const ModeSolution sol = k0_of_mode(0.0, omega, delta, eps);
      Complex alternate;
      const double sgn = omega > 0.0 ? 1.0 : -1.0;
      if (omega * omega >= delta * delta) {
        alternate = (omega - sgn * std::sqrt(omega * omega - delta * delta)) / delta;
      } else {
        alternate =
            (omega - Complex(0.0, eps) * std::sqrt(delta * delta - omega * omega)) / delta;
      }
      CHECK(std::abs(sol.k0 - alternate) < 1e-10 * (1.0 + std::abs(alternate)));
      // Scalar residual of the mode equation.
      CHECK(std::abs(-delta + 2.0 * omega * sol.k0 - delta * sol.k0 * sol.k0) <
            1e-12 * std::pow(1.0 + std::abs(omega) + std::abs(delta), 2));
    }
  }
}

TEST_CASE("grid validation and classification summary") {
  std::vector<ModeRecord> modes;
  for (int j = 1; j <= 10; ++j) {
    const double p = 0.1 * j;
    for (double sign : {1.0, -1.0}) {
      modes.push_back({sign * p, p * p, 0.5, std::nullopt});
    }
  }
  const DispersionGrid grid(modes, +1);
  const GridClassification cls = classify_grid(grid);
  CHECK(cls.modes.size() == 20);
  CHECK(cls.summary.two_per_mode);
  CHECK_FALSE(cls.summary.continuum_of_states);
  // omega = p² against delta = 0.5: hyperbolic strictly below sqrt(0.5).
  for (const auto& m : cls.modes) {
    if (m.p * m.p * m.p * m.p < 0.25) {
      CHECK(m.region == ModeRegion::Hyperbolic);
      CHECK(std::abs(std::abs(m.k0) - 1.0) < 1e-12);
    } else {
      CHECK(m.region == ModeRegion::Elliptic);
      CHECK(std::abs(m.k0) <= 1.0 + 1e-12);
    }
  }
  // Output is ordered by p ascending.
  for (size_t i = 1; i < cls.modes.size(); ++i) CHECK(cls.modes[i - 1].p < cls.modes[i].p);

  // Delta = 0 grid: all trivial or zero.
  std::vector<ModeRecord> flat = {{0.3, 1.0, 0.0, std::nullopt},
                                  {-0.3, 1.0, 0.0, std::nullopt},
                                  {0.0, 0.0, 0.0, std::nullopt}};
  const GridClassification cls2 = classify_grid(DispersionGrid(flat, -1));
  CHECK(cls2.summary.trivial == 2);
  CHECK(cls2.summary.zero == 1);
  CHECK(cls2.summary.continuum_of_states);
  CHECK_FALSE(cls2.summary.two_per_mode);

  // Missing partner and unmatched coefficients are rejected.
  CHECK_THROWS_WITH_AS(DispersionGrid({{0.5, 1.0, 0.2, std::nullopt}}, +1),
                       doctest::Contains("missing -p partner"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(DispersionGrid({{0.5, 1.0, 0.2, std::nullopt},
                                       {-0.5, 2.0, 0.2, std::nullopt}},
                                      +1),
                       doctest::Contains("omega(-p)"), std::invalid_argument);
}

TEST_CASE("two-mode block generator cross-checks the spectral solver") {
  struct Case {
    double omega, delta;
  };
  for (const Case c : {Case{1.0, 0.0}, Case{3.0, 5.0}, Case{5.0, 3.0}, Case{-2.0, 1.0}}) {
    const Generator block = mode_block_generator(c.omega, c.delta);
    const SolutionSet sols = solve_spectral(RiccatiProblem::from_generator(block));
    if (c.delta == 0.0) {
      // K = 0 must be among the solutions.
      bool found_zero = false;
      for (const auto& s : sols.solutions) {
        if (s.k.k.norm() < 1e-10) found_zero = true;
      }
      CHECK(found_zero);
      continue;
    }
    const bool hyperbolic = c.omega * c.omega < c.delta * c.delta;
    std::vector<int> epsilons = hyperbolic ? std::vector<int>{+1, -1} : std::vector<int>{+1};
    for (int eps : epsilons) {
      const ModeSolution mode = k0_of_mode(0.0, c.omega, c.delta, eps);
      MatrixXcd expected = MatrixXcd::Zero(2, 2);
      expected(0, 1) = mode.k0;
      expected(1, 0) = mode.k0;
      double best = 1e9;
      for (const auto& s : sols.solutions) {
        best = std::min(best, (s.k.k - expected).norm());
        CHECK(s.real_symmetric);  // anti-diagonal K is symmetric
      }
      CHECK(best < 1e-9);
    }
    if (!hyperbolic) {
      // Exactly one solution inside the disc for the elliptic block.
      int interior = 0;
      for (const auto& s : sols.solutions) {
        if (la::opnorm(s.k.k) < 1.0 - 1e-6) ++interior;
      }
      CHECK(interior == 1);
    }
  }
}
