#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "quasifree/io.hpp"

using namespace qf;

TEST_CASE("pq hamiltonian document round trip into a generator") {
  const std::string text = R"({
    "basis": "pq", "n": 1,
    "M": [[1.0]], "L": [[0.0]], "K": [[4.0]]
  })";
  const io::HamiltonianFile f = io::parse_hamiltonian(text);
  REQUIRE(f.pq.has_value());
  const Generator g = f.generator();
  CHECK(g.basis() == Basis::PQ);
  CHECK(std::abs(g.matrix()(0, 1) - Complex(1.0, 0.0)) == 0.0);
  CHECK(std::abs(g.matrix()(1, 0) - Complex(-4.0, 0.0)) == 0.0);
}

TEST_CASE("aa hamiltonian with [re, im] entries") {
  const std::string text = R"({
    "basis": "aa", "n": 1,
    "S": [[0.0]], "T": [[[0.0, -1.0]]]
  })";
  const io::HamiltonianFile f = io::parse_hamiltonian(text);
  REQUIRE(f.aa.has_value());
  CHECK(std::abs(f.aa->t(0, 0) - Complex(0.0, -1.0)) == 0.0);
}

TEST_CASE("malformed documents are rejected with the violated invariant named") {
  CHECK_THROWS_WITH_AS(io::parse_hamiltonian("{"), doctest::Contains("not valid JSON"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(io::parse_hamiltonian(R"({"basis":"pq","n":1,"M":[[1]],"L":[[0]]})"),
                       doctest::Contains("needs field 'K'"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      io::parse_hamiltonian(
          R"({"basis":"pq","n":2,"M":[[1,2],[3,4]],"L":[[0,0],[0,0]],"K":[[1,0],[0,1]]})"),
      doctest::Contains("M must be symmetric"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      io::parse_hamiltonian(R"({"basis":"aa","n":1,"S":[[[0,1]]],"T":[[0]]})"),
      doctest::Contains("S must be hermitian"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      io::parse_hamiltonian(R"({"basis":"pq","n":1,"M":[[[1,1]]],"L":[[0]],"K":[[0]]})"),
      doctest::Contains("entries must be real"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(io::parse_hamiltonian(R"({"basis":"xy","n":1})"),
                       doctest::Contains("basis must be"), std::invalid_argument);
}

TEST_CASE("grid documents") {
  const std::string text = R"({
    "epsilon": -1,
    "modes": [
      {"p": 0.5, "omega": 1.0, "delta": 2.0},
      {"p": -0.5, "omega": 1.0, "delta": 2.0, "epsilon": 1}
    ]
  })";
  const DispersionGrid grid = io::parse_grid(text);
  CHECK(grid.global_epsilon() == -1);
  CHECK(grid.records().size() == 2);
  CHECK(grid.records()[0].epsilon.value_or(0) == 1);  // records sorted by p ascending

  CHECK_THROWS_WITH_AS(io::parse_grid(R"({"modes":[{"p":0.5,"omega":1.0,"delta":2.0}]})"),
                       doctest::Contains("missing -p partner"), std::invalid_argument);
}

TEST_CASE("json emitters: complex pairs and extended values") {
  CHECK(io::complex_json(Complex(1.5, -2.0)).dump() == "[1.5,-2.0]");
  CHECK(io::ext_real_json(ExtReal::infinity()).dump() == "\"inf\"");
  CHECK(io::ext_real_json(ExtReal(0.25)).dump() == "0.25");
  MatrixXd m(1, 2);
  m << 3.0, -0.5;
  CHECK(io::real_matrix_json(m).dump() == "[[3.0,-0.5]]");
  const ExtendedQuadraticForm q =
      ExtendedQuadraticForm::from_r(Basis::PQ, MatrixXcd(0.5 * MatrixXcd::Identity(2, 2)));
  const io::Json j = io::form_json(q);
  CHECK(j["basis"] == "pq");
  CHECK(j["R"][0][0][0] == 0.5);
}
