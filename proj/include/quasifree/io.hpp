#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "quasifree/momentum.hpp"
#include "quasifree/quadratic_form.hpp"

namespace qf::io {

using Json = nlohmann::ordered_json;

// Hamiltonian document: {"basis": "pq"|"aa", "n": N, ...} with M, L, K
// (real row-major arrays) in the pq case and S, T (entries either numbers
// or [re, im] pairs) in the aa case. Symmetry violations are rejected with
// a message naming the invariant.
struct HamiltonianFile {
  std::optional<QuadHamiltonianPQ> pq;
  std::optional<QuadHamiltonianAA> aa;

  Basis basis() const { return pq ? Basis::PQ : Basis::AA; }
  Generator generator() const;
};

HamiltonianFile parse_hamiltonian(const std::string& text);
HamiltonianFile load_hamiltonian(const std::string& path);

// Grid document: {"epsilon": ±1, "modes": [{"p":..., "omega":...,
// "delta":..., "epsilon":...}, ...]}; per-mode epsilon is optional.
DispersionGrid parse_grid(const std::string& text);
DispersionGrid load_grid(const std::string& path);

// JSON emitters, schema 1: complex numbers as [re, im], infinity as "inf".
Json complex_json(const Complex& z);
Json real_matrix_json(const MatrixXd& m);
Json matrix_json(const MatrixXcd& m);
Json vector_json(const VectorXd& v);
Json ext_real_json(const ExtReal& x);
Json form_json(const ExtendedQuadraticForm& q);

std::string read_file(const std::string& path);

}  // namespace qf::io
