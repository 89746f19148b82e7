#pragma once

#include "quasifree/phase_space.hpp"

namespace qf {

// h = (1/2) Σ ( M_lm P_l P_m − L_lm (P_l Q_m + Q_m P_l) + K_lm Q_l Q_m ),
// M and K symmetric.
struct QuadHamiltonianPQ {
  MatrixXd m;
  MatrixXd l;
  MatrixXd k;

  QuadHamiltonianPQ(MatrixXd m_in, MatrixXd l_in, MatrixXd k_in);
  int modes() const { return static_cast<int>(m.rows()); }
};

// h = Σ ( s_kl a_k† a_l − (1/2) conj(t_kl) a_k a_l − (1/2) t_kl a_l† a_k† ),
// S hermitian, T symmetric.
struct QuadHamiltonianAA {
  MatrixXcd s;
  MatrixXcd t;

  QuadHamiltonianAA(MatrixXcd s_in, MatrixXcd t_in);
  int modes() const { return static_cast<int>(s.rows()); }
};

// 2N x 2N block matrix driving the linear phase-space dynamics:
// dx/dt = G x (PQ) or du/dt = i G u (AA).
class Generator {
 public:
  Generator(Basis basis, MatrixXcd matrix);

  Basis basis() const { return basis_; }
  const MatrixXcd& matrix() const { return g_; }
  int modes() const { return static_cast<int>(g_.rows()) / 2; }

  MatrixXcd block(int i, int j) const;

 private:
  Basis basis_;
  MatrixXcd g_;
};

// [[L, M], [-K, -Lᵀ]].
Generator generator_pq(const QuadHamiltonianPQ& h);

// [[S, T], [-conj(T), -conj(S)]].
Generator generator_aa(const QuadHamiltonianAA& h);

// Reads the (S, T) coefficient pair back off an AA generator.
QuadHamiltonianAA hamiltonian_from_generator_aa(const Generator& g);

}  // namespace qf
