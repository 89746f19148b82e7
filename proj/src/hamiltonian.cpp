#include "quasifree/hamiltonian.hpp"

#include <stdexcept>

#include "quasifree/tolerances.hpp"

namespace qf {

namespace {

void require_square_same(const MatrixXcd& a, int n, const char* name) {
  if (a.rows() != n || a.cols() != n) {
    throw std::invalid_argument(std::string(name) + ": expected a square matrix of size n");
  }
}

}  // namespace

QuadHamiltonianPQ::QuadHamiltonianPQ(MatrixXd m_in, MatrixXd l_in, MatrixXd k_in)
    : m(std::move(m_in)), l(std::move(l_in)), k(std::move(k_in)) {
  const int n = static_cast<int>(m.rows());
  if (n == 0) throw std::invalid_argument("QuadHamiltonianPQ: empty matrices");
  require_square_same(m.cast<Complex>(), n, "M");
  require_square_same(l.cast<Complex>(), n, "L");
  require_square_same(k.cast<Complex>(), n, "K");
  if ((m - m.transpose()).norm() > tol::sym(m.norm())) {
    throw std::invalid_argument("QuadHamiltonianPQ: M must be symmetric (M = Mᵀ)");
  }
  if ((k - k.transpose()).norm() > tol::sym(k.norm())) {
    throw std::invalid_argument("QuadHamiltonianPQ: K must be symmetric (K = Kᵀ)");
  }
}

QuadHamiltonianAA::QuadHamiltonianAA(MatrixXcd s_in, MatrixXcd t_in)
    : s(std::move(s_in)), t(std::move(t_in)) {
  const int n = static_cast<int>(s.rows());
  if (n == 0) throw std::invalid_argument("QuadHamiltonianAA: empty matrices");
  require_square_same(s, n, "S");
  require_square_same(t, n, "T");
  if ((s - s.adjoint()).norm() > tol::sym(s.norm())) {
    throw std::invalid_argument("QuadHamiltonianAA: S must be hermitian (S = S*)");
  }
  if ((t - t.transpose()).norm() > tol::sym(t.norm())) {
    throw std::invalid_argument("QuadHamiltonianAA: T must be symmetric (T = Tᵀ)");
  }
}

Generator::Generator(Basis basis, MatrixXcd matrix) : basis_(basis), g_(std::move(matrix)) {
  if (g_.rows() != g_.cols() || g_.rows() == 0 || g_.rows() % 2 != 0) {
    throw std::invalid_argument("Generator: even square matrix required");
  }
}

MatrixXcd Generator::block(int i, int j) const {
  const int n = modes();
  return g_.block(i * n, j * n, n, n);
}

Generator generator_pq(const QuadHamiltonianPQ& h) {
  const int n = h.modes();
  MatrixXd g(2 * n, 2 * n);
  g.topLeftCorner(n, n) = h.l;
  g.topRightCorner(n, n) = h.m;
  g.bottomLeftCorner(n, n) = -h.k;
  g.bottomRightCorner(n, n) = -h.l.transpose();
  return Generator(Basis::PQ, g.cast<Complex>());
}

Generator generator_aa(const QuadHamiltonianAA& h) {
  const int n = h.modes();
  MatrixXcd g(2 * n, 2 * n);
  g.topLeftCorner(n, n) = h.s;
  g.topRightCorner(n, n) = h.t;
  g.bottomLeftCorner(n, n) = -h.t.conjugate();
  g.bottomRightCorner(n, n) = -h.s.conjugate();
  return Generator(Basis::AA, g);
}

QuadHamiltonianAA hamiltonian_from_generator_aa(const Generator& g) {
  if (g.basis() != Basis::AA) {
    throw std::invalid_argument("hamiltonian_from_generator_aa: AA generator required");
  }
  return QuadHamiltonianAA(g.block(0, 0), g.block(0, 1));
}

}  // namespace qf
