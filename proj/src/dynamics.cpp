#include "quasifree/dynamics.hpp"

#include <stdexcept>

#include "quasifree/tolerances.hpp"

namespace qf {

Propagator::Propagator(Basis basis, MatrixXcd v, double t)
    : basis_(basis), v_(std::move(v)), t_(t) {
  if (v_.rows() != v_.cols() || v_.rows() == 0 || v_.rows() % 2 != 0) {
    throw std::invalid_argument("Propagator: even square matrix required");
  }
}

double Propagator::metric_residual() const {
  const MatrixXcd j = metric_j(basis_, modes());
  if (basis_ == Basis::PQ) {
    return (v_.transpose() * j * v_ - j).norm();
  }
  return (v_.adjoint() * j * v_ - j).norm();
}

Propagator propagator(const Generator& g, double t) {
  if (g.basis() == Basis::PQ) {
    return Propagator(Basis::PQ, la::expm(t * g.matrix()), t);
  }
  return Propagator(Basis::AA, la::expm(Complex(0.0, t) * g.matrix()), t);
}

PhaseVector apply(const Propagator& v, const PhaseVector& x) {
  if (v.basis() != x.basis()) throw std::invalid_argument("apply: basis mismatch");
  if (2 * v.modes() != x.entries().size()) throw std::invalid_argument("apply: dimension mismatch");
  return PhaseVector(x.basis(), VectorXcd(v.matrix() * x.entries()));
}

namespace {
void require_change(Basis from, Basis to) {
  if (from == to) throw std::invalid_argument("change_basis: source basis equals target");
}
}  // namespace

PhaseVector change_basis(const PhaseVector& x, Basis target) {
  require_change(x.basis(), target);
  const MatrixXcd u = basis_unitary(x.modes());
  if (target == Basis::AA) return PhaseVector(Basis::AA, VectorXcd(u * x.entries()));
  return PhaseVector(Basis::PQ, VectorXcd(u.adjoint() * x.entries()));
}

Generator change_basis(const Generator& g, Basis target) {
  require_change(g.basis(), target);
  const MatrixXcd u = basis_unitary(g.modes());
  const Complex i(0.0, 1.0);
  if (target == Basis::AA) {
    // i G_aa = U G_pq U*  =>  G_aa = -i U G_pq U*.
    return Generator(Basis::AA, MatrixXcd(-i * (u * g.matrix() * u.adjoint())));
  }
  return Generator(Basis::PQ, MatrixXcd(u.adjoint() * (i * g.matrix()) * u));
}

Propagator change_basis(const Propagator& v, Basis target) {
  require_change(v.basis(), target);
  const MatrixXcd u = basis_unitary(v.modes());
  if (target == Basis::AA) {
    return Propagator(Basis::AA, MatrixXcd(u * v.matrix() * u.adjoint()), v.time());
  }
  return Propagator(Basis::PQ, MatrixXcd(u.adjoint() * v.matrix() * u), v.time());
}

}  // namespace qf
