#include "quasifree/phase_space.hpp"

#include <stdexcept>

#include "quasifree/tolerances.hpp"

namespace qf {

std::string to_string(Basis b) { return b == Basis::PQ ? "pq" : "aa"; }

PhaseVector::PhaseVector(Basis basis, VectorXcd entries) : basis_(basis), v_(std::move(entries)) {
  if (v_.size() == 0 || v_.size() % 2 != 0) {
    throw std::invalid_argument("PhaseVector: length must be a positive even number");
  }
}

PhaseVector::PhaseVector(Basis basis, const VectorXd& entries)
    : PhaseVector(basis, VectorXcd(entries.cast<Complex>())) {}

bool PhaseVector::is_real() const {
  return v_.imag().cwiseAbs().maxCoeff() <= tol::sym(v_.norm());
}

VectorXd PhaseVector::real() const {
  if (!is_real()) throw std::domain_error("PhaseVector: entries are not real");
  return v_.real();
}

MatrixXcd metric_j(Basis basis, int modes) {
  const int n = modes;
  MatrixXcd j = MatrixXcd::Zero(2 * n, 2 * n);
  if (basis == Basis::PQ) {
    j.topRightCorner(n, n) = -MatrixXcd::Identity(n, n);
    j.bottomLeftCorner(n, n) = MatrixXcd::Identity(n, n);
  } else {
    j.topLeftCorner(n, n) = MatrixXcd::Identity(n, n);
    j.bottomRightCorner(n, n) = -MatrixXcd::Identity(n, n);
  }
  return j;
}

MatrixXcd basis_unitary(int modes) {
  const int n = modes;
  const double r = 1.0 / std::sqrt(2.0);
  const Complex i(0.0, 1.0);
  MatrixXcd u = MatrixXcd::Zero(2 * n, 2 * n);
  u.topLeftCorner(n, n) = (r * i) * MatrixXcd::Identity(n, n);
  u.topRightCorner(n, n) = r * MatrixXcd::Identity(n, n);
  u.bottomLeftCorner(n, n) = (-r * i) * MatrixXcd::Identity(n, n);
  u.bottomRightCorner(n, n) = r * MatrixXcd::Identity(n, n);
  return u;
}

namespace {
void require_matching(const PhaseVector& a, const PhaseVector& b, Basis basis, const char* what) {
  if (a.basis() != basis || b.basis() != basis) {
    throw std::invalid_argument(std::string(what) + ": wrong basis tag");
  }
  if (a.entries().size() != b.entries().size()) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch");
  }
}
}  // namespace

Complex symplectic_form(const PhaseVector& f, const PhaseVector& g) {
  require_matching(f, g, Basis::PQ, "symplectic_form");
  const int n = f.modes();
  const VectorXcd& x = f.entries();
  const VectorXcd& y = g.entries();
  // (f, J_pq g)₀ = -(f_p, g_q)₀ + (f_q, g_p)₀ with the plain bilinear
  // dot product (no conjugation).
  return -x.head(n).cwiseProduct(y.tail(n)).sum() + x.tail(n).cwiseProduct(y.head(n)).sum();
}

Complex indefinite_product(const PhaseVector& u1, const PhaseVector& u2) {
  require_matching(u1, u2, Basis::AA, "indefinite_product");
  const int n = u1.modes();
  const VectorXcd& a = u1.entries();
  const VectorXcd& b = u2.entries();
  // Conjugate-linear in the first slot; Eigen's dot() conjugates the
  // left operand, which is exactly the convention here.
  return a.head(n).dot(b.head(n)) - a.tail(n).dot(b.tail(n));
}

bool is_cross_matrix(const MatrixXcd& m) {
  if (m.rows() != m.cols() || m.rows() % 2 != 0) {
    throw std::invalid_argument("is_cross_matrix: even square matrix required");
  }
  const int n = static_cast<int>(m.rows()) / 2;
  const double tau = tol::res(m.norm());
  const double d1 = (m.bottomLeftCorner(n, n) - m.topRightCorner(n, n).conjugate()).norm();
  const double d2 = (m.bottomRightCorner(n, n) - m.topLeftCorner(n, n).conjugate()).norm();
  return d1 <= tau && d2 <= tau;
}

}  // namespace qf
