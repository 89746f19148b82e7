#include "quasifree/quadratic_form.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <stdexcept>

#include "quasifree/tolerances.hpp"

namespace qf {

AngularOperator::AngularOperator(MatrixXcd k_in) : k(std::move(k_in)) {
  if (k.rows() != k.cols() || k.rows() == 0) {
    throw std::invalid_argument("AngularOperator: square matrix required");
  }
  if (la::opnorm(k) > 1.0 + tol::res(1.0)) {
    throw std::invalid_argument("AngularOperator: ||K|| must not exceed 1");
  }
}

bool reality_check(const AngularOperator& k) {
  return (k.k - k.k.transpose()).norm() <= tol::res(k.k.norm());
}

ExtendedQuadraticForm::ExtendedQuadraticForm(Basis basis, MatrixXcd r)
    : basis_(basis), r_(std::move(r)) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(r_);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("ExtendedQuadraticForm: eigendecomposition failed");
  }
  evals_ = es.eigenvalues();
  evecs_ = es.eigenvectors();
  const double slack = tol::res(std::max(1.0, evals_.cwiseAbs().maxCoeff()));
  for (int i = 0; i < evals_.size(); ++i) {
    if (evals_(i) < -slack || evals_(i) > 1.0 + slack) {
      throw std::invalid_argument("ExtendedQuadraticForm: spectrum of R must lie in [0, 1]");
    }
    evals_(i) = std::clamp(evals_(i), 0.0, 1.0);
  }
  domain_dim_ = 0;
  for (int i = 0; i < evals_.size(); ++i) {
    if (evals_(i) > tol::kernel_cut) ++domain_dim_;
  }
}

ExtendedQuadraticForm ExtendedQuadraticForm::from_r(Basis basis, const MatrixXcd& r) {
  if (r.rows() != r.cols() || r.rows() == 0 || r.rows() % 2 != 0) {
    throw std::invalid_argument("ExtendedQuadraticForm: R must be even square");
  }
  if ((r - r.adjoint()).norm() > tol::sym(r.norm())) {
    throw std::invalid_argument("ExtendedQuadraticForm: R must be self-adjoint (R = R*)");
  }
  return ExtendedQuadraticForm(basis, MatrixXcd((r + r.adjoint()) / 2.0));
}

ExtendedQuadraticForm ExtendedQuadraticForm::from_domain_operator(Basis basis,
                                                                  const MatrixXcd& domain,
                                                                  const MatrixXcd& op) {
  const int dim = static_cast<int>(domain.rows());
  const int d = static_cast<int>(domain.cols());
  if (op.rows() != d || op.cols() != d) {
    throw std::invalid_argument("from_domain_operator: operator size must match domain dimension");
  }
  if (d == 0) return ExtendedQuadraticForm(basis, MatrixXcd::Zero(dim, dim));
  if ((domain.adjoint() * domain - MatrixXcd::Identity(d, d)).norm() > tol::res(1.0)) {
    throw std::invalid_argument("from_domain_operator: domain basis must be orthonormal");
  }
  const MatrixXcd herm = (op + op.adjoint()) / 2.0;
  const MatrixXcd inner = (MatrixXcd::Identity(d, d) + herm).partialPivLu().solve(
      MatrixXcd::Identity(d, d));
  MatrixXcd r = domain * inner * domain.adjoint();
  r = (r + r.adjoint()) / 2.0;
  return ExtendedQuadraticForm(basis, std::move(r));
}

MatrixXcd ExtendedQuadraticForm::domain_basis() const {
  MatrixXcd w(evecs_.rows(), domain_dim_);
  int c = 0;
  for (int i = 0; i < evals_.size(); ++i) {
    if (evals_(i) > tol::kernel_cut) w.col(c++) = evecs_.col(i);
  }
  return w;
}

MatrixXcd ExtendedQuadraticForm::kernel_basis() const {
  MatrixXcd w(evecs_.rows(), evecs_.rows() - domain_dim_);
  int c = 0;
  for (int i = 0; i < evals_.size(); ++i) {
    if (evals_(i) <= tol::kernel_cut) w.col(c++) = evecs_.col(i);
  }
  return w;
}

VectorXd ExtendedQuadraticForm::domain_operator_diagonal() const {
  VectorXd d(domain_dim_);
  int c = 0;
  for (int i = 0; i < evals_.size(); ++i) {
    if (evals_(i) > tol::kernel_cut) d(c++) = 1.0 / evals_(i) - 1.0;
  }
  return d;
}

ExtReal ExtendedQuadraticForm::eval(const VectorXcd& f) const {
  if (f.size() != r_.rows()) throw std::invalid_argument("eval: dimension mismatch");
  const VectorXcd c = evecs_.adjoint() * f;
  double ker2 = 0.0;
  double val = 0.0;
  for (int i = 0; i < evals_.size(); ++i) {
    const double a2 = std::norm(c(i));
    if (evals_(i) <= tol::kernel_cut) {
      ker2 += a2;
    } else {
      val += (1.0 / evals_(i) - 1.0) * a2;
    }
  }
  const double fn = f.norm();
  if (std::sqrt(ker2) > tol::kernel_cut * fn) return ExtReal::infinity();
  return ExtReal(val);
}

ExtReal ExtendedQuadraticForm::eval(const PhaseVector& f) const {
  if (f.basis() != basis_) throw std::invalid_argument("eval: basis mismatch");
  return eval(f.entries());
}

ExtendedQuadraticForm r_from_k(const AngularOperator& k, Basis basis) {
  const int n = k.modes();
  const MatrixXcd id = MatrixXcd::Identity(n, n);
  MatrixXcd r(2 * n, 2 * n);
  if (basis == Basis::AA) {
    r.topLeftCorner(n, n) = 0.5 * id;
    r.topRightCorner(n, n) = 0.5 * k.k.adjoint();
    r.bottomLeftCorner(n, n) = 0.5 * k.k;
    r.bottomRightCorner(n, n) = 0.5 * id;
  } else {
    const Complex i(0.0, 1.0);
    const MatrixXcd off = 0.25 * i * (k.k - k.k.adjoint());
    r.topLeftCorner(n, n) = 0.25 * (2.0 * id - k.k - k.k.adjoint());
    r.topRightCorner(n, n) = off;
    r.bottomLeftCorner(n, n) = off;
    r.bottomRightCorner(n, n) = 0.25 * (2.0 * id + k.k + k.k.adjoint());
  }
  return ExtendedQuadraticForm::from_r(basis, r);
}

AngularOperator angular_of_minimal(const ExtendedQuadraticForm& q) {
  const ExtendedQuadraticForm aa = q.basis() == Basis::AA ? q : change_basis(q, Basis::AA);
  if (!is_minimal(aa)) {
    throw std::invalid_argument("angular_of_minimal: form is not a minimal majorant");
  }
  const int n = aa.modes();
  MatrixXcd k = 2.0 * aa.r().bottomLeftCorner(n, n);
  // Rounding can push the recovered contraction marginally past 1.
  const double norm = la::opnorm(k);
  if (norm > 1.0 && norm <= 1.0 + tol::res(1.0)) k /= norm;
  return AngularOperator(std::move(k));
}

namespace {
MatrixXcd majorant_defect_matrix(const ExtendedQuadraticForm& q) {
  const MatrixXcd j = metric_j(q.basis(), q.modes());
  const MatrixXcd& r = q.r();
  const MatrixXcd id = MatrixXcd::Identity(r.rows(), r.cols());
  if (q.basis() == Basis::PQ) {
    return id - r + j * r * j;  // J* = -J
  }
  return id - r - j * r * j;  // J* = J
}
}  // namespace

double minimality_residual(const ExtendedQuadraticForm& q) {
  return la::opnorm(majorant_defect_matrix(q));
}

bool is_majorant(const ExtendedQuadraticForm& q) {
  const MatrixXcd m = majorant_defect_matrix(q);
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es((m + m.adjoint()) / 2.0);
  return es.eigenvalues().minCoeff() >= -tol::res(1.0);
}

bool is_minimal(const ExtendedQuadraticForm& q) {
  return minimality_residual(q) <= tol::res(1.0 + q.r().norm());
}

bool dominates_s(const ExtendedQuadraticForm& q, const PhaseVector& f, const PhaseVector& g) {
  if (q.basis() != Basis::PQ) throw std::invalid_argument("dominates_s: PQ form required");
  const ExtReal qf = q.eval(f);
  const ExtReal qg = q.eval(g);
  if (qf.is_inf() || qg.is_inf()) return true;
  const double lhs = 2.0 * std::abs(symplectic_form(f, g));
  const double rhs = qf.finite() + qg.finite();
  return lhs <= rhs + tol::res(1.0 + rhs);
}

double invariance_residual(const ExtendedQuadraticForm& q, const Propagator& v) {
  if (q.basis() != v.basis()) throw std::invalid_argument("invariance_residual: basis mismatch");
  const MatrixXcd& r = q.r();
  const MatrixXcd& vm = v.matrix();
  if (r.rows() != vm.rows()) throw std::invalid_argument("invariance_residual: size mismatch");
  const MatrixXcd id = MatrixXcd::Identity(r.rows(), r.cols());
  Eigen::PartialPivLU<MatrixXcd> lu(vm.adjoint());
  if (std::abs(lu.determinant()) < 1e-300) {
    throw std::invalid_argument("invariance_residual: singular propagator");
  }
  const MatrixXcd vinvstar = lu.solve(id);
  return ((id - r) * vm * r - r * vinvstar * (id - r)).norm();
}

bool is_invariant(const ExtendedQuadraticForm& q, const Propagator& v) {
  const double vn = v.matrix().norm();
  return invariance_residual(q, v) <= tol::res(vn * vn);
}

bool is_real_compatible(const ExtendedQuadraticForm& q) {
  if (q.basis() == Basis::PQ) {
    return q.r().imag().norm() <= tol::res(q.r().norm());
  }
  return is_cross_matrix(q.r());
}

MatrixXd realify(const ExtendedQuadraticForm& q) {
  const ExtendedQuadraticForm pq = q.basis() == Basis::PQ ? q : change_basis(q, Basis::PQ);
  if (!is_real_compatible(pq)) {
    throw std::invalid_argument("realify: form does not satisfy R = CRC");
  }
  return pq.r().real();
}

ExtendedQuadraticForm complexify(const MatrixXd& r_real) {
  return ExtendedQuadraticForm::from_r(Basis::PQ, r_real.cast<Complex>());
}

ExtendedQuadraticForm change_basis(const ExtendedQuadraticForm& q, Basis target) {
  if (q.basis() == target) throw std::invalid_argument("change_basis: source equals target");
  const MatrixXcd u = basis_unitary(q.modes());
  MatrixXcd r = target == Basis::AA ? MatrixXcd(u * q.r() * u.adjoint())
                                    : MatrixXcd(u.adjoint() * q.r() * u);
  return ExtendedQuadraticForm::from_r(target, r);
}

}  // namespace qf
