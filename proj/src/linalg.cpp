#include "quasifree/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "quasifree/tolerances.hpp"

namespace qf::la {

namespace {

// [m/m] Padé approximant to exp(A): solve (-U+V) X = (U+V) where
// U collects odd powers and V even powers.
MatrixXcd pade(const MatrixXcd& a, const std::vector<double>& b) {
  const int n = static_cast<int>(a.rows());
  const MatrixXcd id = MatrixXcd::Identity(n, n);
  const MatrixXcd a2 = a * a;
  MatrixXcd u = b[1] * id;
  MatrixXcd v = b[0] * id;
  MatrixXcd pow = id;
  for (size_t k = 2; k < b.size(); k += 2) {
    pow = pow * a2;
    v += b[k] * pow;
    if (k + 1 < b.size()) u += b[k + 1] * pow;
  }
  u = a * u;
  return (v - u).partialPivLu().solve(v + u);
}

// Degree-13 variant with the factored evaluation of Higham.
MatrixXcd pade13(const MatrixXcd& a) {
  static const double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                             1187353796428800.0,  129060195264000.0,   10559470521600.0,
                             670442572800.0,      33522128640.0,       1323241920.0,
                             40840800.0,          960960.0,            16380.0,
                             182.0,               1.0};
  const int n = static_cast<int>(a.rows());
  const MatrixXcd id = MatrixXcd::Identity(n, n);
  const MatrixXcd a2 = a * a;
  const MatrixXcd a4 = a2 * a2;
  const MatrixXcd a6 = a2 * a4;
  MatrixXcd u = a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 +
                     b[3] * a2 + b[1] * id);
  MatrixXcd v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 +
                b[0] * id;
  return (v - u).partialPivLu().solve(v + u);
}

}  // namespace

MatrixXcd expm(const MatrixXcd& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("expm: matrix must be square");
  const double norm = a.cwiseAbs().colwise().sum().maxCoeff();  // 1-norm
  if (norm <= 1.495585217958292e-2) return pade(a, {120.0, 60.0, 12.0, 1.0});
  if (norm <= 2.539398330063230e-1)
    return pade(a, {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0});
  if (norm <= 9.504178996162932e-1)
    return pade(a, {17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0});
  if (norm <= 2.097847961257068)
    return pade(a, {17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
                    2162160.0, 110880.0, 3960.0, 90.0, 1.0});
  constexpr double theta13 = 5.371920351148152;
  int squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm / theta13))));
  MatrixXcd r = pade13(a / std::pow(2.0, squarings));
  for (int i = 0; i < squarings; ++i) r = r * r;
  return r;
}

double opnorm(const MatrixXcd& a) {
  if (a.size() == 0) return 0.0;
  return Eigen::JacobiSVD<MatrixXcd>(a).singularValues()(0);
}

MatrixXcd orthonormal_columns(const MatrixXcd& x) {
  Eigen::HouseholderQR<MatrixXcd> qr(x);
  MatrixXcd q = qr.householderQ();
  return q.leftCols(x.cols());
}

MatrixXcd null_space(const MatrixXcd& a, double rel_tol) {
  Eigen::JacobiSVD<MatrixXcd> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cut = sv.size() > 0 ? std::max(sv(0) * rel_tol, 1e-300) : 0.0;
  int r = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++r;
  return svd.matrixV().rightCols(a.cols() - r);
}

int rank(const MatrixXcd& a, double rel_tol) {
  Eigen::JacobiSVD<MatrixXcd> svd(a);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return 0;
  const double cut = std::max(sv(0) * rel_tol, 1e-300);
  int r = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++r;
  return r;
}

void SchurForm::swap_adjacent(int k) {
  const Complex l1 = t(k, k);
  const Complex l2 = t(k + 1, k + 1);
  const Complex x1 = t(k, k + 1);
  const Complex x2 = l2 - l1;
  const double nx = std::sqrt(std::norm(x1) + std::norm(x2));
  if (nx <= 1e-300 || std::abs(x2) <= 1e-15 * (std::abs(l1) + std::abs(l2))) {
    return;  // coincident eigenvalues, ordering is immaterial
  }
  // Unitary whose first column is the (normalized) eigenvector of the
  // trailing eigenvalue inside the 2x2 block [[l1, x1], [0, l2]].
  Eigen::Matrix2cd g;
  g << x1 / nx, -std::conj(x2) / nx, x2 / nx, std::conj(x1) / nx;
  t.block(0, k, k + 2, 2) = t.block(0, k, k + 2, 2) * g;
  const int n = static_cast<int>(t.rows());
  t.block(k, k, 2, n - k) = g.adjoint() * t.block(k, k, 2, n - k);
  t(k + 1, k) = Complex(0, 0);
  t(k, k) = l2;
  t(k + 1, k + 1) = l1;
  q.block(0, k, n, 2) = q.block(0, k, n, 2) * g;
}

void SchurForm::reorder_to_front(std::vector<int> select) {
  std::sort(select.begin(), select.end());
  for (size_t dest = 0; dest < select.size(); ++dest) {
    for (int pos = select[dest]; pos > static_cast<int>(dest); --pos) {
      swap_adjacent(pos - 1);
    }
  }
}

SchurForm schur(const MatrixXcd& a) {
  Eigen::ComplexSchur<MatrixXcd> cs(a, /*computeU=*/true);
  if (cs.info() != Eigen::Success) throw std::runtime_error("schur: iteration failed");
  return SchurForm{cs.matrixU(), cs.matrixT()};
}

}  // namespace qf::la
