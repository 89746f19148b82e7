#include "quasifree/weyl.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>
#include <stdexcept>

#include "quasifree/tolerances.hpp"

namespace qf {

WeylWord::WeylWord(int modes) : modes_(modes) {
  if (modes <= 0) throw std::invalid_argument("WeylWord: positive mode count required");
}

WeylWord WeylWord::unit(int modes) {
  WeylWord w(modes);
  w.add_term(VectorXd::Zero(2 * modes), 1.0);
  return w;
}

WeylWord WeylWord::symbol(const VectorXd& f, Complex coeff) {
  if (f.size() % 2 != 0 || f.size() == 0) {
    throw std::invalid_argument("WeylWord: vector length must be even");
  }
  WeylWord w(static_cast<int>(f.size()) / 2);
  w.add_term(f, coeff);
  return w;
}

namespace {
bool same_exponent(const VectorXd& a, const VectorXd& b) {
  return (a - b).cwiseAbs().maxCoeff() <= tol::key_quantum;
}
}  // namespace

WeylWord& WeylWord::add_term(const VectorXd& f, Complex coeff) {
  if (f.size() != 2 * modes_) throw std::invalid_argument("WeylWord: dimension mismatch");
  for (auto it = terms_.begin(); it != terms_.end(); ++it) {
    if (same_exponent(it->vector, f)) {
      it->coeff += coeff;
      if (std::abs(it->coeff) == 0.0) terms_.erase(it);
      return *this;
    }
  }
  if (coeff != Complex(0.0, 0.0)) terms_.push_back(Term{f, coeff});
  return *this;
}

Complex WeylWord::coeff_at(const VectorXd& f) const {
  for (const auto& term : terms_) {
    if (same_exponent(term.vector, f)) return term.coeff;
  }
  return Complex(0.0, 0.0);
}

std::vector<WeylWord::Term> WeylWord::terms() const {
  std::vector<Term> out = terms_;
  std::sort(out.begin(), out.end(), [](const Term& a, const Term& b) {
    for (int i = 0; i < a.vector.size(); ++i) {
      if (a.vector(i) != b.vector(i)) return a.vector(i) < b.vector(i);
    }
    return false;
  });
  return out;
}

WeylWord weyl_mul(const WeylWord& a, const WeylWord& b) {
  if (a.modes() != b.modes()) throw std::invalid_argument("weyl_mul: dimension mismatch");
  WeylWord out(a.modes());
  const Complex i(0.0, 1.0);
  for (const auto& ta : a.terms()) {
    for (const auto& tb : b.terms()) {
      const Complex s = symplectic_form(PhaseVector(Basis::PQ, ta.vector),
                                        PhaseVector(Basis::PQ, tb.vector));
      const Complex phase = std::exp(-i * s / 2.0);
      out.add_term(ta.vector + tb.vector, ta.coeff * tb.coeff * phase);
    }
  }
  return out;
}

WeylWord weyl_star(const WeylWord& w) {
  WeylWord out(w.modes());
  for (const auto& t : w.terms()) out.add_term(-t.vector, std::conj(t.coeff));
  return out;
}

Eigen::Matrix3d HeisenbergTriple::matrix() const {
  Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
  m(0, 1) = a;
  m(1, 2) = b;
  m(0, 2) = c;
  return m;
}

namespace {
// exp of a strictly upper triangular 3x3, exact.
Eigen::Matrix3d exp_nilpotent3(const Eigen::Matrix3d& n) {
  return Eigen::Matrix3d::Identity() + n + 0.5 * (n * n);
}
}  // namespace

double bch_check(const HeisenbergTriple& a, const HeisenbergTriple& b, double t) {
  const Eigen::Matrix3d ma = a.matrix();
  const Eigen::Matrix3d mb = b.matrix();
  const Eigen::Matrix3d comm = ma * mb - mb * ma;
  const Eigen::Matrix3d lhs = exp_nilpotent3(t * (ma + mb));
  const Eigen::Matrix3d rhs =
      exp_nilpotent3(t * ma) * exp_nilpotent3(t * mb) * exp_nilpotent3(-0.5 * t * t * comm);
  return (lhs - rhs).norm();
}

MatrixXcd gram_matrix(const ExtendedQuadraticForm& q, const std::vector<VectorXd>& points) {
  if (q.basis() != Basis::PQ) throw std::invalid_argument("gram_matrix: PQ form required");
  const int m = static_cast<int>(points.size());
  const int dim = 2 * q.modes();
  for (const auto& p : points) {
    if (p.size() != dim) throw std::invalid_argument("gram_matrix: dimension mismatch");
  }
  const Complex i(0.0, 1.0);
  MatrixXcd a(m, m);
  for (int j = 0; j < m; ++j) {
    for (int k = 0; k < m; ++k) {
      const Complex s = symplectic_form(PhaseVector(Basis::PQ, points[j]),
                                        PhaseVector(Basis::PQ, points[k]));
      const double decay = q.eval(VectorXcd((points[k] - points[j]).cast<Complex>())).exp_quarter();
      a(j, k) = std::exp(i * s / 2.0) * decay;
    }
  }
  return a;
}

Complex apply_functional(const ExtendedQuadraticForm& q, const WeylWord& w) {
  if (q.basis() != Basis::PQ || 2 * q.modes() != 2 * w.modes()) {
    throw std::invalid_argument("apply_functional: PQ form of matching dimension required");
  }
  Complex out(0.0, 0.0);
  for (const auto& t : w.terms()) {
    out += t.coeff * q.eval(VectorXcd(t.vector.cast<Complex>())).exp_quarter();
  }
  return out;
}

std::optional<PositivityWitness> find_positivity_witness(const ExtendedQuadraticForm& q,
                                                         int trials, std::uint64_t seed) {
  const int dim = 2 * q.modes();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  // Stage 1: the pair with the largest (finite) violation margin.
  double best = 0.0;
  VectorXd bf, bg;
  for (int trial = 0; trial < trials; ++trial) {
    VectorXd f(dim), g(dim);
    for (int j = 0; j < dim; ++j) f(j) = gauss(rng);
    for (int j = 0; j < dim; ++j) g(j) = gauss(rng);
    const ExtReal qf = q.eval(VectorXcd(f.cast<Complex>()));
    const ExtReal qg = q.eval(VectorXcd(g.cast<Complex>()));
    if (qf.is_inf() || qg.is_inf()) continue;
    const double s = std::abs(symplectic_form(PhaseVector(Basis::PQ, f), PhaseVector(Basis::PQ, g)));
    const double margin = 2.0 * s - qf.finite() - qg.finite();
    if (margin > best) {
      best = margin;
      bf = f;
      bg = g;
    }
  }
  if (best <= 0.0) return std::nullopt;

  // Balance the two scales, then scan an overall scale for a Gram matrix
  // with a negative eigenvalue.
  const double qf = q.eval(VectorXcd(bf.cast<Complex>())).finite();
  const double qg = q.eval(VectorXcd(bg.cast<Complex>())).finite();
  if (qf > 1e-30 && qg > 1e-30) {
    const double ratio = std::pow(qg / qf, 0.25);
    bf *= ratio;
    bg /= ratio;
  }
  const VectorXd zero = VectorXd::Zero(dim);
  for (double scale : {0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0}) {
    const VectorXd f = scale * bf;
    const VectorXd g = scale * bg;
    const std::vector<std::vector<VectorXd>> candidates = {
        {zero, f, g}, {zero, f, g, f + g}, {zero, f, g, f - g}};
    for (const auto& pts : candidates) {
      const MatrixXcd a = gram_matrix(q, pts);
      Eigen::SelfAdjointEigenSolver<MatrixXcd> es((a + a.adjoint()) / 2.0);
      const double mineig = es.eigenvalues().minCoeff();
      if (mineig < -1e-9 * la::opnorm(a)) {
        return PositivityWitness{pts, mineig, bf, bg};
      }
    }
  }
  return std::nullopt;
}

}  // namespace qf
