#include "quasifree/states.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "quasifree/tolerances.hpp"
#include "quasifree/weyl.hpp"

namespace qf {

QuadraticState::QuadraticState(ExtendedQuadraticForm q) : q_(std::move(q)) {
  if (q_.basis() != Basis::PQ) {
    throw std::invalid_argument("QuadraticState: PQ-basis form required");
  }
  if (!is_real_compatible(q_)) {
    throw std::invalid_argument("QuadraticState: form must satisfy R = CRC");
  }
  if (!is_majorant(q_)) {
    throw std::invalid_argument("QuadraticState: form is not a majorant, not a state");
  }
}

double QuadraticState::char_fn(const PhaseVector& f) const {
  if (f.basis() != Basis::PQ || !f.is_real()) {
    throw std::invalid_argument("char_fn: real PQ vector required");
  }
  return q_.eval(f).exp_quarter();
}

double QuadraticState::char_fn(const VectorXd& f) const {
  return q_.eval(VectorXcd(f.cast<Complex>())).exp_quarter();
}

QuadraticState fock_state(int modes) {
  const int d = 2 * modes;
  return QuadraticState(
      ExtendedQuadraticForm::from_r(Basis::PQ, MatrixXcd(0.5 * MatrixXcd::Identity(d, d))));
}

QuadraticState trivial_state(int modes) {
  const int d = 2 * modes;
  return QuadraticState(ExtendedQuadraticForm::from_r(Basis::PQ, MatrixXcd::Zero(d, d)));
}

QuadraticState pullback(const QuadraticState& w, const Propagator& v) {
  if (v.basis() != Basis::PQ) throw std::invalid_argument("pullback: PQ propagator required");
  if (v.matrix().imag().norm() > tol::res(v.matrix().norm())) {
    throw std::invalid_argument("pullback: propagator must be real");
  }
  const ExtendedQuadraticForm& q = w.form();
  const int dim = 2 * q.modes();
  if (v.matrix().rows() != dim) throw std::invalid_argument("pullback: dimension mismatch");

  const MatrixXcd& vm = v.matrix();
  const int d = q.domain_dim();
  if (d == 0) return w;  // trivial state: domain {0} is invariant under any V

  // New domain: V⁻¹(domain) = null space of (kernel basis)* V.
  MatrixXcd domain;
  if (d == dim) {
    domain = MatrixXcd::Identity(dim, dim);
  } else {
    domain = la::null_space(MatrixXcd(q.kernel_basis().adjoint() * vm), 1e-12);
    if (domain.cols() != d) {
      throw std::runtime_error("pullback: domain dimension changed, propagator near-singular");
    }
  }

  const MatrixXcd e_dom = q.domain_basis();
  const MatrixXcd op_full =
      e_dom * q.domain_operator_diagonal().asDiagonal().toDenseMatrix().cast<Complex>() *
      e_dom.adjoint();
  const MatrixXcd op_new = domain.adjoint() * vm.adjoint() * op_full * vm * domain;
  return QuadraticState(ExtendedQuadraticForm::from_domain_operator(Basis::PQ, domain, op_new));
}

namespace {

// Normalized direction with a sign convention, for probe deduplication.
VectorXd canonical_direction(VectorXd v) {
  const double n = v.norm();
  if (n <= 0.0) return v;
  v /= n;
  for (int i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > 1e-9) {
      if (v(i) < 0.0) v = -v;
      break;
    }
  }
  return v;
}

std::vector<VectorXd> probe_directions(const Generator& g, const TimeLimitOptions& opt) {
  const int dim = 2 * g.modes();
  const MatrixXd gm = g.matrix().real();
  std::vector<VectorXd> dirs;
  auto push = [&](const VectorXd& v) {
    if (v.norm() < 1e-12) return;
    const VectorXd c = canonical_direction(v);
    for (const auto& existing : dirs) {
      if ((existing - c).norm() < 1e-8) return;
    }
    dirs.push_back(c);
  };
  for (int i = 0; i < dim; ++i) push(VectorXd::Unit(dim, i));
  Eigen::RealSchur<MatrixXd> rs(gm);
  for (int i = 0; i < dim; ++i) push(rs.matrixU().col(i));
  Eigen::EigenSolver<MatrixXd> es(gm);
  for (int i = 0; i < dim; ++i) {
    push(es.eigenvectors().col(i).real());
    push(es.eigenvectors().col(i).imag());
  }
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int r = 0; r < opt.random_probes; ++r) {
    VectorXd v(dim);
    for (int i = 0; i < dim; ++i) v(i) = gauss(rng);
    push(v);
  }
  return dirs;
}

constexpr double kConvergeTol = 1e-9;
constexpr double kDecayTol = 1e-12;

bool tail_stable(const std::vector<double>& v, int count) {
  if (static_cast<int>(v.size()) < count) return false;
  const double last = v.back();
  for (int i = 0; i < count; ++i) {
    if (std::abs(v[v.size() - 1 - i] - last) > kConvergeTol) return false;
  }
  return true;
}

ProbeClass classify(const std::vector<double>& values, bool truncated) {
  const int need = truncated ? 3 : 5;
  if (static_cast<int>(values.size()) >= std::min<int>(3, need) && values.back() < kDecayTol) {
    bool all_small = true;
    const int lookback = std::min<int>(3, static_cast<int>(values.size()));
    for (int i = 0; i < lookback; ++i) {
      if (values[values.size() - 1 - i] >= kDecayTol) all_small = false;
    }
    if (all_small) return ProbeClass::Decayed;
  }
  if (tail_stable(values, need)) return ProbeClass::Converged;
  return ProbeClass::Indeterminate;
}

// Overflow-free complex exponential: the magnitude is capped at the top
// of the double range, which only matters where chi is already zero.
Complex exp_capped(const Complex& z) {
  const double mag = std::exp(std::min(z.real(), 709.0));
  return mag * Complex(std::cos(z.imag()), std::sin(z.imag()));
}

// Evaluates V_t f along the doubling schedule. Repeated squaring of the
// propagator is forward-unstable for mixed hyperbolic flows: once
// exp(2|Re lambda| t) passes 1/eps the contracting subspace is destroyed
// by cancellation. When the generator is diagonalizable the flow is
// applied through its eigenbasis instead, with rounding-level probe
// components truncated so that invariant-line probes evolve cleanly.
class FlowEvaluator {
 public:
  explicit FlowEvaluator(const MatrixXd& g) {
    Eigen::EigenSolver<MatrixXd> es(g);
    const MatrixXcd vecs = es.eigenvectors();
    Eigen::JacobiSVD<MatrixXcd> svd(vecs);
    const double smin = svd.singularValues()(vecs.cols() - 1);
    diagonal_path_ = smin > 1e-8 * svd.singularValues()(0);
    if (diagonal_path_) {
      basis_ = vecs;
      inverse_ = vecs.inverse();
      eigenvalues_ = es.eigenvalues();
    } else {
      v_ = la::expm(g.cast<Complex>());
    }
  }

  bool diagonal_path() const { return diagonal_path_; }

  VectorXcd coefficients(const VectorXd& f) const {
    VectorXcd c = inverse_ * f.cast<Complex>();
    const double cut = 1e-13 * c.cwiseAbs().maxCoeff();
    for (int i = 0; i < c.size(); ++i) {
      if (std::abs(c(i)) <= cut) c(i) = Complex(0.0, 0.0);
    }
    return c;
  }

  VectorXd apply_diagonal(const VectorXcd& coeffs, double t) const {
    VectorXcd scaled(coeffs.size());
    for (int i = 0; i < coeffs.size(); ++i) {
      scaled(i) = coeffs(i) == Complex(0.0, 0.0) ? Complex(0.0, 0.0)
                                                 : exp_capped(eigenvalues_(i) * t) * coeffs(i);
    }
    return (basis_ * scaled).real();
  }

  // Squaring fallback; false once the entries stop being finite.
  bool advance_square() {
    v_ = v_ * v_;
    return v_.allFinite();
  }
  const MatrixXcd& matrix() const { return v_; }

 private:
  bool diagonal_path_ = false;
  MatrixXcd basis_, inverse_;
  VectorXcd eigenvalues_;
  MatrixXcd v_;
};

std::vector<std::vector<double>> run_schedule(const QuadraticState& w, FlowEvaluator& flow,
                                              const std::vector<VectorXd>& vectors,
                                              int max_doublings, bool* truncated) {
  std::vector<std::vector<double>> values(vectors.size());
  *truncated = false;
  const auto settled = [&]() {
    for (const auto& h : values) {
      if (!tail_stable(h, 5)) return false;
    }
    return true;
  };
  if (flow.diagonal_path()) {
    std::vector<VectorXcd> coeffs;
    coeffs.reserve(vectors.size());
    for (const auto& f : vectors) coeffs.push_back(flow.coefficients(f));
    double t = 1.0;
    for (int step = 0; step <= max_doublings; ++step, t *= 2.0) {
      for (size_t i = 0; i < vectors.size(); ++i) {
        values[i].push_back(w.char_fn(flow.apply_diagonal(coeffs[i], t)));
      }
      if (settled()) break;
    }
    return values;
  }
  for (int step = 0; step <= max_doublings; ++step) {
    for (size_t i = 0; i < vectors.size(); ++i) {
      const VectorXd vf = (flow.matrix() * vectors[i].cast<Complex>()).real();
      values[i].push_back(w.char_fn(vf));
    }
    if (step == max_doublings || settled()) break;
    if (!flow.advance_square()) {
      *truncated = true;
      break;
    }
  }
  return values;
}

}  // namespace

LimitReport time_limit(const QuadraticState& w, const Generator& g, int direction,
                       const TimeLimitOptions& opt) {
  if (g.basis() != Basis::PQ) throw std::invalid_argument("time_limit: PQ generator required");
  if (direction != 1 && direction != -1) {
    throw std::invalid_argument("time_limit: direction must be +1 or -1");
  }
  const int dim = 2 * g.modes();
  LimitReport report;
  report.direction = direction;

  FlowEvaluator flow(MatrixXd(static_cast<double>(direction) * g.matrix().real()));
  const std::vector<VectorXd> dirs = probe_directions(g, opt);
  bool truncated = false;
  const auto histories = run_schedule(w, flow, dirs, opt.max_doublings, &truncated);

  bool all_classified = true;
  std::vector<VectorXd> convergent;
  for (size_t i = 0; i < dirs.size(); ++i) {
    ProbeRecord rec;
    rec.direction = dirs[i];
    rec.values = histories[i];
    rec.classification = classify(histories[i], truncated);
    if (rec.classification == ProbeClass::Converged) {
      rec.limit_value = histories[i].back();
      convergent.push_back(dirs[i]);
    } else if (rec.classification == ProbeClass::Indeterminate) {
      all_classified = false;
    }
    report.probes.push_back(std::move(rec));
  }

  if (!all_classified) {
    report.note = "some probes neither converge nor decay";
    return report;
  }

  // Support candidate: span of the convergent directions.
  MatrixXd span(dim, static_cast<int>(convergent.size()));
  for (size_t i = 0; i < convergent.size(); ++i) span.col(static_cast<int>(i)) = convergent[i];
  MatrixXd basis(dim, 0);
  if (!convergent.empty()) {
    Eigen::JacobiSVD<MatrixXd> svd(span, Eigen::ComputeThinU);
    int rank = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i) {
      if (svd.singularValues()(i) > 1e-8 * svd.singularValues()(0)) ++rank;
    }
    basis = svd.matrixU().leftCols(rank);
  }
  const int d = static_cast<int>(basis.cols());

  // Limit form on the support, by polarization of tail values.
  std::vector<VectorXd> phase2;
  for (int i = 0; i < d; ++i) phase2.push_back(basis.col(i));
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      phase2.push_back(basis.col(i) + basis.col(j));
      phase2.push_back(basis.col(i) - basis.col(j));
    }
  }
  bool trunc2 = false;
  FlowEvaluator flow2(MatrixXd(static_cast<double>(direction) * g.matrix().real()));
  const auto hist2 = run_schedule(w, flow2, phase2, opt.max_doublings, &trunc2);
  std::vector<double> qvals(phase2.size());
  for (size_t i = 0; i < phase2.size(); ++i) {
    if (classify(hist2[i], trunc2) != ProbeClass::Converged || hist2[i].back() <= 0.0) {
      report.note = "support candidate carries no finite limit form";
      return report;
    }
    qvals[i] = -4.0 * std::log(hist2[i].back());
  }
  MatrixXd qmat = MatrixXd::Zero(d, d);
  {
    size_t idx = static_cast<size_t>(d);
    for (int i = 0; i < d; ++i) qmat(i, i) = qvals[static_cast<size_t>(i)];
    for (int i = 0; i < d; ++i) {
      for (int j = i + 1; j < d; ++j) {
        const double cross = 0.25 * (qvals[idx] - qvals[idx + 1]);
        qmat(i, j) = cross;
        qmat(j, i) = cross;
        idx += 2;
      }
    }
  }

  std::optional<QuadraticState> limit;
  try {
    limit.emplace(ExtendedQuadraticForm::from_domain_operator(Basis::PQ, basis.cast<Complex>(),
                                                              qmat.cast<Complex>()));
  } catch (const std::exception& e) {
    report.note = std::string("assembled form rejected: ") + e.what();
    return report;
  }

  // The assembled state must reproduce every probe's observed limit.
  for (const auto& rec : report.probes) {
    const double predicted = limit->char_fn(rec.direction);
    const double observed = rec.classification == ProbeClass::Converged ? rec.limit_value : 0.0;
    if (std::abs(predicted - observed) > 1e-7) {
      report.note = "assembled state disagrees with a probe limit";
      return report;
    }
  }

  // And stay positive as a functional, sampled through gram matrices.
  const PositivityReport positivity = positivity_suite(*limit, 25, opt.seed ^ 0x9e3779b9u);
  if (!positivity.all_psd) {
    report.note = "assembled state failed positivity sampling";
    return report;
  }

  report.has_limit = true;
  report.limit = std::move(limit);
  return report;
}

PositivityReport positivity_suite(const QuadraticState& w, int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_int_distribution<int> size_dist(2, 6);
  std::uniform_real_distribution<double> scale_dist(0.5, 2.0);
  const int dim = 2 * w.modes();

  PositivityReport report;
  report.trials = trials;
  double worst = std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    const int m = size_dist(rng);
    const double scale = scale_dist(rng);
    std::vector<VectorXd> pts;
    pts.push_back(VectorXd::Zero(dim));
    for (int i = 1; i < m; ++i) {
      VectorXd v(dim);
      for (int j = 0; j < dim; ++j) v(j) = scale * gauss(rng);
      pts.push_back(v);
    }
    const MatrixXcd a = gram_matrix(w.form(), pts);
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es((a + a.adjoint()) / 2.0);
    const double rel = es.eigenvalues().minCoeff() / std::max(1e-300, la::opnorm(a));
    worst = std::min(worst, rel);
    if (rel < -1e-9) report.all_psd = false;
  }
  report.min_relative_eigenvalue = worst;
  return report;
}

std::string describe_form_1mode(const ExtendedQuadraticForm& q) {
  if (q.modes() != 1 || q.basis() != Basis::PQ) {
    throw std::invalid_argument("describe_form_1mode: one-mode PQ form required");
  }
  std::ostringstream os;
  os.precision(12);
  const MatrixXcd ker = q.kernel_basis();
  if (ker.cols() == 2) return "q = infinity off 0 (trivial state form)";
  if (ker.cols() == 1) {
    // Support line: the orthogonal complement of the infinite direction.
    const double kp = ker(0, 0).real();
    const double kq = ker(1, 0).real();
    os << "support: ";
    if (std::abs(kq) <= 1e-12 * (std::abs(kp) + std::abs(kq))) {
      os << "x_p = 0";
    } else if (std::abs(kp) <= 1e-12 * (std::abs(kp) + std::abs(kq))) {
      os << "x_q = 0";
    } else {
      os << (kp / kq) << " x_p + x_q = 0";
    }
    const VectorXd dir = [&] {
      VectorXd v(2);
      v << -kq, kp;
      return canonical_direction(v);
    }();
    const ExtReal on_line = q.eval(VectorXcd(dir.cast<Complex>()));
    if (on_line.is_finite() && on_line.finite() > 1e-12) {
      os << "; on-line coefficient " << on_line.finite();
    }
    return os.str();
  }
  // Finite everywhere: recover the coefficient matrix by polarization.
  const VectorXd ep = VectorXd::Unit(2, 0);
  const VectorXd eq = VectorXd::Unit(2, 1);
  const double qpp = q.eval(VectorXcd(ep.cast<Complex>())).finite();
  const double qqq = q.eval(VectorXcd(eq.cast<Complex>())).finite();
  const double qsum = q.eval(VectorXcd((ep + eq).cast<Complex>())).finite();
  const double qdiff = q.eval(VectorXcd((ep - eq).cast<Complex>())).finite();
  const double cross = 0.25 * (qsum - qdiff);
  os << "q = " << qpp << " x_p^2";
  if (std::abs(cross) > 1e-10) {
    os << (cross < 0 ? " - " : " + ") << std::abs(2.0 * cross) << " x_p x_q";
  }
  os << " + " << qqq << " x_q^2";
  return os.str();
}

}  // namespace qf
