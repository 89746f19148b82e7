#include "quasifree/momentum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "quasifree/tolerances.hpp"

namespace qf {

DispersionGrid::DispersionGrid(std::vector<ModeRecord> modes, int global_epsilon)
    : modes_(std::move(modes)), global_epsilon_(global_epsilon) {
  if (modes_.empty()) throw std::invalid_argument("DispersionGrid: empty grid");
  if (global_epsilon_ != 1 && global_epsilon_ != -1) {
    throw std::invalid_argument("DispersionGrid: epsilon must be +1 or -1");
  }
  std::sort(modes_.begin(), modes_.end(),
            [](const ModeRecord& a, const ModeRecord& b) { return a.p < b.p; });
  partner_.assign(modes_.size(), -1);
  for (size_t i = 0; i < modes_.size(); ++i) {
    if (partner_[i] >= 0) continue;
    bool found = false;
    for (size_t j = 0; j < modes_.size(); ++j) {
      if (std::abs(modes_[j].p + modes_[i].p) <= 1e-12 * (1.0 + std::abs(modes_[i].p))) {
        if (std::abs(modes_[j].omega - modes_[i].omega) >
            tol::sym(std::abs(modes_[i].omega))) {
          throw std::invalid_argument("DispersionGrid: omega(-p) must equal omega(p)");
        }
        if (std::abs(modes_[j].delta - modes_[i].delta) > tol::sym(std::abs(modes_[i].delta))) {
          throw std::invalid_argument("DispersionGrid: delta(-p) must equal delta(p)");
        }
        partner_[i] = static_cast<int>(j);
        partner_[j] = static_cast<int>(i);
        found = true;
        break;
      }
    }
    if (!found) {
      throw std::invalid_argument("DispersionGrid: missing -p partner for a mode");
    }
  }
}

ModeSolution k0_of_mode(double p, double omega, double delta, int epsilon) {
  if (epsilon != 1 && epsilon != -1) {
    throw std::invalid_argument("k0_of_mode: epsilon must be +1 or -1");
  }
  ModeSolution out;
  out.p = p;
  out.epsilon = epsilon;
  const double scale2 = (1.0 + std::abs(omega) + std::abs(delta));
  if (omega == 0.0 && delta == 0.0) {
    out.region = ModeRegion::Zero;
    out.free_parameter = true;
    return out;
  }
  if (delta == 0.0) {
    out.region = ModeRegion::Trivial;
    out.k0 = Complex(0.0, 0.0);
  } else if (omega * omega >= delta * delta) {
    out.region = ModeRegion::Elliptic;
    const double root = std::sqrt(omega * omega - delta * delta);
    const double sgn = omega > 0.0 ? 1.0 : -1.0;
    out.k0 = Complex(delta / (omega + sgn * root), 0.0);
  } else {
    out.region = ModeRegion::Hyperbolic;
    const double root = std::sqrt(delta * delta - omega * omega);
    out.k0 = delta / Complex(omega, epsilon * root);
  }
  const Complex res = -delta + 2.0 * omega * out.k0 - delta * out.k0 * out.k0;
  out.residual = std::abs(res);
  if (out.residual > 1e-12 * scale2 * scale2) {
    throw std::runtime_error("k0_of_mode: closed form failed its own equation");
  }
  return out;
}

GridClassification classify_grid(const DispersionGrid& grid) {
  GridClassification out;
  for (const auto& rec : grid.records()) {
    const int eps = rec.epsilon.value_or(grid.global_epsilon());
    ModeSolution sol = k0_of_mode(rec.p, rec.omega, rec.delta, eps);
    switch (sol.region) {
      case ModeRegion::Zero:
        ++out.summary.zero;
        out.summary.continuum_of_states = true;
        break;
      case ModeRegion::Trivial:
        ++out.summary.trivial;
        break;
      case ModeRegion::Elliptic:
        ++out.summary.elliptic;
        break;
      case ModeRegion::Hyperbolic:
        ++out.summary.hyperbolic;
        out.summary.two_per_mode = true;
        break;
    }
    out.modes.push_back(std::move(sol));
  }
  return out;
}

Generator mode_block_generator(double omega, double delta) {
  MatrixXcd s = MatrixXcd::Zero(2, 2);
  s(0, 0) = omega;
  s(1, 1) = omega;
  MatrixXcd t = MatrixXcd::Zero(2, 2);
  t(0, 1) = -delta;
  t(1, 0) = -delta;
  return generator_aa(QuadHamiltonianAA(std::move(s), std::move(t)));
}

}  // namespace qf
