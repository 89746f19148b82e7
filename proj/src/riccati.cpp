#include "quasifree/riccati.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>

#include "quasifree/tolerances.hpp"

namespace qf {

RiccatiProblem::RiccatiProblem(Mode mode, MatrixXcd op) : mode_(mode), op_(std::move(op)) {}

RiccatiProblem RiccatiProblem::from_generator(const Generator& g) {
  const Generator aa = g.basis() == Basis::AA ? g : change_basis(g, Basis::AA);
  return RiccatiProblem(Mode::Generator, aa.matrix());
}

RiccatiProblem RiccatiProblem::from_propagator(const Propagator& v) {
  const Propagator aa = v.basis() == Basis::AA ? v : change_basis(v, Basis::AA);
  return RiccatiProblem(Mode::Propagator, aa.matrix());
}

MatrixXcd RiccatiProblem::a() const { return op_.topLeftCorner(modes(), modes()); }
MatrixXcd RiccatiProblem::b() const { return op_.topRightCorner(modes(), modes()); }
MatrixXcd RiccatiProblem::c() const { return op_.bottomLeftCorner(modes(), modes()); }
MatrixXcd RiccatiProblem::d() const { return op_.bottomRightCorner(modes(), modes()); }

double residual(const RiccatiProblem& p, const MatrixXcd& k) {
  if (k.rows() != p.modes() || k.cols() != p.modes()) {
    throw std::invalid_argument("residual: K has the wrong size");
  }
  return (p.c() + p.d() * k - k * p.a() - k * p.b() * k).norm();
}

namespace {

Solution make_solution(const RiccatiProblem& p, MatrixXcd k) {
  const double norm = la::opnorm(k);
  if (norm > 1.0) k /= norm;  // inside the tolerance band already checked
  Solution s{AngularOperator(k), false, false, 0.0};
  s.on_unit_sphere = std::abs(la::opnorm(k) - 1.0) <= tol::res(1.0);
  s.real_symmetric = reality_check(s.k);
  s.residual = residual(p, k);
  return s;
}

bool duplicate_of(const std::vector<Solution>& sols, const MatrixXcd& k) {
  return std::any_of(sols.begin(), sols.end(), [&](const Solution& s) {
    return (s.k.k - k).norm() <= tol::dedupe(k.norm());
  });
}

// Canonical order: lexicographic on rounded entries, row-major, real part
// before imaginary part.
void sort_canonically(std::vector<Solution>& sols) {
  auto rounded = [](const MatrixXcd& k) {
    std::vector<double> v;
    v.reserve(2 * k.size());
    for (int i = 0; i < k.rows(); ++i) {
      for (int j = 0; j < k.cols(); ++j) {
        v.push_back(std::round(k(i, j).real() * 1e9) / 1e9);
        v.push_back(std::round(k(i, j).imag() * 1e9) / 1e9);
      }
    }
    return v;
  };
  std::sort(sols.begin(), sols.end(), [&](const Solution& a, const Solution& b) {
    return rounded(a.k.k) < rounded(b.k.k);
  });
}

}  // namespace

SolutionSet solve_scalar(const RiccatiProblem& p) {
  if (p.modes() != 1) throw std::invalid_argument("solve_scalar: N = 1 required");
  const Complex a = p.a()(0, 0);
  const Complex b = p.b()(0, 0);
  const Complex c = p.c()(0, 0);
  const Complex d = p.d()(0, 0);
  // C + (D - A)K - BK² = 0.
  const Complex c2 = -b;
  const Complex c1 = d - a;
  const Complex c0 = c;
  const double scale = std::abs(a) + std::abs(b) + std::abs(c) + std::abs(d);
  const double zero_cut = 1e-14 * (1.0 + scale);

  SolutionSet out;
  std::vector<Complex> roots;
  if (std::abs(c2) <= zero_cut) {
    if (std::abs(c1) <= zero_cut) {
      if (std::abs(c0) <= zero_cut) {
        out.continuum = true;
        return out;
      }
      return out;  // inconsistent linear equation, no solution
    }
    roots.push_back(-c0 / c1);
  } else {
    const Complex disc = c1 * c1 - 4.0 * c2 * c0;
    Complex sq = std::sqrt(disc);
    if ((std::conj(c1) * sq).real() < 0.0) sq = -sq;
    const Complex qq = -0.5 * (c1 + sq);
    roots.push_back(qq / c2);
    if (std::abs(qq) > zero_cut) roots.push_back(c0 / qq);
  }
  for (const Complex& root : roots) {
    if (std::abs(root) > 1.0 + tol::res(1.0)) continue;
    MatrixXcd k(1, 1);
    k(0, 0) = root;
    if (!duplicate_of(out.solutions, k)) out.solutions.push_back(make_solution(p, k));
  }
  sort_canonically(out.solutions);
  out.unique = out.solutions.size() == 1;
  return out;
}

namespace {

struct Cluster {
  std::vector<int> indices;    // positions in the Schur diagonal
  Complex center;
  int geometric_multiplicity;
  MatrixXcd ordered_basis;     // 2N x m, leading-chain columns
};

// Union-find clustering of eigenvalues at the merge tolerance.
std::vector<std::vector<int>> cluster_indices(const VectorXcd& eigs, double tol_abs) {
  const int n = static_cast<int>(eigs.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (std::abs(eigs(i) - eigs(j)) <= tol_abs) parent[find(i)] = find(j);
    }
  }
  std::map<int, std::vector<int>> groups;
  for (int i = 0; i < n; ++i) groups[find(i)].push_back(i);
  std::vector<std::vector<int>> out;
  for (auto& [root, members] : groups) out.push_back(std::move(members));
  return out;
}

// Enumerate all (k_c) with 0 <= k_c <= m_c and sum k_c = want.
void selections(const std::vector<int>& sizes, int want, std::vector<int>& current,
                std::vector<std::vector<int>>& out) {
  const int idx = static_cast<int>(current.size());
  if (idx == static_cast<int>(sizes.size())) {
    if (want == 0) out.push_back(current);
    return;
  }
  int remaining = 0;
  for (size_t i = idx; i < sizes.size(); ++i) remaining += sizes[i];
  if (want > remaining) return;
  for (int take = 0; take <= std::min(sizes[idx], want); ++take) {
    current.push_back(take);
    selections(sizes, want - take, current, out);
    current.pop_back();
  }
}

}  // namespace

SolutionSet solve_spectral(const RiccatiProblem& p, int max_modes) {
  const int n = p.modes();
  if (n > max_modes) {
    throw std::invalid_argument("solve_spectral: mode count exceeds the enumeration limit");
  }
  const MatrixXcd& op = p.operand();
  const double opn = op.norm();

  SolutionSet out;

  // A scalar operand leaves every subspace invariant: a true continuum.
  const Complex mean = op.trace() / static_cast<double>(2 * n);
  if ((op - mean * MatrixXcd::Identity(2 * n, 2 * n)).norm() <= tol::res(opn)) {
    out.continuum = true;
    return out;
  }

  la::SchurForm base = la::schur(op);
  const double cluster_tol = tol::cluster_rel * std::max(opn, 1.0);
  const auto groups = cluster_indices(base.eigenvalues(), cluster_tol);

  std::vector<Cluster> clusters;
  for (const auto& g : groups) {
    Cluster c;
    c.indices = g;
    Complex sum(0.0, 0.0);
    for (int i : g) sum += base.eigenvalues()(i);
    c.center = sum / static_cast<double>(g.size());
    la::SchurForm reordered = base;
    reordered.reorder_to_front(g);
    c.ordered_basis = reordered.q.leftCols(static_cast<int>(g.size()));
    const int m = static_cast<int>(g.size());
    const MatrixXcd head = reordered.t.topLeftCorner(m, m);
    // Rank at an absolute threshold tied to the cluster-merge tolerance:
    // singular values below it are the rounding noise of a degenerate
    // eigenvalue, not structure.
    Eigen::JacobiSVD<MatrixXcd> head_svd(head - c.center * MatrixXcd::Identity(m, m));
    int structural_rank = 0;
    for (int i = 0; i < m; ++i) {
      if (head_svd.singularValues()(i) > cluster_tol) ++structural_rank;
    }
    c.geometric_multiplicity = m - structural_rank;
    clusters.push_back(std::move(c));
  }

  std::vector<int> sizes;
  for (const auto& c : clusters) sizes.push_back(static_cast<int>(c.indices.size()));
  std::vector<std::vector<int>> picks;
  std::vector<int> scratch;
  selections(sizes, n, scratch, picks);

  for (const auto& pick : picks) {
    bool canonical = true;
    for (size_t ci = 0; ci < clusters.size(); ++ci) {
      if (pick[ci] > 0 && pick[ci] < sizes[ci] && clusters[ci].geometric_multiplicity > 1) {
        canonical = false;
        break;
      }
    }
    if (!canonical) {
      out.incomplete = true;  // a family of invariant subspaces exists here
      continue;
    }
    MatrixXcd span(2 * n, n);
    int col = 0;
    for (size_t ci = 0; ci < clusters.size(); ++ci) {
      if (pick[ci] == 0) continue;
      span.middleCols(col, pick[ci]) = clusters[ci].ordered_basis.leftCols(pick[ci]);
      col += pick[ci];
    }
    const MatrixXcd basis = la::orthonormal_columns(span);
    const MatrixXcd top = basis.topRows(n);
    const MatrixXcd bottom = basis.bottomRows(n);
    Eigen::JacobiSVD<MatrixXcd> svd(top, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double smax = svd.singularValues()(0);
    const double smin = svd.singularValues()(n - 1);
    if (smax <= 0.0 || smin / smax < tol::kernel_cut) continue;  // not a graph over H+
    const MatrixXcd k = bottom * svd.solve(MatrixXcd::Identity(n, n));
    if (la::opnorm(k) > 1.0 + tol::res(1.0)) continue;
    if (residual(p, k) > tol::res(opn * opn)) continue;
    if (!duplicate_of(out.solutions, k)) out.solutions.push_back(make_solution(p, MatrixXcd(k)));
  }

  sort_canonically(out.solutions);
  out.unique = out.solutions.size() == 1 && !out.incomplete;
  return out;
}

}  // namespace qf
