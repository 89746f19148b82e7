// Command-line front end: run the built-in reference scenarios, solve
// user-supplied problems, and emit tables or schema-stable JSON.

#include <CLI11.hpp>
#include <Eigen/Eigenvalues>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <limits>
#include <set>

#include "quasifree/checks.hpp"
#include "quasifree/io.hpp"
#include "quasifree/riccati.hpp"
#include "quasifree/states.hpp"
#include "quasifree/tolerances.hpp"

using namespace qf;
using io::Json;

namespace {

struct Options {
  std::string format = "table";
  std::string input;
  std::string state = "fock";
  double omega0 = 2.0;
  double sample_t = 0.7;
  int trials = 20;
  int gram_points = 0;
  int trials_scale = 1;
  std::uint64_t seed = 12345;
  int t_max_exponent = 20;  // doubling schedule end, t = 2^k
  int example = 1;
  int direction = 0;      // 0 = both
  int epsilon_override = 0;  // 0 = take it from the grid file
};

Json report_header(const std::string& command) {
  Json j;
  j["schema"] = 1;
  j["command"] = command;
  return j;
}

void emit(const Json& j, const Options& opt) {
  if (opt.format == "json") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  // Table rendering: walk the object and print key: value lines.
  std::function<void(const Json&, int)> walk = [&](const Json& node, int indent) {
    const std::string pad(2 * static_cast<size_t>(indent), ' ');
    if (node.is_object()) {
      for (const auto& [key, value] : node.items()) {
        if (value.is_object() || (value.is_array() && !value.empty() && value[0].is_object())) {
          std::cout << pad << key << ":\n";
          walk(value, indent + 1);
        } else {
          std::cout << pad << key << ": " << value.dump() << "\n";
        }
      }
    } else if (node.is_array()) {
      for (const auto& item : node) {
        std::cout << pad << "-\n";
        walk(item, indent + 1);
      }
    } else {
      std::cout << pad << node.dump() << "\n";
    }
  };
  walk(j, 0);
}

QuadHamiltonianPQ one_mode_pq(double m, double l, double k) {
  return QuadHamiltonianPQ(MatrixXd(m * MatrixXd::Identity(1, 1)),
                           MatrixXd(l * MatrixXd::Identity(1, 1)),
                           MatrixXd(k * MatrixXd::Identity(1, 1)));
}

DispersionGrid default_pairing_grid() {
  std::vector<ModeRecord> modes;
  for (int j = 1; j <= 20; ++j) {
    const double p = 0.1 * j;
    modes.push_back({p, p * p, 0.5, std::nullopt});
    modes.push_back({-p, p * p, 0.5, std::nullopt});
  }
  return DispersionGrid(std::move(modes), +1);
}

Json solution_json(const Solution& s) {
  Json j;
  j["K"] = io::matrix_json(s.k.k);
  j["norm"] = la::opnorm(s.k.k);
  j["on_unit_sphere"] = s.on_unit_sphere;
  j["real_symmetric"] = s.real_symmetric;
  j["residual"] = s.residual;
  const ExtendedQuadraticForm raa = r_from_k(s.k, Basis::AA);
  const ExtendedQuadraticForm rpq = r_from_k(s.k, Basis::PQ);
  j["R_aa"] = io::matrix_json(raa.r());
  j["R_pq"] = io::matrix_json(rpq.r());
  if (s.k.modes() == 1 && is_real_compatible(rpq)) {
    j["q"] = describe_form_1mode(rpq);
  }
  return j;
}

Json limit_json(const LimitReport& rep) {
  Json j;
  j["direction"] = rep.direction > 0 ? "+inf" : "-inf";
  j["has_limit"] = rep.has_limit;
  if (!rep.note.empty()) j["note"] = rep.note;
  Json probes = Json::array();
  for (const auto& p : rep.probes) {
    Json pj;
    pj["f"] = io::vector_json(p.direction);
    Json tail = Json::array();
    const size_t n = p.values.size();
    for (size_t i = n >= 5 ? n - 5 : 0; i < n; ++i) tail.push_back(p.values[i]);
    pj["tail_values"] = tail;
    pj["class"] = p.classification == ProbeClass::Converged
                      ? "converged"
                      : (p.classification == ProbeClass::Decayed ? "decayed" : "indeterminate");
    if (p.classification == ProbeClass::Converged) pj["limit_value"] = p.limit_value;
    probes.push_back(std::move(pj));
  }
  j["probes"] = std::move(probes);
  if (rep.has_limit) {
    j["limit_R"] = io::matrix_json(rep.limit->form().r());
    if (rep.limit->modes() == 1) j["limit_description"] = describe_form_1mode(rep.limit->form());
  }
  return j;
}

Json generator_section(const Generator& gpq) {
  Json j;
  const Generator gaa = change_basis(gpq, Basis::AA);
  j["G_pq"] = io::real_matrix_json(gpq.matrix().real());
  j["G_aa"] = io::matrix_json(gaa.matrix());
  return j;
}

double matrix_deviation(const MatrixXcd& a, const MatrixXcd& b) { return (a - b).norm(); }

// ---------------------------------------------------------------------------
// example subcommand

Json run_example_oscillator(const Options& opt, bool repulsive) {
  const double w = opt.omega0;
  if (w <= 0.0) throw std::invalid_argument("example: omega0 must be positive");
  Json j = report_header(repulsive ? "example 4 (repulsive oscillator)" : "example 1 (oscillator)");
  j["omega0"] = w;
  const Generator g = generator_pq(one_mode_pq(1.0, 0.0, repulsive ? -w * w : w * w));
  j["generator"] = generator_section(g);

  // Expected aa coefficient matrix.
  const double s_coef = repulsive ? (1 - w * w) / 2 : (1 + w * w) / 2;
  const double t_coef = repulsive ? (1 + w * w) / 2 : (1 - w * w) / 2;
  MatrixXcd gaa_expected(2, 2);
  gaa_expected << s_coef, t_coef, -t_coef, -s_coef;
  j["generator"]["G_aa_deviation_from_closed_form"] =
      matrix_deviation(change_basis(g, Basis::AA).matrix(), gaa_expected);

  const double t = opt.sample_t;
  const Propagator vt = propagator(g, t);
  MatrixXcd vt_expected(2, 2);
  if (repulsive) {
    const double ep = std::exp(w * t), em = std::exp(-w * t);
    vt_expected << (ep + em) / 2, (ep - em) / (2 * w), w * (ep - em) / 2, (ep + em) / 2;
  } else {
    vt_expected << std::cos(w * t), std::sin(w * t) / w, -w * std::sin(w * t), std::cos(w * t);
  }
  j["propagator"]["t"] = t;
  j["propagator"]["V_t"] = io::real_matrix_json(vt.matrix().real());
  j["propagator"]["deviation_from_closed_form"] = matrix_deviation(vt.matrix(), vt_expected);
  j["propagator"]["metric_residual"] = vt.metric_residual();

  const RiccatiProblem problem = RiccatiProblem::from_generator(g);
  const SolutionSet sols = solve_spectral(problem);
  Json sols_json = Json::array();
  for (const auto& s : sols.solutions) {
    Json sj = solution_json(s);
    Complex expected_k;
    if (repulsive) {
      // The branch with matching imaginary sign.
      const Complex kp = -(Complex(1.0, -w) / Complex(1.0, w));
      expected_k = s.k.k(0, 0).imag() >= 0 ? kp : std::conj(kp);
    } else {
      expected_k = Complex(-(1.0 - w) / (1.0 + w), 0.0);
    }
    sj["K_deviation_from_closed_form"] = std::abs(s.k.k(0, 0) - expected_k);
    const ExtendedQuadraticForm rpq = r_from_k(s.k, Basis::PQ);
    sj["invariance_residual"] = invariance_residual(rpq, vt);
    sols_json.push_back(std::move(sj));
  }
  j["solutions"] = std::move(sols_json);
  j["solution_count"] = sols.solutions.size();
  j["expected_solution_count"] = repulsive ? 2 : 1;

  const QuadraticState fock = fock_state(1);
  if (!repulsive) {
    // Evolved Fock functional against the explicit rotation formula.
    checks::Rng rng(opt.seed);
    std::uniform_real_distribution<double> tdist(-5.0, 5.0);
    std::uniform_real_distribution<double> xdist(-2.0, 2.0);
    double worst = 0.0;
    for (int i = 0; i < std::max(1, opt.trials); ++i) {
      const double tt = tdist(rng);
      const double xp = xdist(rng), xq = xdist(rng);
      const QuadraticState evolved = pullback(fock, propagator(g, tt));
      const double a = std::cos(w * tt) * xp + std::sin(w * tt) / w * xq;
      const double b = -w * std::sin(w * tt) * xp + std::cos(w * tt) * xq;
      VectorXd f(2);
      f << xp, xq;
      worst = std::max(worst,
                       std::abs(evolved.char_fn(f) - std::exp(-(a * a + b * b) / 4.0)));
    }
    j["evolved_fock_worst_deviation"] = worst;
  }
  TimeLimitOptions lopt;
  lopt.seed = opt.seed;
  lopt.max_doublings = opt.t_max_exponent;
  Json limits = Json::array();
  for (int dir : {+1, -1}) {
    if (opt.direction != 0 && dir != opt.direction) continue;
    const LimitReport rep = time_limit(fock, g, dir, lopt);
    Json lj = limit_json(rep);
    if (repulsive) {
      lj["expected_has_limit"] = true;
      if (rep.has_limit) {
        // Supported on the line contracting in this direction: (1, -w)
        // for t -> +inf, (1, +w) for t -> -inf.
        VectorXd v(2);
        v << 1.0, dir > 0 ? -w : w;
        v.normalize();
        const MatrixXcd expected_r = (v * v.transpose()).cast<Complex>();
        lj["limit_R_deviation_from_closed_form"] =
            matrix_deviation(rep.limit->form().r(), expected_r);
      }
    } else {
      lj["expected_has_limit"] = (w == 1.0);  // the fock state is a fixed point there
    }
    limits.push_back(std::move(lj));
  }
  j["fock_limits"] = std::move(limits);
  return j;
}

Json run_example_free_or_dilation(const Options& opt, bool dilation_flow) {
  Json j = report_header(dilation_flow ? "example 3 (dilation)" : "example 2 (free evolution)");
  const Generator g =
      dilation_flow ? generator_pq(one_mode_pq(0.0, -1.0, 0.0)) : generator_pq(one_mode_pq(1.0, 0.0, 0.0));
  j["generator"] = generator_section(g);

  const double t = opt.sample_t;
  const Propagator vt = propagator(g, t);
  MatrixXcd vt_expected(2, 2);
  if (dilation_flow) {
    vt_expected << std::exp(-t), 0, 0, std::exp(t);
  } else {
    vt_expected << 1, t, 0, 1;
  }
  j["propagator"]["t"] = t;
  j["propagator"]["V_t"] = io::real_matrix_json(vt.matrix().real());
  j["propagator"]["deviation_from_closed_form"] = matrix_deviation(vt.matrix(), vt_expected);

  const RiccatiProblem problem = RiccatiProblem::from_generator(g);
  const SolutionSet sols = solve_spectral(problem);
  Json sols_json = Json::array();
  for (const auto& s : sols.solutions) {
    Json sj = solution_json(s);
    const Complex expected_k =
        dilation_flow ? Complex(s.k.k(0, 0).real() >= 0 ? 1.0 : -1.0, 0.0) : Complex(-1.0, 0.0);
    sj["K_deviation_from_closed_form"] = std::abs(s.k.k(0, 0) - expected_k);
    const ExtendedQuadraticForm rpq = r_from_k(s.k, Basis::PQ);
    sj["invariance_residual"] = invariance_residual(rpq, vt);
    sols_json.push_back(std::move(sj));
  }
  j["solutions"] = std::move(sols_json);
  j["solution_count"] = sols.solutions.size();
  j["expected_solution_count"] = dilation_flow ? 2 : 1;

  TimeLimitOptions lopt;
  lopt.seed = opt.seed;
  lopt.max_doublings = opt.t_max_exponent;
  Json limits = Json::array();
  for (int dir : {+1, -1}) {
    if (opt.direction != 0 && dir != opt.direction) continue;
    const LimitReport rep = time_limit(fock_state(1), g, dir, lopt);
    Json lj = limit_json(rep);
    if (rep.has_limit) {
      MatrixXcd expected_r(2, 2);
      if (dilation_flow) {
        expected_r = MatrixXcd::Zero(2, 2);
        expected_r(dir > 0 ? 0 : 1, dir > 0 ? 0 : 1) = 1.0;
      } else {
        expected_r = MatrixXcd::Zero(2, 2);
        expected_r(0, 0) = 0.5;
      }
      lj["limit_R_deviation_from_closed_form"] =
          matrix_deviation(rep.limit->form().r(), expected_r);
      lj["limit_is_minimal"] = is_minimal(rep.limit->form());
    }
    limits.push_back(std::move(lj));
  }
  j["fock_limits"] = std::move(limits);
  return j;
}

Json modes_report(const DispersionGrid& grid) {
  const GridClassification cls = classify_grid(grid);
  Json j;
  Json table = Json::array();
  for (const auto& m : cls.modes) {
    Json mj;
    mj["p"] = m.p;
    switch (m.region) {
      case ModeRegion::Zero: mj["region"] = "zero"; break;
      case ModeRegion::Trivial: mj["region"] = "trivial"; break;
      case ModeRegion::Elliptic: mj["region"] = "elliptic"; break;
      case ModeRegion::Hyperbolic: mj["region"] = "hyperbolic"; break;
    }
    if (m.free_parameter) {
      mj["k0"] = "free";
    } else {
      mj["k0"] = io::complex_json(m.k0);
      mj["abs_k0"] = std::abs(m.k0);
      mj["epsilon"] = m.epsilon;
      mj["residual"] = m.residual;
    }
    table.push_back(std::move(mj));
  }
  j["modes"] = std::move(table);
  j["summary"]["zero"] = cls.summary.zero;
  j["summary"]["trivial"] = cls.summary.trivial;
  j["summary"]["elliptic"] = cls.summary.elliptic;
  j["summary"]["hyperbolic"] = cls.summary.hyperbolic;
  j["summary"]["continuum_of_states"] = cls.summary.continuum_of_states;
  j["summary"]["two_per_mode"] = cls.summary.two_per_mode;
  return j;
}

Json run_example_pairing(const Options& opt) {
  Json j = report_header("example 5 (pairing model)");
  const DispersionGrid grid =
      opt.input.empty() ? default_pairing_grid() : io::load_grid(opt.input);
  j.update(modes_report(grid));
  // Cross-check each (p, -p) block against the spectral solver.
  double worst = 0.0;
  std::set<double> seen;
  for (const auto& rec : grid.records()) {
    const double ap = std::abs(rec.p);
    if (seen.count(ap)) continue;
    seen.insert(ap);
    const ModeSolution mode =
        k0_of_mode(rec.p, rec.omega, rec.delta, rec.epsilon.value_or(grid.global_epsilon()));
    if (mode.free_parameter) continue;
    const SolutionSet sols = solve_spectral(
        RiccatiProblem::from_generator(mode_block_generator(rec.omega, rec.delta)));
    MatrixXcd expected = MatrixXcd::Zero(2, 2);
    expected(0, 1) = mode.k0;
    expected(1, 0) = mode.k0;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : sols.solutions) best = std::min(best, (s.k.k - expected).norm());
    worst = std::max(worst, best);
  }
  j["cross_solver_worst_deviation"] = worst;
  return j;
}

Json run_example(const Options& opt) {
  switch (opt.example) {
    case 1: return run_example_oscillator(opt, false);
    case 2: return run_example_free_or_dilation(opt, false);
    case 3: return run_example_free_or_dilation(opt, true);
    case 4: return run_example_oscillator(opt, true);
    case 5: return run_example_pairing(opt);
    default: throw std::invalid_argument("example: n must be 1..5");
  }
}

// ---------------------------------------------------------------------------
// solve / evolve / limit

Json run_solve(const Options& opt) {
  Json j = report_header("solve");
  const io::HamiltonianFile f = io::load_hamiltonian(opt.input);
  const Generator g = f.generator();
  j["basis"] = to_string(f.basis());
  j["modes"] = g.modes();
  const RiccatiProblem problem = RiccatiProblem::from_generator(g);
  const SolutionSet sols = solve_spectral(problem);
  if (g.modes() == 1) {
    const SolutionSet scalar = solve_scalar(problem);
    j["scalar_solver_agrees"] =
        scalar.solutions.size() == sols.solutions.size() && scalar.continuum == sols.continuum;
  }
  Json sols_json = Json::array();
  for (const auto& s : sols.solutions) {
    Json sj = solution_json(s);
    if (opt.gram_points > 0) {
      // Gram matrix of the derived state over seeded random points.
      const ExtendedQuadraticForm rpq = r_from_k(s.k, Basis::PQ);
      checks::Rng rng(opt.seed);
      std::vector<VectorXd> pts;
      pts.push_back(VectorXd::Zero(2 * g.modes()));
      for (int i = 1; i < opt.gram_points; ++i) {
        pts.push_back(checks::random_real_vector(rng, 2 * g.modes()));
      }
      const MatrixXcd a = gram_matrix(rpq, pts);
      sj["gram"] = io::matrix_json(a);
      Eigen::SelfAdjointEigenSolver<MatrixXcd> es((a + a.adjoint()) / 2.0);
      sj["gram_min_eigenvalue"] = es.eigenvalues().minCoeff();
    }
    sols_json.push_back(std::move(sj));
  }
  j["solutions"] = std::move(sols_json);
  j["solution_count"] = sols.solutions.size();
  j["unique"] = sols.unique;
  j["continuum"] = sols.continuum;
  j["incomplete"] = sols.incomplete;
  return j;
}

QuadraticState named_state(const std::string& name, int modes) {
  if (name == "fock") return fock_state(modes);
  if (name == "trivial") return trivial_state(modes);
  throw std::invalid_argument("state must be 'fock' or 'trivial'");
}

Json run_evolve(const Options& opt) {
  Json j = report_header("evolve");
  const io::HamiltonianFile f = io::load_hamiltonian(opt.input);
  Generator g = f.generator();
  if (g.basis() != Basis::PQ) g = change_basis(g, Basis::PQ);
  const QuadraticState w = named_state(opt.state, g.modes());
  const Propagator vt = propagator(g, opt.sample_t);
  const QuadraticState evolved = pullback(w, vt);
  j["t"] = opt.sample_t;
  j["state"] = opt.state;
  j["R_evolved"] = io::matrix_json(evolved.form().r());
  if (g.modes() == 1) j["description"] = describe_form_1mode(evolved.form());
  checks::Rng rng(opt.seed);
  Json samples = Json::array();
  for (int i = 0; i < 8; ++i) {
    const VectorXd fvec = checks::random_real_vector(rng, 2 * g.modes());
    Json sample;
    sample["f"] = io::vector_json(fvec);
    sample["q"] = io::ext_real_json(evolved.form().eval(VectorXcd(fvec.cast<Complex>())));
    sample["chi"] = evolved.char_fn(fvec);
    samples.push_back(std::move(sample));
  }
  j["samples"] = std::move(samples);
  return j;
}

Json run_limit(const Options& opt) {
  Json j = report_header("limit");
  const io::HamiltonianFile f = io::load_hamiltonian(opt.input);
  Generator g = f.generator();
  if (g.basis() != Basis::PQ) g = change_basis(g, Basis::PQ);
  const QuadraticState w = named_state(opt.state, g.modes());
  TimeLimitOptions lopt;
  lopt.seed = opt.seed;
  lopt.max_doublings = opt.t_max_exponent;
  Json limits = Json::array();
  for (int dir : {+1, -1}) {
    if (opt.direction != 0 && dir != opt.direction) continue;
    limits.push_back(limit_json(time_limit(w, g, dir, lopt)));
  }
  j["state"] = opt.state;
  j["limits"] = std::move(limits);
  return j;
}

Json run_modes(const Options& opt) {
  Json j = report_header("modes");
  DispersionGrid grid = opt.input.empty() ? default_pairing_grid() : io::load_grid(opt.input);
  if (opt.epsilon_override != 0) {
    grid = DispersionGrid(grid.records(), opt.epsilon_override);
  }
  j.update(modes_report(grid));
  return j;
}

int run_check(const Options& opt) {
  // The invariant suite always runs at the reference tolerances.
  tol::set_scale(1.0);
  const auto results = checks::run_all_checks(opt.seed, opt.trials_scale);
  int failures = 0;
  double worst = 0.0;
  for (const auto& r : results) {
    std::cout << (r.pass ? "PASS" : "FAIL") << "  " << r.name << "  (worst residual " << r.worst
              << ")";
    if (!r.pass) std::cout << "  -- " << r.detail;
    std::cout << "\n";
    if (!r.pass) ++failures;
    worst = std::max(worst, r.worst);
  }
  std::cout << (failures == 0 ? "all checks passed" : "checks FAILED") << " (" << results.size()
            << " properties, worst residual " << worst << ", seed " << opt.seed << ")\n";
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"invariant quadratic states of quadratic bosonic hamiltonians"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub, bool needs_input) {
    sub->add_option("--format", opt.format, "output format: table or json")
        ->check(CLI::IsMember({"table", "json"}));
    sub->add_option("--seed", opt.seed, "seed for sampled sections");
    auto* in = sub->add_option("--input", opt.input, "input file path");
    if (needs_input) in->required();
  };

  CLI::App* example = app.add_subcommand("example", "run a built-in reference scenario (1..5)");
  example->add_option("n", opt.example, "scenario number 1..5")->required()->check(CLI::Range(1, 5));
  example->add_option("--omega0", opt.omega0, "frequency for scenarios 1 and 4");
  example->add_option("--t", opt.sample_t, "sample time for the printed propagator");
  example->add_option("--t-max", opt.t_max_exponent, "doubling-schedule exponent bound");
  example->add_option("--trials", opt.trials, "sampling trials in annotated sections");
  add_common(example, false);

  CLI::App* solve = app.add_subcommand("solve", "solve the graph-invariance equation");
  solve->add_option("--gram-points", opt.gram_points,
                    "emit the gram matrix of each derived state over this many points");
  add_common(solve, true);

  CLI::App* evolve = app.add_subcommand("evolve", "pull a state back along the flow");
  evolve->add_option("--t", opt.sample_t, "evolution time");
  evolve->add_option("--state", opt.state, "initial state: fock or trivial");
  add_common(evolve, true);

  CLI::App* limit = app.add_subcommand("limit", "long-time limit of an evolved state");
  limit->add_option("--state", opt.state, "initial state: fock or trivial");
  limit->add_option("--direction", opt.direction, "+1, -1 or 0 for both")
      ->check(CLI::IsMember({-1, 0, 1}));
  add_common(limit, true);

  CLI::App* modes = app.add_subcommand("modes", "per-mode pairing-model classification");
  modes->add_option("--epsilon", opt.epsilon_override, "override the grid's branch choice")
      ->check(CLI::IsMember({-1, 1}));
  add_common(modes, false);

  CLI::App* check = app.add_subcommand("check", "run the full invariant suite");
  check->add_option("--seed", opt.seed, "suite seed");
  check->add_option("--trials-scale", opt.trials_scale, "multiplier on sample counts");

  CLI11_PARSE(app, argc, argv);

  // Exploratory tolerance scale; `check` pins it back internally.
  if (const char* env = std::getenv("QUASIFREE_TOL_SCALE")) {
    try {
      tol::set_scale(std::stod(env));
    } catch (...) {
      std::cerr << "warning: ignoring malformed QUASIFREE_TOL_SCALE\n";
    }
  }

  try {
    if (app.got_subcommand(example)) {
      emit(run_example(opt), opt);
    } else if (app.got_subcommand(solve)) {
      emit(run_solve(opt), opt);
    } else if (app.got_subcommand(evolve)) {
      emit(run_evolve(opt), opt);
    } else if (app.got_subcommand(limit)) {
      emit(run_limit(opt), opt);
    } else if (app.got_subcommand(modes)) {
      emit(run_modes(opt), opt);
    } else if (app.got_subcommand(check)) {
      return run_check(opt);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
