#pragma once

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "rvdp/analysis.hpp"
#include "rvdp/chain.hpp"
#include "rvdp/config.hpp"
#include "rvdp/network.hpp"
#include "rvdp/ode.hpp"
#include "rvdp/pde.hpp"
#include "rvdp/runner.hpp"

namespace rvdp::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct Options {
  /// When set, criterion 9 also runs `<cli> verify --no-cli-check` and requires exit 0.
  std::optional<std::string> cli_path;
  /// Scratch space for file-producing checks.
  std::filesystem::path scratch =
      std::filesystem::temp_directory_path() / ("rvdp_acceptance_" + std::to_string(::getpid()));
};

namespace detail {

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;

inline ModelParams params(double omega0, double epsilon, double mu) {
  ModelParams p;
  p.omega0 = omega0;
  p.epsilon = epsilon;
  p.mu = mu;
  return canonical_delta(p);
}

}  // namespace detail

/// 1. PDE travelling-wave convergence under simultaneous (dx, dt) halving.
inline CriterionResult travelling_wave_oracle() {
  using namespace detail;
  CriterionResult r{1, "travelling-wave oracle", false, "", 0.0};
  const auto p = params(1.0, 0.5, 1.0);
  const auto spec = PlaneWaveSpec::travelling(p);
  const double length = 5.0 * kPi * kSqrt2;
  const double period = 2.0 * kPi / p.omega0;
  const auto ic = wave_initial_condition(spec);
  const auto bc = BoundarySpec::periodic();

  const Grid1D coarse(length, period, length / 512, 2e-3);
  const Grid1D fine(length, period, length / 1024, 1e-3);
  const auto rc = solve(p, coarse, ic, bc, coarse.nt());
  const auto rf = solve(p, fine, ic, bc, fine.nt());
  const auto exact = [&](double x, double t) { return analytic_wave(spec, x, t); };
  const auto ec = error_norms(rc.snapshots.back(), exact, coarse);
  const auto ef = error_norms(rf.snapshots.back(), exact, fine);
  const double order = convergence_order({{coarse.dt(), ec.l2}, {fine.dt(), ef.l2}});

  // Discretization-error estimate of the coarse run from the coarse/fine difference at shared nodes.
  double estimate = 0.0;
  for (std::size_t i = 0; i < coarse.points(); ++i) {
    estimate = std::max(estimate, std::fabs(rc.snapshots.back()[i] - rf.snapshots.back()[2 * i]));
  }
  const double runtime = rc.wall_time + rf.wall_time;
  r.passed = order >= 0.9 && ef.linf <= 5.0 * estimate && runtime < 30.0;
  r.detail = "order=" + fmt(order) + " (>=0.9), L2 " + fmt(ec.l2) + " -> " + fmt(ef.l2) +
             ", fine Linf=" + fmt(ef.linf) + " <= 5*" + fmt(estimate) + ", solve " + fmt(runtime) + "s";
  return r;
}

/// 2. Phase velocity omega0/sqrt(2), independent of mu.
inline CriterionResult dispersion() {
  using namespace detail;
  CriterionResult r{2, "wavenumber/dispersion", true, "", 0.0};
  double worst = 0.0;
  for (double omega0 : {1.0, 2.0}) {
    for (double mu : {0.5, 1.0, kSqrt2}) {
      const auto p = params(omega0, 0.5, mu);
      const auto spec = PlaneWaveSpec::travelling(p);
      const double travel = 0.25 * spec.wavelength() / std::fabs(spec.phase_velocity());
      const Grid1D g(spec.wavelength(), travel, spec.wavelength() / 256, 1e-3);
      const auto res = solve(p, g, wave_initial_condition(spec), BoundarySpec::periodic(), g.nt());
      const double v = measure_phase_velocity(res.snapshots.front(), res.snapshots.back(), g);
      const double expected = omega0 / kSqrt2;
      const double rel = std::fabs(std::fabs(v) - expected) / expected;
      worst = std::max(worst, rel);
      if (rel > 0.02) r.passed = false;
    }
  }
  r.detail = "worst relative deviation " + fmt(worst) + " over 6 (omega0, mu) pairs (<=0.02)";
  return r;
}

/// 3. Closed-form residual vanishes for k = sqrt(2) and not for k = 1.
inline CriterionResult analytic_residual() {
  using namespace detail;
  CriterionResult r{3, "analytic residual", false, "", 0.0};
  std::mt19937_64 rng(20240613);
  std::uniform_real_distribution<double> pos(-20.0, 20.0), time(0.0, 50.0), coef(0.0, 3.0),
      freq(0.5, 3.0);
  double worst1 = 0.0, worst3 = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const auto p = params(freq(rng), coef(rng), coef(rng));
    auto spec = PlaneWaveSpec::travelling(p);
    worst1 = std::max(worst1, std::fabs(residual_pointwise(spec, p, pos(rng), time(rng))));
    spec.dims = 3;
    worst3 = std::max(worst3, std::fabs(residual_pointwise(spec, p, {pos(rng), pos(rng), pos(rng)}, time(rng))));
  }
  const auto p = params(1.0, 1.0, 1.0);
  const PlaneWaveSpec wrong{1.0, 1.0, 1.0, +1, 1};
  const double probe = std::fabs(residual_pointwise(wrong, p, 0.0, kPi / 2));
  r.passed = worst1 < 1e-12 && worst3 < 1e-12 && probe >= 0.1;
  r.detail = "max |res| 1-D " + fmt(worst1) + ", 3-D " + fmt(worst3) + " (<1e-12); k=1 probe " + fmt(probe) +
             " (>=0.1)";
  return r;
}

/// 4. Stuart-Landau amplitude settles on |alpha| = 1.
inline CriterionResult stuart_landau_cycle() {
  using namespace detail;
  CriterionResult r{4, "Stuart-Landau limit cycle", false, "", 0.0};
  ModelParams p;
  p.epsilon = 1.0;
  const double duration = 100.0 / p.epsilon;
  const double dt = 1e-2;
  const auto steps = static_cast<std::size_t>(std::llround(duration / dt));
  const auto traj = integrate(bind_params(&rhs_stuart_landau, p), ComplexAmplitude{0.1, 0.0}, dt, steps);
  double worst = 0.0;
  for (std::size_t k = 0; k < traj.t.size(); ++k) {
    if (traj.t[k] >= 0.5 * duration) worst = std::max(worst, std::fabs(std::abs(traj.states[k]) - 1.0));
  }
  r.passed = worst <= 1e-6;
  r.detail = "max ||alpha|-1| over final half " + fmt(worst) + " (<=1e-6)";
  return r;
}

/// 5. Homogeneous-mode frequency sqrt(omega0^2 - 2 mu).
inline CriterionResult homogeneous_frequency_check() {
  using namespace detail;
  CriterionResult r{5, "homogeneous frequency", false, "", 0.0};
  ModelParams p;
  p.omega0 = 2.0;
  p.mu = 1.0;
  p.epsilon = 0.1;
  p.delta = 1.0 / (p.omega0 * p.omega0 - 2.0 * p.mu);
  const double duration = 200.0;
  const double dt = 1e-3;
  const auto traj = integrate(bind_params(&rhs_homogeneous, p), OscState{0.5, 0.0}, dt,
                              static_cast<std::size_t>(duration / dt), 10);
  const double w = measure_frequency(displacement(traj).tail(0.5 * duration));
  const double rel = std::fabs(w - kSqrt2) / kSqrt2;
  r.passed = rel <= 0.01;
  r.detail = "measured " + fmt(w) + " vs sqrt(2), rel " + fmt(rel) + " (<=0.01)";
  return r;
}

/// 6. Complete-graph synchronization frequency and the unstable side of the boundary.
inline CriterionResult network_sync() {
  using namespace detail;
  CriterionResult r{6, "network sync", true, "", 0.0};
  const double omega = 2.0;
  for (const auto& [n, mu] : {std::pair<std::size_t, double>{11, 0.1}, {101, 0.0003}}) {
    const auto g = complete_graph(n);
    const double predicted = sync_frequency(omega, mu, n);
    const auto traj = simulate_linear_network(g, omega, mu, std::vector<OscState>(n, OscState{1.0, 0.0}),
                                              5e-3, 6000, 2);
    double worst = 0.0;
    for (const auto& node : traj.nodes) {
      worst = std::max(worst, std::fabs(measure_frequency(node) - predicted) / predicted);
    }
    if (worst > 0.01) r.passed = false;
    r.detail += "n=" + std::to_string(n) + " rel " + fmt(worst) + "; ";
  }
  bool unstable_flagged = false;
  bool blowup = false;
  try {
    sync_frequency(1.0, 0.1, 101);
  } catch (const Error& e) {
    unstable_flagged = e.code() == ErrorCode::UnstableRegime;
  }
  try {
    simulate_linear_network(complete_graph(101), 1.0, 0.1, std::vector<OscState>(101, OscState{1.0, 0.0}),
                            5e-3, 4000, 100);
  } catch (const BlowupError&) {
    blowup = true;
  }
  r.passed = r.passed && unstable_flagged && blowup;
  r.detail += std::string("unstable case: ") + (unstable_flagged ? "UnstableRegime" : "not flagged") + ", " +
              (blowup ? "NumericalBlowup" : "no blowup");
  return r;
}

/// 7. Continuum-normalized chain converges to the analytic wave at second order.
inline CriterionResult chain_continuum() {
  using namespace detail;
  CriterionResult r{7, "chain -> continuum", true, "", 0.0};
  const auto p = params(1.0, 0.5, 1.0);
  const auto spec = PlaneWaveSpec::travelling(p);
  const double length = 2.0 * spec.wavelength();
  const double duration = 2.0 * kPi / p.omega0;
  std::vector<double> errors;
  for (std::size_t n : {32, 64, 128}) {
    const double h = length / static_cast<double>(n);
    std::vector<double> u(n), v(n);
    for (std::size_t i = 0; i < n; ++i) {
      u[i] = analytic_wave(spec, static_cast<double>(i) * h, 0.0);
      v[i] = analytic_wave_velocity(spec, static_cast<double>(i) * h, 0.0);
    }
    const auto steps = static_cast<std::size_t>(std::ceil(duration / (0.1 * h)));
    const double dt = duration / static_cast<double>(steps);
    const auto traj = integrate_chain(ChainState(u, v, h), p, BoundaryKind::Periodic,
                                      CouplingMode::ContinuumNormalized, dt, steps, 10);
    double e = 0.0;
    for (std::size_t k = 0; k < traj.t.size(); ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        e = std::max(e, std::fabs(traj.states[k].u[i] - analytic_wave(spec, static_cast<double>(i) * h, traj.t[k])));
      }
    }
    errors.push_back(e);
  }
  for (std::size_t k = 1; k < errors.size(); ++k) {
    const double ratio = errors[k - 1] / errors[k];
    if (ratio < 3.0) r.passed = false;
    r.detail += "ratio " + fmt(ratio) + " ";
  }
  r.detail += "(>=3 each), Linf " + fmt(errors.front()) + " -> " + fmt(errors.back());
  return r;
}

/// 8. Superposed exact waves stay superposed only in the linear case.
inline CriterionResult superposition_failure() {
  using namespace detail;
  CriterionResult r{8, "superposition failure", false, "", 0.0};
  const double omega0 = 2.0;
  const double mu = 1.0;
  const double five_periods = 5.0 * 2.0 * kPi / omega0;
  auto report = [&](double epsilon) {
    const auto p = params(omega0, epsilon, mu);
    const auto right = PlaneWaveSpec::travelling(p, +1);
    const auto left = PlaneWaveSpec::travelling(p, -1);
    const double length = 2.0 * right.wavelength();
    const Grid1D g(length, five_periods, length / 256, 1e-3);
    return superposition_deviation(p, g, BoundarySpec::periodic(), right, left, 20);
  };
  const auto nonlinear = report(1.0);
  const auto linear = report(0.0);
  const bool grows = nonlinear.first_exceed_time && *nonlinear.first_exceed_time <= five_periods;
  const bool control = linear.max_deviation <= 10.0 * linear.baseline_max;
  r.passed = grows && control;
  r.detail = "eps=1 exceeds 10x baseline at t=" +
             (nonlinear.first_exceed_time ? fmt(*nonlinear.first_exceed_time) : std::string("never")) +
             " (<= " + fmt(five_periods) + "); eps=0 max/baseline " +
             fmt(linear.max_deviation / linear.baseline_max) + " (<=10)";
  return r;
}

/// Random but valid configurations for the round-trip property.
inline RunConfig random_config(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::uniform_int_distribution<int> pick(0, 5);
  RunConfig c;
  c.command = static_cast<Command>(pick(rng));
  c.params.omega0 = 0.1 + 5.0 * u01(rng);
  c.params.epsilon = 2.0 * u01(rng);
  c.params.mu = 3.0 * u01(rng);
  c.params.amp = 0.5 + u01(rng);
  if (u01(rng) < 0.5) {
    c.params = canonical_delta(c.params);
  } else {
    c.params.delta = u01(rng);
    c.params.canonical = false;
  }
  c.system = static_cast<OdeSystem>(pick(rng) % 5);
  c.coupling = u01(rng) < 0.5 ? CouplingMode::Raw : CouplingMode::ContinuumNormalized;
  c.sweep_mu = {0.0, u01(rng), 1.0 + u01(rng)};
  c.length = 1.0 + 30.0 * u01(rng);
  c.duration = 0.5 + 10.0 * u01(rng);
  c.dx = 0.01 + 0.1 * u01(rng);
  c.dt = 1e-4 + 1e-2 * u01(rng);
  c.graph = "complete(" + std::to_string(2 + pick(rng) * 20) + ")";
  c.bc = static_cast<BoundaryKind>(pick(rng) % 4);
  c.ic = IcPreset{static_cast<IcKind>(pick(rng) % 4), 0.0, 0.0};
  if (c.ic.kind == IcKind::Uniform) c.ic.a = u01(rng) - 0.5;
  if (c.ic.kind == IcKind::Gaussian) c.ic = {IcKind::Gaussian, 10.0 * u01(rng), 0.1 + u01(rng)};
  c.u0 = 2.0 * u01(rng) - 1.0;
  c.v0 = 2.0 * u01(rng) - 1.0;
  c.output_dir = "out/run_" + std::to_string(pick(rng));
  c.stride = 1 + static_cast<std::size_t>(pick(rng));
  c.plot_script = u01(rng) < 0.5;
  return c;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// 9. Deterministic CSV output, lossless CSV and config round trips, and the verify command.
inline CriterionResult determinism_and_interfaces(const Options& opts) {
  using namespace detail;
  CriterionResult r{9, "determinism & interfaces", true, "", 0.0};
  namespace fs = std::filesystem;
  fs::remove_all(opts.scratch);

  RunConfig c;
  c.command = Command::Pde;
  c.params = params(2.0, 1.0, kSqrt2);
  c.length = 22.0;
  c.duration = 1.0;
  c.dx = 0.05;
  c.dt = 1e-3;
  c.stride = 100;
  c.output_dir = (opts.scratch / "a").string();
  run_simulation(c);
  c.output_dir = (opts.scratch / "b").string();
  run_simulation(c);
  const std::string csv_a = slurp(opts.scratch / "a" / "run.csv");
  const bool identical = !csv_a.empty() && csv_a == slurp(opts.scratch / "b" / "run.csv");

  // CSV values must read back bit for bit.
  const Grid1D g(c.length, c.duration, c.dx, c.dt);
  const auto result = solve(c.params, g, make_initial_condition(c), make_boundary(c), c.stride);
  std::istringstream in(csv_a);
  const auto rows = read_csv(in);
  bool lossless = rows.size() == result.snapshots.size() * g.points();
  for (std::size_t k = 0; lossless && k < result.snapshots.size(); ++k) {
    for (std::size_t i = 0; i < g.points(); ++i) {
      const auto& row = rows[k * g.points() + i];
      if (row[0] != result.snapshots[k].time() || row[2] != result.snapshots[k][i]) lossless = false;
    }
  }

  std::mt19937_64 rng(9);
  int round_trips = 0;
  for (int k = 0; k < 20; ++k) {
    const auto cfg = random_config(rng);
    if (parse_config(to_config_text(cfg), cfg.command) == cfg) ++round_trips;
  }

  r.passed = identical && lossless && round_trips == 20;
  r.detail = std::string("CSV ") + (identical ? "bitwise identical" : "DIFFERS") + ", CSV read-back " +
             (lossless ? "exact" : "LOSSY") + ", config round trips " + std::to_string(round_trips) + "/20";

  if (opts.cli_path) {
    const std::string cmd = "\"" + *opts.cli_path + "\" verify --no-cli-check > \"" +
                            (opts.scratch / "verify.log").string() + "\" 2>&1";
    const int status = std::system(cmd.c_str());
    const bool ok = status == 0;
    r.passed = r.passed && ok;
    r.detail += std::string(", verify exit ") + (ok ? "0" : "nonzero");
  }
  fs::remove_all(opts.scratch);
  return r;
}

/// Runs all criteria in order. Exceptions inside a criterion count as a failure.
inline std::vector<CriterionResult> run_all(const Options& opts = {}) {
  const std::vector<std::pair<int, std::function<CriterionResult()>>> suite = {
      {1, travelling_wave_oracle},
      {2, dispersion},
      {3, analytic_residual},
      {4, stuart_landau_cycle},
      {5, homogeneous_frequency_check},
      {6, network_sync},
      {7, chain_continuum},
      {8, superposition_failure},
      {9, [&] { return determinism_and_interfaces(opts); }},
  };
  std::vector<CriterionResult> results;
  for (const auto& [id, fn] : suite) {
    const auto start = std::chrono::steady_clock::now();
    CriterionResult res;
    try {
      res = fn();
    } catch (const std::exception& e) {
      res = {id, "criterion " + std::to_string(id), false, std::string("error: ") + e.what(), 0.0};
    }
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (id == 2 && res.seconds >= 120.0) {
      res.passed = false;
      res.detail += ", runtime over 2 min";
    }
    results.push_back(std::move(res));
  }
  return results;
}

inline std::string format_line(const CriterionResult& r) {
  char head[96];
  std::snprintf(head, sizeof head, "[%s] %d. %-28s (%.2fs) ", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(),
                r.seconds);
  return head + r.detail;
}

}  // namespace rvdp::acceptance
