#pragma once

#include <chrono>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "rvdp/analysis.hpp"
#include "rvdp/chain.hpp"
#include "rvdp/config.hpp"
#include "rvdp/error.hpp"
#include "rvdp/model.hpp"
#include "rvdp/network.hpp"
#include "rvdp/ode.hpp"
#include "rvdp/pde.hpp"

namespace rvdp {

/// Builds the initial condition named by the config preset.
inline InitialCondition make_initial_condition(const RunConfig& c) {
  const auto& p = c.params;
  switch (c.ic.kind) {
    case IcKind::AnalyticWave:
      return wave_initial_condition(PlaneWaveSpec::travelling(p));
    case IcKind::TwoWaves:
      return wave_sum_initial_condition(PlaneWaveSpec::travelling(p, +1),
                                        PlaneWaveSpec::travelling(p, -1));
    case IcKind::Uniform: {
      const double value = c.ic.a;
      return {[value](double) { return value; }, [](double) { return 0.0; }};
    }
    case IcKind::Gaussian: {
      const double centre = c.ic.a;
      const double width = c.ic.b;
      return {[centre, width](double x) {
                const double z = (x - centre) / width;
                return std::exp(-0.5 * z * z);
              },
              [](double) { return 0.0; }};
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown initial condition preset");
}

/// Boundary spec for a config; dirichlet_exact pins the ends to the analytic wave.
inline BoundarySpec make_boundary(const RunConfig& c) {
  switch (c.bc) {
    case BoundaryKind::Periodic: return BoundarySpec::periodic();
    case BoundaryKind::NeumannZero: return BoundarySpec::neumann_zero();
    case BoundaryKind::DirichletZero: return BoundarySpec::dirichlet_zero();
    case BoundaryKind::DirichletFunction: {
      const auto spec = PlaneWaveSpec::travelling(c.params);
      const double length = c.length;
      return BoundarySpec::dirichlet([spec](double t) { return analytic_wave(spec, 0.0, t); },
                                     [spec, length](double t) { return analytic_wave(spec, length, t); });
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown boundary kind");
}

inline GraphSpec make_graph(const RunConfig& c) {
  if (!c.adjacency.empty()) {
    std::ifstream in(c.adjacency);
    if (!in) throw Error(ErrorCode::Io, "cannot open adjacency file " + c.adjacency);
    return read_adjacency(in);
  }
  const auto call = detail::parse_call(c.graph);
  if (!call || call->second.size() != 1) {
    throw Error(ErrorCode::InvalidArgument, "bad graph description " + c.graph);
  }
  const auto n = static_cast<std::size_t>(call->second[0]);
  if (call->first == "complete") return complete_graph(n);
  if (call->first == "path") return path_graph(n);
  if (call->first == "edgeless") return edgeless_graph(n);
  throw Error(ErrorCode::InvalidArgument, "bad graph description " + c.graph);
}

/// Artifacts of one run, before they are written out.
struct RunOutput {
  std::string csv;
  std::string plot;
  std::vector<std::string> notes;  ///< extra `key: value` lines for meta.txt
};

namespace detail {

inline void csv_row(std::string& out, std::initializer_list<double> values) {
  bool first = true;
  for (double v : values) {
    if (!first) out += ',';
    out += format_double(v);
    first = false;
  }
  out += '\n';
}

inline std::string field_csv(const std::vector<Field>& snapshots, const Grid1D& g) {
  std::string csv = "t,x,u\n";
  for (const auto& f : snapshots) {
    for (std::size_t i = 0; i < f.size(); ++i) csv_row(csv, {f.time(), g.x(i), f[i]});
  }
  return csv;
}

inline std::string field_plot(std::string_view title) {
  return "# gnuplot script\nset datafile separator ','\nset key off\nset xlabel 'x'\n"
         "set ylabel 't'\nset zlabel 'u'\nset title '" +
         std::string(title) + "'\nsplot 'run.csv' using 2:1:3 every ::1 with points pt 7 ps 0.2 palette\n";
}

inline std::string series_plot(std::string_view title) {
  return "# gnuplot script\nset datafile separator ','\nset key off\nset xlabel 't'\n"
         "set ylabel 'u'\nset title '" +
         std::string(title) + "'\nplot 'run.csv' using 1:2 every ::1 with lines\n";
}

inline RunOutput run_ode(const RunConfig& c) {
  const auto& p = c.params;
  const auto steps = static_cast<std::size_t>(std::llround(c.duration / c.dt));
  if (steps < 1) throw Error(ErrorCode::InvalidGrid, "T/dt must be >= 1");
  const double dt = c.duration / static_cast<double>(steps);
  RunOutput out;
  TimeSeries ts;
  if (c.system == OdeSystem::StuartLandau) {
    const auto traj = integrate(bind_params(&rhs_stuart_landau, p), ComplexAmplitude{c.u0, c.v0},
                                dt, steps, c.stride);
    ts = modulus(traj);
    out.notes.push_back("series: |alpha|");
    out.notes.push_back("final |alpha|: " + format_double(ts.u.back()));
  } else {
    OscState (*rhs)(const OscState&, const ModelParams&) noexcept = &rhs_rvdp;
    switch (c.system) {
      case OdeSystem::Vdp: rhs = &rhs_vdp; break;
      case OdeSystem::Rayleigh: rhs = &rhs_rayleigh; break;
      case OdeSystem::Homogeneous:
        check_homogeneous(p);
        rhs = &rhs_homogeneous;
        out.notes.push_back("predicted frequency: " + format_double(homogeneous_frequency(p)));
        break;
      default: break;
    }
    const auto traj = integrate(bind_params(rhs, p), OscState{c.u0, c.v0}, dt, steps, c.stride);
    ts = displacement(traj);
    out.notes.push_back("series: u");
    try {
      out.notes.push_back("measured frequency (second half): " +
                          format_double(measure_frequency(ts.tail(0.5 * c.duration))));
    } catch (const Error&) {
      out.notes.push_back("measured frequency: n/a (too few zero crossings)");
    }
  }
  out.csv = "t,u\n";
  for (std::size_t k = 0; k < ts.t.size(); ++k) csv_row(out.csv, {ts.t[k], ts.u[k]});
  out.plot = series_plot(std::string(to_string(c.system)));
  return out;
}

inline RunOutput run_chain(const RunConfig& c, const Grid1D& g) {
  const auto ic = make_initial_condition(c);
  if (c.bc == BoundaryKind::DirichletFunction) {
    throw Error(ErrorCode::InvalidArgument, "chain supports periodic, neumann and dirichlet_zero");
  }
  const std::size_t sites = c.bc == BoundaryKind::Periodic ? g.nx() : g.points();
  std::vector<double> u(sites), v(sites);
  for (std::size_t i = 0; i < sites; ++i) {
    u[i] = ic.displacement(g.x(i));
    v[i] = ic.velocity(g.x(i));
  }
  const auto traj = integrate_chain(ChainState(u, v, g.dx()), c.params, c.bc, c.coupling, g.dt(),
                                    g.nt(), c.stride);
  RunOutput out;
  out.csv = "t,x,u\n";
  for (std::size_t k = 0; k < traj.t.size(); ++k) {
    for (std::size_t i = 0; i < sites; ++i) csv_row(out.csv, {traj.t[k], g.x(i), traj.states[k].u[i]});
  }
  out.plot = field_plot("chain");
  out.notes.push_back("sites: " + std::to_string(sites));
  if (c.coupling == CouplingMode::ContinuumNormalized) {
    const double limit = chain_dt_advisory(g.dx(), c.params.mu);
    out.notes.push_back(std::string("dt advisory: ") + (g.dt() <= limit ? "pass" : "warn") +
                        " (limit " + format_double(limit) + ")");
  }
  return out;
}

inline RunOutput run_pde(const RunConfig& c, const Grid1D& g) {
  const auto result = solve(c.params, g, make_initial_condition(c), make_boundary(c), c.stride);
  RunOutput out;
  out.csv = field_csv(result.snapshots, g);
  out.plot = field_plot("pde");
  out.notes.push_back("stability: " + result.stability.describe());
  out.notes.push_back("solver wall time: " + format_double(result.wall_time));
  return out;
}

inline RunOutput run_network(const RunConfig& c) {
  const auto graph = make_graph(c);
  const auto steps = static_cast<std::size_t>(std::llround(c.duration / c.dt));
  if (steps < 1) throw Error(ErrorCode::InvalidGrid, "T/dt must be >= 1");
  const double dt = c.duration / static_cast<double>(steps);
  RunOutput out;
  bool complete = true;
  for (std::size_t i = 0; i < graph.size(); ++i)
    for (std::size_t j = 0; j < graph.size(); ++j)
      if (i != j && graph(i, j) != 1.0) complete = false;
  if (complete) {
    try {
      out.notes.push_back("predicted sync frequency: " +
                          format_double(sync_frequency(c.params.omega0, c.params.mu, graph.size())));
    } catch (const Error& e) {
      out.notes.push_back(std::string("predicted sync frequency: ") + e.what());
    }
  }
  const std::vector<OscState> ic(graph.size(), OscState{c.u0, c.v0});
  const auto traj = simulate_linear_network(graph, c.params.omega0, c.params.mu, ic, dt, steps, c.stride);
  out.csv = "t,node,u\n";
  for (std::size_t k = 0; k < traj.t.size(); ++k) {
    for (std::size_t i = 0; i < graph.size(); ++i) {
      csv_row(out.csv, {traj.t[k], static_cast<double>(i), traj.nodes[i].u[k]});
    }
  }
  try {
    out.notes.push_back("measured frequency node 0: " + format_double(measure_frequency(traj.nodes[0])));
  } catch (const Error&) {
    out.notes.push_back("measured frequency node 0: n/a");
  }
  out.plot = "# gnuplot script\nset datafile separator ','\nset key off\nset xlabel 't'\n"
             "set ylabel 'u'\nplot 'run.csv' using 1:($2==0?$3:1/0) every ::1 with lines\n";
  return out;
}

}  // namespace detail

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

inline void write_artifacts(const RunConfig& c, const std::filesystem::path& dir, const RunOutput& out,
                            double wall_time) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());
  write_file(dir / "run.csv", out.csv);
  std::string meta = to_config_text(c);
  for (const auto& n : out.notes) meta += "# " + n + "\n";
  meta += "# wall time (s): " + format_double(wall_time) + "\n";
  write_file(dir / "meta.txt", meta);
  if (c.plot_script) write_file(dir / "plot.gp", out.plot);
}

/// Phase velocity of the analytic-wave PDE run for each coupling value, one subdirectory
/// per run. Snapshots are compared across a quarter wavelength of travel, so L must hold
/// a single wavelength for the correlation peak to be unique.
inline RunOutput run_sweep(const RunConfig& c) {
  RunOutput out;
  out.csv = "mu,v_measured,v_expected\n";
  for (std::size_t k = 0; k < c.sweep_mu.size(); ++k) {
    RunConfig sub = c;
    sub.command = Command::Pde;
    sub.params.mu = c.sweep_mu[k];
    if (sub.params.canonical) sub.params = canonical_delta(sub.params);
    sub.ic = {IcKind::AnalyticWave, 0.0, 0.0};
    sub.sweep_mu.clear();
    sub.output_dir = (std::filesystem::path(c.output_dir) / ("mu_" + std::to_string(k))).string();

    const Grid1D g(sub.length, sub.duration, sub.dx, sub.dt);
    const auto spec = PlaneWaveSpec::travelling(sub.params);
    const double travel_time = 0.25 * spec.wavelength() / std::fabs(spec.phase_velocity());
    const auto level = std::max<std::size_t>(1, std::min<std::size_t>(
                                                   g.nt(), static_cast<std::size_t>(travel_time / g.dt())));
    sub.stride = level;
    const auto start = std::chrono::steady_clock::now();
    const auto result = solve(sub.params, g, make_initial_condition(sub), make_boundary(sub), level);
    const double v = measure_phase_velocity(result.snapshots[0], result.snapshots[1], g);

    RunOutput child;
    child.csv = detail::field_csv(result.snapshots, g);
    child.plot = detail::field_plot("sweep mu=" + format_double(sub.params.mu));
    child.notes.push_back("stability: " + result.stability.describe());
    child.notes.push_back("phase velocity: " + format_double(v));
    write_artifacts(sub, sub.output_dir,
                    child, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    detail::csv_row(out.csv, {sub.params.mu, std::fabs(v), sub.params.omega0 / std::numbers::sqrt2});
  }
  out.plot = "# gnuplot script\nset datafile separator ','\nset key top left\nset xlabel 'mu'\n"
             "set ylabel 'phase velocity'\nplot 'run.csv' using 1:2 every ::1 with linespoints title "
             "'measured', '' using 1:3 every ::1 with lines title 'omega0/sqrt(2)'\n";
  return out;
}

/// Executes a simulation command and writes run.csv, meta.txt and (optionally) plot.gp
/// into c.output_dir. Throws rvdp::Error on failure.
inline void run_simulation(const RunConfig& c) {
  const auto start = std::chrono::steady_clock::now();
  RunOutput out;
  switch (c.command) {
    case Command::Ode: out = detail::run_ode(c); break;
    case Command::Chain: out = detail::run_chain(c, Grid1D(c.length, c.duration, c.dx, c.dt)); break;
    case Command::Pde: out = detail::run_pde(c, Grid1D(c.length, c.duration, c.dx, c.dt)); break;
    case Command::Network: out = detail::run_network(c); break;
    case Command::Sweep: out = run_sweep(c); break;
    case Command::Verify:
      throw Error(ErrorCode::InvalidArgument, "verify is not a simulation command");
  }
  write_artifacts(c, c.output_dir, out,
                  std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
}

/// Reads a long-format CSV back as rows of doubles (header skipped).
inline std::vector<std::vector<double>> read_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      const auto v = detail::to_double(cell);
      if (!v) throw Error(ErrorCode::TypeError, "bad CSV cell '" + cell + "'");
      row.push_back(*v);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace rvdp
