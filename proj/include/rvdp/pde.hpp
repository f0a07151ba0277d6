#pragma once

#include <chrono>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <utility>
#include <string>
#include <vector>

#include "rvdp/error.hpp"
#include "rvdp/model.hpp"

namespace rvdp {

/// Explicit finite-difference solver for
///
///   u_tt = -omega0^2 u + epsilon (amp - u^2 - delta u_t^2) u_t + 2 mu u + mu u_xx
///
/// discretized as
///
///   (u^{n+1} - 2u^n + u^{n-1}) / dt^2 = (-omega0^2 + 2mu) u^n
///       + epsilon (amp - (u^n)^2 - delta w^2) w + mu (u_{i+1} - 2u_i + u_{i-1})^n / dx^2,
///
/// with w = (u^n - u^{n-1}) / dt. The scheme is second order in space and first order in
/// time (the backward difference for u_t).
struct SchemeCoefficients {
  double linear = 0.0;     ///< dt^2 (-omega0^2 + 2 mu)
  double neighbour = 0.0;  ///< mu dt^2 / dx^2
  double damping = 0.0;    ///< epsilon dt^2
  double amp = 1.0;
  double delta = 0.0;
  double inv_dt = 0.0;
  double dt = 0.0;

  static SchemeCoefficients from(const ModelParams& p, const Grid1D& g) {
    const double dt2 = g.dt() * g.dt();
    SchemeCoefficients c;
    c.linear = dt2 * (-p.omega0 * p.omega0 + 2.0 * p.mu);
    c.neighbour = p.mu * dt2 / (g.dx() * g.dx());
    c.damping = p.epsilon * dt2;
    c.amp = p.amp;
    c.delta = p.delta;
    c.inv_dt = 1.0 / g.dt();
    c.dt = g.dt();
    return c;
  }
};

struct StabilityReport {
  double courant = 0.0;          ///< mu dt^2 / dx^2, should be <= 1
  double dt_limit = 0.0;         ///< 0.1 * 2 pi / omega0
  bool courant_ok = true;
  bool resolution_ok = true;

  bool pass() const noexcept { return courant_ok && resolution_ok; }

  std::string describe() const {
    std::string s = pass() ? "pass" : "warn";
    s += " (mu*dt^2/dx^2=" + std::to_string(courant) + (courant_ok ? " <= 1" : " > 1");
    s += ", dt limit " + std::to_string(dt_limit) + (resolution_ok ? " ok" : " exceeded") + ")";
    return s;
  }
};

/// Advisory a-priori checks. Never throws; the outcome travels with the SolveResult.
inline StabilityReport stability_check(const ModelParams& p, const Grid1D& g) noexcept {
  StabilityReport r;
  r.courant = p.mu * g.dt() * g.dt() / (g.dx() * g.dx());
  r.dt_limit = 0.1 * (2.0 * std::numbers::pi / p.omega0);
  r.courant_ok = r.courant <= 1.0;
  r.resolution_ok = g.dt() <= r.dt_limit;
  return r;
}

struct SolveResult {
  std::vector<Field> snapshots;
  double wall_time = 0.0;
  StabilityReport stability;
};

namespace detail {

/// u at index i+offset under the boundary rule; mirror for Neumann, wrap for periodic
/// (index nx is the same point as 0, so the wrap skips it).
inline double pde_neighbour(std::span<const double> u, std::size_t i, int offset,
                            BoundaryKind kind) noexcept {
  const std::size_t nx = u.size() - 1;
  if (offset < 0 && i == 0) {
    return kind == BoundaryKind::Periodic ? u[nx - 1] : u[1];
  }
  if (offset > 0 && i == nx) {
    return kind == BoundaryKind::Periodic ? u[1] : u[nx - 1];
  }
  return u[offset < 0 ? i - 1 : i + 1];
}

/// Applies the boundary rows that are not computed by the stencil.
inline void apply_boundary(std::vector<double>& next, const BoundarySpec& bc, double t_next) {
  const std::size_t nx = next.size() - 1;
  switch (bc.kind) {
    case BoundaryKind::DirichletZero:
      next[0] = 0.0;
      next[nx] = 0.0;
      break;
    case BoundaryKind::DirichletFunction:
      next[0] = bc.left(t_next);
      next[nx] = bc.right(t_next);
      break;
    case BoundaryKind::Periodic:
      next[nx] = next[0];
      break;
    case BoundaryKind::NeumannZero:
      break;
  }
}

/// Index range updated by the stencil for a boundary kind: [first, last].
inline std::pair<std::size_t, std::size_t> stencil_range(BoundaryKind kind, std::size_t nx) noexcept {
  switch (kind) {
    case BoundaryKind::NeumannZero: return {0, nx};
    case BoundaryKind::Periodic: return {0, nx - 1};
    default: return {1, nx - 1};
  }
}

inline void check_finite(const std::vector<double>& u, std::size_t level) {
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!std::isfinite(u[i])) throw BlowupError(level, i, "non-finite value");
  }
}

}  // namespace detail

/// Level n = 1 from the initial data by a second-order Taylor start:
/// u1 = u0 + dt V + dt^2/2 F(u0, V), with F the PDE right-hand side.
/// With V = 0 this matches the mirror ghost-point rule u^{-1} = u^{1}.
inline Field first_step(const Field& u0, const InitialCondition& ic, const ModelParams& p,
                        const Grid1D& g, const BoundarySpec& bc) {
  const std::size_t nx = g.nx();
  const auto u = u0.values();
  const double dt = g.dt();
  const double inv_dx2 = 1.0 / (g.dx() * g.dx());
  const double stiffness = -p.omega0 * p.omega0 + 2.0 * p.mu;
  std::vector<double> next(nx + 1);
  const auto [first, last] = detail::stencil_range(bc.kind, nx);
  for (std::size_t i = first; i <= last; ++i) {
    const double vel = ic.velocity ? ic.velocity(g.x(i)) : 0.0;
    const double left = detail::pde_neighbour(u, i, -1, bc.kind);
    const double right = detail::pde_neighbour(u, i, +1, bc.kind);
    const double accel = stiffness * u[i] +
                         p.epsilon * (p.amp - u[i] * u[i] - p.delta * vel * vel) * vel +
                         p.mu * (right - 2.0 * u[i] + left) * inv_dx2;
    next[i] = u[i] + dt * vel + 0.5 * dt * dt * accel;
  }
  detail::apply_boundary(next, bc, u0.time() + dt);
  detail::check_finite(next, 1);
  return Field(g, std::move(next), u0.time() + dt);
}

/// Advances (u^{n-1}, u^n) to u^{n+1}. Throws BlowupError on a non-finite value.
inline Field step(const Field& u_prev, const Field& u_curr, const SchemeCoefficients& c,
                  const BoundarySpec& bc, const Grid1D& g) {
  if (u_prev.size() != g.points() || u_curr.size() != g.points()) {
    throw Error(ErrorCode::GridMismatch, "step: fields do not match the grid");
  }
  const std::size_t nx = g.nx();
  const auto up = u_prev.values();
  const auto uc = u_curr.values();
  std::vector<double> next(nx + 1);
  const auto [first, last] = detail::stencil_range(bc.kind, nx);
  for (std::size_t i = first; i <= last; ++i) {
    const double ui = uc[i];
    const double w = (ui - up[i]) * c.inv_dt;
    const double left = detail::pde_neighbour(uc, i, -1, bc.kind);
    const double right = detail::pde_neighbour(uc, i, +1, bc.kind);
    next[i] = 2.0 * ui - up[i] + c.linear * ui + c.neighbour * (right - 2.0 * ui + left) +
              c.damping * (c.amp - ui * ui - c.delta * w * w) * w;
  }
  const auto level = static_cast<std::size_t>(std::llround(u_curr.time() * c.inv_dt)) + 1;
  const double t_next = static_cast<double>(level) * c.dt;
  detail::apply_boundary(next, bc, t_next);
  detail::check_finite(next, level);
  return Field(g, std::move(next), t_next);
}

/// Samples the initial displacement; a periodic grid copies u(0) onto the duplicate point x = L.
inline Field sample_initial(const InitialCondition& ic, const Grid1D& g, const BoundarySpec& bc) {
  std::vector<double> values(g.points());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = ic.displacement(g.x(i));
  if (bc.kind == BoundaryKind::Periodic) values[g.nx()] = values[0];
  Field f(g, std::move(values), 0.0);
  if (!f.all_finite()) throw Error(ErrorCode::NonFinite, "initial displacement is not finite");
  return f;
}

/// Runs the full scheme to T = g.duration(). Snapshots are taken at every level divisible
/// by `stride`, and the final level is always included.
inline SolveResult solve(const ModelParams& p, const Grid1D& g, const InitialCondition& ic,
                         const BoundarySpec& bc, std::size_t stride = 1) {
  validate_params(p);
  if (stride < 1) throw Error(ErrorCode::InvalidArgument, "snapshot stride must be >= 1");
  if (!ic.displacement) throw Error(ErrorCode::InvalidArgument, "initial displacement missing");

  const auto start = std::chrono::steady_clock::now();
  SolveResult result;
  result.stability = stability_check(p, g);

  Field prev = sample_initial(ic, g, bc);
  result.snapshots.push_back(prev);
  Field curr = first_step(prev, ic, p, g, bc);
  if (1 % stride == 0 || g.nt() == 1) result.snapshots.push_back(curr);

  const auto coeffs = SchemeCoefficients::from(p, g);
  for (std::size_t n = 1; n < g.nt(); ++n) {
    Field next = step(prev, curr, coeffs, bc, g);
    prev = std::move(curr);
    curr = std::move(next);
    if ((n + 1) % stride == 0 || n + 1 == g.nt()) result.snapshots.push_back(curr);
  }
  result.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace rvdp
