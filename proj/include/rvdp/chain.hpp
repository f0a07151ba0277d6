#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "rvdp/error.hpp"
#include "rvdp/model.hpp"
#include "rvdp/ode.hpp"

namespace rvdp {

/// How the nearest-neighbour coupling enters each site's acceleration.
enum class CouplingMode {
  /// mu (u_{i+1} + u_{i-1}) with the single-oscillator (rvdp) damping.
  Raw,
  /// mu (u_{i+1} - 2 u_i + u_{i-1}) / spacing^2 + 2 mu u_i with the continuum
  /// damping bracket epsilon (amp - u^2 - delta v^2) v, i.e. the PDE term by term.
  ContinuumNormalized,
};

struct ChainState {
  std::vector<double> u;
  std::vector<double> v;
  double spacing = 1.0;

  ChainState() = default;
  ChainState(std::vector<double> u_, std::vector<double> v_, double spacing_)
      : u(std::move(u_)), v(std::move(v_)), spacing(spacing_) {
    if (u.size() != v.size() || u.size() < 3) {
      throw Error(ErrorCode::InvalidArgument, "chain needs u, v of equal length >= 3");
    }
    if (!(spacing > 0.0)) throw Error(ErrorCode::InvalidArgument, "chain spacing must be > 0");
  }

  std::size_t size() const noexcept { return u.size(); }

  friend ChainState operator+(const ChainState& a, const ChainState& b) {
    ChainState out;
    out.spacing = a.spacing;
    out.u.resize(a.u.size());
    out.v.resize(a.v.size());
    for (std::size_t i = 0; i < a.u.size(); ++i) {
      out.u[i] = a.u[i] + b.u[i];
      out.v[i] = a.v[i] + b.v[i];
    }
    return out;
  }

  friend ChainState operator*(double h, const ChainState& s) {
    ChainState out;
    out.spacing = s.spacing;
    out.u.resize(s.u.size());
    out.v.resize(s.v.size());
    for (std::size_t i = 0; i < s.u.size(); ++i) {
      out.u[i] = h * s.u[i];
      out.v[i] = h * s.v[i];
    }
    return out;
  }

  friend bool operator==(const ChainState&, const ChainState&) = default;
};

inline double max_abs(const ChainState& s) noexcept {
  double m = 0.0;
  for (std::size_t i = 0; i < s.u.size(); ++i) {
    m = std::fmax(m, std::fmax(std::fabs(s.u[i]), std::fabs(s.v[i])));
    if (!std::isfinite(s.u[i]) || !std::isfinite(s.v[i])) return s.u[i] + s.v[i];
  }
  return m;
}

namespace detail {

/// Value of the neighbour at index i+offset (offset = +-1) under `kind`.
/// Dirichlet-zero ends see a zero neighbour; Neumann ends mirror the inner neighbour.
inline double chain_neighbour(const std::vector<double>& u, std::size_t i, int offset,
                              BoundaryKind kind) noexcept {
  const std::size_t n = u.size();
  const bool off_left = offset < 0 && i == 0;
  const bool off_right = offset > 0 && i + 1 == n;
  if (!off_left && !off_right) return u[offset < 0 ? i - 1 : i + 1];
  switch (kind) {
    case BoundaryKind::Periodic: return off_left ? u[n - 1] : u[0];
    case BoundaryKind::NeumannZero: return off_left ? u[1] : u[n - 2];
    default: return 0.0;
  }
}

}  // namespace detail

/// Time derivative of the chain. Periodic chains wrap site N-1 onto site 0.
inline ChainState rhs_chain(const ChainState& s, const ModelParams& p, BoundaryKind bc,
                            CouplingMode mode) {
  if (bc == BoundaryKind::DirichletFunction) {
    throw Error(ErrorCode::InvalidArgument, "chain supports periodic, neumann and dirichlet_zero");
  }
  const std::size_t n = s.size();
  ChainState d;
  d.spacing = s.spacing;
  d.u = s.v;
  d.v.resize(n);
  const double w2 = p.omega0 * p.omega0;
  const double inv_h2 = 1.0 / (s.spacing * s.spacing);
  for (std::size_t i = 0; i < n; ++i) {
    const double left = detail::chain_neighbour(s.u, i, -1, bc);
    const double right = detail::chain_neighbour(s.u, i, +1, bc);
    if (mode == CouplingMode::Raw) {
      const double f = rhs_rvdp(OscState{s.u[i], s.v[i]}, p).v;
      d.v[i] = f + p.mu * (right + left);
    } else {
      const double f = grouped_acceleration(s.u[i], s.v[i], w2, p);
      d.v[i] = f + p.mu * (right - 2.0 * s.u[i] + left) * inv_h2 + 2.0 * p.mu * s.u[i];
    }
  }
  return d;
}

/// Largest dt suggested for the continuum-normalized chain, 0.5 * spacing / sqrt(mu).
inline double chain_dt_advisory(double spacing, double mu) noexcept {
  return mu > 0.0 ? 0.5 * spacing / std::sqrt(mu) : INFINITY;
}

/// RK4 over the stacked system; snapshots every `stride` steps plus the final state.
inline Trajectory<ChainState> integrate_chain(const ChainState& s0, const ModelParams& p,
                                              BoundaryKind bc, CouplingMode mode, double dt,
                                              std::size_t steps, std::size_t stride = 1) {
  validate_params(p);
  if (s0.size() < 3) throw Error(ErrorCode::InvalidArgument, "chain needs at least 3 sites");
  auto rhs = [&](const ChainState& s) { return rhs_chain(s, p, bc, mode); };
  return integrate(rhs, s0, dt, steps, stride);
}

}  // namespace rvdp
