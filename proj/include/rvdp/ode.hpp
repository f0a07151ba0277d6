#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "rvdp/error.hpp"
#include "rvdp/model.hpp"

namespace rvdp {

/// Displacement and velocity of a single oscillator.
struct OscState {
  double u = 0.0;
  double v = 0.0;

  friend OscState operator+(const OscState& a, const OscState& b) { return {a.u + b.u, a.v + b.v}; }
  friend OscState operator*(double h, const OscState& s) { return {h * s.u, h * s.v}; }
  friend bool operator==(const OscState&, const OscState&) = default;
};

/// Slow complex amplitude alpha of the rotating-frame reduction.
using ComplexAmplitude = std::complex<double>;

inline double max_abs(const OscState& s) noexcept {
  return std::fmax(std::fabs(s.u), std::fabs(s.v));
}
inline double max_abs(const ComplexAmplitude& a) noexcept {
  return std::fmax(std::fabs(a.real()), std::fabs(a.imag()));
}

/// Sampled scalar signal u(t).
struct TimeSeries {
  std::vector<double> t;
  std::vector<double> u;

  /// Samples with t >= t_from.
  TimeSeries tail(double t_from) const {
    TimeSeries out;
    for (std::size_t k = 0; k < t.size(); ++k) {
      if (t[k] >= t_from) {
        out.t.push_back(t[k]);
        out.u.push_back(u[k]);
      }
    }
    return out;
  }
};

/// Every state of an integration run together with its time stamp.
template <class State>
struct Trajectory {
  std::vector<double> t;
  std::vector<State> states;
};

// ---------------------------------------------------------------------------
// Right-hand sides. Each returns the time derivative of the state.

/// van der Pol: u'' = -omega0^2 u + epsilon (1 - u^2) u'.
inline OscState rhs_vdp(const OscState& s, const ModelParams& p) noexcept {
  return {s.v, -p.omega0 * p.omega0 * s.u + p.epsilon * (1.0 - s.u * s.u) * s.v};
}

/// Rayleigh: u'' = -omega0^2 u + epsilon (1 - u'^2) u'.
inline OscState rhs_rayleigh(const OscState& s, const ModelParams& p) noexcept {
  return {s.v, -p.omega0 * p.omega0 * s.u + p.epsilon * (1.0 - s.v * s.v) * s.v};
}

/// Hybrid Rayleigh-van der Pol with the cubic velocity term outside epsilon:
/// u'' = -omega0^2 u + epsilon (1 - u^2) u' - delta u'^3.
inline OscState rhs_rvdp(const OscState& s, const ModelParams& p) noexcept {
  return {s.v, -p.omega0 * p.omega0 * s.u + p.epsilon * (1.0 - s.u * s.u) * s.v -
                   p.delta * s.v * s.v * s.v};
}

/// Acceleration of the continuum-form oscillator with a given linear stiffness:
/// -stiffness*u + epsilon (amp - u^2 - delta v^2) v.
inline double grouped_acceleration(double u, double v, double stiffness,
                                   const ModelParams& p) noexcept {
  return -stiffness * u + p.epsilon * (p.amp - u * u - p.delta * v * v) * v;
}

/// Throws ImaginaryFrequency unless omega0^2 - 2 mu > 0.
inline void check_homogeneous(const ModelParams& p) {
  if (!(p.omega0 * p.omega0 - 2.0 * p.mu > 0.0)) {
    throw Error(ErrorCode::ImaginaryFrequency,
                "homogeneous case needs omega0^2 - 2 mu > 0, got " +
                    std::to_string(p.omega0 * p.omega0 - 2.0 * p.mu));
  }
}

/// Oscillation frequency of the spatially homogeneous mode, sqrt(omega0^2 - 2 mu).
inline double homogeneous_frequency(const ModelParams& p) {
  check_homogeneous(p);
  return std::sqrt(p.omega0 * p.omega0 - 2.0 * p.mu);
}

/// Spatially homogeneous continuum field (u_xx dropped):
/// u'' = -(omega0^2 - 2 mu) u + epsilon (amp - u^2 - delta u'^2) u'.
inline OscState rhs_homogeneous(const OscState& s, const ModelParams& p) noexcept {
  return {s.v, grouped_acceleration(s.u, s.v, p.omega0 * p.omega0 - 2.0 * p.mu, p)};
}

/// Stuart-Landau amplitude equation alpha' = (epsilon/2)(1 - |alpha|^2) alpha.
inline ComplexAmplitude rhs_stuart_landau(const ComplexAmplitude& a, const ModelParams& p) noexcept {
  return 0.5 * p.epsilon * (1.0 - std::norm(a)) * a;
}

// ---------------------------------------------------------------------------
// Fixed-step classical Runge-Kutta.

inline constexpr double kBlowupThreshold = 1e12;

/// One RK4 step. State needs `State + State` and `double * State`.
template <class State, class Rhs>
State rk4_step(const Rhs& rhs, const State& y, double h) {
  const State k1 = rhs(y);
  const State k2 = rhs(y + (0.5 * h) * k1);
  const State k3 = rhs(y + (0.5 * h) * k2);
  const State k4 = rhs(y + h * k3);
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// Integrates y' = rhs(y) from y(0) = s0 for `steps` steps of size dt and keeps every
/// `stride`-th state (plus the final one). Throws BlowupError when max_abs(state)
/// exceeds kBlowupThreshold or stops being finite.
template <class State, class Rhs>
Trajectory<State> integrate(const Rhs& rhs, State s0, double dt, std::size_t steps,
                            std::size_t stride = 1) {
  if (!(dt > 0.0) || steps < 1 || stride < 1) {
    throw Error(ErrorCode::InvalidArgument, "integrate needs dt > 0, steps >= 1, stride >= 1");
  }
  if (!std::isfinite(max_abs(s0))) throw BlowupError(0, std::nullopt, "initial state not finite");

  Trajectory<State> out;
  out.t.reserve(steps / stride + 2);
  out.states.reserve(steps / stride + 2);
  out.t.push_back(0.0);
  out.states.push_back(s0);

  State y = std::move(s0);
  for (std::size_t n = 1; n <= steps; ++n) {
    y = rk4_step(rhs, y, dt);
    const double m = max_abs(y);
    if (!std::isfinite(m) || m > kBlowupThreshold) {
      throw BlowupError(n, std::nullopt, "state magnitude " + std::to_string(m));
    }
    if (n % stride == 0 || n == steps) {
      out.t.push_back(static_cast<double>(n) * dt);
      out.states.push_back(y);
    }
  }
  return out;
}

/// Binds a right-hand side of the form f(state, params).
template <class State>
auto bind_params(State (*rhs)(const State&, const ModelParams&) noexcept, const ModelParams& p) {
  return [rhs, p](const State& s) { return rhs(s, p); };
}

inline TimeSeries displacement(const Trajectory<OscState>& traj) {
  TimeSeries ts;
  ts.t = traj.t;
  ts.u.reserve(traj.states.size());
  for (const auto& s : traj.states) ts.u.push_back(s.u);
  return ts;
}

inline TimeSeries modulus(const Trajectory<ComplexAmplitude>& traj) {
  TimeSeries ts;
  ts.t = traj.t;
  ts.u.reserve(traj.states.size());
  for (const auto& a : traj.states) ts.u.push_back(std::abs(a));
  return ts;
}

}  // namespace rvdp
