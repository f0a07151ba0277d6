#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include "rvdp/error.hpp"
#include "rvdp/model.hpp"
#include "rvdp/ode.hpp"
#include "rvdp/pde.hpp"

namespace rvdp {

/// u = amplitude * sin(omega t + direction * k * x) in 1-D, or
/// u = amplitude * sin(omega t + direction * k (x + y + z)) in 3-D.
struct PlaneWaveSpec {
  double amplitude = 1.0;
  double omega = 1.0;
  double k = std::numbers::sqrt2;
  int direction = +1;
  int dims = 1;

  /// The exact travelling wave of the continuum model for these parameters.
  static PlaneWaveSpec travelling(const ModelParams& p, int direction = +1) {
    return {std::sqrt(p.amp), p.omega0, std::numbers::sqrt2, direction, 1};
  }

  double phase(double x, double t) const noexcept {
    return omega * t + static_cast<double>(direction) * k * x;
  }
  double phase(const std::array<double, 3>& r, double t) const noexcept {
    return omega * t + static_cast<double>(direction) * k * (r[0] + r[1] + r[2]);
  }
  /// Distance travelled per unit time (negative for direction = +1).
  double phase_velocity() const noexcept {
    return -omega / (static_cast<double>(direction) * k);
  }
  double wavelength() const noexcept { return 2.0 * std::numbers::pi / k; }
};

inline double analytic_wave(const PlaneWaveSpec& s, double x, double t) noexcept {
  return s.amplitude * std::sin(s.phase(x, t));
}
inline double analytic_wave(const PlaneWaveSpec& s, const std::array<double, 3>& r, double t) noexcept {
  return s.amplitude * std::sin(s.phase(r, t));
}
/// Time derivative of analytic_wave.
inline double analytic_wave_velocity(const PlaneWaveSpec& s, double x, double t) noexcept {
  return s.amplitude * s.omega * std::cos(s.phase(x, t));
}

/// Initial data (u, u_t at t = 0) taken from a closed-form wave.
inline InitialCondition wave_initial_condition(const PlaneWaveSpec& s) {
  return {[s](double x) { return analytic_wave(s, x, 0.0); },
          [s](double x) { return analytic_wave_velocity(s, x, 0.0); }};
}

/// Sum of two closed-form waves as initial data.
inline InitialCondition wave_sum_initial_condition(const PlaneWaveSpec& a, const PlaneWaveSpec& b) {
  return {[a, b](double x) { return analytic_wave(a, x, 0.0) + analytic_wave(b, x, 0.0); },
          [a, b](double x) {
            return analytic_wave_velocity(a, x, 0.0) + analytic_wave_velocity(b, x, 0.0);
          }};
}

namespace detail {

/// u_tt minus the continuum right-hand side, with `lattice_gain` the coefficient of the
/// mu*u term (2 in 1-D, 6 in 3-D) and `laplacian_k2` the factor of -u in the Laplacian.
inline double residual_from_phase(const PlaneWaveSpec& s, const ModelParams& p, double xi,
                                  double lattice_gain, double laplacian_k2) noexcept {
  const double u = s.amplitude * std::sin(xi);
  const double ut = s.amplitude * s.omega * std::cos(xi);
  const double utt = -s.omega * s.omega * u;
  const double lap = -laplacian_k2 * u;
  const double rhs = -p.omega0 * p.omega0 * u +
                     p.epsilon * (p.amp - u * u - p.delta * ut * ut) * ut +
                     lattice_gain * p.mu * u + p.mu * lap;
  return utt - rhs;
}

}  // namespace detail

/// Residual of the closed-form wave in the continuum PDE at (x, t), using analytic
/// derivatives. The bracket parameter is p.amp.
inline double residual_pointwise(const PlaneWaveSpec& s, const ModelParams& p, double x,
                                 double t) noexcept {
  return detail::residual_from_phase(s, p, s.phase(x, t), 2.0, s.k * s.k);
}

/// 3-D lattice version: u_tt - [f(u, u_t) + 6 mu u + mu laplacian(u)].
inline double residual_pointwise(const PlaneWaveSpec& s, const ModelParams& p,
                                 const std::array<double, 3>& r, double t) noexcept {
  return detail::residual_from_phase(s, p, s.phase(r, t), 6.0, 3.0 * s.k * s.k);
}

/// Coefficient of the epsilon*cos(xi) term left over when u = A_wave sin(omega0 t + sqrt(2) x)
/// is substituted into the amplitude-parameterized equation with bracket parameter A_param
/// (delta = 1/omega0^2). Zero iff A_wave is 0 or sqrt(A_param).
inline double amplitude_consistency(double a_param, double a_wave, double omega0) {
  if (a_param < 0.0 || a_wave < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "amplitudes must be non-negative");
  }
  return (a_param - a_wave * a_wave) * a_wave * omega0;
}

struct ErrorReport {
  double l2 = 0.0;    ///< sqrt(dx * sum e_i^2)
  double linf = 0.0;  ///< max |e_i|
  double at_time = 0.0;
};

inline ErrorReport error_norms(const Field& computed, const Field& reference, const Grid1D& g) {
  if (computed.size() != g.points() || reference.size() != g.points()) {
    throw Error(ErrorCode::GridMismatch, "error_norms: fields do not match the grid");
  }
  ErrorReport r;
  r.at_time = computed.time();
  double sum = 0.0;
  for (std::size_t i = 0; i < computed.size(); ++i) {
    const double e = std::fabs(computed[i] - reference[i]);
    sum += e * e;
    r.linf = std::max(r.linf, e);
  }
  r.l2 = std::sqrt(g.dx() * sum);
  return r;
}

/// Error against a closed form u(x, t) evaluated at the field's own time.
template <class Exact>
  requires std::invocable<Exact, double, double>
ErrorReport error_norms(const Field& computed, Exact&& exact, const Grid1D& g) {
  const double t = computed.time();
  return error_norms(computed, Field::sample(g, [&](double x) { return exact(x, t); }, t), g);
}

/// Least-squares slope of log(error) against log(h).
inline double convergence_order(const std::vector<std::pair<double, double>>& samples) {
  if (samples.size() < 2) throw Error(ErrorCode::DegenerateInput, "need at least two (h, error) pairs");
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const auto [h, e] = samples[k];
    if (!(h > 0.0) || !(e > 0.0) || !std::isfinite(h) || !std::isfinite(e)) {
      throw Error(ErrorCode::DegenerateInput, "h and error must be positive and finite");
    }
    if (k > 0 && !(h < samples[k - 1].first)) {
      throw Error(ErrorCode::DegenerateInput, "h must be strictly decreasing");
    }
  }
  const double n = static_cast<double>(samples.size());
  double mx = 0.0, my = 0.0;
  for (const auto& [h, e] : samples) {
    mx += std::log(h);
    my += std::log(e);
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (const auto& [h, e] : samples) {
    const double dx = std::log(h) - mx;
    sxy += dx * (std::log(e) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

/// Upward and downward zero crossings of a sampled signal, located by linear interpolation.
inline std::vector<double> zero_crossings(const TimeSeries& ts) {
  std::vector<double> out;
  for (std::size_t k = 0; k + 1 < ts.u.size(); ++k) {
    const double a = ts.u[k];
    const double b = ts.u[k + 1];
    if ((a < 0.0) != (b < 0.0)) {
      const double frac = a / (a - b);
      out.push_back(ts.t[k] + frac * (ts.t[k + 1] - ts.t[k]));
    }
  }
  return out;
}

/// Angular frequency 2*pi / mean period, with periods measured between alternate crossings.
inline double measure_frequency(const TimeSeries& ts) {
  const auto c = zero_crossings(ts);
  if (c.size() < 3) {
    throw Error(ErrorCode::InsufficientCrossings,
                "found " + std::to_string(c.size()) + " zero crossings, need 3");
  }
  double sum = 0.0;
  for (std::size_t k = 0; k + 2 < c.size(); ++k) sum += c[k + 2] - c[k];
  const double mean_period = sum / static_cast<double>(c.size() - 2);
  return 2.0 * std::numbers::pi / mean_period;
}

/// Signed phase velocity from two snapshots of a periodic field, via the circular
/// cross-correlation peak refined by a parabola through its neighbours. The duplicate
/// point x = L is dropped. Throws AmbiguousPeak when another local maximum of the
/// correlation reaches the global one within relative tolerance `peak_tol`.
inline double measure_phase_velocity(const Field& s1, const Field& s2, const Grid1D& g,
                                     double peak_tol = 1e-6) {
  if (s1.size() != g.points() || s2.size() != g.points()) {
    throw Error(ErrorCode::GridMismatch, "measure_phase_velocity: fields do not match the grid");
  }
  const double elapsed = s2.time() - s1.time();
  if (!(elapsed > 0.0)) throw Error(ErrorCode::InvalidArgument, "need t2 > t1");

  const std::size_t n = g.nx();
  std::vector<double> corr(n, 0.0);
  for (std::size_t s = 0; s < n; ++s) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += s1[i] * s2[(i + s) % n];
    corr[s] = acc;
  }
  const auto at = [&](std::ptrdiff_t s) {
    const auto m = static_cast<std::ptrdiff_t>(n);
    return corr[static_cast<std::size_t>(((s % m) + m) % m)];
  };

  const auto peak = static_cast<std::size_t>(std::max_element(corr.begin(), corr.end()) - corr.begin());
  const double best = corr[peak];
  const double scale = std::max(std::fabs(best), 1e-300);
  for (std::size_t s = 0; s < n; ++s) {
    const auto d = std::min((s + n - peak) % n, (peak + n - s) % n);
    if (d <= 1) continue;
    const auto si = static_cast<std::ptrdiff_t>(s);
    const bool local_max = corr[s] >= at(si - 1) && corr[s] >= at(si + 1);
    if (local_max && best - corr[s] <= peak_tol * scale) {
      throw Error(ErrorCode::AmbiguousPeak, "correlation maximum is not unique");
    }
  }

  const auto pi = static_cast<std::ptrdiff_t>(peak);
  const double cm = at(pi - 1);
  const double c0 = best;
  const double cp = at(pi + 1);
  const double curvature = cm - 2.0 * c0 + cp;
  const double offset = curvature != 0.0 ? 0.5 * (cm - cp) / curvature : 0.0;

  auto shift = static_cast<double>(peak);
  if (peak > n / 2) shift -= static_cast<double>(n);
  return (shift + offset) * g.dx() / elapsed;
}

struct SuperpositionReport {
  std::vector<double> times;
  std::vector<double> deviation;  ///< L2 of (superposed run - sum of closed forms)
  std::vector<double> baseline;   ///< max of the two single-wave L2 errors at each time
  double baseline_max = 0.0;
  double max_deviation = 0.0;
  /// First time the deviation exceeds 10 * baseline_max.
  std::optional<double> first_exceed_time;
};

/// Runs the sum of two exact waves through the solver and measures how far it drifts
/// from the sum of the closed forms, relative to the error each wave makes on its own.
inline SuperpositionReport superposition_deviation(const ModelParams& p, const Grid1D& g,
                                                   const BoundarySpec& bc,
                                                   const PlaneWaveSpec& right,
                                                   const PlaneWaveSpec& left,
                                                   std::size_t stride = 1) {
  for (const auto* spec : {&right, &left}) {
    for (double x : {0.0, 0.37, 1.1}) {
      for (double t : {0.0, 0.8}) {
        if (std::fabs(residual_pointwise(*spec, p, x, t)) > 1e-9) {
          throw Error(ErrorCode::InvalidArgument, "wave is not an exact solution of the model");
        }
      }
    }
  }

  const auto run_right = solve(p, g, wave_initial_condition(right), bc, stride);
  const auto run_left = solve(p, g, wave_initial_condition(left), bc, stride);
  const auto run_sum = solve(p, g, wave_sum_initial_condition(right, left), bc, stride);

  SuperpositionReport r;
  for (std::size_t k = 0; k < run_sum.snapshots.size(); ++k) {
    const auto& snap = run_sum.snapshots[k];
    const double e_sum = error_norms(snap, [&](double x, double t) {
                           return analytic_wave(right, x, t) + analytic_wave(left, x, t);
                         }, g).l2;
    const double e_right = error_norms(run_right.snapshots[k], [&](double x, double t) {
                             return analytic_wave(right, x, t);
                           }, g).l2;
    const double e_left = error_norms(run_left.snapshots[k], [&](double x, double t) {
                            return analytic_wave(left, x, t);
                          }, g).l2;
    r.times.push_back(snap.time());
    r.deviation.push_back(e_sum);
    r.baseline.push_back(std::max(e_right, e_left));
    r.baseline_max = std::max(r.baseline_max, r.baseline.back());
    r.max_deviation = std::max(r.max_deviation, e_sum);
  }
  for (std::size_t k = 0; k < r.times.size(); ++k) {
    if (r.deviation[k] > 10.0 * r.baseline_max) {
      r.first_exceed_time = r.times[k];
      break;
    }
  }
  return r;
}

}  // namespace rvdp
