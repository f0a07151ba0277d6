#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rvdp/error.hpp"

namespace rvdp {

/// Physical parameters shared by every solver.
///
/// The oscillator family is u'' = -omega0^2 u + (damping) + (coupling), where the
/// damping bracket is epsilon*(amp - u^2 - delta*u'^2)*u' in the continuum form and
/// epsilon*(1 - u^2)*u' - delta*u'^3 in the single-oscillator form.
struct ModelParams {
  double omega0 = 1.0;
  double epsilon = 0.1;
  double delta = 1.0;
  double mu = 0.0;
  double amp = 1.0;
  /// Set by canonical_delta(); asserts delta == 1/omega0^2.
  bool canonical = false;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Checks the invariants of `p` and returns it unchanged. Throws rvdp::Error naming the field.
inline ModelParams validate_params(const ModelParams& p) {
  const std::pair<const char*, double> fields[] = {
      {"omega0", p.omega0}, {"epsilon", p.epsilon}, {"delta", p.delta},
      {"mu", p.mu},         {"amp", p.amp},
  };
  for (const auto& [name, value] : fields) {
    if (!std::isfinite(value)) {
      throw Error(ErrorCode::NonFinite, std::string(name) + " is not finite");
    }
  }
  if (!(p.omega0 > 0.0)) {
    throw Error(ErrorCode::NonPositiveOmega,
                "omega0 must be > 0, got " + std::to_string(p.omega0));
  }
  for (const auto& [name, value] : std::span(fields).subspan(1)) {
    if (value < 0.0) {
      throw Error(ErrorCode::NegativeCoefficient,
                  std::string(name) + " must be >= 0, got " + std::to_string(value));
    }
  }
  if (p.canonical && p.delta != 1.0 / (p.omega0 * p.omega0)) {
    throw Error(ErrorCode::InvalidArgument, "canonical flag set but delta != 1/omega0^2");
  }
  return p;
}

/// Replaces delta by 1/omega0^2, the value for which sin(omega0 t + sqrt(2) x) is exact.
inline ModelParams canonical_delta(ModelParams p) {
  p.delta = 1.0 / (p.omega0 * p.omega0);
  p.canonical = true;
  return p;
}

/// Uniform space-time mesh on [0, L] x [0, T].
///
/// The requested steps are rounded to whole interval counts and then recomputed, so
/// nx*dx == L and nt*dt == T up to rounding of the final division.
class Grid1D {
 public:
  Grid1D(double length, double duration, double dx, double dt) : length_(length), duration_(duration) {
    if (!(length > 0.0) || !(duration > 0.0) || !(dx > 0.0) || !(dt > 0.0) ||
        !std::isfinite(length) || !std::isfinite(duration)) {
      throw Error(ErrorCode::InvalidGrid, "length, duration, dx and dt must be positive and finite");
    }
    const double nx = std::round(length / dx);
    const double nt = std::round(duration / dt);
    if (nx < 2.0) throw Error(ErrorCode::InvalidGrid, "need at least 2 spatial intervals");
    if (nt < 1.0) throw Error(ErrorCode::InvalidGrid, "need at least 1 time interval");
    nx_ = static_cast<std::size_t>(nx);
    nt_ = static_cast<std::size_t>(nt);
    dx_ = length / nx;
    dt_ = duration / nt;
  }

  /// Mesh with exactly `nx` spatial and `nt` temporal intervals.
  static Grid1D from_counts(double length, double duration, std::size_t nx, std::size_t nt) {
    return Grid1D(length, duration, length / static_cast<double>(nx),
                  duration / static_cast<double>(nt));
  }

  double length() const noexcept { return length_; }
  double duration() const noexcept { return duration_; }
  double dx() const noexcept { return dx_; }
  double dt() const noexcept { return dt_; }
  std::size_t nx() const noexcept { return nx_; }
  std::size_t nt() const noexcept { return nt_; }
  std::size_t points() const noexcept { return nx_ + 1; }

  double x(std::size_t i) const noexcept { return static_cast<double>(i) * dx_; }
  double t(std::size_t n) const noexcept { return static_cast<double>(n) * dt_; }

  friend bool operator==(const Grid1D&, const Grid1D&) = default;

 private:
  double length_;
  double duration_;
  double dx_ = 0.0;
  double dt_ = 0.0;
  std::size_t nx_ = 0;
  std::size_t nt_ = 0;
};

/// One spatial snapshot u(x_i, t), i = 0..nx.
class Field {
 public:
  Field(const Grid1D& grid, std::vector<double> values, double time)
      : values_(std::move(values)), time_(time) {
    if (values_.size() != grid.points()) {
      throw Error(ErrorCode::GridMismatch, "field has " + std::to_string(values_.size()) +
                                               " samples, grid needs " +
                                               std::to_string(grid.points()));
    }
  }

  template <class Fn>
  static Field sample(const Grid1D& grid, Fn&& fn, double time) {
    std::vector<double> values(grid.points());
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = fn(grid.x(i));
    return Field(grid, std::move(values), time);
  }

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  double time() const noexcept { return time_; }

  bool all_finite() const noexcept {
    for (double v : values_) {
      if (!std::isfinite(v)) return false;
    }
    return true;
  }

  friend bool operator==(const Field&, const Field&) = default;

 private:
  std::vector<double> values_;
  double time_;
};

/// u(x, 0) and u_t(x, 0).
struct InitialCondition {
  std::function<double(double)> displacement;
  std::function<double(double)> velocity = [](double) { return 0.0; };
};

enum class BoundaryKind { DirichletZero, DirichletFunction, NeumannZero, Periodic };

struct BoundarySpec {
  BoundaryKind kind = BoundaryKind::Periodic;
  /// Prescribed u(0, t) and u(L, t); only used by DirichletFunction.
  std::function<double(double)> left;
  std::function<double(double)> right;

  static BoundarySpec dirichlet_zero() { return {BoundaryKind::DirichletZero, {}, {}}; }
  static BoundarySpec neumann_zero() { return {BoundaryKind::NeumannZero, {}, {}}; }
  static BoundarySpec periodic() { return {BoundaryKind::Periodic, {}, {}}; }
  static BoundarySpec dirichlet(std::function<double(double)> left,
                                std::function<double(double)> right) {
    if (!left || !right) {
      throw Error(ErrorCode::InvalidArgument, "Dirichlet boundary needs both functions");
    }
    return {BoundaryKind::DirichletFunction, std::move(left), std::move(right)};
  }
};

inline std::string to_string(BoundaryKind kind) {
  switch (kind) {
    case BoundaryKind::DirichletZero: return "dirichlet_zero";
    case BoundaryKind::DirichletFunction: return "dirichlet_exact";
    case BoundaryKind::NeumannZero: return "neumann";
    case BoundaryKind::Periodic: return "periodic";
  }
  return "unknown";
}

}  // namespace rvdp
