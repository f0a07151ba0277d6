#pragma once

#include <cmath>
#include <cstddef>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "rvdp/error.hpp"
#include "rvdp/ode.hpp"

namespace rvdp {

/// Dense row-major square matrix.
struct Matrix {
  std::size_t n = 0;
  std::vector<double> data;

  Matrix() = default;
  explicit Matrix(std::size_t size) : n(size), data(size * size, 0.0) {}

  double& operator()(std::size_t i, std::size_t j) noexcept { return data[i * n + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data[i * n + j]; }

  friend bool operator==(const Matrix&, const Matrix&) = default;
};

/// Weighted undirected graph: symmetric non-negative adjacency with zero diagonal.
class GraphSpec {
 public:
  explicit GraphSpec(Matrix adjacency) : adj_(std::move(adjacency)) {
    if (adj_.n < 2) throw Error(ErrorCode::InvalidArgument, "graph needs at least 2 nodes");
    for (std::size_t i = 0; i < adj_.n; ++i) {
      if (adj_(i, i) != 0.0) throw Error(ErrorCode::InvalidArgument, "adjacency diagonal must be zero");
      for (std::size_t j = 0; j < adj_.n; ++j) {
        const double a = adj_(i, j);
        if (!std::isfinite(a) || a < 0.0) {
          throw Error(ErrorCode::InvalidArgument, "adjacency weights must be finite and >= 0");
        }
        if (a != adj_(j, i)) {
          throw Error(ErrorCode::AsymmetricInput,
                      "a(" + std::to_string(i) + "," + std::to_string(j) + ") != a(" +
                          std::to_string(j) + "," + std::to_string(i) + ")");
        }
      }
    }
  }

  std::size_t size() const noexcept { return adj_.n; }
  const Matrix& adjacency() const noexcept { return adj_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return adj_(i, j); }

  /// A_i, the total coupling weight of node i.
  double degree(std::size_t i) const noexcept {
    double s = 0.0;
    for (std::size_t j = 0; j < adj_.n; ++j) s += adj_(i, j);
    return s;
  }

 private:
  Matrix adj_;
};

inline GraphSpec complete_graph(std::size_t n) {
  Matrix a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = i == j ? 0.0 : 1.0;
  return GraphSpec(std::move(a));
}

inline GraphSpec path_graph(std::size_t n) {
  Matrix a(n);
  for (std::size_t i = 0; i + 1 < n; ++i) a(i, i + 1) = a(i + 1, i) = 1.0;
  return GraphSpec(std::move(a));
}

inline GraphSpec edgeless_graph(std::size_t n) { return GraphSpec(Matrix(n)); }

/// Reads whitespace-separated rows, one row per non-empty line.
inline GraphSpec read_adjacency(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::vector<double> row;
    std::string tok;
    while (ls >> tok) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw ConfigError(ErrorCode::TypeError, lineno, "adjacency entry '" + tok + "' is not a number");
      }
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  Matrix a(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) {
      throw Error(ErrorCode::InvalidArgument, "adjacency matrix is not square");
    }
    for (std::size_t j = 0; j < rows.size(); ++j) a(i, j) = rows[i][j];
  }
  return GraphSpec(std::move(a));
}

/// L_ij = a_ij off the diagonal and L_ii = sum_j a_ij, so every row sums to 2 A_i.
inline Matrix laplacian(const GraphSpec& g) {
  Matrix l = g.adjacency();
  for (std::size_t i = 0; i < g.size(); ++i) l(i, i) = g.degree(i);
  return l;
}

/// Common frequency of the all-to-all linear network, sqrt(omega^2 - mu (n - 1)).
inline double sync_frequency(double omega, double mu, std::size_t n) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "network needs n >= 2");
  if (mu < 0.0) throw Error(ErrorCode::NegativeCoefficient, "mu must be >= 0");
  const double s = omega * omega - mu * static_cast<double>(n - 1);
  if (!(s > 0.0)) {
    throw Error(ErrorCode::UnstableRegime,
                "omega^2 - mu (n - 1) = " + std::to_string(s) + " is not positive");
  }
  return std::sqrt(s);
}

struct NetworkState {
  std::vector<OscState> nodes;

  friend NetworkState operator+(const NetworkState& a, const NetworkState& b) {
    NetworkState out{std::vector<OscState>(a.nodes.size())};
    for (std::size_t i = 0; i < a.nodes.size(); ++i) out.nodes[i] = a.nodes[i] + b.nodes[i];
    return out;
  }
  friend NetworkState operator*(double h, const NetworkState& s) {
    NetworkState out{std::vector<OscState>(s.nodes.size())};
    for (std::size_t i = 0; i < s.nodes.size(); ++i) out.nodes[i] = h * s.nodes[i];
    return out;
  }
};

inline double max_abs(const NetworkState& s) noexcept {
  double m = 0.0;
  for (const auto& node : s.nodes) {
    const double a = max_abs(node);
    if (!std::isfinite(a)) return a;
    m = std::fmax(m, a);
  }
  return m;
}

/// u_i'' = -omega^2 u_i + mu sum_j a_ij u_j.
inline NetworkState rhs_linear_network(const NetworkState& s, const GraphSpec& g, double omega,
                                       double mu) {
  const std::size_t n = s.nodes.size();
  NetworkState d{std::vector<OscState>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    double coupling = 0.0;
    for (std::size_t j = 0; j < n; ++j) coupling += g(i, j) * s.nodes[j].u;
    d.nodes[i] = {s.nodes[i].v, -omega * omega * s.nodes[i].u + mu * coupling};
  }
  return d;
}

/// Per-node displacement series of a network run.
struct NetworkTrajectory {
  std::vector<double> t;
  std::vector<TimeSeries> nodes;
};

/// RK4 trajectory of the linear network. Throws BlowupError once the state passes the
/// blowup threshold, which is what an unstable coupling produces.
inline NetworkTrajectory simulate_linear_network(const GraphSpec& g, double omega, double mu,
                                                 const std::vector<OscState>& ic, double dt,
                                                 std::size_t steps, std::size_t stride = 1) {
  if (ic.size() != g.size()) {
    throw Error(ErrorCode::InvalidArgument, "need one initial state per node");
  }
  if (!(omega > 0.0)) throw Error(ErrorCode::NonPositiveOmega, "omega must be > 0");
  if (mu < 0.0) throw Error(ErrorCode::NegativeCoefficient, "mu must be >= 0");
  auto rhs = [&](const NetworkState& s) { return rhs_linear_network(s, g, omega, mu); };
  const auto traj = integrate(rhs, NetworkState{ic}, dt, steps, stride);

  NetworkTrajectory out;
  out.t = traj.t;
  out.nodes.resize(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    out.nodes[i].t = traj.t;
    out.nodes[i].u.reserve(traj.states.size());
    for (const auto& s : traj.states) out.nodes[i].u.push_back(s.nodes[i].u);
  }
  return out;
}

}  // namespace rvdp
