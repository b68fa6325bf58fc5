#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "netdyn/graph.hpp"
#include "netdyn/matrix.hpp"

namespace netdyn {

struct BalanceResult {
  bool balanced = true;
  /// Polarization ±1 per node; node 0 is always +1.
  std::vector<int> sigma;
  /// Non-tree edges whose sign disagrees with the 2-coloring.
  std::vector<Edge> frustrated_edges;
};

/// Spanning-tree 2-coloring: crossing a positive edge keeps the color, a
/// negative edge flips it. Requires a connected graph.
BalanceResult check_balance(const Graph& g);

/// Gauge transformation A'_ij = σ_i A_ij σ_j. An involution.
Graph switch_signs(const Graph& g, std::span<const int> sigma);

/// (σᵀx0 / n)·σ, the limit of signed consensus on a balanced graph. Throws
/// UnbalancedGraphError if g is not balanced (the limit is then 0).
Vector signed_consensus_limit(const Graph& g, std::span<const double> x0);

enum class TraagStop { converged, blow_up, max_time };

struct TraagOptions {
  double dt = 0.0;  // <= 0: 1e-3 / ‖X0‖_F
  double t_max = 1e3;
  double norm_cap = 1e12;
};

struct TraagResult {
  Vector times;
  Vector norm_history;     // ‖X(t)‖_F at each accepted step (and t = 0)
  Matrix final_normalized; // X / ‖X‖_F at the stopping time
  Matrix sign_pattern;     // sign(final_normalized), zeros mapped to +1
  TraagStop stopped_reason = TraagStop::max_time;
};

/// Integrates Ẋ = XXᵀ with RK4, halving the step whenever ‖X‖_F would grow by
/// more than 10% in one step. Stops on blow-up (‖X‖_F >= norm_cap), on
/// convergence of X/‖X‖_F (change below 1e-10 over a step) or at t_max.
TraagResult simulate_traag(const Matrix& x0, const TraagOptions& options = {});

/// Signed graph on nodes "0".."n-1" with the off-diagonal signs of a ±1 matrix.
Graph sign_graph(const Matrix& sign_pattern);

/// Closest rank-1 symmetric matrix λ·vvᵀ in Frobenius norm (largest |λ|).
Matrix best_rank_one(const Matrix& symmetric);

const char* to_string(TraagStop reason) noexcept;

}  // namespace netdyn
