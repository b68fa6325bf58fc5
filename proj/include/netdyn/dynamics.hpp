#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string_view>

#include "netdyn/graph.hpp"
#include "netdyn/matrix.hpp"
#include "netdyn/spectral.hpp"

namespace netdyn {

enum class DynamicsKind { consensus, walk, signed_consensus };

/// Sampled solution of a linear network dynamics: row s of `states` is the
/// node state vector at times[s].
struct Trajectory {
  Vector times;
  Matrix states;
  DynamicsKind kind = DynamicsKind::consensus;

  std::size_t samples() const noexcept { return times.size(); }
  Vector state(std::size_t s) const {
    auto r = states.row(s);
    return {r.begin(), r.end()};
  }
};

/// `count` points evenly spaced in log10 between 10^log10_start and 10^log10_stop.
Vector log_time_grid(double log10_start, double log10_stop, std::size_t count);
/// 64 points per decade over [1e-2/λ_max, 10/λ_2] of a Laplacian spectrum.
Vector default_time_grid(const Spectrum& laplacian);
/// Parses `log:a:b:n` (log10 bounds, n points) or `list:t1,t2,...`.
Vector parse_time_grid(std::string_view spec);

/// (1 − e^{−λt}) / λ, with the limit t at λ = 0.
double integrated_decay(double lambda, double t) noexcept;

/// ẋ = −Lx + u with constant input u (empty = zero), solved through the
/// spectrum of L. Requires a connected unsigned graph and an increasing,
/// non-negative time grid.
Trajectory simulate_consensus(const Graph& g, std::span<const double> x0,
                              std::span<const double> times, std::span<const double> input = {});
/// Same, reusing a precomputed spectrum of the combinatorial Laplacian.
Trajectory simulate_consensus(const Spectrum& laplacian, std::span<const double> x0,
                              std::span<const double> times, std::span<const double> input = {});

/// ṗᵀ = −pᵀL_RW, propagated via exp(−tL_N) conjugated by D^{±1/2}. p0 must be
/// a probability vector.
Trajectory simulate_random_walk(const Graph& g, std::span<const double> p0,
                                std::span<const double> times);

/// ẋ = −L_S x for a connected, possibly signed, graph.
Trajectory simulate_signed_consensus(const Graph& g, std::span<const double> x0,
                                     std::span<const double> times);

/// Fixed-step classical RK4 for ẋ = −G·x + u. The step is at most 0.1/ρ where
/// ρ bounds the spectral radius of G (minimum of its 1- and ∞-norms);
/// `max_step` <= 0 picks that bound, a larger value throws InputError.
/// Independent check for the spectral propagators.
Trajectory integrate_reference(const Matrix& generator, std::span<const double> x0,
                               std::span<const double> times, std::span<const double> input = {},
                               double max_step = 0.0,
                               DynamicsKind kind = DynamicsKind::consensus);
/// Consensus form, G = L.
Trajectory integrate_reference(const Graph& g, std::span<const double> x0,
                               std::span<const double> times, std::span<const double> input = {},
                               double max_step = 0.0);

/// Trajectory CSV: header `t,<node ids...>`, one row per sample.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj, const Graph& g);

}  // namespace netdyn
