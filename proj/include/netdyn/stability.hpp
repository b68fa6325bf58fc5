#pragma once

#include <cstddef>
#include <string_view>

#include "netdyn/graph.hpp"
#include "netdyn/matrix.hpp"
#include "netdyn/spectral.hpp"

namespace netdyn {

enum class TimeMode { continuous, discrete };
enum class Variant { trace, corr, min };

Variant parse_variant(std::string_view name);
TimeMode parse_time_mode(std::string_view name);
const char* to_string(Variant v) noexcept;
const char* to_string(TimeMode m) noexcept;

/// Random-walk transition matrices P(t) of an unsigned graph without isolated
/// nodes; π = d/2w is used even when the graph is disconnected.
/// Continuous: P(t) = exp(−t·L_RW) = D^{-1/2}·exp(−t·L_N)·D^{1/2}, from one
/// decomposition of L_N. Discrete: P(t) = (D⁻¹A)^t for integer t.
class TransitionFamily {
 public:
  TransitionFamily(const Graph& g, TimeMode mode);

  TimeMode mode() const noexcept { return mode_; }
  std::size_t size() const noexcept { return pi_.size(); }
  const Vector& stationary() const noexcept { return pi_; }
  const Matrix& adjacency() const noexcept { return adjacency_; }
  /// D⁻¹A
  const Matrix& step_matrix() const noexcept { return step_; }
  /// Spectrum of L_N (continuous mode only; empty otherwise).
  const Spectrum& normalized_spectrum() const noexcept { return spectrum_; }

  /// Throws InputError for negative t, or non-integer t in discrete mode.
  Matrix transition(double t) const;
  /// Π·P(t) − ππᵀ, exactly symmetric.
  Matrix autocovariance(double t) const;

 private:
  TimeMode mode_;
  Vector pi_;
  Vector sqrt_degree_;
  Matrix adjacency_;
  Matrix step_;
  Spectrum spectrum_;
};

struct StabilityScore {
  double t = 0.0;
  double r = 0.0;
  /// trace: R(t,C); corr: CᵀS^{-1/2}(ΠP − ππᵀ)S^{-1/2}C; min: (CᵀΠC)⁻¹R(t,C).
  Matrix R;
  Variant variant = Variant::trace;
};

Matrix transition_matrix(const TransitionFamily& f, double t);
/// R(t, C) = Cᵀ(ΠP(t) − ππᵀ)C
Matrix clustered_autocovariance(const TransitionFamily& f, const Partition& p, double t);

/// Markov Stability r = trace R(t, C).
StabilityScore markov_stability(const TransitionFamily& f, const Partition& p, double t);
/// Pearson-correlation variant with S = Π(I − Π).
StabilityScore correlation_stability(const TransitionFamily& f, const Partition& p, double t);
/// Weakest normalized cell: min_i [(CᵀΠC)⁻¹R(t,C)]_ii.
StabilityScore r_min(const TransitionFamily& f, const Partition& p, double t);
StabilityScore stability_score(const TransitionFamily& f, const Partition& p, double t,
                               Variant variant);

/// Diagonal of Π(I − Π) clipped below at 1e-15, raised to −1/2.
Vector correlation_weights(const Vector& pi);

/// Lumped chain U = diag(πᵀC)⁻¹·CᵀΠD⁻¹AC (discrete mode only).
Matrix lumped_markov(const TransitionFamily& f, const Partition& p);

struct AlphaCheck {
  bool is_alpha_partition = false;  // min_i U_ii >= α
  Vector retention;                 // U_ii
  Vector lumped_stationary;         // π_ℓ = πᵀC
  double beta = 0.0;                // r_min(1, C)
  Vector guaranteed;                // γ_i = β + π_ℓ,i
  bool implication_holds = false;   // U_ii >= γ_i (up to 1e-12) for every i
};

/// Discrete mode only; α must lie in [0, 1].
AlphaCheck alpha_check(const TransitionFamily& f, const Partition& p, double alpha);

}  // namespace netdyn
