#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "netdyn/graph.hpp"
#include "netdyn/stability.hpp"

namespace netdyn {

/// Score being maximized. trace/corr: Σ_c Σ_{i,j∈c} W_ij. min: the smallest
/// normalized cell value T_c/μ_c, with the sum of normalized values as a
/// secondary key (the minimum alone is flat under most single moves).
struct ObjectiveValue {
  double primary = 0.0;
  double secondary = 0.0;
};

/// Partition quality over a symmetric node weight matrix W with node masses.
class PartitionObjective {
 public:
  PartitionObjective(Matrix weights, Vector mass, Variant variant);
  /// W = ΠP(t) − ππᵀ (trace, min) or its S^{-1/2} rescaling (corr); mass = π.
  static PartitionObjective from_family(const TransitionFamily& f, double t, Variant variant);

  std::size_t size() const noexcept { return mass_.size(); }
  Variant variant() const noexcept { return variant_; }
  const Matrix& weights() const noexcept { return weights_; }
  const Vector& mass() const noexcept { return mass_; }
  /// Moves must beat the current value by more than this.
  double tolerance() const noexcept { return tolerance_; }

  /// Evaluated from scratch.
  ObjectiveValue evaluate(const Partition& p) const;
  /// True if `candidate` improves on `current` (primary first, then secondary).
  bool improves(const ObjectiveValue& candidate, const ObjectiveValue& current) const;

 private:
  Matrix weights_;
  Vector mass_;
  Variant variant_;
  double tolerance_;
};

struct OptimizeOptions {
  Variant variant = Variant::trace;
  std::uint64_t seed = 0;
  std::size_t restarts = 10;
  /// Keep the gain of every accepted node-level move of the winning restart.
  bool record_ascent = false;
};

struct OptimizeResult {
  Partition partition;  // canonical labels
  ObjectiveValue value;
  std::size_t restarts = 0;
  std::vector<double> ascent;  // primary-or-secondary gain per accepted move
};

/// Louvain-style greedy ascent: single-node moves from singletons until no
/// move improves, then aggregation of cells into super-nodes and repeat; the
/// node level is revisited until neither level moves. Restarts shuffle the
/// visit order and run in parallel; the best value wins, ties broken by the
/// lexicographically smallest canonical partition.
OptimizeResult optimize_objective(const PartitionObjective& objective,
                                  const OptimizeOptions& options);

struct PartitionOptimum {
  Partition partition;
  StabilityScore score;
  std::size_t restarts = 0;
};

PartitionOptimum optimize_partition(const TransitionFamily& f, double t,
                                    const OptimizeOptions& options);

/// Scans every single-node move (including into a new cell) from scratch.
bool is_single_move_optimal(const PartitionObjective& objective, const Partition& p);

struct SweepEntry {
  double t = 0.0;
  Partition partition;
  double r = 0.0;
  std::size_t k = 0;
  std::size_t restarts = 0;
};

/// Maximal run [first, last] of consecutive sweep entries sharing k (length >= 2).
struct Plateau {
  std::size_t first = 0;
  std::size_t last = 0;
  std::size_t k = 0;
};

struct SweepResult {
  std::vector<SweepEntry> entries;
  std::vector<Plateau> plateaus;
};

/// optimize_partition at each time of an increasing grid.
SweepResult stability_sweep(const TransitionFamily& f, std::span<const double> times,
                            const OptimizeOptions& options);

std::vector<Plateau> find_plateaus(std::span<const SweepEntry> entries);

/// CSV `t,k,r,restarts`.
void write_sweep_csv(std::ostream& out, const SweepResult& sweep);

}  // namespace netdyn
