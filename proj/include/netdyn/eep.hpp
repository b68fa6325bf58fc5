#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>

#include "netdyn/dynamics.hpp"
#include "netdyn/error.hpp"
#include "netdyn/graph.hpp"

namespace netdyn {

inline constexpr double kDefaultEepTolerance = 1e-9;

struct EepReport {
  bool is_eep = true;
  /// Largest spread, over (cell i, cell j ≠ i), of Σ_{u∈C_j} A_vu among v ∈ C_i.
  double max_violation = 0.0;
  /// (node, other cell) attaining max_violation, when it exceeds the tolerance.
  std::optional<std::pair<std::size_t, std::size_t>> witness;
};

class NotEepError : public InputError {
 public:
  NotEepError(const std::string& message, EepReport report)
      : InputError("eep", message), report_(report) {}
  const EepReport& report() const noexcept { return report_; }

 private:
  EepReport report_;
};

/// Quotient of an external equitable partition: L^π = C⁺LC (k×k, generally
/// not symmetric).
struct QuotientGraph {
  Matrix laplacian;
  Partition cells;
  std::size_t parent_n = 0;
};

EepReport check_eep(const Graph& g, const Partition& p, double tol = kDefaultEepTolerance);

/// Throws NotEepError when check_eep fails at `tol`.
QuotientGraph quotient_laplacian(const Graph& g, const Partition& p,
                                 double tol = kDefaultEepTolerance);

/// Partition of nodes by (weighted) degree, values quantized at `tol`.
Partition degree_classes(const Graph& g, double tol = kDefaultEepTolerance);

/// Iterative refinement: split every cell whose members differ in their
/// quantized weight to some other current cell, until nothing splits. The
/// result is the coarsest EEP refining `seed`. Without a seed the refinement
/// starts from degree_classes(g).
Partition coarsest_eep(const Graph& g, const std::optional<Partition>& seed = std::nullopt,
                       double tol = kDefaultEepTolerance);

/// ẏ = −L^π y, propagated with the Padé matrix exponential.
Trajectory quotient_consensus(const QuotientGraph& q, std::span<const double> y0,
                              std::span<const double> times);

/// Full consensus with cell-consistent input u = C·v from a cell-synchronized
/// x0. Throws NotEepError if p is not an EEP and InputError if x0 varies
/// inside a cell.
Trajectory eep_input_invariance(const Graph& g, const Partition& p, std::span<const double> v,
                                std::span<const double> x0, std::span<const double> times,
                                double tol = kDefaultEepTolerance);

/// Largest within-cell spread (max − min) of the states over all samples.
double within_cell_spread(const Trajectory& traj, const Partition& p);

/// Diagonal minus adjacency, D − A, for any sign pattern.
Matrix consensus_laplacian(const Graph& g);

}  // namespace netdyn
