#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "netdyn/matrix.hpp"

namespace netdyn {

/// Undirected edge; stored with source < target.
struct Edge {
  std::size_t source = 0;
  std::size_t target = 0;
  double weight = 1.0;

  bool operator==(const Edge&) const = default;
};

/// Weighted, possibly signed, undirected graph without self-loops or parallel
/// edges. Immutable after construction.
class Graph {
 public:
  Graph() = default;
  /// Validates and canonicalizes `edges` (endpoints are indices into `nodes`).
  /// Throws SelfLoopError, DuplicateEdgeError or InputError.
  Graph(std::vector<std::string> nodes, std::vector<Edge> edges);

  std::size_t size() const noexcept { return nodes_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  const std::vector<std::string>& nodes() const noexcept { return nodes_; }
  const std::string& node(std::size_t i) const { return nodes_.at(i); }
  std::optional<std::size_t> index_of(std::string_view id) const;

  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const Matrix& adjacency() const noexcept { return adjacency_; }

  /// d = A·1
  const Vector& degrees() const noexcept { return degrees_; }
  /// d_S = |A|·1
  const Vector& absolute_degrees() const noexcept { return absolute_degrees_; }
  /// w = 1ᵀd / 2
  double total_weight() const noexcept { return total_weight_; }

  bool is_signed() const noexcept { return signed_; }
  bool has_integer_weights() const noexcept { return integer_weights_; }

  std::size_t component_count() const noexcept { return components_; }
  bool is_connected() const noexcept { return components_ <= 1; }
  /// Component label per node, labelled by first appearance.
  const std::vector<std::size_t>& component_of() const noexcept { return component_of_; }

 private:
  std::vector<std::string> nodes_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<Edge> edges_;
  Matrix adjacency_;
  Vector degrees_;
  Vector absolute_degrees_;
  double total_weight_ = 0.0;
  bool signed_ = false;
  bool integer_weights_ = true;
  std::size_t components_ = 0;
  std::vector<std::size_t> component_of_;
};

/// Hard assignment of n nodes to k non-empty cells labelled 0..k-1.
class Partition {
 public:
  Partition() = default;
  /// Labels must cover 0..k-1 with no empty cell. Throws InputError otherwise.
  explicit Partition(std::vector<std::size_t> cell_of);

  static Partition singletons(std::size_t n);
  static Partition all_in_one(std::size_t n);
  /// Arbitrary labels, renumbered by order of first appearance.
  static Partition from_labels(std::span<const std::size_t> labels);

  std::size_t size() const noexcept { return cell_of_.size(); }
  std::size_t cell_count() const noexcept { return cell_count_; }
  std::size_t cell(std::size_t node) const { return cell_of_.at(node); }
  std::span<const std::size_t> cells() const noexcept { return cell_of_; }
  std::vector<std::size_t> cell_sizes() const;
  std::vector<std::vector<std::size_t>> members() const;

  /// Same cells, labels renumbered by first appearance.
  Partition canonical() const;
  /// True if every cell of *this lies inside one cell of `coarser`.
  bool refines(const Partition& coarser) const;
  /// Equality of the underlying set partitions (labels ignored).
  bool same_cells(const Partition& other) const;

  bool operator==(const Partition&) const = default;

 private:
  std::vector<std::size_t> cell_of_;
  std::size_t cell_count_ = 0;
};

// -- Laplacian family ------------------------------------------------------

/// L = D − A. Throws SignedGraphError for signed graphs.
Matrix combinatorial_laplacian(const Graph& g);
/// L_N = D^{-1/2} L D^{-1/2}. Throws ZeroDegreeError / SignedGraphError.
Matrix normalized_laplacian(const Graph& g);
/// L_RW = D^{-1} L. Throws ZeroDegreeError / SignedGraphError.
Matrix random_walk_laplacian(const Graph& g);
/// L_S = D_S − A; equals L on unsigned graphs.
Matrix signed_laplacian(const Graph& g);

/// Node-to-edge incidence B (n×m) and W_abs = diag(|w_e|) (m×m) with
/// B·W_abs·Bᵀ = L_S. Column e has +1 at the tail (smaller index) and
/// −sign(w_e) at the head.
struct IncidenceDecomposition {
  Matrix incidence;
  Matrix abs_weights;
};
IncidenceDecomposition incidence_decomposition(const Graph& g);

// -- partitions as matrices -----------------------------------------------

/// n×k indicator matrix C with C_ij = 1 iff node i is in cell j.
Matrix indicator_matrix(const Partition& p, std::size_t n);
/// C⁺ = (CᵀC)⁻¹Cᵀ, the k×n cell averaging operator.
Matrix cell_averaging(const Partition& p, std::size_t n);

// -- distributions ----------------------------------------------------------

/// π = d / 2w. Requires a connected unsigned graph.
Vector stationary_distribution(const Graph& g);

// -- generators -------------------------------------------------------------

/// Planted partition (stochastic block) graph: blocks of the given sizes,
/// within-block pairs linked with probability p_in, other pairs with p_out.
/// Nodes are named "0".."n-1"; deterministic in `seed`.
Graph generate_planted_partition(std::span<const std::size_t> sizes, double p_in, double p_out,
                                 std::uint64_t seed);
/// Block membership of the planted partition generator for `sizes`.
Partition planted_blocks(std::span<const std::size_t> sizes);

/// G(n, p) random graph, nodes "0".."n-1".
Graph generate_erdos_renyi(std::size_t n, double p, std::uint64_t seed);

// -- bundled datasets -------------------------------------------------------

/// Zachary's karate club (34 members, 78 ties). Nodes are "1".."34".
Graph karate_club();
/// Observed split: cell 0 = instructor's faction, cell 1 = president's.
Partition karate_factions();
inline constexpr std::size_t kKarateInstructor = 0;
inline constexpr std::size_t kKaratePresident = 33;

/// Uniform double in [0, 1) from 53 random bits; stable across platforms.
double uniform01(std::uint64_t bits) noexcept;

}  // namespace netdyn
