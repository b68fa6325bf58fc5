#include "netdyn/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <utility>

#include "netdyn/error.hpp"

namespace netdyn {

namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

void require_unsigned(const Graph& g, const char* what) {
  if (g.is_signed())
    throw SignedGraphError("graph", std::string(what) +
                                        " requires non-negative weights; use signed_laplacian");
}

void require_positive_degrees(const Graph& g) {
  const auto& d = g.degrees();
  for (std::size_t i = 0; i < d.size(); ++i)
    if (!(d[i] > 0.0))
      throw ZeroDegreeError("graph", "node '" + g.node(i) + "' has zero degree");
}

void require_partition_size(const Partition& p, std::size_t n) {
  if (p.size() != n)
    throw SizeMismatchError("graph", "partition covers " + std::to_string(p.size()) +
                                         " nodes, expected " + std::to_string(n));
}

std::vector<std::string> numbered_nodes(std::size_t n) {
  std::vector<std::string> nodes(n);
  for (std::size_t i = 0; i < n; ++i) nodes[i] = std::to_string(i);
  return nodes;
}

}  // namespace

double uniform01(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// ---------------------------------------------------------------------------
// Graph
// ---------------------------------------------------------------------------

Graph::Graph(std::vector<std::string> nodes, std::vector<Edge> edges)
    : nodes_(std::move(nodes)) {
  const std::size_t n = nodes_.size();
  index_.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    if (!index_.emplace(nodes_[i], i).second)
      throw InputError("graph", "duplicate node identifier '" + nodes_[i] + "'");

  std::set<std::pair<std::size_t, std::size_t>> seen;
  edges_.reserve(edges.size());
  for (Edge e : edges) {
    if (e.source >= n || e.target >= n) throw InputError("graph", "edge endpoint out of range");
    if (e.source == e.target) throw SelfLoopError("graph", "self-loop on node '" + nodes_[e.source] + "'");
    if (!std::isfinite(e.weight)) throw InputError("graph", "non-finite edge weight");
    if (e.weight == 0.0) throw InputError("graph", "zero edge weight");
    if (e.source > e.target) std::swap(e.source, e.target);
    if (!seen.emplace(e.source, e.target).second)
      throw DuplicateEdgeError("graph", "duplicate edge '" + nodes_[e.source] + "' - '" +
                                            nodes_[e.target] + "'");
    edges_.push_back(e);
  }

  adjacency_ = Matrix(n, n);
  degrees_.assign(n, 0.0);
  absolute_degrees_.assign(n, 0.0);
  UnionFind uf(n);
  for (const Edge& e : edges_) {
    adjacency_(e.source, e.target) = e.weight;
    adjacency_(e.target, e.source) = e.weight;
    degrees_[e.source] += e.weight;
    degrees_[e.target] += e.weight;
    absolute_degrees_[e.source] += std::abs(e.weight);
    absolute_degrees_[e.target] += std::abs(e.weight);
    if (e.weight < 0.0) signed_ = true;
    if (e.weight != std::round(e.weight)) integer_weights_ = false;
    uf.unite(e.source, e.target);
  }
  total_weight_ = sum(degrees_) / 2.0;

  component_of_.assign(n, 0);
  std::vector<std::size_t> label(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t root = uf.find(i);
    if (label[root] == n) label[root] = components_++;
    component_of_[i] = label[root];
  }
}

std::optional<std::size_t> Graph::index_of(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

// ---------------------------------------------------------------------------
// Partition
// ---------------------------------------------------------------------------

Partition::Partition(std::vector<std::size_t> cell_of) : cell_of_(std::move(cell_of)) {
  std::size_t k = 0;
  for (std::size_t c : cell_of_) k = std::max(k, c + 1);
  std::vector<bool> used(k, false);
  for (std::size_t c : cell_of_) used[c] = true;
  if (std::find(used.begin(), used.end(), false) != used.end())
    throw InputError("graph", "partition has an empty cell");
  cell_count_ = k;
}

Partition Partition::singletons(std::size_t n) {
  std::vector<std::size_t> c(n);
  std::iota(c.begin(), c.end(), std::size_t{0});
  return Partition(std::move(c));
}

Partition Partition::all_in_one(std::size_t n) { return Partition(std::vector<std::size_t>(n, 0)); }

Partition Partition::from_labels(std::span<const std::size_t> labels) {
  std::unordered_map<std::size_t, std::size_t> remap;
  std::vector<std::size_t> c(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto [it, inserted] = remap.emplace(labels[i], remap.size());
    c[i] = it->second;
  }
  return Partition(std::move(c));
}

std::vector<std::size_t> Partition::cell_sizes() const {
  std::vector<std::size_t> sizes(cell_count_, 0);
  for (std::size_t c : cell_of_) ++sizes[c];
  return sizes;
}

std::vector<std::vector<std::size_t>> Partition::members() const {
  std::vector<std::vector<std::size_t>> m(cell_count_);
  for (std::size_t i = 0; i < cell_of_.size(); ++i) m[cell_of_[i]].push_back(i);
  return m;
}

Partition Partition::canonical() const { return from_labels(cell_of_); }

bool Partition::refines(const Partition& coarser) const {
  if (coarser.size() != size()) return false;
  std::vector<std::size_t> image(cell_count_, coarser.cell_count());
  for (std::size_t i = 0; i < size(); ++i) {
    std::size_t& slot = image[cell_of_[i]];
    if (slot == coarser.cell_count())
      slot = coarser.cell(i);
    else if (slot != coarser.cell(i))
      return false;
  }
  return true;
}

bool Partition::same_cells(const Partition& other) const {
  return size() == other.size() && canonical().cell_of_ == other.canonical().cell_of_;
}

// ---------------------------------------------------------------------------
// Laplacians
// ---------------------------------------------------------------------------

Matrix combinatorial_laplacian(const Graph& g) {
  require_unsigned(g, "combinatorial_laplacian");
  return signed_laplacian(g);
}

Matrix normalized_laplacian(const Graph& g) {
  require_unsigned(g, "normalized_laplacian");
  require_positive_degrees(g);
  const std::size_t n = g.size();
  Vector inv_sqrt(n);
  for (std::size_t i = 0; i < n; ++i) inv_sqrt[i] = 1.0 / std::sqrt(g.degrees()[i]);
  Matrix l = signed_laplacian(g);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) l(i, j) *= inv_sqrt[i] * inv_sqrt[j];
  return l;
}

Matrix random_walk_laplacian(const Graph& g) {
  require_unsigned(g, "random_walk_laplacian");
  require_positive_degrees(g);
  Matrix l = signed_laplacian(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double inv = 1.0 / g.degrees()[i];
    for (double& x : l.row(i)) x *= inv;
  }
  return l;
}

Matrix signed_laplacian(const Graph& g) {
  const std::size_t n = g.size();
  Matrix l(n, n);
  for (const Edge& e : g.edges()) {
    l(e.source, e.target) = -e.weight;
    l(e.target, e.source) = -e.weight;
  }
  for (std::size_t i = 0; i < n; ++i) l(i, i) = g.absolute_degrees()[i];
  return l;
}

IncidenceDecomposition incidence_decomposition(const Graph& g) {
  const std::size_t n = g.size();
  const std::size_t m = g.edge_count();
  IncidenceDecomposition out{Matrix(n, m), Matrix(m, m)};
  for (std::size_t k = 0; k < m; ++k) {
    const Edge& e = g.edges()[k];
    out.incidence(e.source, k) = 1.0;
    out.incidence(e.target, k) = e.weight < 0.0 ? 1.0 : -1.0;
    out.abs_weights(k, k) = std::abs(e.weight);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Partitions as matrices
// ---------------------------------------------------------------------------

Matrix indicator_matrix(const Partition& p, std::size_t n) {
  require_partition_size(p, n);
  Matrix c(n, p.cell_count());
  for (std::size_t i = 0; i < n; ++i) c(i, p.cell(i)) = 1.0;
  return c;
}

Matrix cell_averaging(const Partition& p, std::size_t n) {
  require_partition_size(p, n);
  const auto sizes = p.cell_sizes();
  Matrix avg(p.cell_count(), n);
  for (std::size_t i = 0; i < n; ++i)
    avg(p.cell(i), i) = 1.0 / static_cast<double>(sizes[p.cell(i)]);
  return avg;
}

Vector stationary_distribution(const Graph& g) {
  require_unsigned(g, "stationary_distribution");
  if (!g.is_connected())
    throw DisconnectedGraphError("graph", "stationary_distribution requires a connected graph");
  require_positive_degrees(g);
  Vector pi = g.degrees();
  const double two_w = 2.0 * g.total_weight();
  for (double& x : pi) x /= two_w;
  return pi;
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

Partition planted_blocks(std::span<const std::size_t> sizes) {
  std::vector<std::size_t> cell;
  for (std::size_t b = 0; b < sizes.size(); ++b) cell.insert(cell.end(), sizes[b], b);
  return Partition(std::move(cell));
}

Graph generate_planted_partition(std::span<const std::size_t> sizes, double p_in, double p_out,
                                 std::uint64_t seed) {
  if (!(p_out >= 0.0 && p_out < p_in && p_in <= 1.0))
    throw InputError("graph", "planted partition requires 0 <= p_out < p_in <= 1");
  const Partition blocks = planted_blocks(sizes);
  const std::size_t n = blocks.size();
  std::mt19937_64 rng(seed);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double p = blocks.cell(i) == blocks.cell(j) ? p_in : p_out;
      if (uniform01(rng()) < p) edges.push_back({i, j, 1.0});
    }
  return Graph(numbered_nodes(n), std::move(edges));
}

Graph generate_erdos_renyi(std::size_t n, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw InputError("graph", "edge probability outside [0, 1]");
  std::mt19937_64 rng(seed);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (uniform01(rng()) < p) edges.push_back({i, j, 1.0});
  return Graph(numbered_nodes(n), std::move(edges));
}

// ---------------------------------------------------------------------------
// Karate club
// ---------------------------------------------------------------------------

namespace {

// Zachary (1977), zero-based member indices.
constexpr std::pair<int, int> kKarateEdges[] = {
    {0, 1},   {0, 2},   {0, 3},   {0, 4},   {0, 5},   {0, 6},   {0, 7},   {0, 8},
    {0, 10},  {0, 11},  {0, 12},  {0, 13},  {0, 17},  {0, 19},  {0, 21},  {0, 31},
    {1, 2},   {1, 3},   {1, 7},   {1, 13},  {1, 17},  {1, 19},  {1, 21},  {1, 30},
    {2, 3},   {2, 7},   {2, 8},   {2, 9},   {2, 13},  {2, 27},  {2, 28},  {2, 32},
    {3, 7},   {3, 12},  {3, 13},  {4, 6},   {4, 10},  {5, 6},   {5, 10},  {5, 16},
    {6, 16},  {8, 30},  {8, 32},  {8, 33},  {9, 33},  {13, 33}, {14, 32}, {14, 33},
    {15, 32}, {15, 33}, {18, 32}, {18, 33}, {19, 33}, {20, 32}, {20, 33}, {22, 32},
    {22, 33}, {23, 25}, {23, 27}, {23, 29}, {23, 32}, {23, 33}, {24, 25}, {24, 27},
    {24, 31}, {25, 31}, {26, 29}, {26, 33}, {27, 33}, {28, 31}, {28, 33}, {29, 32},
    {29, 33}, {30, 32}, {30, 33}, {31, 32}, {31, 33}, {32, 33}};

constexpr int kInstructorFaction[] = {0, 1, 2, 3, 4, 5, 6, 7, 8, 10, 11, 12, 13, 16, 17, 19, 21};

}  // namespace

Graph karate_club() {
  std::vector<std::string> nodes(34);
  for (std::size_t i = 0; i < nodes.size(); ++i) nodes[i] = std::to_string(i + 1);
  std::vector<Edge> edges;
  for (auto [a, b] : kKarateEdges)
    edges.push_back({static_cast<std::size_t>(a), static_cast<std::size_t>(b), 1.0});
  return Graph(std::move(nodes), std::move(edges));
}

Partition karate_factions() {
  std::vector<std::size_t> cell(34, 1);
  for (int i : kInstructorFaction) cell[static_cast<std::size_t>(i)] = 0;
  return Partition(std::move(cell));
}

}  // namespace netdyn
