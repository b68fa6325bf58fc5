#include "netdyn/eep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <vector>

#include "netdyn/kernels.hpp"
#include "netdyn/linalg.hpp"

namespace netdyn {

namespace {

void require_cover(const Graph& g, const Partition& p) {
  if (p.size() != g.size())
    throw SizeMismatchError("eep", "partition covers " + std::to_string(p.size()) +
                                       " nodes, graph has " + std::to_string(g.size()));
}

// W(v, c) = Σ_{u ∈ C_c} A_vu
Matrix cell_weights(const Graph& g, const Partition& p) {
  return kernels::gemm(g.adjacency(), indicator_matrix(p, g.size()));
}

std::int64_t quantize(double x, double tol) {
  return static_cast<std::int64_t>(std::llround(x / tol));
}

// One refinement round: new cells keyed by (old cell, quantized weights to the
// other cells), numbered by first appearance in node order.
Partition refine_once(const Graph& g, const Partition& p, double tol) {
  const Matrix w = cell_weights(g, p);
  std::map<std::vector<std::int64_t>, std::size_t> ids;
  std::vector<std::size_t> labels(g.size());
  std::vector<std::int64_t> key(p.cell_count() + 1);
  for (std::size_t v = 0; v < g.size(); ++v) {
    const std::size_t own = p.cell(v);
    key[0] = static_cast<std::int64_t>(own);
    for (std::size_t c = 0; c < p.cell_count(); ++c)
      key[c + 1] = c == own ? 0 : quantize(w(v, c), tol);
    labels[v] = ids.emplace(key, ids.size()).first->second;
  }
  return Partition::from_labels(labels);
}

}  // namespace

Matrix consensus_laplacian(const Graph& g) {
  Matrix l = 1.0 * g.adjacency();
  for (double& x : l.data()) x = -x;
  for (std::size_t i = 0; i < g.size(); ++i) l(i, i) = g.degrees()[i];
  return l;
}

EepReport check_eep(const Graph& g, const Partition& p, double tol) {
  require_cover(g, p);
  const std::size_t k = p.cell_count();
  const Matrix w = cell_weights(g, p);
  // per (own cell i, other cell j): min and max of W(v, j) over v in C_i
  Matrix lo(k, k, std::numeric_limits<double>::infinity());
  Matrix hi(k, k, -std::numeric_limits<double>::infinity());
  for (std::size_t v = 0; v < g.size(); ++v) {
    const std::size_t i = p.cell(v);
    for (std::size_t j = 0; j < k; ++j) {
      lo(i, j) = std::min(lo(i, j), w(v, j));
      hi(i, j) = std::max(hi(i, j), w(v, j));
    }
  }
  EepReport report;
  std::size_t worst_i = 0, worst_j = 0;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      if (i == j) continue;
      const double spread = hi(i, j) - lo(i, j);
      if (spread > report.max_violation) {
        report.max_violation = spread;
        worst_i = i;
        worst_j = j;
      }
    }
  report.is_eep = report.max_violation <= tol;
  if (!report.is_eep) {
    // witness: a member of the worst cell attaining the largest weight
    for (std::size_t v = 0; v < g.size(); ++v)
      if (p.cell(v) == worst_i && w(v, worst_j) == hi(worst_i, worst_j)) {
        report.witness = std::make_pair(v, worst_j);
        break;
      }
  }
  return report;
}

QuotientGraph quotient_laplacian(const Graph& g, const Partition& p, double tol) {
  const EepReport report = check_eep(g, p, tol);
  if (!report.is_eep)
    throw NotEepError("partition is not an external equitable partition (violation " +
                          std::to_string(report.max_violation) + ")",
                      report);
  const Matrix c = indicator_matrix(p, g.size());
  const Matrix avg = cell_averaging(p, g.size());
  Matrix lpi = kernels::gemm(avg, kernels::gemm(consensus_laplacian(g), c));
  return QuotientGraph{std::move(lpi), p, g.size()};
}

Partition degree_classes(const Graph& g, double tol) {
  std::map<std::int64_t, std::size_t> ids;
  std::vector<std::size_t> labels(g.size());
  for (std::size_t v = 0; v < g.size(); ++v)
    labels[v] = ids.emplace(quantize(g.degrees()[v], tol), ids.size()).first->second;
  return Partition::from_labels(labels);
}

Partition coarsest_eep(const Graph& g, const std::optional<Partition>& seed, double tol) {
  Partition current = seed ? seed->canonical() : degree_classes(g, tol);
  require_cover(g, current);
  for (;;) {
    Partition next = refine_once(g, current, tol);
    if (next.cell_count() == current.cell_count()) return current;
    current = std::move(next);
  }
}

Trajectory quotient_consensus(const QuotientGraph& q, std::span<const double> y0,
                              std::span<const double> times) {
  const std::size_t k = q.laplacian.rows();
  if (y0.size() != k) throw SizeMismatchError("eep", "y0 length does not match cell count");
  for (double y : y0)
    if (!std::isfinite(y)) throw InputError("eep", "y0 is not finite");
  if (times.empty()) throw InputError("eep", "time grid is empty");
  Matrix states(times.size(), k);
  for (std::size_t s = 0; s < times.size(); ++s) {
    if (!std::isfinite(times[s]) || times[s] < 0.0 || (s > 0 && !(times[s] > times[s - 1])))
      throw InputError("eep", "time grid must be non-negative and strictly increasing");
    const Matrix prop = linalg::expm((-times[s]) * q.laplacian);
    const Vector y = prop * y0;
    std::copy(y.begin(), y.end(), states.row(s).begin());
  }
  return Trajectory{Vector(times.begin(), times.end()), std::move(states),
                    DynamicsKind::consensus};
}

Trajectory eep_input_invariance(const Graph& g, const Partition& p, std::span<const double> v,
                                std::span<const double> x0, std::span<const double> times,
                                double tol) {
  const EepReport report = check_eep(g, p, tol);
  if (!report.is_eep) throw NotEepError("partition is not an external equitable partition", report);
  if (v.size() != p.cell_count()) throw SizeMismatchError("eep", "v length does not match cells");
  if (x0.size() != g.size()) throw SizeMismatchError("eep", "x0 length does not match graph");
  std::vector<double> first(p.cell_count(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 0; i < g.size(); ++i) {
    double& ref = first[p.cell(i)];
    if (std::isnan(ref))
      ref = x0[i];
    else if (std::abs(ref - x0[i]) > tol)
      throw InputError("eep", "x0 is not constant on the cells of the partition");
  }
  Vector u(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) u[i] = v[p.cell(i)];
  return simulate_consensus(g, x0, times, u);
}

double within_cell_spread(const Trajectory& traj, const Partition& p) {
  if (traj.states.cols() != p.size())
    throw SizeMismatchError("eep", "trajectory does not match partition");
  double worst = 0.0;
  Vector lo(p.cell_count()), hi(p.cell_count());
  for (std::size_t s = 0; s < traj.samples(); ++s) {
    std::fill(lo.begin(), lo.end(), std::numeric_limits<double>::infinity());
    std::fill(hi.begin(), hi.end(), -std::numeric_limits<double>::infinity());
    auto row = traj.states.row(s);
    for (std::size_t i = 0; i < p.size(); ++i) {
      lo[p.cell(i)] = std::min(lo[p.cell(i)], row[i]);
      hi[p.cell(i)] = std::max(hi[p.cell(i)], row[i]);
    }
    for (std::size_t c = 0; c < p.cell_count(); ++c) worst = std::max(worst, hi[c] - lo[c]);
  }
  return worst;
}

}  // namespace netdyn
