#include "netdyn/balance.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "netdyn/error.hpp"
#include "netdyn/kernels.hpp"
#include "netdyn/linalg.hpp"

namespace netdyn {

BalanceResult check_balance(const Graph& g) {
  if (!g.is_connected()) throw DisconnectedGraphError("balance", "graph is not connected");
  const std::size_t n = g.size();
  const Matrix& a = g.adjacency();
  BalanceResult result;
  result.sigma.assign(n, 0);
  if (n == 0) return result;

  std::vector<std::size_t> parent(n, n);
  std::queue<std::size_t> frontier;
  result.sigma[0] = 1;
  frontier.push(0);
  while (!frontier.empty()) {
    const std::size_t v = frontier.front();
    frontier.pop();
    for (std::size_t u = 0; u < n; ++u) {
      if (a(v, u) == 0.0 || result.sigma[u] != 0) continue;
      result.sigma[u] = a(v, u) > 0.0 ? result.sigma[v] : -result.sigma[v];
      parent[u] = v;
      frontier.push(u);
    }
  }
  for (const Edge& e : g.edges()) {
    const bool tree = parent[e.target] == e.source || parent[e.source] == e.target;
    if (tree) continue;
    const int expected = e.weight > 0.0 ? 1 : -1;
    if (result.sigma[e.source] * result.sigma[e.target] != expected)
      result.frustrated_edges.push_back(e);
  }
  result.balanced = result.frustrated_edges.empty();
  return result;
}

Graph switch_signs(const Graph& g, std::span<const int> sigma) {
  if (sigma.size() != g.size())
    throw SizeMismatchError("balance", "sigma length does not match graph");
  for (int s : sigma)
    if (s != 1 && s != -1) throw InputError("balance", "sigma entries must be +1 or -1");
  std::vector<Edge> edges = g.edges();
  for (Edge& e : edges) e.weight *= static_cast<double>(sigma[e.source] * sigma[e.target]);
  return Graph(g.nodes(), std::move(edges));
}

Vector signed_consensus_limit(const Graph& g, std::span<const double> x0) {
  if (x0.size() != g.size()) throw SizeMismatchError("balance", "x0 length does not match graph");
  const BalanceResult b = check_balance(g);
  if (!b.balanced)
    throw UnbalancedGraphError("balance",
                               "graph is not structurally balanced; signed consensus decays to 0");
  double projection = 0.0;
  for (std::size_t i = 0; i < x0.size(); ++i) projection += b.sigma[i] * x0[i];
  projection /= static_cast<double>(g.size());
  Vector limit(g.size());
  for (std::size_t i = 0; i < limit.size(); ++i) limit[i] = projection * b.sigma[i];
  return limit;
}

namespace {

Matrix traag_rhs(const Matrix& x) { return kernels::gemm_nt(x, x); }

Matrix rk4_step(const Matrix& x, double h) {
  const Matrix k1 = traag_rhs(x);
  const Matrix k2 = traag_rhs(x + (0.5 * h) * k1);
  const Matrix k3 = traag_rhs(x + (0.5 * h) * k2);
  const Matrix k4 = traag_rhs(x + h * k3);
  return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Matrix normalized(const Matrix& x) {
  const double norm = frobenius_norm(x);
  return norm > 0.0 ? (1.0 / norm) * x : x;
}

Matrix sign_of(const Matrix& x) {
  Matrix s(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) s(i, j) = x(i, j) < 0.0 ? -1.0 : 1.0;
  return s;
}

}  // namespace

TraagResult simulate_traag(const Matrix& x0, const TraagOptions& options) {
  if (x0.rows() != x0.cols()) throw NonSymmetricError("balance", "X0 is not square");
  for (double v : x0.data())
    if (!std::isfinite(v)) throw InputError("balance", "X0 is not finite");
  if (!is_symmetric(x0, 1e-12 * std::max(1.0, max_abs(x0))))
    throw NonSymmetricError("balance", "X0 is not symmetric");
  const double norm0 = frobenius_norm(x0);
  if (norm0 == 0.0) throw InputError("balance", "X0 is the zero matrix");
  if (!(options.t_max > 0.0) || !(options.norm_cap > norm0))
    throw InputError("balance", "t_max must be positive and norm_cap above ‖X0‖_F");

  double h = options.dt > 0.0 ? options.dt : 1e-3 / norm0;
  constexpr double kMinStep = 1e-300;
  constexpr double kGrowthLimit = 1.1;
  constexpr double kConvergence = 1e-10;

  TraagResult result;
  Matrix x = x0;
  double t = 0.0;
  double norm = norm0;
  Matrix unit = normalized(x);
  result.times.push_back(t);
  result.norm_history.push_back(norm);
  result.stopped_reason = TraagStop::max_time;

  while (t < options.t_max) {
    // the last step absorbs a remainder below rounding level instead of
    // leaving a sliver step behind
    const double remaining = options.t_max - t;
    const double step = remaining <= h * (1.0 + 1e-9) ? remaining : h;
    Matrix next = rk4_step(x, step);
    const double next_norm = frobenius_norm(next);
    if (!std::isfinite(next_norm) || next_norm > kGrowthLimit * norm) {
      h = step / 2.0;
      if (h < kMinStep) throw NumericalError("balance", "Traag step size underflow");
      continue;
    }
    // exact symmetry of the flow
    for (std::size_t i = 0; i < next.rows(); ++i)
      for (std::size_t j = i + 1; j < next.cols(); ++j)
        next(i, j) = next(j, i) = 0.5 * (next(i, j) + next(j, i));
    t += step;
    x = std::move(next);
    norm = next_norm;
    Matrix next_unit = normalized(x);
    const double change = frobenius_norm(next_unit - unit);
    unit = std::move(next_unit);
    result.times.push_back(t);
    result.norm_history.push_back(norm);
    if (norm >= options.norm_cap) {
      result.stopped_reason = TraagStop::blow_up;
      break;
    }
    if (change < kConvergence && t < options.t_max) {
      result.stopped_reason = TraagStop::converged;
      break;
    }
  }
  result.final_normalized = unit;
  result.sign_pattern = sign_of(unit);
  return result;
}

Graph sign_graph(const Matrix& sign_pattern) {
  const std::size_t n = sign_pattern.rows();
  std::vector<std::string> nodes(n);
  for (std::size_t i = 0; i < n; ++i) nodes[i] = std::to_string(i);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      edges.push_back({i, j, sign_pattern(i, j) < 0.0 ? -1.0 : 1.0});
  return Graph(std::move(nodes), std::move(edges));
}

Matrix best_rank_one(const Matrix& symmetric) {
  const auto eig = linalg::symmetric_eigen(symmetric);
  const std::size_t n = symmetric.rows();
  std::size_t pick = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (std::abs(eig.values[i]) > std::abs(eig.values[pick])) pick = i;
  Matrix r(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      r(i, j) = eig.values[pick] * eig.vectors(i, pick) * eig.vectors(j, pick);
  return r;
}

const char* to_string(TraagStop reason) noexcept {
  switch (reason) {
    case TraagStop::converged: return "converged";
    case TraagStop::blow_up: return "blow_up";
    case TraagStop::max_time: return "max_time";
  }
  return "unknown";
}

}  // namespace netdyn
