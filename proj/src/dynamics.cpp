#include "netdyn/dynamics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <string>

#include "netdyn/error.hpp"
#include "netdyn/kernels.hpp"

namespace netdyn {

namespace {

void require_time_grid(std::span<const double> times) {
  if (times.empty()) throw InputError("dynamics", "time grid is empty");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i]) || times[i] < 0.0)
      throw InputError("dynamics", "time grid entries must be finite and non-negative");
    if (i > 0 && !(times[i] > times[i - 1]))
      throw InputError("dynamics", "time grid must be strictly increasing");
  }
}

void require_state(std::span<const double> x, std::size_t n, const char* what) {
  if (x.size() != n)
    throw SizeMismatchError("dynamics", std::string(what) + " has length " +
                                            std::to_string(x.size()) + ", expected " +
                                            std::to_string(n));
  for (double v : x)
    if (!std::isfinite(v)) throw InputError("dynamics", std::string(what) + " is not finite");
}

void require_connected_unsigned(const Graph& g) {
  if (g.is_signed())
    throw SignedGraphError("dynamics", "graph is signed; use simulate_signed_consensus");
  if (!g.is_connected()) throw DisconnectedGraphError("dynamics", "graph is not connected");
}

// Row s: Σ_i v_i [a_i e^{−λ_i t_s} + b_i φ(λ_i, t_s)].
Matrix modal_propagation(const Spectrum& s, std::span<const double> x0,
                         std::span<const double> input, std::span<const double> times) {
  const std::size_t n = s.size();
  const Matrix& v = s.eigenvectors;
  Vector a(n, 0.0), b(n, 0.0);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i) {
      a[k] += v(i, k) * x0[i];
      if (!input.empty()) b[k] += v(i, k) * input[i];
    }
  Matrix coeff(times.size(), n);
  for (std::size_t t = 0; t < times.size(); ++t)
    for (std::size_t k = 0; k < n; ++k) {
      const double lambda = s.eigenvalues[k];
      double c = a[k] * std::exp(-lambda * times[t]);
      if (!input.empty()) c += b[k] * integrated_decay(lambda, times[t]);
      coeff(t, k) = c;
    }
  return kernels::gemm_nt(coeff, v);
}

// Rows sampled at t = 0 hold the initial state exactly rather than its
// round trip through the eigenbasis.
void pin_initial(Matrix& states, std::span<const double> times, std::span<const double> x0) {
  for (std::size_t s = 0; s < times.size(); ++s)
    if (times[s] == 0.0) std::copy(x0.begin(), x0.end(), states.row(s).begin());
}

}  // namespace

Vector log_time_grid(double log10_start, double log10_stop, std::size_t count) {
  if (count == 0) throw InputError("dynamics", "time grid needs at least one point");
  if (!(log10_stop >= log10_start)) throw InputError("dynamics", "log grid bounds out of order");
  Vector t(count);
  if (count == 1) {
    t[0] = std::pow(10.0, log10_start);
    return t;
  }
  const double step = (log10_stop - log10_start) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i)
    t[i] = std::pow(10.0, log10_start + step * static_cast<double>(i));
  return t;
}

Vector default_time_grid(const Spectrum& laplacian) {
  const double tol = laplacian.zero_tolerance();
  double lambda2 = 0.0;
  for (double x : laplacian.eigenvalues)
    if (x > tol) {
      lambda2 = x;
      break;
    }
  const double lambda_max = laplacian.eigenvalues.empty() ? 0.0 : laplacian.eigenvalues.back();
  if (lambda2 <= 0.0 || lambda_max <= 0.0)
    throw NumericalError("dynamics", "spectrum has no nonzero eigenvalue");
  const double lo = std::log10(1e-2 / lambda_max);
  const double hi = std::log10(10.0 / lambda2);
  const auto count = static_cast<std::size_t>(std::ceil((hi - lo) * 64.0)) + 1;
  return log_time_grid(lo, hi, count);
}

Vector parse_time_grid(std::string_view spec) {
  const auto bad = [&]() {
    return InputError("dynamics", "bad time grid '" + std::string(spec) +
                                      "' (expected log:a:b:n or list:t1,t2,...)");
  };
  const auto to_double = [&](std::string_view text) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) throw bad();
    return v;
  };
  if (spec.starts_with("log:")) {
    std::string_view rest = spec.substr(4);
    std::vector<std::string_view> parts;
    for (std::size_t pos; (pos = rest.find(':')) != std::string_view::npos;) {
      parts.push_back(rest.substr(0, pos));
      rest.remove_prefix(pos + 1);
    }
    parts.push_back(rest);
    if (parts.size() != 3) throw bad();
    const double count = to_double(parts[2]);
    if (count < 1 || count != std::floor(count)) throw bad();
    return log_time_grid(to_double(parts[0]), to_double(parts[1]),
                         static_cast<std::size_t>(count));
  }
  if (spec.starts_with("list:")) {
    std::string_view rest = spec.substr(5);
    Vector t;
    for (std::size_t pos; (pos = rest.find(',')) != std::string_view::npos;) {
      t.push_back(to_double(rest.substr(0, pos)));
      rest.remove_prefix(pos + 1);
    }
    t.push_back(to_double(rest));
    require_time_grid(t);
    return t;
  }
  throw bad();
}

double integrated_decay(double lambda, double t) noexcept {
  const double x = lambda * t;
  if (std::abs(x) < 1e-6) return t * (1.0 - x / 2.0 + x * x / 6.0);
  return -std::expm1(-x) / lambda;
}

Trajectory simulate_consensus(const Graph& g, std::span<const double> x0,
                              std::span<const double> times, std::span<const double> input) {
  require_connected_unsigned(g);
  return simulate_consensus(decompose(combinatorial_laplacian(g)), x0, times, input);
}

Trajectory simulate_consensus(const Spectrum& laplacian, std::span<const double> x0,
                              std::span<const double> times, std::span<const double> input) {
  require_time_grid(times);
  require_state(x0, laplacian.size(), "x0");
  if (!input.empty()) require_state(input, laplacian.size(), "input");
  Matrix states = modal_propagation(laplacian, x0, input, times);
  pin_initial(states, times, x0);
  return Trajectory{Vector(times.begin(), times.end()), std::move(states), DynamicsKind::consensus};
}

Trajectory simulate_random_walk(const Graph& g, std::span<const double> p0,
                                std::span<const double> times) {
  require_connected_unsigned(g);
  require_time_grid(times);
  const std::size_t n = g.size();
  require_state(p0, n, "p0");
  for (double p : p0)
    if (p < 0.0) throw InputError("dynamics", "p0 has a negative entry");
  if (std::abs(sum(p0) - 1.0) > 1e-9) throw InputError("dynamics", "p0 does not sum to 1");

  const Spectrum s = decompose(normalized_laplacian(g));
  Vector sqrt_d(n), scaled(n);
  for (std::size_t i = 0; i < n; ++i) {
    sqrt_d[i] = std::sqrt(g.degrees()[i]);
    scaled[i] = p0[i] / sqrt_d[i];
  }
  Matrix states = modal_propagation(s, scaled, {}, times);
  for (std::size_t t = 0; t < states.rows(); ++t)
    for (std::size_t i = 0; i < n; ++i) states(t, i) *= sqrt_d[i];
  pin_initial(states, times, p0);
  return Trajectory{Vector(times.begin(), times.end()), std::move(states), DynamicsKind::walk};
}

Trajectory simulate_signed_consensus(const Graph& g, std::span<const double> x0,
                                     std::span<const double> times) {
  if (!g.is_connected()) throw DisconnectedGraphError("dynamics", "graph is not connected");
  require_time_grid(times);
  require_state(x0, g.size(), "x0");
  const Spectrum s = decompose(signed_laplacian(g));
  Matrix states = modal_propagation(s, x0, {}, times);
  pin_initial(states, times, x0);
  return Trajectory{Vector(times.begin(), times.end()), std::move(states),
                    DynamicsKind::signed_consensus};
}

Trajectory integrate_reference(const Matrix& generator, std::span<const double> x0,
                               std::span<const double> times, std::span<const double> input,
                               double max_step, DynamicsKind kind) {
  const std::size_t n = generator.rows();
  if (generator.cols() != n) throw SizeMismatchError("dynamics", "generator is not square");
  require_time_grid(times);
  require_state(x0, n, "x0");
  if (!input.empty()) require_state(input, n, "input");

  double inf_norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (double x : generator.row(i)) s += std::abs(x);
    inf_norm = std::max(inf_norm, s);
  }
  const double radius_bound = std::min(inf_norm, one_norm(generator));
  const double step_limit = radius_bound > 0.0 ? 0.1 / radius_bound : 0.1;
  if (max_step > step_limit)
    throw InputError("dynamics", "RK4 step exceeds 0.1/lambda_max bound");
  const double h_max = max_step > 0.0 ? max_step : step_limit;

  const auto rhs = [&](std::span<const double> x, std::span<double> out) {
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = -dot(generator.row(i), x);
      if (!input.empty()) out[i] += input[i];
    }
  };

  Vector x(x0.begin(), x0.end());
  Vector k1(n), k2(n), k3(n), k4(n), tmp(n);
  Matrix states(times.size(), n);
  double now = 0.0;
  for (std::size_t s = 0; s < times.size(); ++s) {
    const double span = times[s] - now;
    const auto steps = static_cast<std::size_t>(std::ceil(span / h_max));
    const double h = steps > 0 ? span / static_cast<double>(steps) : 0.0;
    for (std::size_t k = 0; k < steps; ++k) {
      rhs(x, k1);
      for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k1[i];
      rhs(tmp, k2);
      for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k2[i];
      rhs(tmp, k3);
      for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + h * k3[i];
      rhs(tmp, k4);
      for (std::size_t i = 0; i < n; ++i)
        x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    now = times[s];
    std::copy(x.begin(), x.end(), states.row(s).begin());
  }
  return Trajectory{Vector(times.begin(), times.end()), std::move(states), kind};
}

Trajectory integrate_reference(const Graph& g, std::span<const double> x0,
                               std::span<const double> times, std::span<const double> input,
                               double max_step) {
  require_connected_unsigned(g);
  return integrate_reference(combinatorial_laplacian(g), x0, times, input, max_step,
                             DynamicsKind::consensus);
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj, const Graph& g) {
  if (traj.states.cols() != g.size())
    throw SizeMismatchError("dynamics", "trajectory does not match graph");
  out << 't';
  for (const auto& id : g.nodes()) out << ',' << id;
  out << '\n' << std::setprecision(17);
  for (std::size_t s = 0; s < traj.samples(); ++s) {
    out << traj.times[s];
    for (double x : traj.states.row(s)) out << ',' << x;
    out << '\n';
  }
}

}  // namespace netdyn
