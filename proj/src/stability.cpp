#include "netdyn/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "netdyn/error.hpp"
#include "netdyn/kernels.hpp"

namespace netdyn {

Variant parse_variant(std::string_view name) {
  if (name == "trace") return Variant::trace;
  if (name == "corr") return Variant::corr;
  if (name == "min") return Variant::min;
  throw InputError("stability", "unknown variant '" + std::string(name) + "'");
}

TimeMode parse_time_mode(std::string_view name) {
  if (name == "continuous") return TimeMode::continuous;
  if (name == "discrete") return TimeMode::discrete;
  throw InputError("stability", "unknown time mode '" + std::string(name) + "'");
}

const char* to_string(Variant v) noexcept {
  switch (v) {
    case Variant::trace: return "trace";
    case Variant::corr: return "corr";
    case Variant::min: return "min";
  }
  return "unknown";
}

const char* to_string(TimeMode m) noexcept {
  return m == TimeMode::continuous ? "continuous" : "discrete";
}

// ---------------------------------------------------------------------------
// TransitionFamily
// ---------------------------------------------------------------------------

namespace {

// d/2w. Still stationary when g is disconnected, just no longer unique.
Vector walk_distribution(const Graph& g) {
  if (g.is_signed()) throw SignedGraphError("stability", "random walks need an unsigned graph");
  for (std::size_t i = 0; i < g.size(); ++i)
    if (!(g.degrees()[i] > 0.0))
      throw ZeroDegreeError("stability", "node '" + g.node(i) + "' has zero degree");
  Vector pi = g.degrees();
  for (double& x : pi) x /= 2.0 * g.total_weight();
  return pi;
}

}  // namespace

TransitionFamily::TransitionFamily(const Graph& g, TimeMode mode)
    : mode_(mode), pi_(walk_distribution(g)), adjacency_(g.adjacency()) {
  const std::size_t n = g.size();
  sqrt_degree_.resize(n);
  for (std::size_t i = 0; i < n; ++i) sqrt_degree_[i] = std::sqrt(g.degrees()[i]);
  step_ = adjacency_;
  for (std::size_t i = 0; i < n; ++i) {
    const double inv = 1.0 / g.degrees()[i];
    for (double& x : step_.row(i)) x *= inv;
  }
  if (mode_ == TimeMode::continuous) spectrum_ = decompose(normalized_laplacian(g));
}

namespace {

void require_time(const TransitionFamily& f, double t) {
  if (!std::isfinite(t) || t < 0.0) throw InputError("stability", "Markov time must be >= 0");
  if (f.mode() == TimeMode::discrete && t != std::floor(t))
    throw InputError("stability", "discrete Markov time must be an integer");
}

Matrix matrix_power(Matrix base, unsigned long long exponent) {
  Matrix result = Matrix::identity(base.rows());
  while (exponent > 0) {
    if (exponent & 1ULL) result = kernels::gemm(result, base);
    exponent >>= 1ULL;
    if (exponent > 0) base = kernels::gemm(base, base);
  }
  return result;
}

void require_partition(const TransitionFamily& f, const Partition& p) {
  if (p.size() != f.size())
    throw SizeMismatchError("stability", "partition covers " + std::to_string(p.size()) +
                                             " nodes, graph has " + std::to_string(f.size()));
}

Vector cell_mass(const Vector& pi, const Partition& p) {
  Vector mass(p.cell_count(), 0.0);
  for (std::size_t i = 0; i < pi.size(); ++i) mass[p.cell(i)] += pi[i];
  return mass;
}

double trace(const Matrix& m) {
  double s = 0.0;
  for (std::size_t i = 0; i < std::min(m.rows(), m.cols()); ++i) s += m(i, i);
  return s;
}

}  // namespace

Matrix TransitionFamily::transition(double t) const {
  require_time(*this, t);
  if (mode_ == TimeMode::discrete)
    return matrix_power(step_, static_cast<unsigned long long>(t));
  Vector decay(size()), inv_sqrt(size());
  for (std::size_t k = 0; k < size(); ++k) decay[k] = std::exp(-spectrum_.eigenvalues[k] * t);
  for (std::size_t i = 0; i < size(); ++i) inv_sqrt[i] = 1.0 / sqrt_degree_[i];
  return kernels::spectral_function(spectrum_.eigenvectors, decay, inv_sqrt, sqrt_degree_);
}

Matrix TransitionFamily::autocovariance(double t) const {
  require_time(*this, t);
  const std::size_t n = size();
  Matrix m;
  if (mode_ == TimeMode::continuous) {
    // ΠP(t) = D^{1/2}·exp(−tL_N)·D^{1/2} / 2w = Π^{1/2}·exp(−tL_N)·Π^{1/2}
    Vector decay(n), scale(n);
    for (std::size_t k = 0; k < n; ++k) decay[k] = std::exp(-spectrum_.eigenvalues[k] * t);
    for (std::size_t i = 0; i < n; ++i) scale[i] = std::sqrt(pi_[i]);
    m = kernels::spectral_function(spectrum_.eigenvectors, decay, scale, scale);
  } else {
    const Matrix p = transition(t);
    m = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        // ΠP is symmetric for a reversible chain; average the two halves
        const double v = 0.5 * (pi_[i] * p(i, j) + pi_[j] * p(j, i));
        m(i, j) = m(j, i) = v;
      }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) -= pi_[i] * pi_[j];
  return m;
}

// ---------------------------------------------------------------------------
// scores
// ---------------------------------------------------------------------------

Matrix transition_matrix(const TransitionFamily& f, double t) { return f.transition(t); }

Matrix clustered_autocovariance(const TransitionFamily& f, const Partition& p, double t) {
  require_partition(f, p);
  return kernels::cell_sandwich(f.autocovariance(t), p.cells(), p.cell_count());
}

StabilityScore markov_stability(const TransitionFamily& f, const Partition& p, double t) {
  Matrix r = clustered_autocovariance(f, p, t);
  const double value = trace(r);
  return StabilityScore{t, value, std::move(r), Variant::trace};
}

Vector correlation_weights(const Vector& pi) {
  Vector w(pi.size());
  for (std::size_t i = 0; i < pi.size(); ++i)
    w[i] = 1.0 / std::sqrt(std::max(pi[i] * (1.0 - pi[i]), 1e-15));
  return w;
}

StabilityScore correlation_stability(const TransitionFamily& f, const Partition& p, double t) {
  require_partition(f, p);
  Matrix m = f.autocovariance(t);
  const Vector w = correlation_weights(f.stationary());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) *= w[i] * w[j];
  Matrix r = kernels::cell_sandwich(m, p.cells(), p.cell_count());
  const double value = trace(r);
  return StabilityScore{t, value, std::move(r), Variant::corr};
}

StabilityScore r_min(const TransitionFamily& f, const Partition& p, double t) {
  Matrix r = clustered_autocovariance(f, p, t);
  const Vector mass = cell_mass(f.stationary(), p);
  for (std::size_t a = 0; a < r.rows(); ++a) {
    if (!(mass[a] > 0.0)) throw NumericalError("stability", "cell with zero stationary mass");
    for (double& x : r.row(a)) x /= mass[a];
  }
  double value = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < r.rows(); ++a) value = std::min(value, r(a, a));
  return StabilityScore{t, value, std::move(r), Variant::min};
}

StabilityScore stability_score(const TransitionFamily& f, const Partition& p, double t,
                               Variant variant) {
  switch (variant) {
    case Variant::trace: return markov_stability(f, p, t);
    case Variant::corr: return correlation_stability(f, p, t);
    case Variant::min: return r_min(f, p, t);
  }
  throw InputError("stability", "unknown variant");
}

Matrix lumped_markov(const TransitionFamily& f, const Partition& p) {
  if (f.mode() != TimeMode::discrete)
    throw InputError("stability", "lumped_markov is defined for the discrete-time walk only");
  require_partition(f, p);
  const std::size_t n = f.size();
  const Vector& pi = f.stationary();
  Matrix flow(n, n);  // ΠD⁻¹A
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) flow(i, j) = pi[i] * f.step_matrix()(i, j);
  Matrix u = kernels::cell_sandwich(flow, p.cells(), p.cell_count());
  const Vector mass = cell_mass(pi, p);
  for (std::size_t a = 0; a < u.rows(); ++a)
    for (double& x : u.row(a)) x /= mass[a];
  return u;
}

AlphaCheck alpha_check(const TransitionFamily& f, const Partition& p, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InputError("stability", "alpha must lie in [0, 1]");
  const Matrix u = lumped_markov(f, p);
  const StabilityScore rm = r_min(f, p, 1.0);
  AlphaCheck out;
  out.lumped_stationary = cell_mass(f.stationary(), p);
  out.beta = rm.r;
  out.retention.resize(u.rows());
  out.guaranteed.resize(u.rows());
  out.is_alpha_partition = true;
  out.implication_holds = true;
  for (std::size_t i = 0; i < u.rows(); ++i) {
    out.retention[i] = u(i, i);
    out.guaranteed[i] = out.beta + out.lumped_stationary[i];
    if (u(i, i) < alpha) out.is_alpha_partition = false;
    if (u(i, i) < out.guaranteed[i] - 1e-12) out.implication_holds = false;
  }
  return out;
}

}  // namespace netdyn
