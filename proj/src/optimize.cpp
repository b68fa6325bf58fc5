#include "netdyn/optimize.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>

#include "netdyn/error.hpp"
#include "netdyn/kernels.hpp"

namespace netdyn {

// ---------------------------------------------------------------------------
// PartitionObjective
// ---------------------------------------------------------------------------

PartitionObjective::PartitionObjective(Matrix weights, Vector mass, Variant variant)
    : weights_(std::move(weights)), mass_(std::move(mass)), variant_(variant) {
  if (weights_.rows() != weights_.cols() || weights_.rows() != mass_.size())
    throw SizeMismatchError("optimize", "weights and mass do not match");
  for (double m : mass_)
    if (!(m > 0.0)) throw InputError("optimize", "node masses must be positive");
  tolerance_ = 1e-12 * std::max(max_abs(weights_), std::numeric_limits<double>::min());
}

PartitionObjective PartitionObjective::from_family(const TransitionFamily& f, double t,
                                                   Variant variant) {
  Matrix w = f.autocovariance(t);
  if (variant == Variant::corr) {
    const Vector s = correlation_weights(f.stationary());
    for (std::size_t i = 0; i < w.rows(); ++i)
      for (std::size_t j = 0; j < w.cols(); ++j) w(i, j) *= s[i] * s[j];
  }
  return PartitionObjective(std::move(w), f.stationary(), variant);
}

ObjectiveValue PartitionObjective::evaluate(const Partition& p) const {
  if (p.size() != size()) throw SizeMismatchError("optimize", "partition does not match objective");
  const Matrix r = kernels::cell_sandwich(weights_, p.cells(), p.cell_count());
  ObjectiveValue v;
  if (variant_ != Variant::min) {
    for (std::size_t c = 0; c < r.rows(); ++c) v.primary += r(c, c);
    return v;
  }
  Vector mass(p.cell_count(), 0.0);
  for (std::size_t i = 0; i < size(); ++i) mass[p.cell(i)] += mass_[i];
  v.primary = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < r.rows(); ++c) {
    const double f = r(c, c) / mass[c];
    v.primary = std::min(v.primary, f);
    v.secondary += f;
  }
  return v;
}

bool PartitionObjective::improves(const ObjectiveValue& candidate,
                                  const ObjectiveValue& current) const {
  if (candidate.primary > current.primary + tolerance_) return true;
  if (variant_ != Variant::min) return false;
  return candidate.primary >= current.primary && candidate.secondary > current.secondary + tolerance_;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void shuffle(std::vector<std::size_t>& order, std::mt19937_64& rng) {
  for (std::size_t i = order.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(order[i - 1], order[j]);
  }
}

bool lexicographically_better(const ObjectiveValue& a, const ObjectiveValue& b) {
  if (a.primary != b.primary) return a.primary > b.primary;
  return a.secondary > b.secondary;
}

// Single-node moves on one level (nodes are original nodes or super-nodes).
class LocalMover {
 public:
  LocalMover(const PartitionObjective& objective, const Matrix& w, const Vector& mass,
             std::vector<std::size_t>& cell)
      : objective_(objective),
        w_(w),
        mass_(mass),
        cell_(cell),
        m_(w.rows()),
        total_(m_, 0.0),
        cell_mass_(m_, 0.0),
        count_(m_, 0),
        row_(m_, 0.0) {
    for (std::size_t i = 0; i < m_; ++i) {
      cell_mass_[cell_[i]] += mass_[i];
      ++count_[cell_[i]];
      for (std::size_t j = 0; j < m_; ++j)
        if (cell_[i] == cell_[j]) total_[cell_[i]] += w_(i, j);
    }
    refresh_value();
  }

  // Returns true if at least one node moved.
  bool run(std::mt19937_64& rng, std::vector<double>* ascent) {
    std::vector<std::size_t> order(m_);
    std::iota(order.begin(), order.end(), std::size_t{0});
    bool moved_any = false;
    for (bool moved = true; moved;) {
      moved = false;
      shuffle(order, rng);
      for (std::size_t v : order)
        if (try_move(v, ascent)) moved = moved_any = true;
    }
    return moved_any;
  }

 private:
  bool is_min() const { return objective_.variant() == Variant::min; }
  double normalized(std::size_t c) const { return total_[c] / cell_mass_[c]; }

  void refresh_value() {
    value_ = ObjectiveValue{};
    if (!is_min()) {
      for (std::size_t c = 0; c < m_; ++c)
        if (count_[c] > 0) value_.primary += total_[c];
      return;
    }
    lowest_.fill({std::numeric_limits<double>::infinity(), m_});
    for (std::size_t c = 0; c < m_; ++c) {
      if (count_[c] == 0) continue;
      const double f = normalized(c);
      value_.secondary += f;
      std::pair<double, std::size_t> entry{f, c};
      for (auto& slot : lowest_)
        if (entry < slot) std::swap(entry, slot);
    }
    value_.primary = lowest_[0].first;
  }

  // smallest normalized value among cells other than a and b
  double min_excluding(std::size_t a, std::size_t b) const {
    for (const auto& [f, c] : lowest_)
      if (c != a && c != b) return f;
    return std::numeric_limits<double>::infinity();
  }

  bool try_move(std::size_t v, std::vector<double>* ascent) {
    const std::size_t a = cell_[v];
    std::fill(row_.begin(), row_.end(), 0.0);
    for (std::size_t u = 0; u < m_; ++u) row_[cell_[u]] += w_(v, u);
    const double self = w_(v, v);
    const double total_a = total_[a] - 2.0 * row_[a] + self;
    const double mass_a = cell_mass_[a] - mass_[v];
    const bool a_survives = count_[a] > 1;

    std::size_t empty_slot = m_;
    if (a_survives)
      for (std::size_t c = 0; c < m_; ++c)
        if (count_[c] == 0) {
          empty_slot = c;
          break;
        }

    std::size_t best = m_;
    ObjectiveValue best_value;
    for (std::size_t b = 0; b < m_; ++b) {
      if (b == a || (count_[b] == 0 && b != empty_slot)) continue;
      const double total_b = total_[b] + 2.0 * row_[b] + self;
      ObjectiveValue candidate;
      if (!is_min()) {
        candidate.primary = value_.primary + (total_a - total_[a]) + (total_b - total_[b]);
      } else {
        const double fb = total_b / (cell_mass_[b] + mass_[v]);
        double lowest = std::min(min_excluding(a, b), fb);
        double secondary = value_.secondary - normalized(a) + fb;
        if (count_[b] > 0) secondary -= normalized(b);
        if (a_survives) {
          const double fa = total_a / mass_a;
          lowest = std::min(lowest, fa);
          secondary += fa;
        }
        candidate = {lowest, secondary};
      }
      if (best == m_ || lexicographically_better(candidate, best_value)) {
        best = b;
        best_value = candidate;
      }
    }
    if (best == m_ || !objective_.improves(best_value, value_)) return false;

    if (ascent) {
      const double gain = best_value.primary != value_.primary
                              ? best_value.primary - value_.primary
                              : best_value.secondary - value_.secondary;
      ascent->push_back(gain);
    }
    total_[best] += 2.0 * row_[best] + self;
    cell_mass_[best] += mass_[v];
    ++count_[best];
    total_[a] = total_a;
    cell_mass_[a] = mass_a;
    --count_[a];
    if (count_[a] == 0) total_[a] = cell_mass_[a] = 0.0;
    cell_[v] = best;
    if (is_min())
      refresh_value();
    else
      value_ = best_value;
    return true;
  }

  const PartitionObjective& objective_;
  const Matrix& w_;
  const Vector& mass_;
  std::vector<std::size_t>& cell_;
  std::size_t m_;
  Vector total_;
  Vector cell_mass_;
  std::vector<std::size_t> count_;
  Vector row_;
  ObjectiveValue value_;
  std::array<std::pair<double, std::size_t>, 3> lowest_{};
};

std::vector<std::size_t> compact(const std::vector<std::size_t>& labels) {
  const Partition p = Partition::from_labels(labels);
  return {p.cells().begin(), p.cells().end()};
}

struct RestartOutcome {
  Partition partition;
  ObjectiveValue value;
  std::vector<double> ascent;
};

RestartOutcome run_restart(const PartitionObjective& objective, std::uint64_t seed,
                           bool record_ascent) {
  const std::size_t n = objective.size();
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> labels(n);
  std::iota(labels.begin(), labels.end(), std::size_t{0});
  std::vector<double> ascent;
  std::vector<double>* sink = record_ascent ? &ascent : nullptr;

  for (;;) {
    bool changed = false;
    {
      LocalMover mover(objective, objective.weights(), objective.mass(), labels);
      changed |= mover.run(rng, sink);
    }
    labels = compact(labels);
    for (;;) {
      const Partition current(labels);
      const std::size_t k = current.cell_count();
      if (k <= 1) break;
      const Matrix w = kernels::cell_sandwich(objective.weights(), current.cells(), k);
      Vector mass(k, 0.0);
      for (std::size_t i = 0; i < n; ++i) mass[labels[i]] += objective.mass()[i];
      std::vector<std::size_t> super(k);
      std::iota(super.begin(), super.end(), std::size_t{0});
      LocalMover mover(objective, w, mass, super);
      if (!mover.run(rng, nullptr)) break;
      changed = true;
      for (auto& l : labels) l = super[l];
      labels = compact(labels);
    }
    if (!changed) break;
  }
  Partition p(labels);
  const ObjectiveValue value = objective.evaluate(p);
  return RestartOutcome{std::move(p), value, std::move(ascent)};
}

}  // namespace

OptimizeResult optimize_objective(const PartitionObjective& objective,
                                  const OptimizeOptions& options) {
  if (options.restarts == 0) throw InputError("optimize", "restarts must be >= 1");
  if (objective.variant() != options.variant)
    throw InputError("optimize", "objective variant does not match options");
  const auto restarts = static_cast<std::ptrdiff_t>(options.restarts);
  std::vector<RestartOutcome> outcomes(options.restarts);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t r = 0; r < restarts; ++r)
    outcomes[static_cast<std::size_t>(r)] =
        run_restart(objective, splitmix64(options.seed ^ splitmix64(static_cast<std::uint64_t>(r))),
                    options.record_ascent);

  std::size_t best = 0;
  for (std::size_t r = 1; r < outcomes.size(); ++r) {
    const auto& cand = outcomes[r];
    const auto& cur = outcomes[best];
    if (lexicographically_better(cand.value, cur.value) ||
        (cand.value.primary == cur.value.primary && cand.value.secondary == cur.value.secondary &&
         std::lexicographical_compare(cand.partition.cells().begin(), cand.partition.cells().end(),
                                      cur.partition.cells().begin(), cur.partition.cells().end())))
      best = r;
  }
  auto& win = outcomes[best];
  return OptimizeResult{std::move(win.partition), win.value, options.restarts,
                        std::move(win.ascent)};
}

PartitionOptimum optimize_partition(const TransitionFamily& f, double t,
                                    const OptimizeOptions& options) {
  const PartitionObjective objective = PartitionObjective::from_family(f, t, options.variant);
  OptimizeResult best = optimize_objective(objective, options);
  // score from the objective's weights; identical to stability_score(f, p, t, variant)
  const Partition& p = best.partition;
  Matrix r = kernels::cell_sandwich(objective.weights(), p.cells(), p.cell_count());
  if (options.variant == Variant::min) {
    Vector mass(p.cell_count(), 0.0);
    for (std::size_t i = 0; i < p.size(); ++i) mass[p.cell(i)] += f.stationary()[i];
    for (std::size_t c = 0; c < r.rows(); ++c)
      for (double& x : r.row(c)) x /= mass[c];
  }
  StabilityScore score{t, best.value.primary, std::move(r), options.variant};
  return PartitionOptimum{std::move(best.partition), std::move(score), best.restarts};
}

bool is_single_move_optimal(const PartitionObjective& objective, const Partition& p) {
  const ObjectiveValue current = objective.evaluate(p);
  std::vector<std::size_t> labels(p.cells().begin(), p.cells().end());
  const std::size_t k = p.cell_count();
  for (std::size_t v = 0; v < p.size(); ++v) {
    const std::size_t own = labels[v];
    for (std::size_t target = 0; target <= k; ++target) {
      if (target == own) continue;
      labels[v] = target;
      const ObjectiveValue moved = objective.evaluate(Partition::from_labels(labels));
      labels[v] = own;
      if (objective.improves(moved, current)) return false;
    }
  }
  return true;
}

std::vector<Plateau> find_plateaus(std::span<const SweepEntry> entries) {
  std::vector<Plateau> out;
  std::size_t start = 0;
  for (std::size_t i = 1; i <= entries.size(); ++i) {
    if (i < entries.size() && entries[i].k == entries[start].k) continue;
    if (i - start >= 2) out.push_back({start, i - 1, entries[start].k});
    start = i;
  }
  return out;
}

SweepResult stability_sweep(const TransitionFamily& f, std::span<const double> times,
                            const OptimizeOptions& options) {
  if (times.empty()) throw InputError("optimize", "time grid is empty");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1])) throw InputError("optimize", "time grid must be increasing");
  SweepResult sweep;
  for (double t : times) {
    PartitionOptimum best = optimize_partition(f, t, options);
    const std::size_t k = best.partition.cell_count();
    sweep.entries.push_back({t, std::move(best.partition), best.score.r, k, best.restarts});
  }
  sweep.plateaus = find_plateaus(sweep.entries);
  return sweep;
}

void write_sweep_csv(std::ostream& out, const SweepResult& sweep) {
  out << "t,k,r,restarts\n" << std::setprecision(17);
  for (const auto& e : sweep.entries) out << e.t << ',' << e.k << ',' << e.r << ',' << e.restarts << '\n';
}

}  // namespace netdyn
