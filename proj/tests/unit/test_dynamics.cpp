#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "netdyn/balance.hpp"
#include "netdyn/dynamics.hpp"
#include "netdyn/error.hpp"
#include "netdyn/graph.hpp"
#include "netdyn/spectral.hpp"
#include "oracles.hpp"

using namespace netdyn;

namespace {

Vector uniform_state(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Vector x(n);
  for (double& v : x) v = uniform01(rng());
  return x;
}

std::size_t agreement(const std::vector<int>& side, const Partition& truth) {
  std::size_t same = 0;
  for (std::size_t i = 0; i < side.size(); ++i) same += (side[i] == 1) == (truth.cell(i) == 0);
  return std::max(same, side.size() - same);
}

}  // namespace

TEST_SUITE("dynamics") {

TEST_CASE("time grids") {
  const Vector g = parse_time_grid("log:-2:2:5");
  REQUIRE(g.size() == 5);
  CHECK(g[0] == doctest::Approx(0.01));
  CHECK(g[2] == doctest::Approx(1.0));
  CHECK(g[4] == doctest::Approx(100.0));
  CHECK(parse_time_grid("list:0,0.5,2") == Vector{0, 0.5, 2});
  CHECK_THROWS_AS(parse_time_grid("list:1,1"), InputError);
  CHECK_THROWS_AS(parse_time_grid("list:2,1"), InputError);
  CHECK_THROWS_AS(parse_time_grid("list:-1"), InputError);
  CHECK_THROWS_AS(parse_time_grid("log:1:2"), InputError);
  CHECK_THROWS_AS(parse_time_grid("grid:1"), InputError);

  const Spectrum s = decompose(combinatorial_laplacian(karate_club()));
  const Vector d = default_time_grid(s);
  CHECK(d.front() == doctest::Approx(1e-2 / s.eigenvalues.back()));
  CHECK(d.back() == doctest::Approx(10.0 / s.eigenvalues[1]));
  const double decades = std::log10(d.back() / d.front());
  CHECK(std::abs(static_cast<double>(d.size()) - 64.0 * decades) <= 2.0);
}

TEST_CASE("integrated decay") {
  CHECK(integrated_decay(0.0, 3.0) == 3.0);
  CHECK(integrated_decay(2.0, 1.0) == doctest::Approx((1 - std::exp(-2.0)) / 2.0));
  const double tiny = 1e-9;  // series branch
  CHECK(integrated_decay(tiny, 2.0) == doctest::Approx(2.0 - tiny * 2.0).epsilon(1e-14));
  CHECK(integrated_decay(-1.0, 1.0) == doctest::Approx(std::exp(1.0) - 1.0));
}

TEST_CASE("consensus on a single edge") {
  const Graph k2 = fixture::path(2);
  const Vector x0{1.0, 0.0};
  const Vector times{0.0, 0.3, 50.0};
  const Trajectory t = simulate_consensus(k2, x0, times);
  CHECK(t.states(0, 0) == doctest::Approx(1.0));
  // x0(t) = (1 + e^{-2t}) / 2
  CHECK(t.states(1, 0) == doctest::Approx((1 + std::exp(-0.6)) / 2));
  CHECK(std::abs(t.states(2, 0) - 0.5) < 1e-12);
  CHECK(std::abs(t.states(2, 1) - 0.5) < 1e-12);
  const Trajectory rk = integrate_reference(k2, x0, times);
  CHECK(max_abs_diff(t.states, rk.states) < 1e-6);
}

TEST_CASE("consensus invariants on karate") {
  const Graph g = karate_club();
  const Vector x0 = uniform_state(34, 42);
  const Vector times = log_time_grid(-2, 2, 60);
  const Trajectory traj = simulate_consensus(g, x0, times);
  const double total = sum(x0);
  double prev_max = *std::max_element(x0.begin(), x0.end());
  double prev_min = *std::min_element(x0.begin(), x0.end());
  for (std::size_t s = 0; s < traj.samples(); ++s) {
    const auto row = traj.states.row(s);
    CHECK(std::abs(sum(row) - total) < 1e-9);
    const double hi = *std::max_element(row.begin(), row.end());
    const double lo = *std::min_element(row.begin(), row.end());
    CHECK(hi <= prev_max + 1e-9);
    CHECK(lo >= prev_min - 1e-9);
    prev_max = hi;
    prev_min = lo;
  }
}

TEST_CASE("karate consensus groups follow the slowest mode") {
  // Past 1/λ₂ the deviations from the mean are dominated by the Fiedler
  // vector, whose sign pattern is the two-group split.
  const Graph g = karate_club();
  const auto [values, vectors] = oracle::jacobi_eigen(combinatorial_laplacian(g));
  std::vector<int> fiedler(34);
  for (std::size_t i = 0; i < 34; ++i) fiedler[i] = vectors(i, 1) > 0 ? 1 : -1;
  CHECK(agreement(fiedler, karate_factions()) >= 32);

  const Vector x0 = uniform_state(34, 7);
  const double t = 20.0;
  REQUIRE(t > 1.0 / values[1]);
  const Vector times{t};
  const Trajectory traj = simulate_consensus(g, x0, times);
  const double mean = sum(x0) / 34.0;
  std::vector<int> side(34);
  for (std::size_t i = 0; i < 34; ++i) side[i] = traj.states(0, i) > mean ? 1 : -1;
  const bool same = side == fiedler;
  std::vector<int> flipped(34);
  for (std::size_t i = 0; i < 34; ++i) flipped[i] = -fiedler[i];
  CHECK((same || side == flipped));
  CHECK(agreement(side, karate_factions()) >= 32);
}

TEST_CASE("zealots polarize the club along the factions") {
  const Graph g = karate_club();
  Vector u(34, 0.0);
  u[kKarateInstructor] = 1.0;
  u[kKaratePresident] = -1.0;
  const Vector x0 = uniform_state(34, 3);
  const Vector times{2000.0};
  const Trajectory traj = simulate_consensus(g, x0, times, u);
  Vector x(traj.states.row(0).begin(), traj.states.row(0).end());
  const double mean = sum(x) / 34.0;
  std::vector<int> side(34);
  for (std::size_t i = 0; i < 34; ++i) side[i] = x[i] > mean ? 1 : -1;
  CHECK(agreement(side, karate_factions()) >= 33);
  CHECK(side[kKarateInstructor] == 1);
  CHECK(side[kKaratePresident] == -1);
}

TEST_CASE("spectral propagator against RK4") {
  const Graph g = karate_club();
  const Vector x0 = uniform_state(34, 5);
  Vector u(34, 0.0);
  u[3] = 0.5;
  u[20] = -0.25;
  const Vector times = parse_time_grid("list:0,0.5,1,2.5,5,10");
  const Trajectory exact = simulate_consensus(g, x0, times, u);
  const Trajectory rk = integrate_reference(g, x0, times, u);
  CHECK(max_abs_diff(exact.states, rk.states) < 1e-5);

  const std::vector<std::size_t> sizes{15, 15, 15};
  const Graph planted = generate_planted_partition(sizes, 0.4, 0.05, 2);
  REQUIRE(planted.is_connected());
  Vector p0(45, 0.0);
  p0[0] = 1.0;
  const Trajectory walk = simulate_random_walk(planted, p0, times);
  // pᵀ evolves by −L_RWᵀ
  const Trajectory walk_rk =
      integrate_reference(random_walk_laplacian(planted).transposed(), p0, times, {}, 0.0, DynamicsKind::walk);
  CHECK(max_abs_diff(walk.states, walk_rk.states) < 1e-5);

  CHECK_THROWS_AS(integrate_reference(g, x0, times, {}, 10.0), InputError);
}

TEST_CASE("random walk") {
  const Graph g = karate_club();
  const Vector pi = stationary_distribution(g);
  const Spectrum ln = decompose(normalized_laplacian(g));
  const Vector times{0.0, 0.5, 50.0 / ln.eigenvalues[1]};
  for (std::size_t start : {kKarateInstructor, kKaratePresident, std::size_t{16}}) {
    Vector p0(34, 0.0);
    p0[start] = 1.0;
    const Trajectory t = simulate_random_walk(g, p0, times);
    for (std::size_t s = 0; s < t.samples(); ++s) {
      CHECK(std::abs(sum(t.states.row(s)) - 1.0) < 1e-9);
      for (double x : t.states.row(s)) CHECK(x >= -1e-12);
    }
    CHECK(max_abs_diff(t.states.row(2), pi) < 1e-6);
  }

  SUBCASE("short times stay within the starting faction") {
    Vector p0(34, 0.0);
    p0[kKarateInstructor] = 1.0;
    const Vector early{1.0};
    const Trajectory t = simulate_random_walk(g, p0, early);
    const Partition factions = karate_factions();
    double own = 0.0, other = 0.0;
    for (std::size_t i = 0; i < 34; ++i) (factions.cell(i) == 0 ? own : other) += t.states(0, i);
    CHECK(own > other);
  }

  SUBCASE("uniform start on a regular graph is stationary") {
    const Graph c = fixture::cycle(7);
    const Vector p0(7, 1.0 / 7.0);
    const Trajectory t = simulate_random_walk(c, p0, times);
    for (double x : t.states.data()) CHECK(x == doctest::Approx(1.0 / 7.0));
  }

  SUBCASE("duality with the D⁻¹L consensus") {
    // pᵀx is conserved when x is a constant consensus state
    Vector p0(34, 0.0);
    p0[5] = 0.3;
    p0[9] = 0.7;
    const Trajectory t = simulate_random_walk(g, p0, times);
    for (std::size_t s = 0; s < t.samples(); ++s) CHECK(std::abs(sum(t.states.row(s)) * 2.5 - 2.5) < 1e-9);
  }

  const Vector bad{0.5, 0.6};
  CHECK_THROWS_AS(simulate_random_walk(fixture::path(2), bad, times), InputError);
  const Vector negative{1.5, -0.5};
  CHECK_THROWS_AS(simulate_random_walk(fixture::path(2), negative, times), InputError);
}

TEST_CASE("signed consensus") {
  const Graph g = karate_club();
  const Vector x0 = uniform_state(34, 8);
  const Vector times{0.1, 1.0, 10.0};
  CHECK(max_abs_diff(simulate_signed_consensus(g, x0, times).states,
                     simulate_consensus(g, x0, times).states) < 1e-10);

  const Graph tri = fixture::make_graph(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, -1}});
  const Vector far{200.0};
  const Vector y0{1.0, -2.0, 0.5};
  const Trajectory decay = simulate_signed_consensus(tri, y0, far);
  CHECK(max_abs(decay.states) < 1e-10);

  const auto [balanced, sigma] = fixture::balanced_signed(10, 0.4, 4);
  const Vector z0 = uniform_state(10, 4);
  const Trajectory t = simulate_signed_consensus(balanced, z0, times);
  double invariant = 0.0;
  for (std::size_t i = 0; i < 10; ++i) invariant += sigma[i] * z0[i];
  for (std::size_t s = 0; s < t.samples(); ++s) {
    double v = 0.0;
    for (std::size_t i = 0; i < 10; ++i) v += sigma[i] * t.states(s, i);
    CHECK(std::abs(v - invariant) < 1e-9);
  }
  CHECK_THROWS_AS(simulate_signed_consensus(fixture::cliques({2, 2}), Vector(4, 0.0), times),
                  DisconnectedGraphError);
}

TEST_CASE("consensus preconditions") {
  const Vector times{1.0};
  CHECK_THROWS_AS(simulate_consensus(fixture::cliques({2, 3}), Vector(5, 0.0), times), DisconnectedGraphError);
  CHECK_THROWS_AS(simulate_consensus(fixture::make_graph(2, {{0, 1, -1}}), Vector(2, 0.0), times),
                  SignedGraphError);
  CHECK_THROWS_AS(simulate_consensus(fixture::path(3), Vector(2, 0.0), times), SizeMismatchError);
  const Vector backwards{2.0, 1.0};
  CHECK_THROWS_AS(simulate_consensus(fixture::path(2), Vector(2, 0.0), backwards), InputError);
}

TEST_CASE("trajectory CSV") {
  const Graph g = fixture::path(2);
  const Vector x0{1.0, 0.0};
  const Vector times{0.0};
  std::ostringstream out;
  write_trajectory_csv(out, simulate_consensus(g, x0, times), g);
  CHECK(out.str() == "t,0,1\n0,1,0\n");
}

}  // TEST_SUITE
