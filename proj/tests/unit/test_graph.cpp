#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "netdyn/error.hpp"
#include "netdyn/graph.hpp"
#include "netdyn/spectral.hpp"
#include "oracles.hpp"

using namespace netdyn;
using fixture::make_graph;

TEST_SUITE("graph") {

TEST_CASE("graph construction validates edges") {
  CHECK_THROWS_AS(make_graph(2, {{0, 0, 1.0}}), SelfLoopError);
  CHECK_THROWS_AS(make_graph(2, {{0, 1, 1.0}, {1, 0, 2.0}}), DuplicateEdgeError);
  CHECK_THROWS_AS(make_graph(2, {{0, 1, NAN}}), InputError);
  CHECK_THROWS_AS(make_graph(2, {{0, 3, 1.0}}), InputError);

  const Graph g = make_graph(3, {{2, 0, 1.5}, {1, 2, -1.0}});
  CHECK(g.edges()[0] == Edge{0, 2, 1.5});  // canonical i < j
  CHECK(g.edges()[1] == Edge{1, 2, -1.0});
  CHECK(g.is_signed());
  CHECK_FALSE(g.has_integer_weights());
  CHECK(g.degrees() == Vector{1.5, -1.0, 0.5});
  CHECK(g.absolute_degrees() == Vector{1.5, 1.0, 2.5});
  CHECK(g.is_connected());
  CHECK(g.index_of("2") == 2u);
  CHECK_FALSE(g.index_of("x").has_value());
}

TEST_CASE("components via union-find") {
  const Graph g = fixture::cliques({3, 2, 1});
  CHECK(g.component_count() == 3);
  CHECK(g.component_of() == std::vector<std::size_t>{0, 0, 0, 1, 1, 2});
}

TEST_CASE("karate dataset") {
  const Graph g = karate_club();
  CHECK(g.size() == 34);
  CHECK(g.edge_count() == 78);
  CHECK(g.is_connected());
  CHECK_FALSE(g.is_signed());
  CHECK(g.node(kKarateInstructor) == "1");
  CHECK(g.node(kKaratePresident) == "34");
  // highest degrees: president 17, instructor 16
  CHECK(g.degrees()[kKaratePresident] == 17);
  CHECK(g.degrees()[kKarateInstructor] == 16);
}

TEST_CASE("combinatorial laplacian") {
  const Matrix l2 = combinatorial_laplacian(fixture::path(2));
  CHECK(l2(0, 0) == 1);
  CHECK(l2(0, 1) == -1);
  CHECK(l2(1, 0) == -1);
  CHECK(l2(1, 1) == 1);

  // triangle with weights (1,2,3) on edges 01, 12, 02: degrees 1+3, 1+2, 2+3
  const Matrix l = combinatorial_laplacian(make_graph(3, {{0, 1, 1}, {1, 2, 2}, {0, 2, 3}}));
  CHECK(l(0, 0) == 4);
  CHECK(l(1, 1) == 3);
  CHECK(l(2, 2) == 5);
  CHECK(l(0, 1) == -1);
  CHECK(l(1, 2) == -2);
  CHECK(l(0, 2) == -3);

  const Graph karate = karate_club();
  const Matrix lk = combinatorial_laplacian(karate);
  for (std::size_t i = 0; i < 34; ++i) CHECK(sum(lk.row(i)) == 0.0);
  const Vector ev = oracle::jacobi_eigenvalues(lk);
  CHECK(std::abs(ev[1] - 0.47) < 0.01);
  CHECK_THROWS_AS(combinatorial_laplacian(make_graph(2, {{0, 1, -1}})), SignedGraphError);
}

TEST_CASE("normalized and random-walk laplacians") {
  const Matrix ln2 = normalized_laplacian(fixture::path(2));
  CHECK(ln2(0, 0) == doctest::Approx(1));
  CHECK(ln2(0, 1) == doctest::Approx(-1));

  // K_{1,3}: normalized spectrum {0, 1, 1, 2}
  const Vector star = oracle::jacobi_eigenvalues(normalized_laplacian(fixture::star(3)));
  CHECK(std::abs(star[0]) < 1e-12);
  CHECK(star[1] == doctest::Approx(1.0));
  CHECK(star[2] == doctest::Approx(1.0));
  CHECK(star[3] == doctest::Approx(2.0));

  const Graph karate = karate_club();
  const Vector ln = decompose(normalized_laplacian(karate)).eigenvalues;
  // L_RW is not symmetric; its eigenvalues are those of the similar matrix
  // D^{1/2} L_RW D^{-1/2}, recovered here by explicit conjugation.
  const Matrix lrw = random_walk_laplacian(karate);
  Matrix sym(34, 34);
  for (std::size_t i = 0; i < 34; ++i)
    for (std::size_t j = 0; j < 34; ++j)
      sym(i, j) = std::sqrt(karate.degrees()[i]) * lrw(i, j) / std::sqrt(karate.degrees()[j]);
  const Vector lrw_ev = oracle::jacobi_eigenvalues(sym);
  for (std::size_t i = 0; i < 34; ++i) CHECK(std::abs(ln[i] - lrw_ev[i]) < 1e-10);
  CHECK(std::abs(lrw_ev[1] - 0.13) < 0.01);

  // regular graph: L_RW = L / r
  const Graph c = fixture::cycle(6);
  CHECK(max_abs_diff(random_walk_laplacian(c), 0.5 * combinatorial_laplacian(c)) < 1e-15);

  // path P3: row sums 0, off-diagonals −1/d_i
  const Matrix p3 = random_walk_laplacian(fixture::path(3));
  for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(sum(p3.row(i))) < 1e-15);
  CHECK(p3(0, 1) == -1.0);
  CHECK(p3(1, 0) == -0.5);
  CHECK(p3(1, 2) == -0.5);
  CHECK(p3(2, 1) == -1.0);

  CHECK_THROWS_AS(normalized_laplacian(make_graph(3, {{0, 1, 1}})), ZeroDegreeError);
  CHECK_THROWS_AS(random_walk_laplacian(make_graph(3, {{0, 1, 1}})), ZeroDegreeError);
}

TEST_CASE("signed laplacian") {
  const Graph karate = karate_club();
  CHECK(signed_laplacian(karate) == combinatorial_laplacian(karate));

  const Matrix neg = signed_laplacian(make_graph(2, {{0, 1, -1}}));
  CHECK(neg(0, 0) == 1);
  CHECK(neg(0, 1) == 1);
  const Vector ev = oracle::jacobi_eigenvalues(neg);
  CHECK(std::abs(ev[0]) < 1e-14);
  CHECK(ev[1] == doctest::Approx(2.0));

  const Matrix tri = signed_laplacian(make_graph(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, -1}}));
  CHECK(oracle::jacobi_eigenvalues(tri)[0] > 0.1);
}

TEST_CASE("incidence decomposition") {
  const auto pos = incidence_decomposition(fixture::path(2));
  CHECK(pos.incidence(0, 0) == 1);
  CHECK(pos.incidence(1, 0) == -1);
  const auto neg = incidence_decomposition(make_graph(2, {{0, 1, -2}}));
  CHECK(neg.incidence(0, 0) == 1);
  CHECK(neg.incidence(1, 0) == 1);
  CHECK(neg.abs_weights(0, 0) == 2);

  // random signed graph n = 8, seed 7
  std::mt19937_64 rng(7);
  std::vector<fixture::WeightedEdge> edges;
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = i + 1; j < 8; ++j)
      if (rng() % 2) edges.emplace_back(i, j, (rng() % 2 ? 1.0 : -1.0) * (1 + rng() % 4));
  const Graph g = make_graph(8, edges);
  const auto d = incidence_decomposition(g);
  const Matrix product = oracle::multiply(oracle::multiply(d.incidence, d.abs_weights),
                                          oracle::transpose(d.incidence));
  // L_S assembled directly from the edge list
  Matrix ls(8, 8);
  for (const Edge& e : g.edges()) {
    ls(e.source, e.source) += std::abs(e.weight);
    ls(e.target, e.target) += std::abs(e.weight);
    ls(e.source, e.target) -= e.weight;
    ls(e.target, e.source) -= e.weight;
  }
  CHECK(oracle::max_abs_diff(product, ls) < 1e-12);
  CHECK(oracle::max_abs_diff(product, signed_laplacian(g)) < 1e-12);
}

TEST_CASE("partitions") {
  CHECK_THROWS_AS(Partition({0, 2}), InputError);
  const Partition p = Partition::from_labels(std::vector<std::size_t>{7, 3, 7, 9});
  CHECK(p.cells()[0] == 0);
  CHECK(p.cells()[1] == 1);
  CHECK(p.cells()[3] == 2);
  CHECK(p.cell_sizes() == std::vector<std::size_t>{2, 1, 1});
  CHECK(Partition::singletons(4).refines(p));
  CHECK(p.refines(Partition::all_in_one(4)));
  CHECK_FALSE(p.refines(Partition::singletons(4)));
  CHECK(Partition({1, 0, 1, 2}).same_cells(p));
  CHECK(Partition({1, 0, 1, 2}).canonical() == Partition({0, 1, 0, 2}));
}

TEST_CASE("indicator and averaging") {
  CHECK(indicator_matrix(Partition::singletons(4), 4) == Matrix::identity(4));
  CHECK(indicator_matrix(Partition::all_in_one(3), 3) == Matrix(3, 1, 1.0));
  const Matrix c = indicator_matrix(karate_factions(), 34);
  CHECK(c.cols() == 2);
  CHECK(sum(c.column(0)) == 17);  // the bundled labels split the club in half
  CHECK(sum(c.column(1)) == 17);
  CHECK(c(kKarateInstructor, 0) == 1);
  CHECK(c(kKaratePresident, 1) == 1);
  CHECK_THROWS_AS(indicator_matrix(Partition::singletons(3), 4), SizeMismatchError);

  const Matrix avg4 = cell_averaging(Partition::all_in_one(4), 4);
  for (std::size_t j = 0; j < 4; ++j) CHECK(avg4(0, j) == 0.25);
  CHECK(cell_averaging(Partition::singletons(3), 3) == Matrix::identity(3));
  const Matrix avg = cell_averaging(Partition({0, 0, 1}), 3);
  CHECK(avg(0, 0) == 0.5);
  CHECK(avg(0, 1) == 0.5);
  CHECK(avg(0, 2) == 0.0);
  CHECK(avg(1, 2) == 1.0);
  const Partition kp = karate_factions();
  CHECK(oracle::multiply(cell_averaging(kp, 34), indicator_matrix(kp, 34)) == Matrix::identity(2));
}

TEST_CASE("planted partition generator") {
  const std::vector<std::size_t> sizes{20, 20};
  const Graph g = generate_planted_partition(sizes, 0.5, 0.05, 1);
  const Graph h = generate_planted_partition(sizes, 0.5, 0.05, 1);
  CHECK(g.edges() == h.edges());
  std::size_t within = 0;
  for (const Edge& e : g.edges()) within += (e.source < 20) == (e.target < 20);
  // binomial with N = 2·C(20,2) = 380 pairs, p = 0.5
  const double mean = 0.5 * 380, sd = std::sqrt(380 * 0.25);
  CHECK(std::abs(static_cast<double>(within) - mean) < 3 * sd);

  const std::vector<std::size_t> three{10, 12, 8};
  const Graph split = generate_planted_partition(three, 1.0, 0.0, 4);
  CHECK(split.component_count() == 3);
  CHECK(decompose(combinatorial_laplacian(split)).zero_multiplicity() == 3);
  CHECK(planted_blocks(three).cell_sizes() == three);

  CHECK_THROWS_AS(generate_planted_partition(sizes, 0.1, 0.2, 1), InputError);
  CHECK_THROWS_AS(generate_planted_partition(sizes, 1.5, 0.2, 1), InputError);
}

TEST_CASE("stationary distribution") {
  const Vector reg = stationary_distribution(fixture::cycle(5));
  for (double x : reg) CHECK(x == doctest::Approx(0.2));

  const Vector star = stationary_distribution(fixture::star(4));
  CHECK(star[0] == 4.0 / 8.0);
  for (std::size_t i = 1; i < 5; ++i) CHECK(star[i] == 1.0 / 8.0);

  const Graph karate = karate_club();
  const Vector pi = stationary_distribution(karate);
  std::vector<std::size_t> order(34);
  for (std::size_t i = 0; i < 34; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return pi[a] > pi[b]; });
  CHECK(std::set<std::size_t>{order[0], order[1]} == std::set<std::size_t>{kKarateInstructor, kKaratePresident});
  CHECK(std::abs(sum(pi) - 1.0) < 1e-12);
  const Matrix lrw = random_walk_laplacian(karate);
  for (std::size_t j = 0; j < 34; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < 34; ++i) s += pi[i] * lrw(i, j);
    CHECK(std::abs(s) < 1e-12);
  }
  CHECK_THROWS_AS(stationary_distribution(fixture::cliques({2, 2})), DisconnectedGraphError);
  CHECK_THROWS_AS(stationary_distribution(make_graph(2, {{0, 1, -1}})), SignedGraphError);
}

TEST_CASE("laplacian invariants on random graphs") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Graph g = fixture::random_connected(12, 0.3, seed, 4);
    const Matrix l = combinatorial_laplacian(g);
    const Vector ev = oracle::jacobi_eigenvalues(l);
    CHECK(std::abs(ev[0]) < 1e-10);
    CHECK(ev[1] > 1e-8);
    for (std::size_t i = 0; i < 12; ++i) CHECK(std::abs(sum(l.row(i))) < 1e-12);
  }
}

}  // TEST_SUITE
