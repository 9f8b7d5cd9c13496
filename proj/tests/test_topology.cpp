#include "support.hpp"

#include "gcs/errors.hpp"
#include "gcs/topology.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace gcs;
using testing::weighted;

TEST_CASE("validate_graph: triangle with slack constraints is clean") {
  std::vector<Edge> es;
  for (auto [u, v] : {std::pair<NodeId, NodeId>{0, 1}, {1, 2}, {0, 2}}) es.push_back({u, v, testing::unit_edge(), 0});
  CHECK(validate_graph(NetworkGraph(3, 10.0, es)).empty());
}

TEST_CASE("validate_graph: two components") {
  std::vector<Edge> es{{0, 1, testing::unit_edge(), 0}, {2, 3, testing::unit_edge(), 0}};
  const auto v = validate_graph(NetworkGraph(4, 10.0, es));
  REQUIRE(v.size() == 1);
  CHECK(v[0] == "graph not connected");
}

TEST_CASE("validate_graph: asymmetry beyond eps_d") {
  EdgeParams p{5.0, 9.0, 0.0, 0.1, 0.0, 1.0};
  const auto v = validate_graph(NetworkGraph(2, 20.0, {{0, 1, p, 0}}));
  REQUIRE(v.size() == 1);
  CHECK(v[0].find("asymmetry 4 > 0.9") != std::string::npos);
}

TEST_CASE("validate_graph: delay bound must stay below d_max") {
  EdgeParams p{9.9, 9.9, 0.2, 0.1, 0.0, 1.0};
  const auto v = validate_graph(NetworkGraph(2, 10.0, {{0, 1, p, 0}}));
  CHECK(v.size() == 2);
  CHECK_THROWS_AS(NetworkGraph(2, 10.0, {{0, 5, p, 0}}), ConfigError);
}

TEST_CASE("hop_distance and hop_diameter") {
  const auto line = make_line(3, 10.0, testing::unit_edge());
  CHECK(hop_distance(line, 1, 1) == 0);
  CHECK(hop_distance(line, 0, 2) == 2);
  const auto grid = make_grid(4, 4, 10.0, testing::unit_edge());
  CHECK(hop_distance(grid, 0, 15) == 6);
  CHECK(hop_distance(grid, 3, 12) == 6);
  CHECK(hop_diameter(make_line(2, 10.0, testing::unit_edge())) == 1);
  CHECK(hop_diameter(make_ring(8, 10.0, testing::unit_edge())) == 4);
}

TEST_CASE("hop_distances match an independent BFS on random graphs") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = testing::random_weighted(16, 0.1, rng);
    const auto h = hop_distances(g);
    int diam = 0;
    for (NodeId s = 0; s < 16; ++s) {
      const auto ref = testing::bfs_hops(g, s);
      for (NodeId t = 0; t < 16; ++t) {
        CHECK(h(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(t)) == ref[t]);
        diam = std::max(diam, ref[t]);
        CHECK(hop_distance(g, s, t) <= hop_diameter(g));
      }
    }
    CHECK(hop_diameter(g) == static_cast<std::size_t>(diam));
  }
}

TEST_CASE("hop_distance on a disconnected pair throws") {
  std::vector<Edge> es{{0, 1, testing::unit_edge(), 0}};
  CHECK_THROWS_AS(hop_distance(NetworkGraph(3, 10.0, es), 0, 2), ParameterError);
}

TEST_CASE("edge_kappa formula") {
  CHECK(edge_kappa({10.0, 14.0, 0.0, 0.01, 0.001, 1.0}, 1.001) == doctest::Approx(0.31).epsilon(1e-12));
  CHECK(edge_kappa({10.0, 14.0, 0.0, 0.0, 0.0, 1.0}, 1.0) == 0.0);
  CHECK(edge_kappa({1.0, 1.0, 0.0, 0.0, 0.0, 1.0}, 1.01) == doctest::Approx(0.02).epsilon(1e-12));
  CHECK_THROWS_AS(edge_kappa(testing::unit_edge(), 0.99), ParameterError);
  // worst delay includes jitter
  CHECK(edge_kappa({10.0, 10.0, 0.2, 0.02, 0.2858, 1.0}, 1.001) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("weighted_distance examples") {
  const auto line = weighted(3, {{0, 1, 0.3}, {1, 2, 0.5}});
  CHECK(weighted_distance(line, 0, 2) == doctest::Approx(0.8));
  CHECK(weighted_distance(line, 0, 2, 3.0) == doctest::Approx(2.4));
  const auto tri = weighted(3, {{0, 1, 0.2}, {1, 2, 0.2}, {0, 2, 0.5}});
  CHECK(weighted_distance(tri, 0, 2) == doctest::Approx(0.4));
  CHECK(weighted_distance(tri, 0, 2) == doctest::Approx(testing::min_path_exhaustive(tri, 0, 2)));
}

TEST_CASE("kappa_distances against exhaustive paths and Floyd-Warshall") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const auto g = testing::random_weighted(6, 0.4, rng);
    const auto d = kappa_distances(g);
    const auto fw = testing::floyd_warshall(g);
    for (NodeId a = 0; a < 6; ++a) {
      for (NodeId b = 0; b < 6; ++b) {
        const auto ia = static_cast<Eigen::Index>(a);
        const auto ib = static_cast<Eigen::Index>(b);
        const double ref = a == b ? 0.0 : testing::min_path_exhaustive(g, a, b);
        CHECK(d(ia, ib) == doctest::Approx(ref).epsilon(1e-12));
        CHECK(d(ia, ib) == doctest::Approx(fw(ia, ib)).epsilon(1e-12));
        CHECK(d(ia, ib) == d(ib, ia));
        CHECK((d(ia, ib) == 0.0) == (a == b));
        for (NodeId c = 0; c < 6; ++c) {
          CHECK(d(ia, ib) <= d(ia, static_cast<Eigen::Index>(c)) + d(static_cast<Eigen::Index>(c), ib) + 1e-12);
        }
      }
    }
    for (const auto& e : g.edges()) CHECK(weighted_distance(g, e.u, e.v) <= e.kappa + 1e-15);
    CHECK(kappa_diameter(g) == doctest::Approx(fw.maxCoeff()).epsilon(1e-12));
  }
}

TEST_CASE("shortest_kappa_path is tight and lexicographically smallest") {
  // Two equal-weight routes 0-1-3 and 0-2-3; the smaller id wins.
  const auto g = weighted(4, {{0, 2, 0.5}, {2, 3, 0.5}, {0, 1, 0.5}, {1, 3, 0.5}});
  CHECK(shortest_kappa_path(g, 0, 3) == std::vector<NodeId>{0, 1, 3});
  CHECK(shortest_kappa_path(g, 2, 2) == std::vector<NodeId>{2});

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto h = testing::random_weighted(7, 0.3, rng);
    for (NodeId a = 0; a < 7; ++a) {
      for (NodeId b = 0; b < 7; ++b) {
        const auto p = shortest_kappa_path(h, a, b);
        double sum = 0.0;
        for (std::size_t i = 0; i + 1 < p.size(); ++i) sum += h.edge(*h.find_edge(p[i], p[i + 1])).kappa;
        CHECK(sum == doctest::Approx(weighted_distance(h, a, b)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("generators produce the expected shapes") {
  CHECK(make_line(9, 10.0, testing::unit_edge()).edge_count() == 8);
  CHECK(make_ring(12, 10.0, testing::unit_edge()).edge_count() == 12);
  CHECK(make_grid(4, 4, 10.0, testing::unit_edge()).edge_count() == 24);
  CHECK(make_star(6, 10.0, testing::unit_edge()).neighbors(0).size() == 5);
  const auto r = make_random(16, 0.15, 3, 10.0, testing::unit_edge());
  CHECK(validate_graph(r).empty());
  CHECK(make_random(16, 0.15, 3, 10.0, testing::unit_edge()).edge_count() == r.edge_count());
  CHECK_THROWS_AS(make_ring(2, 10.0, testing::unit_edge()), ParameterError);
}
