#include "support.hpp"

#include "gcs/errors.hpp"
#include "gcs/metrics.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace gcs;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

Eigen::VectorXd random_clocks(std::mt19937_64& rng, std::size_t n, double spread) {
  std::uniform_real_distribution<double> u(0.0, spread);
  Eigen::VectorXd v(static_cast<Eigen::Index>(n));
  for (auto& x : v) x = 50.0 + u(rng);
  return v;
}

double psi_oracle(const Eigen::VectorXd& l, const Eigen::MatrixXd& d, Eigen::Index v, std::size_t s) {
  double best = -1e300;
  for (Eigen::Index w = 0; w < l.size(); ++w) best = std::max(best, l(w) - l(v) - (2.0 * s - 1.0) * d(v, w));
  return best;
}

bool trailing_oracle(const Eigen::VectorXd& l, const Eigen::MatrixXd& d, Eigen::Index w, std::size_t s_max) {
  for (std::size_t s = 1; s <= s_max; ++s) {
    for (Eigen::Index v = 0; v < l.size(); ++v) {
      double m = -1e300;
      for (Eigen::Index x = 0; x < l.size(); ++x) m = std::max(m, l(v) - l(x) - 2.0 * s * d(v, x));
      if (m > 0.0 && l(v) - l(w) - 2.0 * s * d(v, w) == m) return true;
    }
  }
  return false;
}

bool sc_oracle(const NetworkGraph& g, const Eigen::VectorXd& l, NodeId v, std::size_t s) {
  bool any = false;
  bool all = true;
  for (const auto& e : g.edges()) {
    if (e.u != v && e.v != v) continue;
    const auto x = static_cast<Eigen::Index>(e.u == v ? e.v : e.u);
    const auto vi = static_cast<Eigen::Index>(v);
    any = any || l(vi) - l(x) >= (2.0 * s - 1.0) * e.kappa;
    all = all && l(x) - l(vi) <= (2.0 * s - 1.0) * e.kappa;
  }
  return any && all;
}

bool fc_oracle(const NetworkGraph& g, const Eigen::VectorXd& l, NodeId v, std::size_t s) {
  bool any = false;
  bool all = true;
  for (const auto& e : g.edges()) {
    if (e.u != v && e.v != v) continue;
    const auto x = static_cast<Eigen::Index>(e.u == v ? e.v : e.u);
    const auto vi = static_cast<Eigen::Index>(v);
    any = any || l(x) - l(vi) >= 2.0 * s * e.kappa;
    all = all && l(vi) - l(x) <= 2.0 * s * e.kappa;
  }
  return any && all;
}

}  // namespace

TEST_CASE("local_skew examples") {
  const auto line2 = testing::weighted(2, {{0, 1, 1.0}});
  CHECK(local_skew(line2, vec({3.0, 3.0})) == 0.0);
  CHECK(local_skew(line2, vec({10.0, 12.5})) == 2.5);
  const auto line5 = testing::weighted(5, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}, {3, 4, 1.0}});
  const auto ramp = vec({0, 1, 2, 3, 4});
  CHECK(local_skew(line5, ramp) == 1.0);
  CHECK(global_skew(ramp) == 4.0);
  CHECK(global_skew(vec({7, 7, 7})) == 0.0);
}

TEST_CASE("global_skew equals the pairwise maximum and bounds local skew") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 200; ++i) {
    const auto g = testing::random_weighted(9, 0.3, rng);
    const auto l = random_clocks(rng, 9, 10.0);
    double pair = 0.0;
    for (Eigen::Index a = 0; a < 9; ++a)
      for (Eigen::Index b = 0; b < 9; ++b) pair = std::max(pair, l(a) - l(b));
    CHECK(global_skew(l) == pair);
    CHECK(local_skew(g, l) <= global_skew(l));
  }
}

TEST_CASE("potential examples") {
  const auto g = testing::weighted(2, {{0, 1, 1.0}});
  const auto d = kappa_distances(g);
  const auto flat = vec({4.0, 4.0});
  for (std::size_t s = 1; s < 4; ++s) {
    CHECK(potential(flat, d, 0, s) == 0.0);
    CHECK(potential(flat, d, 1, s) == 0.0);
  }
  const auto two = vec({10.0, 15.0});
  CHECK(potential(two, d, 0, 1) == 4.0);
  const auto lp = level_potential(two, d, 1);
  CHECK(lp.value == 4.0);
  CHECK(lp.node == 0);
  CHECK(level_potential(flat, d, 1).node == 0);
  CHECK(leading_node(two, d, 0, 1) == 1);
  CHECK(leading_node(flat, d, 0, 1) == 0);
}

TEST_CASE("potentials match a brute force over every w with exhaustive distances") {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 100; ++i) {
    const auto g = testing::random_weighted(i % 3 == 0 ? 4 : 7, 0.3, rng);
    const auto n = g.node_count();
    Eigen::MatrixXd d(n, n);
    for (NodeId a = 0; a < n; ++a)
      for (NodeId b = 0; b < n; ++b) d(a, b) = a == b ? 0.0 : testing::min_path_exhaustive(g, a, b);
    const auto l = random_clocks(rng, n, 5.0);
    for (std::size_t s = 1; s <= 3; ++s) {
      const auto all = node_potentials(l, kappa_distances(g), s);
      double best = -1.0;
      NodeId arg = 0;
      for (Eigen::Index v = 0; v < static_cast<Eigen::Index>(n); ++v) {
        const double ref = psi_oracle(l, d, v, s);
        CHECK(all(v) == doctest::Approx(ref).epsilon(1e-12));
        CHECK(potential(l, d, static_cast<NodeId>(v), s) == doctest::Approx(ref).epsilon(1e-12));
        CHECK(all(v) >= 0.0);
        if (ref > best + 1e-12) {
          best = ref;
          arg = static_cast<NodeId>(v);
        }
      }
      const auto lp = level_potential(l, d, s);
      CHECK(lp.value == doctest::Approx(best).epsilon(1e-12));
      CHECK(lp.node == arg);
    }
  }
}

TEST_CASE("condition examples") {
  const auto g = testing::weighted(2, {{0, 1, 1.0}});
  const auto flat = vec({5.0, 5.0});
  CHECK_FALSE(slow_condition(g, flat, 0, 1));
  CHECK_FALSE(fast_condition(g, flat, 0, 1));
  CHECK(slow_condition(g, vec({6.0, 5.0}), 0, 1));
  CHECK(fast_condition(g, vec({5.0, 7.0}), 0, 1));
  CHECK_FALSE(fast_condition(g, vec({5.0, 6.999}), 0, 1));
}

TEST_CASE("conditions match the clause check on random graphs") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 300; ++i) {
    const auto g = testing::random_weighted(6, 0.4, rng, 0.2, 0.6);
    const auto l = random_clocks(rng, 6, 4.0);
    for (NodeId v = 0; v < 6; ++v) {
      for (std::size_t s = 1; s <= 3; ++s) {
        CHECK(slow_condition(g, l, v, s) == sc_oracle(g, l, v, s));
        CHECK(fast_condition(g, l, v, s) == fc_oracle(g, l, v, s));
      }
    }
  }
}

TEST_CASE("trailing_node examples and brute force") {
  const auto g = testing::weighted(2, {{0, 1, 1.0}});
  const auto d = kappa_distances(g);
  CHECK_FALSE(trailing_node(vec({3.0, 3.0}), d, 0, 3));
  CHECK_FALSE(trailing_node(vec({3.0, 3.0}), d, 1, 3));
  CHECK(trailing_node(vec({10.0, 5.0}), d, 1, 1));
  CHECK(trailing_level(vec({10.0, 5.0}), d, 1, 3) == 1);
  CHECK_FALSE(trailing_node(vec({10.0, 5.0}), d, 0, 3));

  std::mt19937_64 rng(4);
  for (int i = 0; i < 200; ++i) {
    const auto h = testing::random_weighted(6, 0.3, rng);
    // quarter-grid clocks keep the comparisons exact
    std::uniform_int_distribution<int> q(0, 24);
    Eigen::VectorXd l(6);
    for (auto& x : l) x = 0.25 * q(rng);
    const auto dh = kappa_distances(h);
    for (Eigen::Index w = 0; w < 6; ++w) CHECK(trailing_node(l, dh, static_cast<NodeId>(w), 3) == trailing_oracle(l, dh, w, 3));
  }
}

TEST_CASE("leading nodes satisfy the slow condition and trailing nodes the fast one") {
  std::mt19937_64 rng(5);
  std::size_t positive = 0;
  for (int i = 0; i < 300; ++i) {
    const auto g = testing::random_weighted(8, 0.25, rng);
    const auto l = random_clocks(rng, 8, 6.0);
    const auto d = kappa_distances(g);
    for (std::size_t s = 1; s <= 3; ++s) {
      CHECK(leading_lemma_failures(g, l, d, s).empty());
      CHECK(trailing_lemma_failures(g, l, d, s).empty());
      positive += level_potential(l, d, s).value > 0.0;
    }
  }
  CHECK(positive > 100);
}

TEST_CASE("theorem2_bound examples") {
  CHECK(theorem2_bound(1.0, 8.889, 10.0) == 2.0);
  CHECK(theorem2_bound(1.0, 1.0, 10.0) == 2.0);
  CHECK(theorem2_bound(0.31, 10.0, 100.0) == doctest::Approx(0.62).epsilon(1e-14));
  CHECK(theorem2_bound(1.0, 150.0, 10.0) == 6.0);
  CHECK_THROWS_AS(theorem2_bound(1.0, 10.0, 1.0), ParameterError);
}

TEST_CASE("theorem3_bound examples") {
  auto line = make_line(9, 12.0, testing::kappa_one_edge());
  for (std::size_t e = 0; e < line.edge_count(); ++e) line.set_kappa(e, 1.0);
  CHECK(theorem3_bound(line, 10.0) == doctest::Approx(80.0 / 9.0).epsilon(1e-14));
  CHECK(theorem3_bound(line, 1e15) == doctest::Approx(8.0).epsilon(1e-12));
  CHECK_THROWS_AS(theorem3_bound(line, 0.5), ParameterError);

  const auto ring = testing::weighted(6, {{0, 1, 0.3}, {1, 2, 0.9}, {2, 3, 0.4}, {3, 4, 0.2}, {4, 5, 0.7}, {5, 0, 0.5}});
  const double diam = testing::floyd_warshall(ring).maxCoeff();
  CHECK(theorem3_bound(ring, 4.0) == doctest::Approx(diam * 4.0 / 3.0).epsilon(1e-14));
}

namespace {

SkewSample sample_at(double t, const Eigen::VectorXd& l, const Eigen::MatrixXd& d, std::size_t s_max) {
  SkewSample s;
  s.t_real = t;
  s.logical = l;
  s.node_psi.resize(l.size(), static_cast<Eigen::Index>(s_max));
  for (std::size_t k = 1; k <= s_max; ++k) s.node_psi.col(static_cast<Eigen::Index>(k - 1)) = node_potentials(l, d, k);
  return s;
}

}  // namespace

TEST_CASE("corollary1_check: zero drift keeps potentials non-increasing") {
  const auto g = testing::weighted(3, {{0, 1, 1.0}, {1, 2, 1.0}});
  const auto d = kappa_distances(g);
  // every clock advances at the same rate
  std::vector<SkewSample> trace;
  for (int k = 0; k < 10; ++k) trace.push_back(sample_at(k, vec({0.5 + k, 0.0 + k, 1.5 + k}), d, 2));
  CHECK(corollary1_check(trace, 1, 1.0).empty());
  CHECK(corollary1_check(trace, 2, 1.0).empty());
}

TEST_CASE("corollary1_check flags a corrupted trace") {
  const auto g = testing::weighted(3, {{0, 1, 1.0}, {1, 2, 1.0}});
  const auto d = kappa_distances(g);
  std::vector<SkewSample> trace;
  trace.push_back(sample_at(0.0, vec({0.0, 0.0, 0.0}), d, 2));
  trace.push_back(sample_at(1.0, vec({1.0, 1.0, 4.0}), d, 2));  // node 2 jumps by 3 in one second
  const auto v = corollary1_check(trace, 1, 1.001);
  REQUIRE_FALSE(v.empty());
  CHECK(v.front().kind == "corollary1");
  CHECK_THROWS_AS(corollary1_check(trace, 3, 1.001), ParameterError);
}

TEST_CASE("static_bounds on a kappa-uniform line") {
  auto line = make_line(9, 12.0, testing::kappa_one_edge());
  line.assign_kappa(1.001);
  const auto b = static_bounds(line, 0.01, 1.001);
  CHECK(b.sigma == doctest::Approx(10.0).epsilon(1e-11));
  CHECK(b.global_bound == doctest::Approx(80.0 / 9.0).epsilon(1e-11));
  CHECK(b.local_bound == doctest::Approx(2.0).epsilon(1e-11));
  CHECK(b.edge_local_bounds.size() == 8);
}
