#include <doctest.h>

#include <set>

#include "fixtures.hpp"
#include "posethdx/builders.hpp"
#include "posethdx/errors.hpp"

using namespace posethdx;

TEST_CASE("face poset of the complete 2-complex on 5 vertices") {
  const GradedPoset poset = from_facets(fixtures::delta4());
  CHECK(poset.top_rank() == 2);
  CHECK(poset.level_size(-1) == 1);
  CHECK(poset.level_size(0) == 5);
  CHECK(poset.level_size(1) == 10);
  CHECK(poset.level_size(2) == 10);
}

TEST_CASE("single facet gives the powerset chain") {
  const GradedPoset poset = from_facets(fixtures::full_simplex(2));
  CHECK(poset.size() == 4);
  const WeightScheme weights = standard_weight_scheme(poset);
  for (ElementId e : poset.level(0)) CHECK(weights.m[e] == doctest::Approx(0.5));
}

TEST_CASE("missing faces stay missing") {
  FacetList f;
  f.facets = {{1, 2}, {2, 3}};
  const GradedPoset poset = from_facets(f);
  CHECK(poset.size() == 6);
  for (ElementId e = 0; e < poset.size(); ++e) CHECK(poset.label(e) != "{1,3}");
}

TEST_CASE("mixed facet sizes are rejected") {
  FacetList f;
  f.facets = {{1, 2, 3}, {3, 4}};
  CHECK_THROWS_AS(from_facets(f), Error);
}

TEST_CASE("standard weights on the complete 2-complex") {
  const GradedPoset poset = from_facets(fixtures::delta4());
  const WeightScheme weights = standard_weight_scheme(poset);
  for (ElementId e : poset.level(1)) CHECK(weights.m[e] == doctest::Approx(0.1).epsilon(1e-12));
  for (ElementId e : poset.level(0)) CHECK(weights.m[e] == doctest::Approx(0.2).epsilon(1e-12));
  for (int r = -1; r <= 2; ++r) {
    double sum = 0.0;
    for (ElementId e : poset.level(r)) sum += weights.m[e];
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(weights.standard);
}

TEST_CASE("grassmannian level sizes match gaussian binomials") {
  const auto small = grassmannian(2, 3, 1);
  CHECK(small.poset.level_size(-1) == 1);
  CHECK(small.poset.level_size(0) == 7);
  CHECK(small.poset.level_size(1) == 7);

  const auto big = grassmannian(2, 4, 2);
  CHECK(big.poset.level_size(-1) == 1);
  CHECK(big.poset.level_size(0) == 15);
  CHECK(big.poset.level_size(1) == 35);
  CHECK(big.poset.level_size(2) == 15);
  CHECK(validate_poset(big.poset, big.weights).valid());

  for (int q : {2, 3}) {
    for (int n = 2; n <= 4; ++n) {
      const auto g = grassmannian(q, n, n - 1);
      for (int k = 0; k <= n; ++k)
        CHECK(static_cast<long long>(g.poset.level_size(k - 1)) == gaussian_binomial(n, k, q));
    }
  }
}

TEST_CASE("every plane of F_2^3 covers three lines") {
  const auto g = grassmannian(2, 3, 1);
  for (ElementId e : g.poset.level(1)) CHECK(g.poset.children(e).size() == 3);
}

TEST_CASE("resource cap trips") {
  CHECK_THROWS_AS(grassmannian(2, 4, 2, 10), Error);
  CHECK_THROWS_AS(posetify(fixtures::delta4(), 2, 10), Error);
}

TEST_CASE("posetification of the full simplex is the whole grassmannian") {
  const auto vx = posetify(fixtures::full_simplex(3), 2);
  const auto g = grassmannian(2, 3, 2);
  REQUIRE(vx.poset.size() == g.poset.size());
  for (ElementId e = 0; e < g.poset.size(); ++e) {
    CHECK(vx.poset.label(e) == g.poset.label(e));
    CHECK(vx.poset.rank(e) == g.poset.rank(e));
    CHECK(vx.weights.m[e] == doctest::Approx(g.weights.m[e]).epsilon(1e-12));
    CHECK(vx.poset.children(e) == g.poset.children(e));
  }
}

TEST_CASE("posetification of a single edge") {
  const auto vx = posetify(fixtures::full_simplex(2), 2);
  CHECK(vx.poset.level_size(-1) == 1);
  CHECK(vx.poset.level_size(0) == 3);
  CHECK(vx.poset.level_size(1) == 1);
}

TEST_CASE("posetified torus stays sparse and valid") {
  const auto vx = posetify(fixtures::torus7(), 2);
  CHECK(vx.poset.level_size(0) == 42);   // 7 + 21 + 14 supported lines
  CHECK(vx.poset.level_size(1) == 77);   // 14 * 7 planes, shared edge planes merged
  CHECK(vx.poset.level_size(2) == 14);
  CHECK(validate_poset(vx.poset, vx.weights).valid());
  // Bounded degree: up-degrees stay far below the full grassmannian's.
  const auto full_lines = gaussian_binomial(7, 2, 2);
  for (ElementId e : vx.poset.level(0)) {
    CHECK(static_cast<long long>(vx.poset.parents(e).size()) < full_lines);
  }
}

TEST_CASE("thickness counts top cofaces of ridges") {
  CHECK(thickness(fixtures::delta4()) == 2);    // each edge lies in 3 triangles
  CHECK(thickness(fixtures::torus7()) == 1);    // each edge lies in 2 triangles
  CHECK(thickness(fixtures::octahedron()) == 1);
  CHECK(thickness(fixtures::full_simplex(3)) == 0);
}

TEST_CASE("bouquet graph is the glued-clique walk") {
  const auto g = bouquet_graph(2, 2);
  REQUIRE(g.walk.rows() == 5);
  for (int r = 0; r < 5; ++r) {
    double sum = 0.0;
    for (int c = 0; c < 5; ++c) sum += g.walk(r, c);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(g.walk(r, r) == 0.0);
  }
  CHECK(g.walk(4, 0) == doctest::Approx(0.25));
  CHECK(g.walk(0, 4) == doctest::Approx(0.5));
  CHECK(g.walk(0, 1) == doctest::Approx(0.5));
  CHECK(g.walk(0, 2) == 0.0);
  CHECK_THROWS_AS(bouquet_graph(0, 2), Error);
}

TEST_CASE("bipartition and connectivity helpers") {
  CHECK(graph_connected(fixtures::cycle(6)));
  CHECK_NOTHROW(bipartition(fixtures::cycle(6)));
  CHECK_THROWS_AS(bipartition(fixtures::cycle(5)), Error);
  SimpleGraph disconnected{4, {{0, 1}, {2, 3}}};
  CHECK_FALSE(graph_connected(disconnected));
  CHECK_THROWS_AS(link_graph_gprime(disconnected, 2), Error);
}

TEST_CASE("blown-up link graph has the right degrees") {
  const auto g = link_graph_gprime(fixtures::cycle(6), 2);
  REQUIRE(g.walk.rows() == 12);
  for (int r = 0; r < 12; ++r) {
    double sum = 0.0;
    for (int c = 0; c < 12; ++c) sum += g.walk(r, c);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
  // Vertex rows average over 4 neighbours, edge rows over 2.
  for (int v = 0; v < 6; ++v) CHECK(g.measure[v] == doctest::Approx(4.0));
  for (int e = 6; e < 12; ++e) CHECK(g.measure[e] == doctest::Approx(2.0));
}
