#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "fixtures.hpp"
#include "posethdx/builders.hpp"
#include "posethdx/errors.hpp"
#include "posethdx/poset.hpp"

using namespace posethdx;

namespace {

ElementId by_label(const GradedPoset& poset, const std::string& label) {
  for (ElementId e = 0; e < poset.size(); ++e)
    if (poset.label(e) == label) return e;
  FAIL("no element labelled ", label);
  return -1;
}

}  // namespace

TEST_CASE("complete simplex on 3 vertices validates cleanly") {
  const GradedPoset poset = from_facets(fixtures::full_simplex(3));
  const WeightScheme weights = standard_weight_scheme(poset);
  CHECK(validate_poset(poset, weights).valid());
}

TEST_CASE("broken minimum weight is reported") {
  const GradedPoset poset = from_facets(fixtures::full_simplex(3));
  WeightScheme weights = standard_weight_scheme(poset);
  weights.m[poset.minimum()] = 2.0;
  const auto report = validate_poset(poset, weights);
  CHECK_FALSE(report.valid());
  bool found = false;
  for (const auto& v : report.violations) found = found || v.code == "m-minimum";
  CHECK(found);
}

TEST_CASE("rank-jumping cover is reported") {
  // minimum, one vertex, one rank-2 element covering the vertex directly.
  GradedPoset poset = make_graded_poset({-1, 0, 2}, {"o", "a", "F"}, {{0, 1}, {1, 2}});
  WeightScheme weights;
  weights.m = {1.0, 1.0, 1.0};
  weights.p = {{}, {1.0}, {1.0}};
  const auto report = validate_poset(poset, weights);
  bool found = false;
  for (const auto& v : report.violations) found = found || v.code == "cover-rank";
  CHECK(found);
}

TEST_CASE("maximal chains of a 2-set") {
  const GradedPoset poset = from_facets(fixtures::full_simplex(2));
  const WeightScheme weights = standard_weight_scheme(poset);
  const ElementId top = by_label(poset, "{1,2}");
  const ElementId bottom = poset.minimum();
  const auto chains = maximal_chains(poset, weights, top, bottom);
  REQUIRE(chains.size() == 2);
  for (const auto& c : chains) {
    CHECK(c.elements.size() == 3);
    CHECK(c.elements.front() == bottom);
    CHECK(c.elements.back() == top);
    CHECK(c.probability == doctest::Approx(0.5));
  }
  // Degenerate chain.
  const auto self_chain = maximal_chains(poset, weights, top, top);
  REQUIRE(self_chain.size() == 1);
  CHECK(self_chain[0].elements.size() == 1);
  CHECK(self_chain[0].probability == doctest::Approx(1.0));
  // Incomparable pair.
  CHECK_THROWS_AS(maximal_chains(poset, weights, by_label(poset, "{1}"), by_label(poset, "{2}")),
                  Error);
}

TEST_CASE("chains from a plane of the grassmannian down to the origin") {
  const auto g = grassmannian(2, 3, 1);
  const ElementId plane = g.poset.level(1).front();
  const auto chains = maximal_chains(g.poset, g.weights, plane, g.poset.minimum());
  CHECK(chains.size() == 3);  // one chain per line of the plane
  double total = 0.0;
  for (const auto& c : chains) total += c.probability;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("descent weights sum to one level by level") {
  const GradedPoset poset = from_facets(fixtures::delta4());
  const WeightScheme weights = standard_weight_scheme(poset);
  const auto w = descent_weights(poset, weights, poset.minimum());
  for (ElementId e = 0; e < poset.size(); ++e) CHECK(w[e] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("link of the minimum is the poset itself") {
  const GradedPoset poset = from_facets(fixtures::delta4());
  const WeightScheme weights = standard_weight_scheme(poset);
  const Link link = build_link(poset, weights, poset.minimum());
  REQUIRE(link.poset.size() == poset.size());
  for (ElementId e = 0; e < poset.size(); ++e) {
    CHECK(link.origin[e] == e);
    CHECK(link.weights.m[e] == doctest::Approx(weights.m[e]).epsilon(1e-12));
    CHECK(link.poset.rank(e) == poset.rank(e));
  }
}

TEST_CASE("vertex link of the full 4-simplex is the full 3-simplex") {
  const GradedPoset poset = from_facets(fixtures::full_simplex(5));
  const WeightScheme weights = standard_weight_scheme(poset);
  const Link link = build_link(poset, weights, by_label(poset, "{5}"));

  const GradedPoset expected = from_facets(fixtures::full_simplex(4));
  const WeightScheme expected_weights = standard_weight_scheme(expected);
  REQUIRE(link.poset.size() == expected.size());

  // Match link elements to faces of the small simplex by stripping vertex 5.
  std::map<std::string, ElementId> expected_by_label;
  for (ElementId e = 0; e < expected.size(); ++e) expected_by_label[expected.label(e)] = e;
  for (ElementId e = 0; e < link.poset.size(); ++e) {
    std::string stripped = link.poset.label(e);
    for (const std::string needle : {",5}", "{5}"}) {
      const auto pos = stripped.find(needle);
      if (pos != std::string::npos) stripped.replace(pos, needle.size(), "}");
    }
    if (stripped == "}") stripped = "{}";
    REQUIRE(expected_by_label.count(stripped));
    const ElementId other = expected_by_label[stripped];
    CHECK(link.poset.rank(e) == expected.rank(other));
    CHECK(link.weights.m[e] == doctest::Approx(expected_weights.m[other]).epsilon(1e-12));
  }
  CHECK(validate_poset(link.poset, link.weights).valid());
}

TEST_CASE("induced link weights always validate") {
  const auto g = grassmannian(2, 4, 2);
  for (const ElementId x : g.poset.level(0)) {
    const Link link = build_link(g.poset, g.weights, x);
    CHECK(validate_poset(link.poset, link.weights).valid());
  }
  const GradedPoset delta = from_facets(fixtures::delta4());
  const WeightScheme jit = fixtures::jittered_weights(delta, 5.0);
  for (const ElementId x : delta.level(0)) {
    const Link link = build_link(delta, jit, x);
    CHECK(validate_poset(link.poset, link.weights).valid());
  }
}

TEST_CASE("link of a link equals the link of the upper element") {
  const GradedPoset poset = from_facets(fixtures::delta4());
  const WeightScheme weights = standard_weight_scheme(poset);
  const ElementId x = by_label(poset, "{1}");
  const ElementId y = by_label(poset, "{1,2}");

  const Link inner = build_link(poset, weights, x);
  ElementId y_in_link = -1;
  for (ElementId e = 0; e < inner.poset.size(); ++e)
    if (inner.origin[e] == y) y_in_link = e;
  REQUIRE(y_in_link >= 0);
  const Link twice = build_link(inner.poset, inner.weights, y_in_link);
  const Link direct = build_link(poset, weights, y);

  REQUIRE(twice.poset.size() == direct.poset.size());
  for (ElementId e = 0; e < twice.poset.size(); ++e) {
    // Sorted construction makes the label order agree on both sides.
    CHECK(twice.poset.label(e) == direct.poset.label(e));
    CHECK(twice.weights.m[e] == doctest::Approx(direct.weights.m[e]).epsilon(1e-12));
    for (size_t i = 0; i < twice.weights.p[e].size(); ++i)
      CHECK(twice.weights.p[e][i] == doctest::Approx(direct.weights.p[e][i]).epsilon(1e-12));
  }
}

TEST_CASE("maximal element has no link") {
  const GradedPoset poset = from_facets(fixtures::full_simplex(3));
  const WeightScheme weights = standard_weight_scheme(poset);
  CHECK_THROWS_AS(build_link(poset, weights, by_label(poset, "{1,2,3}")), Error);
}

TEST_CASE("cochain localization restricts values") {
  const GradedPoset poset = from_facets(fixtures::delta4());
  const WeightScheme weights = standard_weight_scheme(poset);
  const ElementId x = by_label(poset, "{3}");
  const Link link = build_link(poset, weights, x);

  // Constants restrict to constants.
  const Cochain ones = ones_cochain(poset, 1);
  const Cochain ones_x = localize_cochain(poset, ones, link);
  CHECK(ones_x.level == 0);
  for (double v : ones_x.values) CHECK(v == doctest::Approx(1.0));

  // An indicator of a top cell not above x localizes to zero.
  Cochain indicator{2, std::vector<double>(poset.level_size(2), 0.0)};
  indicator.values[poset.position_in_level(by_label(poset, "{1,2,4}"))] = 1.0;
  const Cochain ind_x = localize_cochain(poset, indicator, link);
  for (double v : ind_x.values) CHECK(v == 0.0);

  // Random edge values are copied onto the incident link vertices.
  TrialRng rng(7);
  Cochain f{1, rng.vector(poset.level_size(1))};
  const Cochain fx = localize_cochain(poset, f, link);
  CHECK(fx.values.size() == 4);
  for (ElementId e : link.poset.level(0)) {
    const ElementId orig = link.origin[e];
    CHECK(fx.values[link.poset.position_in_level(e)] ==
          f.values[poset.position_in_level(orig)]);
  }
  CHECK_THROWS_AS(localize_cochain(poset, Cochain{0, std::vector<double>(5, 1.0)}, link), Error);
}
