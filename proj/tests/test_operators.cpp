#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "posethdx/errors.hpp"
#include "posethdx/operators.hpp"

using namespace posethdx;

namespace {

ElementId by_label(const GradedPoset& poset, const std::string& label) {
  for (ElementId e = 0; e < poset.size(); ++e)
    if (poset.label(e) == label) return e;
  FAIL("no element labelled ", label);
  return -1;
}

// A valid but non-standard scheme: transitions tilted by child index, weights
// recomputed downward from uniform tops.
WeightScheme tilted_weights(const GradedPoset& poset) {
  WeightScheme scheme;
  scheme.m.assign(poset.size(), 0.0);
  scheme.p.assign(poset.size(), {});
  for (ElementId e = 0; e < poset.size(); ++e) {
    const size_t nn = poset.children(e).size();
    scheme.p[e].resize(nn);
    double total = 0.0;
    for (size_t i = 0; i < nn; ++i) total += 1.0 + 0.5 * static_cast<double>(i);
    for (size_t i = 0; i < nn; ++i) scheme.p[e][i] = (1.0 + 0.5 * static_cast<double>(i)) / total;
  }
  const int d = poset.top_rank();
  for (ElementId e : poset.level(d)) scheme.m[e] = 1.0 / poset.level_size(d);
  for (ElementId e = poset.size() - 1; e >= 0; --e) {
    if (poset.rank(e) == d) continue;
    double acc = 0.0;
    for (ElementId y : poset.parents(e)) {
      const auto& ch = poset.children(y);
      const auto it = std::lower_bound(ch.begin(), ch.end(), e);
      acc += scheme.p[y][it - ch.begin()] * scheme.m[y];
    }
    scheme.m[e] = acc;
  }
  scheme.standard = is_standard_scheme(poset, scheme);
  return scheme;
}

void check_constants_fixed(const GradedPoset& poset, const WeightScheme& weights) {
  const int d = poset.top_rank();
  for (int k = -1; k <= d - 1; ++k) {
    const Cochain out = up_operator(poset, weights, k).apply(ones_cochain(poset, k));
    for (double v : out.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
  }
  for (int k = 0; k <= d; ++k) {
    const Cochain out = down_operator(poset, weights, k).apply(ones_cochain(poset, k));
    for (double v : out.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
  }
}

void check_duality(const GradedPoset& poset, const WeightScheme& weights, uint64_t seed) {
  const int d = poset.top_rank();
  TrialRng rng(seed);
  for (int k = -1; k <= d - 1; ++k) {
    const LinearOp up = up_operator(poset, weights, k);
    const LinearOp down = down_operator(poset, weights, k + 1);
    const InnerProductContext upper = level_context(poset, weights, k + 1);
    const InnerProductContext lower = level_context(poset, weights, k);
    for (int t = 0; t < 100; ++t) {
      const Cochain f = random_cochain(poset, k + 1, rng);
      const Cochain g = random_cochain(poset, k, rng);
      const double lhs = weighted_inner_product(f, up.apply(g), upper);
      const double rhs = weighted_inner_product(down.apply(f), g, lower);
      CHECK(std::abs(lhs - rhs) < 1e-12);
    }
  }
}

}  // namespace

TEST_CASE("up and down operators fix constants") {
  const GradedPoset delta = from_facets(fixtures::delta4());
  check_constants_fixed(delta, standard_weight_scheme(delta));
  check_constants_fixed(delta, fixtures::jittered_weights(delta, 5.0));
  check_constants_fixed(delta, tilted_weights(delta));
  const auto g = grassmannian(2, 3, 2);
  check_constants_fixed(g.poset, g.weights);
}

TEST_CASE("down at the bottom is the mean") {
  const GradedPoset poset = from_facets(fixtures::delta4());
  const WeightScheme weights = standard_weight_scheme(poset);
  TrialRng rng(3);
  const Cochain f = random_cochain(poset, 0, rng);
  const Cochain bottom = down_operator(poset, weights, 0).apply(f);
  const double mean = weighted_inner_product(f, ones_cochain(poset, 0),
                                             level_context(poset, weights, 0));
  REQUIRE(bottom.values.size() == 1);
  CHECK(bottom.values[0] == doctest::Approx(mean).epsilon(1e-12));
}

TEST_CASE("edge averaging on the complete complex") {
  const GradedPoset poset = from_facets(fixtures::delta4());
  const WeightScheme weights = standard_weight_scheme(poset);
  TrialRng rng(5);
  const Cochain f = random_cochain(poset, 0, rng);
  const Cochain uf = up_operator(poset, weights, 0).apply(f);
  const ElementId edge = by_label(poset, "{1,2}");
  const double expected = 0.5 * (f.values[poset.position_in_level(by_label(poset, "{1}"))] +
                                 f.values[poset.position_in_level(by_label(poset, "{2}"))]);
  CHECK(uf.values[poset.position_in_level(edge)] == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("up is dual to down for standard, jittered and tilted schemes") {
  const GradedPoset delta = from_facets(fixtures::delta4());
  check_duality(delta, standard_weight_scheme(delta), 11);
  check_duality(delta, fixtures::jittered_weights(delta, 5.0), 12);
  check_duality(delta, tilted_weights(delta), 13);
  const auto g = grassmannian(2, 4, 2);
  check_duality(g.poset, g.weights, 14);
}

TEST_CASE("walk operators match their entry formulas for all schemes") {
  // The constructors cross-assert the product against the entry formulas;
  // a non-standard scheme exercises the general branches.
  const GradedPoset delta = from_facets(fixtures::delta4());
  const WeightScheme tilted = tilted_weights(delta);
  for (int k = -1; k <= 1; ++k) CHECK_NOTHROW(up_down_walk(delta, tilted, k));
  for (int k = 0; k <= 2; ++k) CHECK_NOTHROW(down_up_walk(delta, tilted, k));
  CHECK_THROWS_AS(up_down_walk(delta, tilted, 2), Error);
  CHECK_THROWS_AS(down_up_walk(delta, tilted, -1), Error);
}

TEST_CASE("level-0 projection identity") {
  const GradedPoset poset = from_facets(fixtures::delta4());
  for (const WeightScheme& weights :
       {standard_weight_scheme(poset), fixtures::jittered_weights(poset, 5.0), tilted_weights(poset)}) {
    const LinearOp plus = up_down_walk(poset, weights, 0);
    const LinearOp minus = down_up_walk(poset, weights, 0);
    CHECK((plus.mat * minus.mat).max_abs_diff(minus.mat) < 1e-12);
  }
}

TEST_CASE("adjacency of the complete complex is the normalized complete graph") {
  const GradedPoset poset = from_facets(fixtures::delta4());
  const WeightScheme weights = standard_weight_scheme(poset);
  const LinearOp adj = adjacency_operator(poset, weights, 0);
  for (int r = 0; r < 5; ++r) {
    CHECK(adj.mat(r, r) == 0.0);
    for (int c = 0; c < 5; ++c)
      if (r != c) CHECK(adj.mat(r, c) == doctest::Approx(0.25).epsilon(1e-12));
  }
}

TEST_CASE("adjacency needs at least two children per cover") {
  GradedPoset poset = make_graded_poset({-1, 0, 1}, {"o", "a", "E"}, {{0, 1}, {1, 2}});
  WeightScheme weights;
  weights.m = {1.0, 1.0, 1.0};
  weights.p = {{}, {1.0}, {1.0}};
  CHECK_THROWS_AS(adjacency_operator(poset, weights, 0), Error);
}

TEST_CASE("hat localization properties") {
  const GradedPoset poset = from_facets(fixtures::delta4());
  const WeightScheme weights = standard_weight_scheme(poset);
  const LinearOp adj = adjacency_operator(poset, weights, 0);
  TrialRng rng(17);
  for (ElementId x : poset.level(0)) {
    const Link link = build_link(poset, weights, x);
    const InnerProductContext ctx = level_context(link.poset, link.weights, 0);

    // Constants map to constants.
    const Cochain hat_ones = hat_localize(poset, weights, ones_cochain(poset, 0), x, link);
    for (double v : hat_ones.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));

    // The indicator of the base vanishes.
    Cochain indicator{0, std::vector<double>(poset.level_size(0), 0.0)};
    indicator.values[poset.position_in_level(x)] = 1.0;
    const Cochain hat_ind = hat_localize(poset, weights, indicator, x, link);
    for (double v : hat_ind.values) CHECK(v == 0.0);

    // Link means recover the adjacency action.
    const Cochain f = random_cochain(poset, 0, rng);
    const Cochain hf = hat_localize(poset, weights, f, x, link);
    const double mean = weighted_inner_product(hf, ones_cochain(link.poset, 0), ctx);
    CHECK(mean ==
          doctest::Approx(adj.apply(f).values[poset.position_in_level(x)]).epsilon(1e-12));
  }
}

TEST_CASE("inner product context basics") {
  const GradedPoset poset = from_facets(fixtures::delta4());
  const WeightScheme weights = standard_weight_scheme(poset);
  TrialRng rng(23);
  for (int level = -1; level <= 2; ++level) {
    const InnerProductContext ctx = level_context(poset, weights, level);
    const Cochain one = ones_cochain(poset, level);
    CHECK(weighted_inner_product(one, one, ctx) == doctest::Approx(1.0).epsilon(1e-12));
    const Cochain f = random_cochain(poset, level, rng);
    const Cochain g = random_cochain(poset, level, rng);
    CHECK(std::abs(weighted_inner_product(f, g, ctx)) <=
          weighted_norm(f, ctx) * weighted_norm(g, ctx) + 1e-12);
  }
  const InnerProductContext ctx0 = level_context(poset, weights, 0);
  const Cochain wrong{1, std::vector<double>(10, 0.0)};
  CHECK_THROWS_AS(weighted_inner_product(wrong, wrong, ctx0), Error);
}
