#pragma once

#include <vector>

#include "posethdx/builders.hpp"
#include "posethdx/rng.hpp"

namespace posethdx::fixtures {

// Complete 2-dimensional complex on 5 vertices.
inline FacetList delta4() {
  FacetList f;
  for (int a = 1; a <= 5; ++a)
    for (int b = a + 1; b <= 5; ++b)
      for (int c = b + 1; c <= 5; ++c) f.facets.push_back({a, b, c});
  return f;
}

// Full simplex on n vertices (a single facet).
inline FacetList full_simplex(int n) {
  FacetList f;
  std::vector<int> facet;
  for (int v = 1; v <= n; ++v) facet.push_back(v);
  f.facets.push_back(facet);
  return f;
}

// Boundary of the octahedron: all vertex links are 4-cycles.
inline FacetList octahedron() {
  FacetList f;
  const int opposite[7] = {0, 6, 5, 4, 3, 2, 1};
  for (int a : {1, 6})
    for (int b : {2, 5})
      for (int c : {3, 4}) {
        (void)opposite;
        f.facets.push_back({a, b, c});
      }
  for (auto& facet : f.facets) std::sort(facet.begin(), facet.end());
  return f;
}

// The 7-vertex torus triangulation on Z_7: all vertex links are 6-cycles
// and every edge lies in exactly two triangles.
inline FacetList torus7() {
  FacetList f;
  for (int i = 0; i < 7; ++i) {
    auto tri_a = std::vector<int>{i + 1, (i + 1) % 7 + 1, (i + 3) % 7 + 1};
    auto tri_b = std::vector<int>{i + 1, (i + 2) % 7 + 1, (i + 3) % 7 + 1};
    std::sort(tri_a.begin(), tri_a.end());
    std::sort(tri_b.begin(), tri_b.end());
    f.facets.push_back(tri_a);
    f.facets.push_back(tri_b);
  }
  return f;
}

// Standard scheme whose top weights are jittered by +/- percent.
inline WeightScheme jittered_weights(const GradedPoset& poset, double percent,
                                     uint64_t seed = kDefaultSeed) {
  TrialRng rng(seed);
  std::vector<double> tops(poset.level_size(poset.top_rank()));
  for (double& w : tops) w = 1.0 + percent / 100.0 * rng.next();
  return standard_weight_scheme(poset, std::move(tops));
}

inline SimpleGraph single_edge() { return SimpleGraph{2, {{0, 1}}}; }

inline SimpleGraph path(int n) {
  SimpleGraph g;
  g.n = n;
  for (int i = 0; i + 1 < n; ++i) g.edges.emplace_back(i, i + 1);
  return g;
}

inline SimpleGraph cycle(int n) {
  SimpleGraph g = path(n);
  g.edges.emplace_back(n - 1, 0);
  return g;
}

}  // namespace posethdx::fixtures
