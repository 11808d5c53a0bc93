#pragma once

#include <string>
#include <vector>

#include "posethdx/gf.hpp"
#include "posethdx/linalg.hpp"
#include "posethdx/poset.hpp"

namespace posethdx {

inline constexpr long long kDefaultElementCap = 200000;

// Pure simplicial complex given by its maximal faces.
struct FacetList {
  std::vector<std::vector<int>> facets;  // vertex labels, arbitrary integers

  std::vector<int> vertices() const;  // sorted distinct labels
  int dimension() const;              // facet size - 1
};

FacetList read_facet_file(const std::string& path);

// Poset of all faces (including the empty face at rank -1), rank |A|-1.
GradedPoset from_facets(const FacetList& facets);

// Uniform transitions p = 1/NN(y), weights propagated down from the top
// level. top_weights are indexed by position within the top level; empty
// means uniform; anything else is normalized to sum 1.
WeightScheme standard_weight_scheme(const GradedPoset& poset,
                                    std::vector<double> top_weights = {});

struct GrassmannianPoset {
  GradedPoset poset;
  WeightScheme weights;                // standard, uniform tops
  std::vector<SubspaceCode> codes;     // per element id
  int q = 0;
  int ambient_dim = 0;
};

// All subspaces of F_q^n of dimension <= d+1, rank = dim - 1.
GrassmannianPoset grassmannian(int q, int n, int d, long long max_elements = kDefaultElementCap);

struct PosetifiedComplex {
  GradedPoset poset;
  WeightScheme weights;
  std::vector<SubspaceCode> codes;
  FacetList complex;
  std::vector<int> vertex_order;  // coordinate c holds vertex vertex_order[c]
  int q = 0;
  int ambient_dim = 0;
};

// Subposet of the Grassmannian of F_q^n spanned by the coordinate spaces of
// the faces of X: every subspace contained in some V_I, I a facet.
// Enumeration runs facet by facet with global dedup.
PosetifiedComplex posetify(const FacetList& complex, int q,
                           long long max_elements = kDefaultElementCap);

// Max over codimension-1 cells of (#top cofaces - 1).
int thickness(const FacetList& complex);

struct SimpleGraph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;
};

bool graph_connected(const SimpleGraph& g);
// Two-coloring; throws NotBipartite when impossible.
std::vector<int> bipartition(const SimpleGraph& g);

// A reversible random walk: row-stochastic matrix together with a measure
// satisfying detailed balance, which is what the spectral code symmetrizes by.
struct NormalizedGraph {
  std::vector<std::string> labels;
  Matrix walk;
  std::vector<double> measure;
};

// p cliques K_{q+1} sharing one hub vertex (the hub is the last index).
// Hub row entries are 1/(pq), spoke rows 1/q.
NormalizedGraph bouquet_graph(int p, int q);

// The graph on V plus q-1 extra vertices per edge, each edge blown up into a
// clique on its endpoints and its extra vertices; rows normalized by degree.
NormalizedGraph link_graph_gprime(const SimpleGraph& g, int q);

}  // namespace posethdx
