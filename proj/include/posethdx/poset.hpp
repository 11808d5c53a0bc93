#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace posethdx {

using ElementId = int;

// Finite pure graded poset with a unique rank -1 minimum. Elements are
// reindexed densely at construction, sorted by (rank, label); every matrix
// indexing in the project derives from that order. Immutable after
// construction and safe to share across threads.
class GradedPoset {
 public:
  GradedPoset() = default;

  int size() const { return static_cast<int>(rank_.size()); }
  int top_rank() const { return d_; }
  int rank(ElementId e) const { return rank_[e]; }
  const std::string& label(ElementId e) const { return label_[e]; }
  ElementId minimum() const { return minimum_; }

  const std::vector<ElementId>& children(ElementId e) const { return children_[e]; }
  const std::vector<ElementId>& parents(ElementId e) const { return parents_[e]; }

  // Elements of the given rank, in index order. Valid ranks are -1..top_rank().
  const std::vector<ElementId>& level(int r) const;
  int level_size(int r) const;
  int position_in_level(ElementId e) const { return pos_in_level_[e]; }

  bool leq(ElementId x, ElementId y) const;

  // All y >= x, in index order.
  std::vector<ElementId> up_set(ElementId x) const;

  friend GradedPoset make_graded_poset(std::vector<int> ranks, std::vector<std::string> labels,
                                       const std::vector<std::pair<int, int>>& covers,
                                       std::vector<int>* order_out);

 private:
  int d_ = -1;
  ElementId minimum_ = -1;
  std::vector<int> rank_;
  std::vector<std::string> label_;
  std::vector<std::vector<ElementId>> children_;
  std::vector<std::vector<ElementId>> parents_;
  std::vector<std::vector<ElementId>> levels_;  // levels_[r + 1]
  std::vector<int> pos_in_level_;
  // Reachability bitsets (row x holds the up-set of x), built at construction
  // for small posets; larger ones fall back to a BFS per query.
  std::vector<std::vector<uint64_t>> up_bits_;
};

// Construct from per-element ranks/labels and cover pairs (child, parent)
// given as indices into the input arrays. If order_out is non-null it
// receives the map input index -> element id in the constructed poset.
GradedPoset make_graded_poset(std::vector<int> ranks, std::vector<std::string> labels,
                              const std::vector<std::pair<int, int>>& covers,
                              std::vector<int>* order_out = nullptr);

// Weights m per element plus transition probabilities along covers;
// p[y][i] belongs to the cover (children(y)[i], y).
struct WeightScheme {
  std::vector<double> m;
  std::vector<std::vector<double>> p;
  bool standard = false;
};

bool is_standard_scheme(const GradedPoset& poset, const WeightScheme& weights, double tol = 1e-12);

struct Chain {
  std::vector<ElementId> elements;  // bottom to top, consecutive pairs are covers
  double probability = 1.0;
};

struct Violation {
  std::string code;
  std::string message;
  std::vector<ElementId> elements;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool valid() const { return violations.empty(); }
};

struct Cochain {
  int level = 0;
  std::vector<double> values;  // indexed by position within the level
};

struct Link {
  ElementId base = -1;
  GradedPoset poset;
  WeightScheme weights;
  std::vector<ElementId> origin;  // link element id -> id in the parent poset
};

ValidationReport validate_poset(const GradedPoset& poset, const WeightScheme& weights);

// All maximal chains from y down to x, in a deterministic order.
std::vector<Chain> maximal_chains(const GradedPoset& poset, const WeightScheme& weights,
                                  ElementId y, ElementId x);

// w[z] = sum of p(c) over maximal chains from z down to x, for every z >= x
// (zero elsewhere). This is the chain-weight kernel behind induced link
// weights and the conservation identity.
std::vector<double> descent_weights(const GradedPoset& poset, const WeightScheme& weights,
                                    ElementId x);

Link build_link(const GradedPoset& poset, const WeightScheme& weights, ElementId x);

// Structural part of the link: the reranked sub-poset of elements >= x,
// without weights. origin (if given) maps link ids back to parent ids.
GradedPoset link_poset(const GradedPoset& poset, ElementId x,
                       std::vector<ElementId>* origin = nullptr);

// Restriction f_x of a level-l cochain to the link of x, at link level
// l - rank(x) - 1.
Cochain localize_cochain(const GradedPoset& poset, const Cochain& f, const Link& link);

// The constant-one cochain at a level.
Cochain ones_cochain(const GradedPoset& poset, int level);

}  // namespace posethdx
