#include "posethdx/poset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

#include "posethdx/errors.hpp"

namespace posethdx {

namespace {
constexpr int kReachabilityCacheLimit = 4096;
constexpr double kWeightTol = 1e-12;
}  // namespace

const std::vector<ElementId>& GradedPoset::level(int r) const {
  static const std::vector<ElementId> empty;
  const int idx = r + 1;
  if (idx < 0 || idx >= static_cast<int>(levels_.size())) return empty;
  return levels_[idx];
}

int GradedPoset::level_size(int r) const { return static_cast<int>(level(r).size()); }

bool GradedPoset::leq(ElementId x, ElementId y) const {
  if (x == y) return true;
  if (rank_[x] >= rank_[y]) return false;
  if (!up_bits_.empty()) {
    return (up_bits_[x][y >> 6] >> (y & 63)) & 1u;
  }
  for (ElementId e : up_set(x))
    if (e == y) return true;
  return false;
}

std::vector<ElementId> GradedPoset::up_set(ElementId x) const {
  std::vector<bool> seen(size(), false);
  std::vector<ElementId> stack{x};
  seen[x] = true;
  while (!stack.empty()) {
    const ElementId e = stack.back();
    stack.pop_back();
    for (ElementId p : parents_[e]) {
      if (!seen[p]) {
        seen[p] = true;
        stack.push_back(p);
      }
    }
  }
  std::vector<ElementId> out;
  for (ElementId e = 0; e < size(); ++e)
    if (seen[e]) out.push_back(e);
  return out;
}

GradedPoset make_graded_poset(std::vector<int> ranks, std::vector<std::string> labels,
                              const std::vector<std::pair<int, int>>& covers,
                              std::vector<int>* order_out) {
  const int n = static_cast<int>(ranks.size());
  if (labels.size() != ranks.size()) fail(ErrorCode::BadArgs, "ranks/labels size mismatch");

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (ranks[a] != ranks[b]) return ranks[a] < ranks[b];
    if (labels[a] != labels[b]) return labels[a] < labels[b];
    return a < b;
  });
  std::vector<int> new_id(n);
  for (int i = 0; i < n; ++i) new_id[order[i]] = i;
  if (order_out) *order_out = new_id;

  GradedPoset poset;
  poset.rank_.resize(n);
  poset.label_.resize(n);
  for (int i = 0; i < n; ++i) {
    poset.rank_[i] = ranks[order[i]];
    poset.label_[i] = std::move(labels[order[i]]);
  }
  poset.d_ = n ? *std::max_element(poset.rank_.begin(), poset.rank_.end()) : -1;

  poset.children_.assign(n, {});
  poset.parents_.assign(n, {});
  for (const auto& [child, parent] : covers) {
    if (child < 0 || child >= n || parent < 0 || parent >= n)
      fail(ErrorCode::BadArgs, "cover endpoint out of range");
    poset.children_[new_id[parent]].push_back(new_id[child]);
    poset.parents_[new_id[child]].push_back(new_id[parent]);
  }
  for (auto& v : poset.children_) std::sort(v.begin(), v.end());
  for (auto& v : poset.parents_) std::sort(v.begin(), v.end());

  const int min_rank = n ? *std::min_element(poset.rank_.begin(), poset.rank_.end()) : -1;
  if (min_rank < -1) fail(ErrorCode::BadArgs, "ranks below -1 are not representable");
  poset.levels_.assign(poset.d_ + 2, {});
  poset.pos_in_level_.resize(n);
  for (int e = 0; e < n; ++e) {
    auto& lvl = poset.levels_[poset.rank_[e] + 1];
    poset.pos_in_level_[e] = static_cast<int>(lvl.size());
    lvl.push_back(e);
  }
  if (poset.level_size(-1) == 1) poset.minimum_ = poset.level(-1).front();

  if (n <= kReachabilityCacheLimit) {
    const int words = (n + 63) / 64;
    poset.up_bits_.assign(n, std::vector<uint64_t>(words, 0));
    // Elements are sorted by rank, so a downward sweep sees parents first.
    for (int e = n - 1; e >= 0; --e) {
      auto& row = poset.up_bits_[e];
      row[e >> 6] |= uint64_t(1) << (e & 63);
      for (ElementId p : poset.parents_[e]) {
        const auto& prow = poset.up_bits_[p];
        for (int w = 0; w < words; ++w) row[w] |= prow[w];
      }
    }
  }
  return poset;
}

bool is_standard_scheme(const GradedPoset& poset, const WeightScheme& weights, double tol) {
  for (ElementId e = 0; e < poset.size(); ++e) {
    const auto& ch = poset.children(e);
    if (ch.empty()) continue;
    const double uniform = 1.0 / static_cast<double>(ch.size());
    for (double v : weights.p[e])
      if (std::abs(v - uniform) > tol) return false;
  }
  return true;
}

ValidationReport validate_poset(const GradedPoset& poset, const WeightScheme& weights) {
  ValidationReport report;
  auto add = [&](const std::string& code, const std::string& message, std::vector<ElementId> els = {}) {
    report.violations.push_back({code, message, std::move(els)});
  };

  const int n = poset.size();
  const int d = poset.top_rank();

  if (poset.level_size(-1) != 1) {
    add("unique-minimum", "expected exactly one element of rank -1, found " +
                              std::to_string(poset.level_size(-1)),
        poset.level(-1));
  }

  for (ElementId y = 0; y < n; ++y) {
    for (ElementId x : poset.children(y)) {
      const int step = poset.rank(y) - poset.rank(x);
      if (step != 1)
        add("cover-rank", "cover " + poset.label(x) + " < " + poset.label(y) + " raises rank by " +
                              std::to_string(step),
            {x, y});
    }
  }

  {
    // Purity: everything must lie below a top-rank element.
    std::vector<bool> below_top(n, false);
    std::vector<ElementId> stack;
    for (ElementId t : poset.level(d)) {
      below_top[t] = true;
      stack.push_back(t);
    }
    while (!stack.empty()) {
      const ElementId e = stack.back();
      stack.pop_back();
      for (ElementId c : poset.children(e)) {
        if (!below_top[c]) {
          below_top[c] = true;
          stack.push_back(c);
        }
      }
    }
    std::vector<ElementId> offenders;
    for (ElementId e = 0; e < n; ++e)
      if (!below_top[e]) offenders.push_back(e);
    if (!offenders.empty())
      add("pure", std::to_string(offenders.size()) + " element(s) lie below no maximal element", offenders);
  }

  for (ElementId e = 0; e < n; ++e) {
    if (weights.m[e] <= 0.0) add("m-positive", "m(" + poset.label(e) + ") <= 0", {e});
  }

  for (ElementId y = 0; y < n; ++y) {
    const auto& ch = poset.children(y);
    if (weights.p[y].size() != ch.size()) {
      add("p-shape", "transition row of " + poset.label(y) + " has wrong arity", {y});
      continue;
    }
    for (size_t i = 0; i < ch.size(); ++i) {
      const double v = weights.p[y][i];
      if (!(v > 0.0) || v > 1.0 + kWeightTol)
        add("p-range", "p(" + poset.label(y) + " -> " + poset.label(ch[i]) + ") outside (0,1]", {ch[i], y});
    }
    if (poset.rank(y) > -1) {
      double sum = 0.0;
      for (double v : weights.p[y]) sum += v;
      if (std::abs(sum - 1.0) > kWeightTol)
        add("p-normalized", "transition probabilities from " + poset.label(y) + " sum to " +
                                std::to_string(sum),
            {y});
    }
  }

  for (ElementId x = 0; x < n; ++x) {
    if (poset.rank(x) >= d) continue;
    double sum = 0.0;
    for (ElementId y : poset.parents(x)) {
      const auto& ch = poset.children(y);
      const auto it = std::lower_bound(ch.begin(), ch.end(), x);
      sum += weights.p[y][it - ch.begin()] * weights.m[y];
    }
    if (std::abs(sum - weights.m[x]) > kWeightTol)
      add("weight-recursion", "m(" + poset.label(x) + ") = " + std::to_string(weights.m[x]) +
                                  " but downward flow gives " + std::to_string(sum),
          {x});
  }

  if (poset.level_size(-1) == 1) {
    const ElementId s = poset.level(-1).front();
    if (std::abs(weights.m[s] - 1.0) > kWeightTol)
      add("m-minimum", "m(smallest) = " + std::to_string(weights.m[s]) + ", expected 1", {s});
  }

  for (int r = -1; r <= d; ++r) {
    if (poset.level_size(r) == 0) continue;
    double sum = 0.0;
    for (ElementId e : poset.level(r)) sum += weights.m[e];
    if (std::abs(sum - 1.0) > kWeightTol)
      add("level-sum", "level " + std::to_string(r) + " weights sum to " + std::to_string(sum));
  }

  // Conservation: chain weights from any element to a full lower level sum to 1.
  for (int k = -1; k <= d; ++k) {
    std::vector<double> down(n, 0.0);
    for (ElementId e = 0; e < n; ++e) {
      if (poset.rank(e) == k) {
        down[e] = 1.0;
      } else if (poset.rank(e) > k) {
        double acc = 0.0;
        const auto& ch = poset.children(e);
        for (size_t i = 0; i < ch.size(); ++i) acc += weights.p[e][i] * down[ch[i]];
        down[e] = acc;
      }
    }
    for (ElementId e = 0; e < n; ++e) {
      if (poset.rank(e) > k && std::abs(down[e] - 1.0) > 1e-10)
        add("chain-conservation", "chain weights from " + poset.label(e) + " to level " +
                                      std::to_string(k) + " sum to " + std::to_string(down[e]),
            {e});
    }
  }

  return report;
}

std::vector<Chain> maximal_chains(const GradedPoset& poset, const WeightScheme& weights,
                                  ElementId y, ElementId x) {
  if (!poset.leq(x, y)) fail(ErrorCode::NotComparable, poset.label(x) + " is not below " + poset.label(y));
  std::vector<Chain> out;
  std::vector<ElementId> path{y};
  std::vector<double> prob{1.0};
  // Depth-first descent; children are sorted, so the output order is fixed.
  auto descend = [&](auto&& self, ElementId e) -> void {
    if (e == x) {
      Chain c;
      c.elements.assign(path.rbegin(), path.rend());
      c.probability = prob.back();
      out.push_back(std::move(c));
      return;
    }
    const auto& ch = poset.children(e);
    for (size_t i = 0; i < ch.size(); ++i) {
      if (!poset.leq(x, ch[i])) continue;
      path.push_back(ch[i]);
      prob.push_back(prob.back() * weights.p[e][i]);
      self(self, ch[i]);
      path.pop_back();
      prob.pop_back();
    }
  };
  descend(descend, y);
  return out;
}

std::vector<double> descent_weights(const GradedPoset& poset, const WeightScheme& weights,
                                    ElementId x) {
  std::vector<double> w(poset.size(), 0.0);
  w[x] = 1.0;
  // Ids ascend with rank, so children are always processed before parents.
  for (ElementId e = x + 1; e < poset.size(); ++e) {
    const auto& ch = poset.children(e);
    double acc = 0.0;
    for (size_t i = 0; i < ch.size(); ++i) acc += weights.p[e][i] * w[ch[i]];
    w[e] = acc;
  }
  return w;
}

GradedPoset link_poset(const GradedPoset& poset, ElementId x, std::vector<ElementId>* origin) {
  const std::vector<ElementId> members = poset.up_set(x);
  std::vector<int> local(poset.size(), -1);
  for (size_t i = 0; i < members.size(); ++i) local[members[i]] = static_cast<int>(i);

  std::vector<int> ranks(members.size());
  std::vector<std::string> labels(members.size());
  for (size_t i = 0; i < members.size(); ++i) {
    ranks[i] = poset.rank(members[i]) - poset.rank(x) - 1;
    labels[i] = poset.label(members[i]);
  }
  std::vector<std::pair<int, int>> covers;
  for (ElementId e : members) {
    for (ElementId c : poset.children(e)) {
      if (local[c] >= 0) covers.emplace_back(local[c], local[e]);
    }
  }

  std::vector<int> remap;
  GradedPoset out = make_graded_poset(std::move(ranks), std::move(labels), covers, &remap);
  if (origin) {
    origin->assign(members.size(), -1);
    for (size_t i = 0; i < members.size(); ++i) (*origin)[remap[i]] = members[i];
  }
  return out;
}

Link build_link(const GradedPoset& poset, const WeightScheme& weights, ElementId x) {
  if (poset.rank(x) > poset.top_rank() - 1)
    fail(ErrorCode::BadRank, "link base " + poset.label(x) + " is maximal");

  Link link;
  link.base = x;
  link.poset = link_poset(poset, x, &link.origin);

  const std::vector<double> w = descent_weights(poset, weights, x);
  link.weights.m.assign(link.poset.size(), 0.0);
  link.weights.p.assign(link.poset.size(), {});
  for (int e = 0; e < link.poset.size(); ++e) {
    const ElementId orig = link.origin[e];
    link.weights.m[e] = weights.m[orig] / weights.m[x] * w[orig];
    const auto& link_children = link.poset.children(e);
    auto& row = link.weights.p[e];
    row.resize(link_children.size());
    const auto& ch = poset.children(orig);
    for (size_t i = 0; i < link_children.size(); ++i) {
      const ElementId corig = link.origin[link_children[i]];
      const auto it = std::lower_bound(ch.begin(), ch.end(), corig);
      const double p = weights.p[orig][it - ch.begin()];
      row[i] = p * w[corig] / w[orig];
    }
  }
  link.weights.standard = is_standard_scheme(link.poset, link.weights);
  return link;
}

Cochain localize_cochain(const GradedPoset& poset, const Cochain& f, const Link& link) {
  const int base_rank = poset.rank(link.base);
  if (f.level <= base_rank)
    fail(ErrorCode::BadRank, "cochain level must exceed the rank of the link base");
  const int link_level = f.level - base_rank - 1;
  Cochain out;
  out.level = link_level;
  out.values.assign(link.poset.level_size(link_level), 0.0);
  for (ElementId e : link.poset.level(link_level)) {
    const ElementId orig = link.origin[e];
    out.values[link.poset.position_in_level(e)] =
        f.values[poset.position_in_level(orig)];
  }
  return out;
}

Cochain ones_cochain(const GradedPoset& poset, int level) {
  return Cochain{level, std::vector<double>(poset.level_size(level), 1.0)};
}

}  // namespace posethdx
