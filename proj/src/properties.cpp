#include "posethdx/properties.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "posethdx/errors.hpp"

namespace posethdx {

namespace {

long long nn(const GradedPoset& poset, ElementId e) {
  return static_cast<long long>(poset.children(e).size());
}

std::vector<ElementId> sorted_intersection(const std::vector<ElementId>& a,
                                           const std::vector<ElementId>& b) {
  std::vector<ElementId> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

CountStat wye_stat(const GradedPoset& poset) {
  CountStat stat;
  for (ElementId u : poset.level(2)) {
    std::set<ElementId> descendants;
    for (ElementId z : poset.children(u))
      for (ElementId y : poset.children(z)) descendants.insert(y);
    const std::vector<ElementId> ys(descendants.begin(), descendants.end());
    for (size_t a = 0; a < ys.size(); ++a) {
      for (size_t b = a + 1; b < ys.size(); ++b) {
        long long count = 0;
        for (ElementId z : poset.children(u)) {
          const auto& ch = poset.children(z);
          if (std::binary_search(ch.begin(), ch.end(), ys[a]) &&
              std::binary_search(ch.begin(), ch.end(), ys[b]))
            ++count;
        }
        stat.add(count);
      }
    }
  }
  return stat;
}

struct TwoSkeletonStats {
  CountStat lower1, lower2, middle1, wye;
};

TwoSkeletonStats two_skeleton_stats(const GradedPoset& poset) {
  TwoSkeletonStats s;
  for (ElementId e : poset.level(1)) s.lower1.add(nn(poset, e));
  for (ElementId e : poset.level(2)) s.lower2.add(nn(poset, e));
  for (ElementId x : poset.level(2)) {
    std::map<ElementId, long long> between;
    for (ElementId y : poset.children(x))
      for (ElementId z : poset.children(y)) ++between[z];
    for (const auto& [z, count] : between) s.middle1.add(count);
  }
  s.wye = wye_stat(poset);
  return s;
}

}  // namespace

RegularityReport detect_regularity(const GradedPoset& poset) {
  const int d = poset.top_rank();
  RegularityReport report;
  report.d = d;
  report.lower.resize(d + 1);
  report.middle.resize(std::max(0, d));
  report.wedge.resize(std::max(0, d));

  for (int i = 0; i <= d; ++i)
    for (ElementId e : poset.level(i)) report.lower[i].add(nn(poset, e));

  for (int i = 0; i <= d - 1; ++i) {
    for (ElementId x : poset.level(i + 1)) {
      std::map<ElementId, long long> between;
      for (ElementId y : poset.children(x))
        for (ElementId z : poset.children(y)) ++between[z];
      for (const auto& [z, count] : between) report.middle[i].add(count);
    }
  }

  for (int i = 0; i <= d - 1; ++i) {
    std::set<std::pair<ElementId, ElementId>> seen;
    for (ElementId x : poset.level(i + 1)) {
      const auto& ch = poset.children(x);
      for (size_t a = 0; a < ch.size(); ++a) {
        for (size_t b = a + 1; b < ch.size(); ++b) {
          if (!seen.emplace(ch[a], ch[b]).second) continue;
          report.wedge[i].add(
              static_cast<long long>(sorted_intersection(poset.children(ch[a]), poset.children(ch[b])).size()));
        }
      }
    }
  }

  if (d >= 2) report.wye = wye_stat(poset);

  auto all_uniform = [](const std::vector<CountStat>& v) {
    return std::all_of(v.begin(), v.end(),
                       [](const CountStat& s) { return s.configs == 0 || s.uniform(); });
  };
  report.lower_regular = all_uniform(report.lower);
  report.middle_regular = all_uniform(report.middle);
  report.wedge_regular = all_uniform(report.wedge);
  report.wye_regular = d >= 2 && report.wye.uniform();
  report.regular = report.lower_regular && report.middle_regular && report.wedge_regular;
  report.two_skeleton_regular = d >= 2 && report.lower[1].uniform() && report.lower[2].uniform() &&
                                report.middle[1].uniform() && report.wye_regular;

  // Local variants: links of every element of rank <= d-3 (the minimum
  // included), unified per level.
  report.locally_two_skeleton_regular = d >= 2;
  for (int i = -1; i <= d - 3; ++i) {
    RegularityReport::LocalRow row;
    row.level = i;
    for (ElementId s : poset.level(i)) {
      const GradedPoset lp = (poset.rank(s) == -1) ? poset : link_poset(poset, s);
      const TwoSkeletonStats stats = two_skeleton_stats(lp);
      row.lower1.merge(stats.lower1);
      row.lower2.merge(stats.lower2);
      row.middle1.merge(stats.middle1);
      row.wye.merge(stats.wye);
    }
    const bool ok =
        row.lower1.uniform() && row.lower2.uniform() && row.middle1.uniform() && row.wye.uniform();
    report.locally_two_skeleton_regular = report.locally_two_skeleton_regular && ok;
    report.local.push_back(std::move(row));
  }
  if (d == 2 && report.local.size() == 1) {
    // Rank 2: the only link base is the minimum, so local and global agree.
    report.locally_two_skeleton_regular = report.two_skeleton_regular;
  }
  return report;
}

namespace {

double cover_p(const GradedPoset& poset, const WeightScheme& weights, ElementId parent,
               ElementId child) {
  const auto& ch = poset.children(parent);
  const auto it = std::lower_bound(ch.begin(), ch.end(), child);
  return weights.p[parent][it - ch.begin()];
}

// Chain weights of all two-step descents from x: z -> sum_{y} p(x->y)p(y->z).
std::map<ElementId, double> two_step_weights(const GradedPoset& poset, const WeightScheme& weights,
                                             ElementId x) {
  std::map<ElementId, double> out;
  const auto& ch = poset.children(x);
  for (size_t i = 0; i < ch.size(); ++i) {
    const ElementId y = ch[i];
    const auto& gch = poset.children(y);
    for (size_t j = 0; j < gch.size(); ++j) out[gch[j]] += weights.p[x][i] * weights.p[y][j];
  }
  return out;
}

}  // namespace

ULReport check_UL(const GradedPoset& poset, const WeightScheme& weights) {
  const int d = poset.top_rank();
  ULReport report;
  report.d = d;
  report.single.resize(std::max(0, d));
  report.pair.resize(std::max(0, d));
  report.square.resize(std::max(0, d));

  for (int l = 0; l <= d - 1; ++l) {
    for (ElementId x : poset.level(l + 1)) {
      const auto two_step = two_step_weights(poset, weights, x);
      const auto& siblings = poset.children(x);
      // One sibling: sum over its children of p^2 / chain weight from x.
      for (ElementId y : siblings) {
        double acc = 0.0;
        const auto& ch = poset.children(y);
        for (size_t j = 0; j < ch.size(); ++j) {
          const double p = weights.p[y][j];
          acc += p * p / two_step.at(ch[j]);
        }
        report.single[l].add(acc);
      }
      // Two siblings through their common children.
      for (size_t a = 0; a < siblings.size(); ++a) {
        for (size_t b = a + 1; b < siblings.size(); ++b) {
          double acc = 0.0;
          for (ElementId z : sorted_intersection(poset.children(siblings[a]), poset.children(siblings[b]))) {
            acc += cover_p(poset, weights, siblings[a], z) * cover_p(poset, weights, siblings[b], z) /
                   two_step.at(z);
          }
          report.pair[l].add(acc);
        }
      }
    }
    for (ElementId y : poset.level(l)) {
      double acc = 0.0;
      for (ElementId x : poset.parents(y)) {
        const double p = cover_p(poset, weights, x, y);
        acc += weights.m[x] * p * p;
      }
      report.square[l].add(acc / weights.m[y]);
    }
  }
  report.exact = true;
  for (int l = 0; l <= d - 1; ++l) {
    if (report.single[l].deviation() > kExactTol || report.pair[l].deviation() > kExactTol ||
        report.square[l].deviation() > kExactTol)
      report.exact = false;
  }
  return report;
}

ALReport check_AL(const GradedPoset& poset, const WeightScheme& weights) {
  if (!is_standard_scheme(poset, weights))
    fail(ErrorCode::NonStandardScheme, "the adjacency localization property assumes a standard scheme");
  const int d = poset.top_rank();
  ALReport report;
  report.d = d;
  report.configs.assign(std::max(0, d), 0);
  report.max_relative_deviation.assign(std::max(0, d), 0.0);

  for (int l = 0; l <= d - 1; ++l) {
    std::set<std::pair<ElementId, ElementId>> seen;
    for (ElementId z : poset.level(l + 1)) {
      const auto& ch = poset.children(z);
      for (size_t a = 0; a < ch.size(); ++a) {
        for (size_t b = a + 1; b < ch.size(); ++b) {
          const ElementId x = ch[a];
          const ElementId y = ch[b];
          if (!seen.emplace(x, y).second) continue;
          const auto common_covers = sorted_intersection(poset.parents(x), poset.parents(y));
          const auto common_children = sorted_intersection(poset.children(x), poset.children(y));
          double lhs = 0.0;
          double rhs = 0.0;
          for (ElementId w : common_covers) {
            const double px = cover_p(poset, weights, w, x);
            const double py = cover_p(poset, weights, w, y);
            lhs += weights.m[w] * px * py / (1.0 - px);
            const auto two_step = two_step_weights(poset, weights, w);
            double inner = 0.0;
            for (ElementId s : common_children) {
              const double pxs = cover_p(poset, weights, x, s);
              const double pys = cover_p(poset, weights, y, s);
              inner += pxs * pys / (two_step.at(s) - px * pxs);
            }
            rhs += weights.m[w] * px * py * inner;
          }
          const double scale = std::max(std::abs(lhs), std::abs(rhs));
          const double dev = scale > 0.0 ? std::abs(lhs - rhs) / scale : 0.0;
          ++report.configs[l];
          report.max_relative_deviation[l] = std::max(report.max_relative_deviation[l], dev);
        }
      }
    }
  }
  report.worst = 0.0;
  for (double dev : report.max_relative_deviation) report.worst = std::max(report.worst, dev);
  report.exact = report.worst < kExactTol;
  return report;
}

namespace {

// sum over v != z with x covered-by v covered-by u of 1/NN(v).
double excluded_chain_mass(const GradedPoset& poset, ElementId u, ElementId x, ElementId z) {
  double acc = 0.0;
  for (ElementId v : sorted_intersection(poset.children(u), poset.parents(x))) {
    if (v == z) continue;
    acc += 1.0 / static_cast<double>(poset.children(v).size());
  }
  return acc;
}

}  // namespace

TLReport check_TL(const GradedPoset& poset, const WeightScheme& weights) {
  if (!is_standard_scheme(poset, weights))
    fail(ErrorCode::NonStandardScheme, "the trickling localization property assumes a standard scheme");
  if (poset.top_rank() < 2) fail(ErrorCode::BadRank, "trickling localization needs rank >= 2");

  TLReport report;
  const auto& vertices = poset.level(0);

  auto pair_coefficient = [&](ElementId y1, ElementId y2) {
    double acc = 0.0;
    for (ElementId z : sorted_intersection(poset.parents(y1), poset.parents(y2))) {
      const long long k = nn(poset, z);
      if (k >= 2) acc += weights.m[z] / static_cast<double>(k * (k - 1));
    }
    return acc;
  };

  for (ElementId y : vertices) {
    double acc = 0.0;
    for (ElementId z : poset.parents(y)) {
      const long long k = nn(poset, z);
      if (k >= 2) acc += weights.m[z] / static_cast<double>(k * (k - 1));
    }
    report.same.add(acc / weights.m[y]);
  }

  for (size_t a = 0; a < vertices.size(); ++a) {
    for (size_t b = a + 1; b < vertices.size(); ++b) {
      const double lhs = pair_coefficient(vertices[a], vertices[b]);
      if (lhs == 0.0) continue;
      double rhs = 0.0;
      for (ElementId z : sorted_intersection(poset.parents(vertices[a]), poset.parents(vertices[b]))) {
        const long long k = nn(poset, z);
        if (k >= 2)
          rhs += weights.m[z] * static_cast<double>(k - 2) /
                 (static_cast<double>(k) * static_cast<double>(k - 1) * static_cast<double>(k - 1));
      }
      report.diff.add(rhs / lhs);
    }
  }

  // Rank-2 configurations: ordered pairs (z, w) of distinct covers, joined
  // above by u, with w attached to the first vertex and z to the second.
  auto rank2_sum = [&](ElementId y1, ElementId y2) {
    double acc = 0.0;
    for (ElementId x : vertices) {
      if (x == y1 || x == y2) continue;
      const auto zs = sorted_intersection(poset.parents(x), poset.parents(y2));
      const auto ws = sorted_intersection(poset.parents(x), poset.parents(y1));
      for (ElementId z : zs) {
        for (ElementId w : ws) {
          if (w == z) continue;
          for (ElementId u : sorted_intersection(poset.parents(z), poset.parents(w))) {
            const double mass = excluded_chain_mass(poset, u, x, z);
            acc += weights.m[u] /
                   (static_cast<double>(nn(poset, u)) * static_cast<double>(nn(poset, w)) *
                    static_cast<double>(nn(poset, w) - 1) * static_cast<double>(nn(poset, z)) *
                    static_cast<double>(nn(poset, z) - 1) * mass);
          }
        }
      }
    }
    return acc;
  };

  for (ElementId y : vertices) report.same2.add(rank2_sum(y, y) / weights.m[y]);

  for (ElementId y1 : vertices) {
    for (ElementId y2 : vertices) {
      if (y1 == y2) continue;
      const double lhs = pair_coefficient(y1, y2);
      const double rhs = rank2_sum(y1, y2);
      if (lhs == 0.0) {
        // No shared cover: the property demands the rank-2 mass vanish too.
        if (std::abs(rhs) > kExactTol) report.diff2.add(std::abs(rhs) / kExactTol);
        continue;
      }
      report.diff2.add(rhs / lhs);
    }
  }

  report.exact = report.same.deviation() < kExactTol && report.diff.deviation() < kExactTol &&
                 report.same2.deviation() < kExactTol && report.diff2.deviation() < kExactTol &&
                 report.diff.configs > 0 && report.diff2.configs > 0;
  return report;
}

PredictedConstants constants_from_regularity(const RegularityReport& report) {
  PredictedConstants out;
  const int d = report.d;
  const bool ul_ready = report.lower_regular && report.middle_regular && report.wedge_regular;
  if (!ul_ready && !report.two_skeleton_regular)
    fail(ErrorCode::MissingRegularity, "poset is neither regular nor 2-skeleton regular");

  if (ul_ready) {
    for (int i = 0; i <= d - 1; ++i) {
      const double nlow_i = static_cast<double>(report.lower[i].lo);
      const double nlow_next = static_cast<double>(report.lower[i + 1].lo);
      const double nmid = static_cast<double>(report.middle[i].lo);
      const double nwedge = static_cast<double>(report.wedge[i].lo);
      out.c_single.push_back(nlow_next / nmid);
      out.c_square.push_back(1.0 / nlow_next);
      out.c_pair.push_back(nwedge * nlow_next / (nlow_i * nmid));
    }
  }

  if (report.two_skeleton_regular) {
    const double n1 = static_cast<double>(report.lower[1].lo);
    const double n2 = static_cast<double>(report.lower[2].lo);
    const double mid = static_cast<double>(report.middle[1].lo);
    const double wye = static_cast<double>(report.wye.lo);
    out.c_same = 1.0 / (n1 - 1.0);
    out.c_diff = (n1 - 2.0) / (n1 - 1.0);
    out.c_same2 = (n2 * n1 / mid - 1.0) * wye * (wye - 1.0) / ((mid - 1.0) * mid * (n1 - 1.0) * (n1 - 1.0));
    out.c_diff2 = ((n2 * n1 / mid - 2.0) * wye - (n1 - 2.0)) / ((mid - 1.0) * (n1 - 1.0));
  }
  return out;
}

}  // namespace posethdx
