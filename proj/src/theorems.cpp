#include "posethdx/theorems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "posethdx/errors.hpp"
#include "posethdx/parallel.hpp"

namespace posethdx {

namespace {

std::vector<double> hat(const Cochain& f, const std::vector<double>& weights) {
  std::vector<double> out(f.values.size());
  for (size_t i = 0; i < out.size(); ++i) out[i] = f.values[i] * std::sqrt(weights[i]);
  return out;
}

Cochain unhat(int level, const std::vector<double>& v, const std::vector<double>& weights) {
  Cochain out{level, std::vector<double>(v.size())};
  for (size_t i = 0; i < v.size(); ++i) out.values[i] = v[i] / std::sqrt(weights[i]);
  return out;
}

Matrix symmetric_sqrt(const Matrix& s) {
  EigenSystem eig = jacobi_eigensystem(s);
  for (double& v : eig.values) {
    if (v < -1e-12)
      fail(ErrorCode::BadArgs, "square root of a non-PSD operator (eigenvalue " + std::to_string(v) + ")");
    v = std::sqrt(std::max(0.0, v));
  }
  const int n = s.rows();
  Matrix out(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      double acc = 0.0;
      for (int i = 0; i < n; ++i) acc += eig.vectors(r, i) * eig.values[i] * eig.vectors(c, i);
      out(r, c) = acc;
    }
  return out;
}

struct LevelLinks {
  std::vector<Link> links;          // one per element of the level
  std::vector<double> base_weight;  // m(x)
};

LevelLinks build_level_links(const GradedPoset& poset, const WeightScheme& weights, int level) {
  LevelLinks out;
  for (ElementId x : poset.level(level)) {
    out.links.push_back(build_link(poset, weights, x));
    out.base_weight.push_back(weights.m[x]);
  }
  return out;
}

}  // namespace

BasicLocalizationReport verify_basic_localization(const GradedPoset& poset,
                                                  const WeightScheme& weights, int k, int l,
                                                  int trials, uint64_t seed) {
  const int d = poset.top_rank();
  if (!(-1 <= k && k < l && l <= d)) fail(ErrorCode::BadRank, "need -1 <= k < l <= d");

  const InnerProductContext ctx_l = level_context(poset, weights, l);
  const LinearOp down = down_operator(poset, weights, l);
  const InnerProductContext ctx_down = level_context(poset, weights, l - 1);

  const LevelLinks links = build_level_links(poset, weights, k);
  const int link_level = l - k - 1;
  std::vector<InnerProductContext> link_ctx;
  std::vector<LinearOp> link_down;
  std::vector<InnerProductContext> link_down_ctx;
  for (const Link& link : links.links) {
    link_ctx.push_back(level_context(link.poset, link.weights, link_level));
    link_down.push_back(down_operator(link.poset, link.weights, link_level));
    link_down_ctx.push_back(level_context(link.poset, link.weights, link_level - 1));
  }

  BasicLocalizationReport report;
  report.k = k;
  report.l = l;
  report.inner_product = {"inner-product localization", trials, seed, 0.0, 1e-9};
  report.down_operator = {"down-operator localization", trials, seed, 0.0, 1e-9};

  TrialRng rng(seed);
  for (int t = 0; t < trials; ++t) {
    const Cochain f = random_cochain(poset, l, rng);
    const Cochain g = random_cochain(poset, l, rng);
    double sum_plain = 0.0;
    double sum_down = 0.0;
    for (size_t i = 0; i < links.links.size(); ++i) {
      const Link& link = links.links[i];
      const Cochain fx = localize_cochain(poset, f, link);
      const Cochain gx = localize_cochain(poset, g, link);
      sum_plain += links.base_weight[i] * weighted_inner_product(fx, gx, link_ctx[i]);
      sum_down += links.base_weight[i] * weighted_inner_product(link_down[i].apply(fx),
                                                                link_down[i].apply(gx), link_down_ctx[i]);
    }
    report.inner_product.max_residual =
        std::max(report.inner_product.max_residual,
                 std::abs(weighted_inner_product(f, g, ctx_l) - sum_plain));
    report.down_operator.max_residual =
        std::max(report.down_operator.max_residual,
                 std::abs(weighted_inner_product(down.apply(f), down.apply(g), ctx_down) - sum_down));
  }
  return report;
}

UpLocalizationReport verify_up_localization(const GradedPoset& poset, const WeightScheme& weights,
                                            int level, const ULReport& ul, int trials,
                                            uint64_t seed) {
  const int d = poset.top_rank();
  if (level < 0 || level > d - 1) fail(ErrorCode::BadRank, "up localization needs 0 <= l <= d-1");

  const double c_single = ul.single[level].value();
  const double c_pair = ul.pair[level].value();
  const double c_square = ul.square[level].value();
  const double eps = ul.unified_eps(level);

  UpLocalizationReport report;
  report.level = level;
  report.eps = eps;
  report.approximate = eps > kExactTol;
  report.trials = trials;
  report.seed = seed;

  const InnerProductContext ctx = level_context(poset, weights, level);
  const LinearOp up = up_operator(poset, weights, level);
  const InnerProductContext up_ctx = level_context(poset, weights, level + 1);

  const LevelLinks links = build_level_links(poset, weights, level - 1);
  std::vector<LinearOp> link_up;
  std::vector<InnerProductContext> link_up_ctx;
  for (const Link& link : links.links) {
    link_up.push_back(up_operator(link.poset, link.weights, 0));
    link_up_ctx.push_back(level_context(link.poset, link.weights, 1));
  }

  report.min_margin = std::numeric_limits<double>::infinity();
  TrialRng rng(seed);
  for (int t = 0; t < trials; ++t) {
    const Cochain f = random_cochain(poset, level, rng);
    const Cochain g = random_cochain(poset, level, rng);
    double link_sum = 0.0;
    for (size_t i = 0; i < links.links.size(); ++i) {
      const Cochain fz = localize_cochain(poset, f, links.links[i]);
      const Cochain gz = localize_cochain(poset, g, links.links[i]);
      link_sum += links.base_weight[i] * weighted_inner_product(link_up[i].apply(fz),
                                                                link_up[i].apply(gz), link_up_ctx[i]);
    }
    const double lhs = weighted_inner_product(up.apply(f), up.apply(g), up_ctx);
    const double rhs = link_sum / c_pair -
                       c_square * (c_single / c_pair - 1.0) * weighted_inner_product(f, g, ctx);
    const double defect = std::abs(lhs - rhs);
    report.max_defect = std::max(report.max_defect, defect);
    if (report.approximate) {
      const double bound = eps * (1.0 + c_single - c_pair) / c_pair * weighted_norm(f, ctx) *
                           weighted_norm(g, ctx);
      report.min_margin = std::min(report.min_margin, bound - defect);
    }
  }
  if (report.approximate) {
    report.pass = report.min_margin >= -1e-12;
  } else {
    report.max_residual = report.max_defect;
    report.pass = report.max_residual < 1e-9;
  }
  return report;
}

ResidualReport verify_adjacency_localization(const GradedPoset& poset, const WeightScheme& weights,
                                             int level, const ALReport& al, int trials,
                                             uint64_t seed) {
  const int d = poset.top_rank();
  if (level < 0 || level > d - 1) fail(ErrorCode::BadRank, "adjacency localization needs 0 <= l <= d-1");
  if (!al.exact)
    fail(ErrorCode::ALViolated,
         "adjacency localization does not hold: relative deviation " + std::to_string(al.worst));

  const LinearOp adjacency = adjacency_operator(poset, weights, level);
  const InnerProductContext ctx = level_context(poset, weights, level);
  const LevelLinks links = build_level_links(poset, weights, level - 1);
  std::vector<LinearOp> link_adj;
  std::vector<InnerProductContext> link_ctx;
  for (const Link& link : links.links) {
    link_adj.push_back(adjacency_operator(link.poset, link.weights, 0));
    link_ctx.push_back(level_context(link.poset, link.weights, 0));
  }

  ResidualReport report{"adjacency localization", trials, seed, 0.0, 1e-9};
  TrialRng rng(seed);
  for (int t = 0; t < trials; ++t) {
    const Cochain f = random_cochain(poset, level, rng);
    double link_sum = 0.0;
    for (size_t i = 0; i < links.links.size(); ++i) {
      const Cochain fs = localize_cochain(poset, f, links.links[i]);
      link_sum += links.base_weight[i] *
                  weighted_inner_product(link_adj[i].apply(fs), fs, link_ctx[i]);
    }
    const double lhs = weighted_inner_product(adjacency.apply(f), f, ctx);
    report.max_residual = std::max(report.max_residual, std::abs(lhs - link_sum));
  }
  return report;
}

TricklingLocalizationReport verify_trickling_localization(const GradedPoset& poset,
                                                          const WeightScheme& weights,
                                                          const TLReport& tl, int trials,
                                                          uint64_t seed) {
  if (poset.top_rank() < 2) fail(ErrorCode::BadRank, "trickling localization needs rank >= 2");
  if (!tl.exact) fail(ErrorCode::TLViolated, "trickling localization constants are not exact");

  const double c_same = tl.same.value();
  const double c_diff = tl.diff.value();
  const double c_same2 = tl.same2.value();
  const double c_diff2 = tl.diff2.value();

  const LinearOp adjacency = adjacency_operator(poset, weights, 0);
  const InnerProductContext ctx = level_context(poset, weights, 0);
  const LevelLinks links = build_level_links(poset, weights, 0);
  std::vector<LinearOp> link_adj;
  std::vector<InnerProductContext> link_ctx;
  std::vector<Cochain> link_ones;
  for (const Link& link : links.links) {
    link_adj.push_back(adjacency_operator(link.poset, link.weights, 0));
    link_ctx.push_back(level_context(link.poset, link.weights, 0));
    link_ones.push_back(ones_cochain(link.poset, 0));
  }

  TricklingLocalizationReport report;
  report.mean_identity = {"hat-localization mean", trials, seed, 0.0, 1e-9};
  report.norm_identity = {"hat-localization mass", trials, seed, 0.0, 1e-9};
  report.adjacency_identity = {"hat-localization adjacency", trials, seed, 0.0, 1e-9};

  const auto& vertices = poset.level(0);
  TrialRng rng(seed);
  for (int t = 0; t < trials; ++t) {
    const Cochain f = random_cochain(poset, 0, rng);
    const Cochain g = random_cochain(poset, 0, rng);
    const Cochain af = adjacency.apply(f);

    double mass = 0.0;
    double adj_mass = 0.0;
    for (size_t i = 0; i < links.links.size(); ++i) {
      const ElementId x = vertices[i];
      const Cochain hf = hat_localize(poset, weights, f, x, links.links[i]);
      const Cochain hg = hat_localize(poset, weights, g, x, links.links[i]);
      const double mean_residual =
          std::abs(weighted_inner_product(hf, link_ones[i], link_ctx[i]) -
                   af.values[poset.position_in_level(x)]);
      report.mean_identity.max_residual = std::max(report.mean_identity.max_residual, mean_residual);
      mass += links.base_weight[i] * weighted_inner_product(hf, hg, link_ctx[i]);
      adj_mass += links.base_weight[i] *
                  weighted_inner_product(link_adj[i].apply(hf), hg, link_ctx[i]);
    }
    const double fg = weighted_inner_product(f, g, ctx);
    const double afg = weighted_inner_product(af, g, ctx);
    report.norm_identity.max_residual =
        std::max(report.norm_identity.max_residual, std::abs(mass - c_same * fg - c_diff * afg));
    report.adjacency_identity.max_residual =
        std::max(report.adjacency_identity.max_residual,
                 std::abs(afg - (adj_mass - c_same2 * fg) / c_diff2));
  }
  return report;
}

double mu_prime(const GradedPoset& poset, const WeightScheme& weights, int i) {
  double best = -std::numeric_limits<double>::infinity();
  if (i == -1) {
    const auto vals = nontrivial_eigenvalues(up_down_walk(poset, weights, 0));
    return vals.empty() ? best : vals.front();
  }
  for (ElementId x : poset.level(i)) {
    const Link link = build_link(poset, weights, x);
    const auto vals = nontrivial_eigenvalues(up_down_walk(link.poset, link.weights, 0));
    if (!vals.empty()) best = std::max(best, vals.front());
  }
  return best;
}

WalkIdentityReport verify_walk_identities(const GradedPoset& poset, const WeightScheme& weights,
                                          const RegularityReport& reg) {
  const int d = poset.top_rank();
  WalkIdentityReport report;
  report.pass = true;

  {
    const LinearOp plus = up_down_walk(poset, weights, 0);
    const LinearOp minus = down_up_walk(poset, weights, 0);
    report.projection_residual = (plus.mat * minus.mat).max_abs_diff(minus.mat);
    if (report.projection_residual > 1e-12) report.pass = false;
  }

  const bool standard = is_standard_scheme(poset, weights);
  for (int k = 0; k <= d - 1; ++k) {
    auto upper = weighted_spectrum(up_down_walk(poset, weights, k)).eigenvalues;
    auto lower = weighted_spectrum(down_up_walk(poset, weights, k + 1)).eigenvalues;
    const size_t n = std::max(upper.size(), lower.size());
    upper.resize(n, 0.0);
    lower.resize(n, 0.0);
    std::sort(upper.rbegin(), upper.rend());
    std::sort(lower.rbegin(), lower.rend());
    double diff = 0.0;
    for (size_t i = 0; i < n; ++i) {
      // Entries below the nonzero threshold compare as zero.
      const double a = std::abs(upper[i]) > 1e-9 ? upper[i] : 0.0;
      const double b = std::abs(lower[i]) > 1e-9 ? lower[i] : 0.0;
      diff = std::max(diff, std::abs(a - b));
    }
    report.spectra_match.push_back(diff);
    if (diff > 1e-9) report.pass = false;

    if (standard && reg.lower[k + 1].uniform() && reg.lower[k + 1].lo >= 2) {
      const double nn = static_cast<double>(reg.lower[k + 1].lo);
      const LinearOp plus = up_down_walk(poset, weights, k);
      const LinearOp adj = adjacency_operator(poset, weights, k);
      const Matrix expected =
          adj.mat.scaled((nn - 1.0) / nn) + Matrix::identity(adj.mat.rows()).scaled(1.0 / nn);
      const double residual = plus.mat.max_abs_diff(expected);
      report.adjacency_affine.push_back(residual);
      if (residual > 1e-12) report.pass = false;
    } else {
      report.adjacency_affine.push_back(-1.0);
    }
  }
  return report;
}

CascadeConstants cascade_constants(const ULReport& ul, int k, const std::vector<double>& alphas) {
  if (static_cast<int>(alphas.size()) < k + 1)
    fail(ErrorCode::BadArgs, "need one alpha per level 0..k");
  CascadeConstants out;
  out.a = Matrix(k + 1, k + 1);
  out.b = Matrix(k + 1, k + 1);
  out.e = Matrix(k + 1, k + 1);
  for (int j = 0; j <= k; ++j) {
    for (int i = 0; i <= j; ++i) {
      double prod_full = 1.0;  // over h = i..j of (1 - alpha_h)/c_pair_h
      for (int h = i; h <= j; ++h) prod_full *= (1.0 - alphas[h]) / ul.pair[h].value();
      double prod_tail = 1.0;  // over h = i+1..j
      for (int h = i + 1; h <= j; ++h) prod_tail *= (1.0 - alphas[h]) / ul.pair[h].value();
      out.a(j, i) = 1.0 - prod_full;
      out.b(j, i) = prod_tail / ul.pair[i].value();
      out.e(j, i) = (1.0 + ul.single[i].value() - ul.pair[i].value()) / ul.pair[i].value() * prod_tail;
    }
  }
  return out;
}

DecompositionResult up_norm_decomposition(const GradedPoset& poset, const WeightScheme& weights,
                                          int k, const Cochain& f, const std::vector<double>& alphas,
                                          const ULReport& ul) {
  const int d = poset.top_rank();
  if (k < 0 || k > d - 1) fail(ErrorCode::BadRank, "decomposition needs 0 <= k <= d-1");
  if (f.level != k) fail(ErrorCode::LevelMismatch, "cochain level disagrees with k");

  std::vector<InnerProductContext> ctx;
  for (int j = 0; j <= k + 1; ++j) ctx.push_back(level_context(poset, weights, j));

  const double mean = weighted_inner_product(f, ones_cochain(poset, k), ctx[k]);
  if (std::abs(mean) > 1e-10 * std::max(1.0, weighted_norm(f, ctx[k])))
    fail(ErrorCode::NotMeanZero, "decomposition input must be orthogonal to constants");

  DecompositionResult out;
  out.k = k;
  out.alphas = std::vector<double>(alphas.begin(), alphas.begin() + (k + 1));
  out.constants = cascade_constants(ul, k, alphas);
  out.g.assign(k + 1, {});
  out.h.assign(k + 1, {});

  // Descend: split off the down-kernel part, pull the rest back through U
  // and transport it by the square root of the up-down walk.
  out.g[k] = f;
  for (int j = k; j >= 1; --j) {
    const std::vector<double> ghat = hat(out.g[j], ctx[j].weights);
    const Matrix dhat = down_operator(poset, weights, j).conjugated();
    const Matrix kernel = null_space(dhat);
    std::vector<double> hhat(ghat.size(), 0.0);
    for (int c = 0; c < kernel.cols(); ++c) {
      double proj = 0.0;
      for (int r = 0; r < kernel.rows(); ++r) proj += kernel(r, c) * ghat[r];
      for (int r = 0; r < kernel.rows(); ++r) hhat[r] += proj * kernel(r, c);
    }
    std::vector<double> rest(ghat.size());
    for (size_t i = 0; i < ghat.size(); ++i) rest[i] = ghat[i] - hhat[i];
    out.h[j] = unhat(j, hhat, ctx[j].weights);

    const Matrix uhat = up_operator(poset, weights, j - 1).conjugated();
    const std::vector<double> pullback = least_squares(uhat, rest);
    const Matrix sqrt_walk = symmetric_sqrt(up_down_walk(poset, weights, j - 1).conjugated());
    out.g[j - 1] = unhat(j - 1, sqrt_walk.apply(pullback), ctx[j - 1].weights);
  }
  out.h[0] = out.g[0];

  out.h_norm_sq.resize(k + 1);
  out.g_norm_sq.resize(k + 1);
  for (int j = 0; j <= k; ++j) {
    out.h_norm_sq[j] = weighted_inner_product(out.h[j], out.h[j], ctx[j]);
    out.g_norm_sq[j] = weighted_inner_product(out.g[j], out.g[j], ctx[j]);
  }

  // Correction terms: for each level i, the localized quadratic form of
  // (M+ - alpha Id)(Id - M-) applied to g_i over the links of P(i-1).
  out.corrections.assign(k + 1, 0.0);
  out.correction_bounds.assign(k + 1, 0.0);
  for (int i = 0; i <= k; ++i) {
    const LevelLinks links = build_level_links(poset, weights, i - 1);
    double acc = 0.0;
    for (size_t t = 0; t < links.links.size(); ++t) {
      const Link& link = links.links[t];
      const Cochain gx = localize_cochain(poset, out.g[i], link);
      const InnerProductContext lctx = level_context(link.poset, link.weights, 0);
      const LinearOp plus = up_down_walk(link.poset, link.weights, 0);
      const LinearOp minus = down_up_walk(link.poset, link.weights, 0);
      Cochain v = minus.apply(gx);
      for (size_t r = 0; r < v.values.size(); ++r) v.values[r] = gx.values[r] - v.values[r];
      Cochain w = plus.apply(v);
      for (size_t r = 0; r < w.values.size(); ++r) w.values[r] -= alphas[i] * v.values[r];
      acc += links.base_weight[t] * weighted_inner_product(w, gx, lctx);
    }
    out.corrections[i] = acc;
    const double mu = mu_prime(poset, weights, i - 1);
    out.correction_bounds[i] = std::max(0.0, mu - alphas[i]) * out.g_norm_sq[i];
  }

  out.norm_ledger_residual.assign(k + 1, 0.0);
  out.up_norm_identity_residual.assign(k + 1, 0.0);
  for (int j = 0; j <= k; ++j) {
    double hsum = 0.0;
    for (int i = 0; i <= j; ++i) hsum += out.h_norm_sq[i];
    out.norm_ledger_residual[j] = std::abs(out.g_norm_sq[j] - hsum);

    const LinearOp up = up_operator(poset, weights, j);
    const Cochain ug = up.apply(out.g[j]);
    double rhs = 0.0;
    for (int i = 0; i <= j; ++i)
      rhs += out.constants.a(j, i) * out.h_norm_sq[i] + out.constants.b(j, i) * out.corrections[i];
    out.up_norm_identity_residual[j] =
        std::abs(weighted_inner_product(ug, ug, ctx[j + 1]) - rhs);
  }
  return out;
}

BoundCheck up_norm_bound(const GradedPoset& poset, const WeightScheme& weights, int k,
                         const std::vector<double>& alphas, const ULReport& ul) {
  const int d = poset.top_rank();
  if (k < 0 || k > d - 1) fail(ErrorCode::BadRank, "up-norm bound needs 0 <= k <= d-1");
  const CascadeConstants constants = cascade_constants(ul, k, alphas);

  BoundCheck check;
  check.theorem = "up-norm";
  double a_max = -std::numeric_limits<double>::infinity();
  for (int j = 0; j <= k; ++j) a_max = std::max(a_max, constants.a(k, j));
  double correction = 0.0;
  for (int i = 0; i <= k; ++i) {
    const double mu = mu_prime(poset, weights, i - 1);
    check.details["mu_prime[" + std::to_string(i - 1) + "]"] = mu;
    correction += constants.b(k, i) * std::max(0.0, mu - alphas[i]);
  }
  double eps_term = 0.0;
  if (!ul.exact) {
    for (int i = 0; i <= k; ++i) eps_term += constants.e(k, i) * ul.unified_eps(i);
  }
  check.bound = a_max + correction + eps_term;
  check.details["a_max"] = a_max;
  check.details["correction_term"] = correction;
  check.details["eps_term"] = eps_term;

  const auto nontrivial = nontrivial_eigenvalues(up_down_walk(poset, weights, k));
  check.measured = nontrivial.empty() ? 0.0 : nontrivial.front();
  check.verdict = check.bound >= check.measured - 1e-9;
  return check;
}

BoundCheck walk_gap_bound(const GradedPoset& poset, const WeightScheme& weights, int l,
                          const RegularityReport& reg, const ALReport& al) {
  const int d = poset.top_rank();
  if (l < 0 || l > d - 1) fail(ErrorCode::BadRank, "walk gap bound needs 0 <= l <= d-1");
  std::vector<std::string> missing;
  if (!is_standard_scheme(poset, weights)) missing.push_back("standard scheme");
  for (int m = 1; m <= l + 1; ++m)
    if (!reg.lower[m].uniform()) missing.push_back("lower regularity at level " + std::to_string(m));
  if (!al.exact) missing.push_back("adjacency localization");
  if (!missing.empty()) {
    std::string joined;
    for (const auto& s : missing) joined += (joined.empty() ? "" : ", ") + s;
    fail(ErrorCode::HypothesesUnmet, joined);
  }

  // Per-level adjacency gaps of the links.
  const auto spectra = scan_link_adjacency(poset, weights, l - 1);
  std::vector<double> mu(l + 1, -std::numeric_limits<double>::infinity());  // mu[j+1] = mu_j
  for (const auto& row : spectra) {
    if (row.nontrivial.empty()) continue;
    auto& slot = mu[row.rank + 1];
    slot = std::max(slot, row.nontrivial.front());
  }
  for (double& v : mu)
    if (!std::isfinite(v)) v = 0.0;

  BoundCheck check;
  check.theorem = "walk-gap";
  check.verdict = true;

  // Operator domination: mu_{l-1} (Id - M-) - A + M- must be PSD.
  const LinearOp lower = down_up_walk(poset, weights, l);
  const LinearOp adjacency = adjacency_operator(poset, weights, l);
  const Matrix sminus = lower.conjugated();
  const Matrix sadj = adjacency.conjugated();
  const Matrix id = Matrix::identity(sminus.rows());
  const double mu_top = mu[l];
  const Matrix psd = (id - sminus).scaled(mu_top) - sadj + sminus;
  const double psd_min = symmetric_eigenvalues(psd).back();
  check.details["psd_min_eigenvalue"] = psd_min;
  if (psd_min < -1e-9) check.verdict = false;

  const auto walk_eigs = weighted_spectrum(up_down_walk(poset, weights, l)).eigenvalues;
  for (int r = -1; r <= l; ++r) {
    double product = 1.0;
    for (int j = r; j <= l - 1; ++j) {
      const double nlow = static_cast<double>(reg.lower[j + 2].lo);
      product *= (nlow - 1.0) / nlow * (1.0 - mu[j + 1]);
    }
    const double threshold = 1.0 - product;
    long long count = 0;
    for (double v : walk_eigs)
      if (v > threshold + 1e-9) ++count;
    const long long cap = poset.level_size(r);
    check.details["threshold[" + std::to_string(r) + "]"] = threshold;
    check.details["count[" + std::to_string(r) + "]"] = static_cast<double>(count);
    check.details["cap[" + std::to_string(r) + "]"] = static_cast<double>(cap);
    if (count > cap) check.verdict = false;
    if (r == -1) {
      check.bound = threshold;
      check.measured = walk_eigs.size() > 1 ? walk_eigs[1] : walk_eigs.front();
      if (check.measured > check.bound + 1e-9) check.verdict = false;
    }
  }
  return check;
}

namespace {

double moebius_step(double x, double c, double b) { return (c * x - b) / (1.0 - x); }

}  // namespace

TricklingBound trickle_verify(const GradedPoset& poset, const WeightScheme& weights,
                              const RegularityReport& reg, int jobs) {
  const int d = poset.top_rank();
  std::vector<std::string> missing;
  if (d < 2) missing.push_back("rank >= 2");
  if (!is_standard_scheme(poset, weights)) missing.push_back("standard scheme");
  if (d >= 2 && !is_connected(poset, weights, jobs).locally_connected)
    missing.push_back("local connectivity");

  TricklingBound out;
  std::vector<double> cs(d - 1), bs(d - 1);  // index i+1 for level i in -1..d-3
  if (missing.empty() && reg.locally_two_skeleton_regular) {
    out.constants_source = "structural";
    for (const auto& row : reg.local) {
      const double n1 = static_cast<double>(row.lower1.lo);
      const double n2 = static_cast<double>(row.lower2.lo);
      const double mid = static_cast<double>(row.middle1.lo);
      const double wye = static_cast<double>(row.wye.lo);
      cs[row.level + 1] = 1.0 / (n1 - 1.0);
      bs[row.level + 1] = (n2 * n1 - mid) * wye * (wye - 1.0) /
                          ((mid - 1.0) * mid * mid * (n1 - 1.0) * (n1 - 1.0));
    }
  } else if (missing.empty()) {
    // Fall back to measured trickling-localization constants per level.
    out.constants_source = "local-tl";
    for (int i = -1; i <= d - 3 && missing.empty(); ++i) {
      IntervalConstant same, same2;
      bool exact = true;
      for (ElementId s : poset.level(i)) {
        TLReport tl;
        if (poset.rank(s) == -1) {
          tl = check_TL(poset, weights);
        } else {
          const Link link = build_link(poset, weights, s);
          tl = check_TL(link.poset, link.weights);
        }
        exact = exact && tl.exact;
        same.add(tl.same.value());
        same2.add(tl.same2.value());
      }
      if (!exact || same.deviation() > kExactTol || same2.deviation() > kExactTol) {
        missing.push_back("local trickling localization at level " + std::to_string(i));
      } else {
        cs[i + 1] = same.value();
        bs[i + 1] = same2.value();
      }
    }
  }
  if (!missing.empty()) {
    std::string joined;
    for (const auto& s : missing) joined += (joined.empty() ? "" : ", ") + s;
    fail(ErrorCode::HypothesesUnmet, joined);
  }

  const auto spectra = scan_link_adjacency(poset, weights, d - 2, jobs);
  auto measured_range = [&](int level, double& lo, double& hi) {
    lo = std::numeric_limits<double>::infinity();
    hi = -std::numeric_limits<double>::infinity();
    for (const auto& row : spectra) {
      if (row.rank != level || row.nontrivial.empty()) continue;
      lo = std::min(lo, row.nontrivial.back());
      hi = std::max(hi, row.nontrivial.front());
    }
  };

  measured_range(d - 2, out.base_lo, out.base_hi);
  if (!std::isfinite(out.base_lo))
    fail(ErrorCode::HypothesesUnmet, "top links carry no nontrivial spectrum");

  double lo = out.base_lo;
  double hi = out.base_hi;
  out.verdict = true;
  for (int level = d - 3; level >= -1; --level) {
    const double c = cs[level + 1];
    const double b = bs[level + 1];
    const double t1 = moebius_step(lo, c, b);
    const double t2 = moebius_step(hi, c, b);
    lo = std::min(t1, t2);
    hi = std::max(t1, t2);
    TricklingBound::LevelRow row;
    row.level = level;
    row.c = c;
    row.b = b;
    row.lo = lo;
    row.hi = hi;
    measured_range(level, row.measured_lo, row.measured_hi);
    const double disc = std::sqrt((c - 1.0) * (c - 1.0) + 4.0 * b);
    row.fixed_point_lo = 0.5 * ((1.0 - c) - disc);
    row.fixed_point_hi = 0.5 * ((1.0 - c) + disc);
    row.pass = row.measured_lo >= lo - 1e-9 && row.measured_hi <= hi + 1e-9;
    out.verdict = out.verdict && row.pass;
    out.rows.push_back(row);
  }
  return out;
}

EposetDecomposition eposet_decomposition(
    const GradedPoset& poset, const WeightScheme& weights, int l, const Cochain& f,
    const std::optional<std::vector<std::pair<double, double>>>& constants) {
  const int d = poset.top_rank();
  if (l < 0 || l > d) fail(ErrorCode::BadRank, "decomposition level out of range");
  if (f.level != l) fail(ErrorCode::LevelMismatch, "cochain level disagrees with l");

  EposetDecomposition out;
  out.l = l;
  out.r_constants.resize(l + 1);
  out.delta_constants.resize(l + 1);
  if (constants) {
    if (static_cast<int>(constants->size()) != l + 1)
      fail(ErrorCode::BadArgs, "expected one (r, delta) pair per level 0..l");
    for (int j = 0; j <= l; ++j) {
      out.r_constants[j] = (*constants)[j].first;
      out.delta_constants[j] = (*constants)[j].second;
    }
  } else {
    for (int j = 0; j <= l; ++j) {
      long long nn = -1;
      for (ElementId e : poset.level(j + 1)) {
        const long long c = static_cast<long long>(poset.children(e).size());
        if (nn < 0) nn = c;
        if (c != nn)
          fail(ErrorCode::HypothesesUnmet,
               "level " + std::to_string(j + 1) + " is not lower regular; supply constants");
      }
      out.r_constants[j] = 1.0 / static_cast<double>(nn);
      out.delta_constants[j] = 1.0 - out.r_constants[j];
    }
  }

  // r^l_i for i = 1..l+1, plus r^l_{l+2} = 1 for the constant component.
  out.r_table.resize(l + 2);
  for (int i = 1; i <= l + 1; ++i) {
    double acc = out.r_constants[l];
    for (int j = l - i + 1; j <= l - 1; ++j) {
      double prod = 1.0;
      for (int h = j + 1; h <= l; ++h) prod *= out.delta_constants[h];
      acc += prod * out.r_constants[j];
    }
    out.r_table[i - 1] = acc;
  }
  out.r_table[l + 1] = 1.0;

  std::vector<InnerProductContext> ctx;
  for (int j = -1; j <= l; ++j) ctx.push_back(level_context(poset, weights, j));
  auto ctx_at = [&](int level) -> const InnerProductContext& { return ctx[level + 1]; };

  std::vector<Matrix> uhats;  // U_j conjugated, j = -1..l-1
  for (int j = -1; j <= l - 1; ++j) {
    const Matrix uhat = up_operator(poset, weights, j).conjugated();
    const auto gram_eigs = symmetric_eigenvalues(uhat.transposed() * uhat);
    const double smin = std::sqrt(std::max(0.0, gram_eigs.back()));
    out.min_singular_values.push_back(smin);
    if (smin <= 1e-9)
      fail(ErrorCode::NotInjective,
           "up operator at level " + std::to_string(j) + " has vanishing singular value");
    uhats.push_back(uhat);
  }

  // Component bases in the conjugated space: the constants tower plus each
  // down-kernel pushed up to level l.
  std::vector<Matrix> bases;
  {
    const Cochain one = ones_cochain(poset, l);
    const std::vector<double> v = hat(one, ctx_at(l).weights);
    Matrix b(static_cast<int>(v.size()), 1);
    for (size_t r = 0; r < v.size(); ++r) b(static_cast<int>(r), 0) = v[r];
    bases.push_back(orthonormal_columns(b));
  }
  for (int i = 0; i <= l; ++i) {
    const Matrix dhat = down_operator(poset, weights, i).conjugated();
    Matrix basis = null_space(dhat);
    for (int j = i; j <= l - 1; ++j) basis = uhats[j + 1] * basis;
    bases.push_back(orthonormal_columns(basis));
  }

  int total_cols = 0;
  for (const Matrix& b : bases) total_cols += b.cols();
  const int n = poset.level_size(l);
  Matrix stacked(n, total_cols);
  {
    int col = 0;
    for (const Matrix& b : bases) {
      for (int c = 0; c < b.cols(); ++c, ++col)
        for (int r = 0; r < n; ++r) stacked(r, col) = b(r, c);
    }
  }
  const std::vector<double> fhat = hat(f, ctx_at(l).weights);
  const std::vector<double> coeff = least_squares(stacked, fhat);

  std::vector<double> recon(n, 0.0);
  out.components.clear();
  {
    int col = 0;
    for (const Matrix& b : bases) {
      std::vector<double> part(n, 0.0);
      for (int c = 0; c < b.cols(); ++c, ++col)
        for (int r = 0; r < n; ++r) part[r] += coeff[col] * b(r, c);
      for (int r = 0; r < n; ++r) recon[r] += part[r];
      out.components.push_back(unhat(l, part, ctx_at(l).weights));
    }
  }
  {
    std::vector<double> diff(n);
    for (int r = 0; r < n; ++r) diff[r] = recon[r] - fhat[r];
    out.reconstruction_residual = norm(diff);
  }

  const int parts = static_cast<int>(out.components.size());
  out.component_norm_sq.resize(parts);
  out.gram = Matrix(parts, parts);
  for (int i = 0; i < parts; ++i) {
    for (int j = 0; j < parts; ++j)
      out.gram(i, j) = weighted_inner_product(out.components[i], out.components[j], ctx_at(l));
    out.component_norm_sq[i] = out.gram(i, i);
  }
  double total_norm_sq = 0.0;
  for (double v : out.component_norm_sq) total_norm_sq += v;
  out.norm_sum_defect = std::abs(weighted_inner_product(f, f, ctx_at(l)) - total_norm_sq);

  if (l < d) {
    const LinearOp walk = up_down_walk(poset, weights, l);
    out.eigen_residuals.resize(parts);
    out.eigen_targets.resize(parts);
    for (int idx = 0; idx < parts; ++idx) {
      const int component_rank = idx - 1;  // component f_{idx-1}
      const double target = out.r_table[l - component_rank];
      out.eigen_targets[idx] = target;
      Cochain v = walk.apply(out.components[idx]);
      for (size_t r = 0; r < v.values.size(); ++r)
        v.values[r] -= target * out.components[idx].values[r];
      out.eigen_residuals[idx] = weighted_norm(v, ctx_at(l));
    }
  }
  return out;
}

std::vector<double> posetification_link_oracle(OracleCase kind, int q, int p, const SimpleGraph* g) {
  if (q < 2) fail(ErrorCode::BadArgs, "need q >= 2");
  std::vector<double> out;
  switch (kind) {
    case OracleCase::Single:
      out.push_back(1.0);
      out.insert(out.end(), q, -1.0 / q);
      break;
    case OracleCase::Bouquet: {
      if (p < 1) fail(ErrorCode::BadArgs, "need p >= 1");
      out.push_back(1.0);
      out.insert(out.end(), p - 1, (q - 1.0) / q);
      out.insert(out.end(), p * (q - 1) + 1, -1.0 / q);
      break;
    }
    case OracleCase::GPrime: {
      if (!g) fail(ErrorCode::BadArgs, "gprime oracle needs a graph");
      if (!graph_connected(*g)) fail(ErrorCode::BadArgs, "graph must be connected");
      bipartition(*g);
      const int m = g->n;
      const int edges = static_cast<int>(g->edges.size());
      // Normalized spectrum of the base graph.
      std::vector<double> degree(m, 0.0);
      Matrix walk(m, m);
      for (auto [u, v] : g->edges) {
        degree[u] += 1.0;
        degree[v] += 1.0;
      }
      for (auto [u, v] : g->edges) {
        walk(u, v) = 1.0 / degree[u];
        walk(v, u) = 1.0 / degree[v];
      }
      const auto lambda = weighted_spectrum(walk, degree).eigenvalues;
      out.insert(out.end(), edges - m + 1, (q - 2.0) / q);
      out.insert(out.end(), (q - 2) * edges + m, -1.0 / q);
      for (int k = 0; k < m - 1; ++k) out.push_back((q - 1.0 + lambda[k]) / q);
      break;
    }
  }
  std::sort(out.rbegin(), out.rend());
  return out;
}

namespace {

bool is_face(const FacetList& complex, const std::vector<int>& face) {
  for (const auto& facet : complex.facets) {
    if (std::includes(facet.begin(), facet.end(), face.begin(), face.end())) return true;
  }
  return false;
}

}  // namespace

PosetificationCertificate posetification_certificate(const PosetifiedComplex& vx, int jobs) {
  const GradedPoset& poset = vx.poset;
  const int d = poset.top_rank();
  if (d < 2) fail(ErrorCode::BadRank, "posetification certificate needs rank >= 2");

  PosetificationCertificate cert;
  cert.q = vx.q;
  cert.thickness = thickness(vx.complex);
  for (ElementId e = 0; e < poset.size(); ++e) {
    if (poset.rank(e) >= d) continue;
    cert.max_up_degree = std::max(cert.max_up_degree, static_cast<long long>(poset.parents(e).size()));
  }

  const auto& bases = poset.level(d - 2);
  cert.top_links.resize(bases.size());
  parallel_for(static_cast<int>(bases.size()), jobs, [&](int idx) {
    const ElementId x = bases[idx];
    const SubspaceCode& code = vx.codes[x];
    std::set<int> support_cols;
    int nonzeros = 0;
    for (const auto& row : code.rows)
      for (int c = 0; c < code.n; ++c)
        if (row[c] != 0) {
          support_cols.insert(c);
          ++nonzeros;
        }
    std::vector<int> support_verts;
    for (int c : support_cols) support_verts.push_back(vx.vertex_order[c]);
    std::sort(support_verts.begin(), support_verts.end());

    PosetificationCertificate::TopLinkRow row;
    row.label = poset.label(x);
    std::vector<double> oracle;
    if (nonzeros == code.dim()) {
      // Coordinate subspace of a codimension-2 cell: its link is the
      // blown-up link graph of that cell in the complex.
      row.kind = "gprime";
      std::vector<int> link_verts;
      for (int v : vx.complex.vertices()) {
        if (std::binary_search(support_verts.begin(), support_verts.end(), v)) continue;
        std::vector<int> face = support_verts;
        face.push_back(v);
        std::sort(face.begin(), face.end());
        if (is_face(vx.complex, face)) link_verts.push_back(v);
      }
      SimpleGraph g;
      g.n = static_cast<int>(link_verts.size());
      for (int a = 0; a < g.n; ++a) {
        for (int b = a + 1; b < g.n; ++b) {
          std::vector<int> face = support_verts;
          face.push_back(link_verts[a]);
          face.push_back(link_verts[b]);
          std::sort(face.begin(), face.end());
          if (is_face(vx.complex, face)) g.edges.emplace_back(a, b);
        }
      }
      oracle = posetification_link_oracle(OracleCase::GPrime, vx.q, 1, &g);
    } else {
      // Is the support contained in a codimension-1 cell?
      std::set<std::vector<int>> candidates;
      for (const auto& facet : vx.complex.facets) {
        if (!std::includes(facet.begin(), facet.end(), support_verts.begin(), support_verts.end()))
          continue;
        // All d-subsets of the facet containing the support.
        const int k = static_cast<int>(facet.size());
        for (int drop = 0; drop < k; ++drop) {
          std::vector<int> sub = facet;
          sub.erase(sub.begin() + drop);
          if (std::includes(sub.begin(), sub.end(), support_verts.begin(), support_verts.end()))
            candidates.insert(sub);
        }
      }
      if (candidates.empty()) {
        row.kind = "single";
        oracle = posetification_link_oracle(OracleCase::Single, vx.q);
      } else {
        row.kind = "bouquet";
        const std::vector<int>& cell = *candidates.begin();
        int p = 0;
        for (const auto& facet : vx.complex.facets)
          if (std::includes(facet.begin(), facet.end(), cell.begin(), cell.end())) ++p;
        row.p = p;
        oracle = posetification_link_oracle(OracleCase::Bouquet, vx.q, p);
      }
    }

    const Link link = build_link(poset, vx.weights, x);
    const auto measured =
        weighted_spectrum(adjacency_operator(link.poset, link.weights, 0)).eigenvalues;
    if (measured.size() != oracle.size()) {
      row.max_oracle_diff = std::numeric_limits<double>::infinity();
    } else {
      for (size_t i = 0; i < oracle.size(); ++i)
        row.max_oracle_diff = std::max(row.max_oracle_diff, std::abs(measured[i] - oracle[i]));
    }
    row.pass = row.max_oracle_diff <= 1e-9;
    cert.top_links[idx] = std::move(row);
  });

  const auto spectra = scan_link_adjacency(poset, vx.weights, d - 2, jobs);
  cert.lambda2_max = -std::numeric_limits<double>::infinity();
  cert.lambda_min_min = std::numeric_limits<double>::infinity();
  for (const auto& s : spectra) {
    if (s.nontrivial.empty()) continue;
    cert.lambda2_max = std::max(cert.lambda2_max, s.nontrivial.front());
    cert.lambda_min_min = std::min(cert.lambda_min_min, s.nontrivial.back());
  }
  const double q = static_cast<double>(vx.q);
  cert.slack = std::max(0.0, cert.lambda2_max - (q - 1.0) / q);
  cert.min_bound_ok = cert.lambda_min_min >= -1.0 / q - 1e-9;
  cert.two_sided = certify_two_sided(poset, vx.weights, -1.0 / q - 1e-9,
                                     (q - 1.0) / q + cert.slack, jobs);
  cert.verdict = cert.min_bound_ok && cert.two_sided.verdict;
  for (const auto& row : cert.top_links) cert.verdict = cert.verdict && row.pass;
  return cert;
}

}  // namespace posethdx
