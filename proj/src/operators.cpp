#include "posethdx/operators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "posethdx/errors.hpp"

namespace posethdx {

namespace {

double cover_probability(const GradedPoset& poset, const WeightScheme& weights, ElementId parent,
                         ElementId child) {
  const auto& ch = poset.children(parent);
  const auto it = std::lower_bound(ch.begin(), ch.end(), child);
  return weights.p[parent][it - ch.begin()];
}

std::vector<double> level_weights(const GradedPoset& poset, const WeightScheme& weights, int level) {
  std::vector<double> out(poset.level_size(level));
  for (ElementId e : poset.level(level)) out[poset.position_in_level(e)] = weights.m[e];
  return out;
}

void check_level_range(const GradedPoset& poset, int level, const char* what) {
  if (level < -1 || level > poset.top_rank())
    fail(ErrorCode::BadRank, std::string(what) + ": level " + std::to_string(level) + " out of range");
}

}  // namespace

InnerProductContext level_context(const GradedPoset& poset, const WeightScheme& weights, int level) {
  check_level_range(poset, level, "level_context");
  return InnerProductContext{level, level_weights(poset, weights, level)};
}

double weighted_inner_product(const Cochain& f, const Cochain& g, const InnerProductContext& ctx) {
  if (f.level != ctx.level || g.level != ctx.level || f.values.size() != ctx.weights.size() ||
      g.values.size() != ctx.weights.size())
    fail(ErrorCode::LevelMismatch, "inner product arguments live on different levels");
  double acc = 0.0;
  for (size_t i = 0; i < ctx.weights.size(); ++i) acc += ctx.weights[i] * f.values[i] * g.values[i];
  return acc;
}

double weighted_norm(const Cochain& f, const InnerProductContext& ctx) {
  return std::sqrt(std::max(0.0, weighted_inner_product(f, f, ctx)));
}

Cochain LinearOp::apply(const Cochain& f) const {
  if (f.level != source_level) fail(ErrorCode::LevelMismatch, "operator applied at the wrong level");
  return Cochain{target_level, mat.apply(f.values)};
}

Matrix LinearOp::conjugated() const {
  Matrix out = mat;
  for (int r = 0; r < out.rows(); ++r) {
    const double sr = std::sqrt(target_weights[r]);
    for (int c = 0; c < out.cols(); ++c) out(r, c) *= sr / std::sqrt(source_weights[c]);
  }
  return out;
}

LinearOp identity_op(const GradedPoset& poset, const WeightScheme& weights, int level) {
  LinearOp op;
  op.source_level = op.target_level = level;
  op.source_weights = op.target_weights = level_weights(poset, weights, level);
  op.mat = Matrix::identity(poset.level_size(level));
  return op;
}

LinearOp compose(const LinearOp& outer, const LinearOp& inner) {
  if (inner.target_level != outer.source_level)
    fail(ErrorCode::LevelMismatch, "operator composition levels do not chain");
  LinearOp op;
  op.source_level = inner.source_level;
  op.target_level = outer.target_level;
  op.source_weights = inner.source_weights;
  op.target_weights = outer.target_weights;
  op.mat = outer.mat * inner.mat;
  return op;
}

LinearOp up_operator(const GradedPoset& poset, const WeightScheme& weights, int k) {
  if (k < -1 || k > poset.top_rank() - 1)
    fail(ErrorCode::BadRank, "up operator needs -1 <= k <= d-1, got " + std::to_string(k));
  LinearOp op;
  op.source_level = k;
  op.target_level = k + 1;
  op.source_weights = level_weights(poset, weights, k);
  op.target_weights = level_weights(poset, weights, k + 1);
  op.mat = Matrix(poset.level_size(k + 1), poset.level_size(k));
  for (ElementId y : poset.level(k + 1)) {
    const int row = poset.position_in_level(y);
    const auto& ch = poset.children(y);
    for (size_t i = 0; i < ch.size(); ++i)
      op.mat(row, poset.position_in_level(ch[i])) = weights.p[y][i];
  }
  return op;
}

LinearOp down_operator(const GradedPoset& poset, const WeightScheme& weights, int k) {
  if (k < 0 || k > poset.top_rank())
    fail(ErrorCode::BadRank, "down operator needs 0 <= k <= d, got " + std::to_string(k));
  LinearOp op;
  op.source_level = k;
  op.target_level = k - 1;
  op.source_weights = level_weights(poset, weights, k);
  op.target_weights = level_weights(poset, weights, k - 1);
  op.mat = Matrix(poset.level_size(k - 1), poset.level_size(k));
  for (ElementId y : poset.level(k)) {
    const int col = poset.position_in_level(y);
    const auto& ch = poset.children(y);
    for (size_t i = 0; i < ch.size(); ++i) {
      const ElementId x = ch[i];
      op.mat(poset.position_in_level(x), col) = weights.p[y][i] * weights.m[y] / weights.m[x];
    }
  }
  return op;
}

namespace {

// Entry formulas for the two walks, written directly from the cover data.
// They double-check the matrix products: the verifiers manipulate exactly
// these sums, so an indexing bug here would poison everything downstream.
Matrix upper_walk_entries(const GradedPoset& poset, const WeightScheme& weights, int k) {
  const int n = poset.level_size(k);
  Matrix m(n, n);
  for (ElementId z : poset.level(k + 1)) {
    const auto& ch = poset.children(z);
    for (size_t a = 0; a < ch.size(); ++a) {
      const int row = poset.position_in_level(ch[a]);
      for (size_t b = 0; b < ch.size(); ++b) {
        m(row, poset.position_in_level(ch[b])) +=
            weights.m[z] * weights.p[z][a] * weights.p[z][b] / weights.m[ch[a]];
      }
    }
  }
  return m;
}

Matrix lower_walk_entries(const GradedPoset& poset, const WeightScheme& weights, int k) {
  const int n = poset.level_size(k);
  Matrix m(n, n);
  for (ElementId z : poset.level(k - 1)) {
    const auto& par = poset.parents(z);
    for (ElementId y : par) {
      const int row = poset.position_in_level(y);
      const double py = cover_probability(poset, weights, y, z);
      for (ElementId x : par) {
        const double px = cover_probability(poset, weights, x, z);
        m(row, poset.position_in_level(x)) += px * py * weights.m[x] / weights.m[z];
      }
    }
  }
  return m;
}

void cross_check(const Matrix& product, const Matrix& entries, const char* what) {
  if (product.max_abs_diff(entries) > 1e-12)
    throw std::logic_error(std::string(what) + ": product and entry formulas disagree");
}

}  // namespace

LinearOp up_down_walk(const GradedPoset& poset, const WeightScheme& weights, int k) {
  if (k < -1 || k > poset.top_rank() - 1)
    fail(ErrorCode::BadRank, "up-down walk needs -1 <= k <= d-1, got " + std::to_string(k));
  LinearOp op = compose(down_operator(poset, weights, k + 1), up_operator(poset, weights, k));
  cross_check(op.mat, upper_walk_entries(poset, weights, k), "up-down walk");
  return op;
}

LinearOp down_up_walk(const GradedPoset& poset, const WeightScheme& weights, int k) {
  if (k < 0 || k > poset.top_rank())
    fail(ErrorCode::BadRank, "down-up walk needs 0 <= k <= d, got " + std::to_string(k));
  LinearOp op = compose(up_operator(poset, weights, k - 1), down_operator(poset, weights, k));
  cross_check(op.mat, lower_walk_entries(poset, weights, k), "down-up walk");
  return op;
}

LinearOp adjacency_operator(const GradedPoset& poset, const WeightScheme& weights, int l) {
  if (l < 0 || l > poset.top_rank() - 1)
    fail(ErrorCode::BadRank, "adjacency needs 0 <= l <= d-1, got " + std::to_string(l));
  for (ElementId z : poset.level(l + 1)) {
    if (poset.children(z).size() < 2)
      fail(ErrorCode::DegenerateCover,
           poset.label(z) + " covers fewer than two elements; adjacency undefined");
  }
  LinearOp op;
  op.source_level = op.target_level = l;
  op.source_weights = op.target_weights = level_weights(poset, weights, l);
  const int n = poset.level_size(l);
  op.mat = Matrix(n, n);
  for (ElementId z : poset.level(l + 1)) {
    const auto& ch = poset.children(z);
    for (size_t a = 0; a < ch.size(); ++a) {
      const ElementId y = ch[a];
      const int row = poset.position_in_level(y);
      const double py = weights.p[z][a];
      for (size_t b = 0; b < ch.size(); ++b) {
        if (a == b) continue;
        op.mat(row, poset.position_in_level(ch[b])) +=
            weights.m[z] * weights.p[z][b] * py / ((1.0 - py) * weights.m[y]);
      }
    }
  }
  return op;
}

Cochain hat_localize(const GradedPoset& poset, const WeightScheme& weights, const Cochain& f,
                     ElementId x, const Link& link) {
  if (poset.top_rank() < 2) fail(ErrorCode::BadRank, "hat localization needs rank >= 2");
  if (f.level != 0 || poset.rank(x) != 0)
    fail(ErrorCode::BadRank, "hat localization maps level-0 cochains at a rank-0 base");
  Cochain out;
  out.level = 0;
  out.values.assign(link.poset.level_size(0), 0.0);
  for (ElementId lz : link.poset.level(0)) {
    const ElementId z = link.origin[lz];
    const auto& ch = poset.children(z);
    double px = 0.0;
    double acc = 0.0;
    for (size_t i = 0; i < ch.size(); ++i) {
      if (ch[i] == x) {
        px = weights.p[z][i];
      } else {
        acc += weights.p[z][i] * f.values[poset.position_in_level(ch[i])];
      }
    }
    out.values[link.poset.position_in_level(lz)] = acc / (1.0 - px);
  }
  return out;
}

Cochain random_cochain(const GradedPoset& poset, int level, TrialRng& rng) {
  check_level_range(poset, level, "random_cochain");
  return Cochain{level, rng.vector(poset.level_size(level))};
}

}  // namespace posethdx
