#pragma once

#include <vector>

#include "posethdx/linalg.hpp"
#include "posethdx/poset.hpp"
#include "posethdx/rng.hpp"

namespace posethdx {

struct InnerProductContext {
  int level = 0;
  std::vector<double> weights;  // m restricted to the level, in level order
};

InnerProductContext level_context(const GradedPoset& poset, const WeightScheme& weights, int level);

double weighted_inner_product(const Cochain& f, const Cochain& g, const InnerProductContext& ctx);
double weighted_norm(const Cochain& f, const InnerProductContext& ctx);

// A matrix between two cochain levels, carrying the diagonal weights that
// define the inner products on both sides.
struct LinearOp {
  int source_level = 0;
  int target_level = 0;
  Matrix mat;  // target size x source size
  std::vector<double> source_weights;
  std::vector<double> target_weights;

  Cochain apply(const Cochain& f) const;

  // Conjugation by W^{1/2} on both sides; a square self-adjoint operator
  // becomes a symmetric matrix and adjoints become transposes.
  Matrix conjugated() const;
};

LinearOp identity_op(const GradedPoset& poset, const WeightScheme& weights, int level);
LinearOp compose(const LinearOp& outer, const LinearOp& inner);

// (U_k g)(y) = sum over children x of p(y->x) g(x); defined for -1 <= k < d.
LinearOp up_operator(const GradedPoset& poset, const WeightScheme& weights, int k);

// (D_k f)(x) = sum over parents y of p(y->x) m(y)/m(x) f(y); 0 <= k <= d.
LinearOp down_operator(const GradedPoset& poset, const WeightScheme& weights, int k);

// D_{k+1} U_k and U_{k-1} D_k. Both are assembled as matrix products and
// cross-checked entrywise against their one-line entry formulas.
LinearOp up_down_walk(const GradedPoset& poset, const WeightScheme& weights, int k);
LinearOp down_up_walk(const GradedPoset& poset, const WeightScheme& weights, int k);

// Zero-diagonal sibling walk at level l. Requires every element of P(l+1)
// to cover at least two elements.
LinearOp adjacency_operator(const GradedPoset& poset, const WeightScheme& weights, int l);

// The vertex-to-link transfer used by the trickling machinery: for f on
// P(0), the induced function on the link of x averages f over the other
// children of each z > x, renormalized to exclude x itself.
Cochain hat_localize(const GradedPoset& poset, const WeightScheme& weights, const Cochain& f,
                     ElementId x, const Link& link);

Cochain random_cochain(const GradedPoset& poset, int level, TrialRng& rng);

}  // namespace posethdx
