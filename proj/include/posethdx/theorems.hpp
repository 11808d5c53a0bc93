#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "posethdx/builders.hpp"
#include "posethdx/operators.hpp"
#include "posethdx/properties.hpp"
#include "posethdx/spectral.hpp"

namespace posethdx {

// Pass/fail record comparing a computed quantity against a theorem bound.
struct BoundCheck {
  std::string theorem;
  double bound = 0.0;
  double measured = 0.0;
  bool verdict = false;
  std::map<std::string, double> details;
};

struct ResidualReport {
  std::string identity;
  int trials = 0;
  uint64_t seed = 0;
  double max_residual = 0.0;
  double tol = 1e-9;
  bool pass() const { return max_residual < tol; }
};

struct BasicLocalizationReport {
  int k = 0;
  int l = 0;
  ResidualReport inner_product;   // <f,g> against the link sum
  ResidualReport down_operator;   // <Df,Dg> against the localized down sum
};

// Both parts of the localization identity, over seeded random cochain pairs.
BasicLocalizationReport verify_basic_localization(const GradedPoset& poset,
                                                  const WeightScheme& weights, int k, int l,
                                                  int trials = kDefaultTrials,
                                                  uint64_t seed = kDefaultSeed);

struct UpLocalizationReport {
  int level = 0;
  bool approximate = false;
  double eps = 0.0;            // unified half-range of the three constants
  double max_residual = 0.0;   // exact mode: identity residual
  double max_defect = 0.0;     // approximate mode: measured |LHS - RHS|
  double min_margin = 0.0;     // approximate mode: min(bound - defect) over trials
  int trials = 0;
  uint64_t seed = 0;
  bool pass = false;
};

UpLocalizationReport verify_up_localization(const GradedPoset& poset, const WeightScheme& weights,
                                            int level, const ULReport& ul,
                                            int trials = kDefaultTrials, uint64_t seed = kDefaultSeed);

ResidualReport verify_adjacency_localization(const GradedPoset& poset, const WeightScheme& weights,
                                             int level, const ALReport& al,
                                             int trials = kDefaultTrials,
                                             uint64_t seed = kDefaultSeed);

struct TricklingLocalizationReport {
  ResidualReport mean_identity;       // link means against the adjacency action
  ResidualReport norm_identity;       // mass of the hat localizations
  ResidualReport adjacency_identity;  // localized adjacency quadratic form
};

TricklingLocalizationReport verify_trickling_localization(const GradedPoset& poset,
                                                          const WeightScheme& weights,
                                                          const TLReport& tl,
                                                          int trials = kDefaultTrials,
                                                          uint64_t seed = kDefaultSeed);

// max over x in P(i) of the largest nontrivial eigenvalue of the level-0
// up-down walk of the link of x (i = -1 means the poset itself).
double mu_prime(const GradedPoset& poset, const WeightScheme& weights, int i);

struct WalkIdentityReport {
  // |M+_0 M-_0 - M-_0| entrywise.
  double projection_residual = 0.0;
  // Per k = 0..d-1: multiset distance between the nonzero spectra of the
  // level-k up-down walk and the level-(k+1) down-up walk.
  std::vector<double> spectra_match;
  // Per l, on standard lower-regular levels: entrywise residual of
  // M+_l = (1/NN) Id + (1 - 1/NN) A_l. Negative entries mark levels where
  // the relation does not apply.
  std::vector<double> adjacency_affine;
  bool pass = false;
};

WalkIdentityReport verify_walk_identities(const GradedPoset& poset, const WeightScheme& weights,
                                          const RegularityReport& reg);

// Closed-form coefficient tables of the norm cascade.
struct CascadeConstants {
  Matrix a;  // a(j, i), 0 <= i <= j <= k
  Matrix b;
  Matrix e;  // approximate-mode amplification factors
};

CascadeConstants cascade_constants(const ULReport& ul, int k, const std::vector<double>& alphas);

// The level-by-level decomposition behind the up-operator norm bound:
// f = h_k + (transported rest), tracked down to level 0 with norm ledger,
// per-level correction terms and the coefficient tables.
struct DecompositionResult {
  int k = 0;
  std::vector<double> alphas;
  std::vector<Cochain> h;                 // h_0..h_k
  std::vector<Cochain> g;                 // g_0..g_k, g_k = f
  std::vector<double> h_norm_sq;
  std::vector<double> g_norm_sq;
  std::vector<double> corrections;        // per level i
  std::vector<double> correction_bounds;  // (mu'_{i-1} - alpha_i)_+ * |g_i|^2
  CascadeConstants constants;
  std::vector<double> norm_ledger_residual;    // per j: |g_j|^2 - sum |h_i|^2
  std::vector<double> up_norm_identity_residual;  // per j
};

DecompositionResult up_norm_decomposition(const GradedPoset& poset, const WeightScheme& weights,
                                          int k, const Cochain& f, const std::vector<double>& alphas,
                                          const ULReport& ul);

// max_j a_{k,j} + sum_i b_{k,i} (mu'_{i-1} - alpha_i)_+ (plus the eps terms
// in approximate mode) against the top eigenvalue of the up-down walk on
// mean-zero cochains.
BoundCheck up_norm_bound(const GradedPoset& poset, const WeightScheme& weights, int k,
                         const std::vector<double>& alphas, const ULReport& ul);

// Eigenvalue-count bound for the up-down walk from the per-level link
// adjacency gaps, plus the operator-domination inequality it rests on.
BoundCheck walk_gap_bound(const GradedPoset& poset, const WeightScheme& weights, int l,
                          const RegularityReport& reg, const ALReport& al);

struct TricklingBound {
  std::string constants_source;  // "structural" or "local-tl"
  double base_lo = 0.0;
  double base_hi = 0.0;
  struct LevelRow {
    int level = 0;
    double c = 0.0;
    double b = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    double measured_lo = 0.0;
    double measured_hi = 0.0;
    double fixed_point_lo = 0.0;
    double fixed_point_hi = 0.0;
    bool pass = false;
  };
  std::vector<LevelRow> rows;  // levels d-3 down to -1
  bool verdict = false;
};

// Propagates the top-link spectral interval down the levels through
// T(x; C, B) = (Cx - B)/(1 - x) and checks every measured link spectrum
// against the propagated interval.
TricklingBound trickle_verify(const GradedPoset& poset, const WeightScheme& weights,
                              const RegularityReport& reg, int jobs = 1);

struct EposetDecomposition {
  int l = 0;
  std::vector<double> r_constants;      // r_j, j = 0..l
  std::vector<double> delta_constants;  // delta_j
  std::vector<double> r_table;          // r^l_i for i = 1..l+2 (index i-1)
  std::vector<Cochain> components;      // f_{-1}, f_0, ..., f_l
  std::vector<double> component_norm_sq;
  double reconstruction_residual = 0.0;
  double norm_sum_defect = 0.0;
  Matrix gram;  // pairwise weighted inner products of the components
  std::vector<double> eigen_residuals;     // |M+ f_i - r f_i| per component
  std::vector<double> eigen_targets;       // the r value used per component
  std::vector<double> min_singular_values; // of U_j, j = -1..l-1
};

// Unique splitting of a level-l cochain into kernel towers pushed up by U,
// with orthogonality defects and near-eigenvalue residuals reported as data.
EposetDecomposition eposet_decomposition(
    const GradedPoset& poset, const WeightScheme& weights, int l, const Cochain& f,
    const std::optional<std::vector<std::pair<double, double>>>& constants = std::nullopt);

enum class OracleCase { Single, Bouquet, GPrime };

// Exact spectrum multisets (descending) of the three link shapes arising in
// posetified complexes at corank 2.
std::vector<double> posetification_link_oracle(OracleCase kind, int q, int p = 1,
                                               const SimpleGraph* g = nullptr);

struct PosetificationCertificate {
  int q = 0;
  int thickness = 0;
  long long max_up_degree = 0;
  struct TopLinkRow {
    std::string label;
    std::string kind;  // "single" | "bouquet" | "gprime"
    int p = 1;
    double max_oracle_diff = 0.0;
    bool pass = false;
  };
  std::vector<TopLinkRow> top_links;
  double lambda2_max = 0.0;
  double lambda_min_min = 0.0;
  double slack = 0.0;         // measured excess over (q-1)/q
  bool min_bound_ok = false;  // every link bottom eigenvalue >= -1/q - tol
  ExpansionCertificate two_sided;
  bool verdict = false;
};

// Classifies every corank-2 link of a posetified complex into the three
// closed-form shapes, checks spectrum agreement, and reports the global
// two-sided expansion data, degree bound and thickness.
PosetificationCertificate posetification_certificate(const PosetifiedComplex& vx, int jobs = 1);

}  // namespace posethdx
