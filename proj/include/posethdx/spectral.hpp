#pragma once

#include <optional>
#include <string>
#include <vector>

#include "posethdx/builders.hpp"
#include "posethdx/operators.hpp"

namespace posethdx {

struct SpectralSummary {
  std::vector<double> eigenvalues;  // descending
  double lambda_max = 0.0;
  double lambda_2 = 0.0;    // second entry of the sorted list
  double lambda_min = 0.0;
  double lambda_of = 0.0;   // max{lambda_2, |lambda_min|}
  double self_adjointness_residual = 0.0;
};

// Eigenvalues with respect to the weighted inner product, through the
// similarity W^{1/2} M W^{-1/2}. Throws NotSelfAdjoint when the conjugated
// matrix is not symmetric to 1e-8; that signals a non-standard scheme routed
// to the wrong operator.
SpectralSummary weighted_spectrum(const LinearOp& op);
SpectralSummary weighted_spectrum(const Matrix& walk, const std::vector<double>& measure);

// Same spectrum with the constants direction projected out (W-orthogonally),
// so repeated trivial eigenvalues of disconnected inputs cannot leak into
// lambda_2. Returns n-1 values for an n-dimensional level.
std::vector<double> nontrivial_eigenvalues(const LinearOp& op);
std::vector<double> nontrivial_eigenvalues(const Matrix& walk, const std::vector<double>& measure);

// Weighted operator norm (largest singular value of the conjugated matrix).
double weighted_operator_norm(const LinearOp& op);

struct ConnectivityReport {
  bool connected = false;         // the poset itself
  bool locally_connected = false;
  struct Row {
    ElementId base;
    std::string label;
    int rank;
    bool connected;
  };
  std::vector<Row> links;  // every x in P(<= d-2), the minimum included
};

// Connectivity of the support of the level-0 upper walk, plus the same scan
// over all proper links.
ConnectivityReport is_connected(const GradedPoset& poset, const WeightScheme& weights, int jobs = 1);

struct CertificateRow {
  std::string link;
  int rank = 0;
  double lambda2 = 0.0;     // max nontrivial eigenvalue of the link adjacency
  double lambda_min = 0.0;  // min nontrivial eigenvalue
  bool connected = false;
  bool pass = false;
};

struct EposetRow {
  int j = 0;
  double r = 0.0;
  double delta = 0.0;
  double residual_norm = 0.0;
  bool from_regularity = false;
  double fitted_r = 0.0;
  double fitted_delta = 0.0;
  double fitted_residual_norm = 0.0;
  bool pass = false;
};

struct ExpansionCertificate {
  std::string kind;  // "one-sided" | "two-sided" | "eposet"
  double lambda = 0.0;
  std::optional<double> nu;
  std::vector<CertificateRow> rows;
  std::vector<EposetRow> eposet_rows;
  bool verdict = false;
};

inline constexpr double kCertTol = 1e-9;

// Per-link evidence for the local expansion definitions: every link of rank
// <= d-2 must be connected with nontrivial adjacency eigenvalues bounded by
// lambda (one-sided) resp. confined to [nu, lambda] (two-sided).
ExpansionCertificate certify_one_sided(const GradedPoset& poset, const WeightScheme& weights,
                                       double lambda, int jobs = 1);
ExpansionCertificate certify_two_sided(const GradedPoset& poset, const WeightScheme& weights,
                                       double nu, double lambda, int jobs = 1);

// || M+_j - delta_j M-_j - r_j Id || <= lambda for j = 1..d-1. When the
// constants are omitted, lower-regular posets get r_j = 1/NN at level j+1
// (with delta_j = 1 - r_j); a least-squares fit of (r_j, delta_j) on the
// conjugated residual is computed alongside either way.
ExpansionCertificate certify_eposet(
    const GradedPoset& poset, const WeightScheme& weights, double lambda,
    const std::optional<std::vector<std::pair<double, double>>>& constants = std::nullopt);

// Spectra of link adjacency operators, shared by the certificates and the
// theorem verifiers.
struct LinkSpectrum {
  ElementId base;
  std::string label;
  int rank;
  bool connected;
  std::vector<double> nontrivial;  // descending; empty for one-point links
};

std::vector<LinkSpectrum> scan_link_adjacency(const GradedPoset& poset, const WeightScheme& weights,
                                              int max_rank, int jobs = 1);

}  // namespace posethdx
