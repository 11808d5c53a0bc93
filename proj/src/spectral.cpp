#include "posethdx/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "posethdx/errors.hpp"
#include "posethdx/parallel.hpp"

namespace posethdx {

namespace {

constexpr double kSelfAdjointTol = 1e-8;

SpectralSummary spectrum_of_conjugated(Matrix s) {
  SpectralSummary out;
  double residual = 0.0;
  for (int r = 0; r < s.rows(); ++r)
    for (int c = r + 1; c < s.cols(); ++c) residual = std::max(residual, std::abs(s(r, c) - s(c, r)));
  out.self_adjointness_residual = residual;
  if (residual > kSelfAdjointTol)
    fail(ErrorCode::NotSelfAdjoint,
         "conjugated operator is not symmetric (residual " + std::to_string(residual) + ")");
  out.eigenvalues = symmetric_eigenvalues(s);
  const int n = static_cast<int>(out.eigenvalues.size());
  out.lambda_max = n ? out.eigenvalues.front() : 0.0;
  out.lambda_min = n ? out.eigenvalues.back() : 0.0;
  out.lambda_2 = n > 1 ? out.eigenvalues[1] : out.lambda_max;
  out.lambda_of = std::max(out.lambda_2, std::abs(out.lambda_min));
  return out;
}

Matrix conjugate(const Matrix& walk, const std::vector<double>& measure) {
  Matrix s = walk;
  for (int r = 0; r < s.rows(); ++r) {
    const double sr = std::sqrt(measure[r]);
    for (int c = 0; c < s.cols(); ++c) s(r, c) *= sr / std::sqrt(measure[c]);
  }
  return s;
}

std::vector<double> deflate_constants(const Matrix& s, const std::vector<double>& measure) {
  const int n = s.rows();
  if (n <= 1) return {};
  // The constants map to sqrt(measure) under conjugation.
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = std::sqrt(measure[i]);
  const double nw = norm(w);
  for (double& x : w) x /= nw;
  const Matrix q = complement_basis(w);
  const Matrix reduced = q.transposed() * (s * q);
  return symmetric_eigenvalues(reduced);
}

}  // namespace

SpectralSummary weighted_spectrum(const LinearOp& op) {
  if (op.source_level != op.target_level)
    fail(ErrorCode::LevelMismatch, "spectrum of a non-square operator");
  return spectrum_of_conjugated(op.conjugated());
}

SpectralSummary weighted_spectrum(const Matrix& walk, const std::vector<double>& measure) {
  return spectrum_of_conjugated(conjugate(walk, measure));
}

std::vector<double> nontrivial_eigenvalues(const LinearOp& op) {
  if (op.source_level != op.target_level)
    fail(ErrorCode::LevelMismatch, "spectrum of a non-square operator");
  const Matrix s = op.conjugated();
  double residual = 0.0;
  for (int r = 0; r < s.rows(); ++r)
    for (int c = r + 1; c < s.cols(); ++c) residual = std::max(residual, std::abs(s(r, c) - s(c, r)));
  if (residual > kSelfAdjointTol)
    fail(ErrorCode::NotSelfAdjoint, "conjugated operator is not symmetric");
  return deflate_constants(s, op.source_weights);
}

std::vector<double> nontrivial_eigenvalues(const Matrix& walk, const std::vector<double>& measure) {
  return deflate_constants(conjugate(walk, measure), measure);
}

double weighted_operator_norm(const LinearOp& op) { return spectral_norm(op.conjugated()); }

namespace {

bool upper_walk_connected(const GradedPoset& poset, const WeightScheme& weights) {
  (void)weights;
  const int n = poset.level_size(0);
  if (n == 0) return false;
  if (poset.top_rank() < 1) return n == 1;
  // Support of M+_0: vertices sharing a cover. Transition probabilities are
  // positive on covers, so adjacency in the support graph is purely
  // combinatorial.
  std::vector<int> comp(poset.size(), -1);
  const ElementId start = poset.level(0).front();
  std::vector<ElementId> stack{start};
  comp[start] = 0;
  int reached = 1;
  while (!stack.empty()) {
    const ElementId y = stack.back();
    stack.pop_back();
    for (ElementId z : poset.parents(y)) {
      for (ElementId x : poset.children(z)) {
        if (comp[x] < 0) {
          comp[x] = 0;
          ++reached;
          stack.push_back(x);
        }
      }
    }
  }
  return reached == n;
}

}  // namespace

ConnectivityReport is_connected(const GradedPoset& poset, const WeightScheme& weights, int jobs) {
  ConnectivityReport report;
  report.connected = upper_walk_connected(poset, weights);

  std::vector<ElementId> bases;
  for (int r = -1; r <= poset.top_rank() - 2; ++r)
    for (ElementId x : poset.level(r)) bases.push_back(x);
  report.links.resize(bases.size());
  parallel_for(static_cast<int>(bases.size()), jobs, [&](int i) {
    const ElementId x = bases[i];
    bool ok;
    if (poset.rank(x) == -1) {
      ok = report.connected;
    } else {
      const Link link = build_link(poset, weights, x);
      ok = upper_walk_connected(link.poset, link.weights);
    }
    report.links[i] = {x, poset.label(x), poset.rank(x), ok};
  });
  report.locally_connected = report.connected &&
                             std::all_of(report.links.begin(), report.links.end(),
                                         [](const auto& row) { return row.connected; });
  return report;
}

std::vector<LinkSpectrum> scan_link_adjacency(const GradedPoset& poset, const WeightScheme& weights,
                                              int max_rank, int jobs) {
  std::vector<ElementId> bases;
  for (int r = -1; r <= max_rank; ++r)
    for (ElementId x : poset.level(r)) bases.push_back(x);
  std::vector<LinkSpectrum> out(bases.size());
  parallel_for(static_cast<int>(bases.size()), jobs, [&](int i) {
    const ElementId x = bases[i];
    LinkSpectrum row;
    row.base = x;
    row.label = poset.label(x);
    row.rank = poset.rank(x);
    if (poset.rank(x) == -1) {
      row.connected = upper_walk_connected(poset, weights);
      row.nontrivial = nontrivial_eigenvalues(adjacency_operator(poset, weights, 0));
    } else {
      const Link link = build_link(poset, weights, x);
      row.connected = upper_walk_connected(link.poset, link.weights);
      row.nontrivial = nontrivial_eigenvalues(adjacency_operator(link.poset, link.weights, 0));
    }
    out[i] = std::move(row);
  });
  return out;
}

namespace {

ExpansionCertificate certify_local(const GradedPoset& poset, const WeightScheme& weights,
                                   std::optional<double> nu, double lambda, int jobs,
                                   const char* kind) {
  if (!is_standard_scheme(poset, weights))
    fail(ErrorCode::NonStandardScheme, "local expansion certificates need a standard scheme");
  ExpansionCertificate cert;
  cert.kind = kind;
  cert.lambda = lambda;
  cert.nu = nu;
  const auto spectra = scan_link_adjacency(poset, weights, poset.top_rank() - 2, jobs);
  cert.verdict = true;
  for (const auto& s : spectra) {
    CertificateRow row;
    row.link = s.label;
    row.rank = s.rank;
    row.connected = s.connected;
    row.lambda2 = s.nontrivial.empty() ? 0.0 : s.nontrivial.front();
    row.lambda_min = s.nontrivial.empty() ? 0.0 : s.nontrivial.back();
    row.pass = s.connected && (s.nontrivial.empty() || row.lambda2 <= lambda + kCertTol);
    if (nu && !s.nontrivial.empty() && row.lambda_min < *nu - kCertTol) row.pass = false;
    cert.verdict = cert.verdict && row.pass;
    cert.rows.push_back(std::move(row));
  }
  return cert;
}

std::optional<long long> uniform_child_count(const GradedPoset& poset, int level) {
  long long count = -1;
  for (ElementId e : poset.level(level)) {
    const long long nn = static_cast<long long>(poset.children(e).size());
    if (count < 0) count = nn;
    if (nn != count) return std::nullopt;
  }
  return count < 0 ? std::nullopt : std::optional<long long>(count);
}

}  // namespace

ExpansionCertificate certify_one_sided(const GradedPoset& poset, const WeightScheme& weights,
                                       double lambda, int jobs) {
  return certify_local(poset, weights, std::nullopt, lambda, jobs, "one-sided");
}

ExpansionCertificate certify_two_sided(const GradedPoset& poset, const WeightScheme& weights,
                                       double nu, double lambda, int jobs) {
  return certify_local(poset, weights, nu, lambda, jobs, "two-sided");
}

ExpansionCertificate certify_eposet(
    const GradedPoset& poset, const WeightScheme& weights, double lambda,
    const std::optional<std::vector<std::pair<double, double>>>& constants) {
  const int d = poset.top_rank();
  if (d < 2) fail(ErrorCode::BadRank, "eposet certificate needs rank >= 2");
  if (constants && static_cast<int>(constants->size()) != d - 1)
    fail(ErrorCode::BadArgs, "expected one (r, delta) pair per level 1..d-1");

  ExpansionCertificate cert;
  cert.kind = "eposet";
  cert.lambda = lambda;
  cert.verdict = true;
  for (int j = 1; j <= d - 1; ++j) {
    const LinearOp up_down = up_down_walk(poset, weights, j);
    const LinearOp down_up = down_up_walk(poset, weights, j);
    const Matrix splus = up_down.conjugated();
    const Matrix sminus = down_up.conjugated();
    const Matrix id = Matrix::identity(splus.rows());

    // Least-squares fit of (delta, r) on the conjugated residual.
    const int n = splus.rows();
    Matrix cols(n * n, 2);
    std::vector<double> rhs(n * n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) {
        cols(r * n + c, 0) = sminus(r, c);
        cols(r * n + c, 1) = id(r, c);
        rhs[r * n + c] = splus(r, c);
      }
    const std::vector<double> fit = least_squares(cols, rhs);

    EposetRow row;
    row.j = j;
    row.fitted_delta = fit[0];
    row.fitted_r = fit[1];
    row.fitted_residual_norm =
        spectral_norm(splus - sminus.scaled(row.fitted_delta) - id.scaled(row.fitted_r));

    if (constants) {
      row.r = (*constants)[j - 1].first;
      row.delta = (*constants)[j - 1].second;
    } else if (const auto nn = uniform_child_count(poset, j + 1)) {
      row.from_regularity = true;
      row.r = 1.0 / static_cast<double>(*nn);
      row.delta = 1.0 - row.r;
    } else {
      row.r = row.fitted_r;
      row.delta = row.fitted_delta;
    }
    row.residual_norm = spectral_norm(splus - sminus.scaled(row.delta) - id.scaled(row.r));
    row.pass = row.residual_norm <= lambda + kCertTol;
    cert.verdict = cert.verdict && row.pass;
    cert.eposet_rows.push_back(row);
  }
  return cert;
}

}  // namespace posethdx
