#include "posethdx/gf.hpp"

#include <algorithm>
#include <numeric>

#include "posethdx/errors.hpp"

namespace posethdx {

namespace {

struct PrimePower {
  int p;
  int e;
};

bool factor_prime_power(int q, PrimePower& out) {
  if (q < 2) return false;
  int p = 0;
  int n = q;
  for (int d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      p = d;
      break;
    }
  }
  if (p == 0) p = n;
  int e = 0;
  while (n % p == 0) {
    n /= p;
    ++e;
  }
  if (n != 1) return false;
  out = {p, e};
  return true;
}

// Polynomials over F_p, coefficients low-to-high degree.
using Poly = std::vector<int>;

Poly poly_trim(Poly a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
  return a;
}

Poly poly_mod(Poly a, const Poly& m, int p) {
  a = poly_trim(std::move(a));
  const int dm = static_cast<int>(m.size()) - 1;
  while (static_cast<int>(a.size()) - 1 >= dm) {
    const int shift = static_cast<int>(a.size()) - 1 - dm;
    // m is monic, so the quotient digit is just the leading coefficient.
    const int c = a.back();
    for (int i = 0; i <= dm; ++i) {
      a[i + shift] = ((a[i + shift] - c * m[i]) % p + p) % p;
    }
    a = poly_trim(std::move(a));
  }
  return a;
}

Poly poly_mul_mod(const Poly& a, const Poly& b, const Poly& m, int p) {
  if (a.empty() || b.empty()) return {};
  Poly c(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + a[i] * b[j]) % p;
  return poly_mod(std::move(c), m, p);
}

Poly decode(int value, int p, int e) {
  Poly out(e, 0);
  for (int i = 0; i < e; ++i) {
    out[i] = value % p;
    value /= p;
  }
  return poly_trim(std::move(out));
}

int encode(const Poly& a, int p) {
  int value = 0;
  for (int i = static_cast<int>(a.size()) - 1; i >= 0; --i) value = value * p + a[i];
  return value;
}

bool divides(const Poly& divisor, Poly candidate, int p) {
  return poly_mod(std::move(candidate), divisor, p).empty();
}

// Lexicographically smallest monic irreducible of degree e over F_p.
Poly find_irreducible(int p, int e) {
  const int lower_count = [&] {
    long long c = 1;
    for (int i = 0; i < e; ++i) c *= p;
    return static_cast<int>(c);
  }();
  for (int tail = 0; tail < lower_count; ++tail) {
    Poly cand = decode(tail, p, e);
    cand.resize(e + 1, 0);
    cand[e] = 1;
    bool irreducible = true;
    // Test all monic divisors of degree 1..e/2.
    for (int d = 1; irreducible && 2 * d <= e; ++d) {
      long long count = 1;
      for (int i = 0; i < d; ++i) count *= p;
      for (int t = 0; t < count; ++t) {
        Poly div = decode(t, p, d);
        div.resize(d + 1, 0);
        div[d] = 1;
        if (divides(div, cand, p)) {
          irreducible = false;
          break;
        }
      }
    }
    if (irreducible) return cand;
  }
  fail(ErrorCode::BadArgs, "no irreducible polynomial found");
}

}  // namespace

bool GaloisField::is_prime_power(int q) {
  PrimePower pp;
  return factor_prime_power(q, pp);
}

GaloisField::GaloisField(int q) : GaloisField(q, {}) {}

GaloisField::GaloisField(int q, const std::vector<int>& irreducible_coeffs) {
  PrimePower pp;
  if (!factor_prime_power(q, pp)) fail(ErrorCode::BadArgs, "q must be a prime power, got " + std::to_string(q));
  q_ = q;
  p_ = pp.p;
  e_ = pp.e;
  Poly irr = irreducible_coeffs;
  if (irr.empty()) {
    irr = (e_ == 1) ? Poly{0, 1} : find_irreducible(p_, e_);
  } else if (static_cast<int>(irr.size()) != e_ + 1 || irr[e_] != 1) {
    fail(ErrorCode::BadArgs, "reducing polynomial must be monic of degree " + std::to_string(e_));
  }
  build_tables(irr);
}

void GaloisField::build_tables(const std::vector<int>& irreducible) {
  add_.assign(static_cast<size_t>(q_) * q_, 0);
  mul_.assign(static_cast<size_t>(q_) * q_, 0);
  neg_.assign(q_, 0);
  inv_.assign(q_, -1);
  for (int a = 0; a < q_; ++a) {
    const Poly pa = decode(a, p_, e_);
    for (int b = 0; b < q_; ++b) {
      const Poly pb = decode(b, p_, e_);
      Poly sum(std::max(pa.size(), pb.size()), 0);
      for (size_t i = 0; i < pa.size(); ++i) sum[i] += pa[i];
      for (size_t i = 0; i < pb.size(); ++i) sum[i] = (sum[i] + pb[i]) % p_;
      add_[idx(a, b)] = encode(poly_trim(std::move(sum)), p_);
      mul_[idx(a, b)] = encode(poly_mul_mod(pa, pb, irreducible, p_), p_);
    }
  }
  for (int a = 0; a < q_; ++a) {
    for (int b = 0; b < q_; ++b) {
      if (add_[idx(a, b)] == 0) neg_[a] = b;
      if (mul_[idx(a, b)] == 1) inv_[a] = b;
    }
  }
}

int GaloisField::inv(int a) const {
  if (a == 0 || inv_[a] < 0) fail(ErrorCode::BadArgs, "inverse of non-unit");
  return inv_[a];
}

std::string SubspaceCode::to_string() const {
  std::string s;
  for (size_t r = 0; r < rows.size(); ++r) {
    if (r) s += '|';
    for (int v : rows[r]) s += static_cast<char>('0' + v);
  }
  if (rows.empty()) s = "0";
  return s;
}

bool SubspaceCode::operator<(const SubspaceCode& o) const {
  if (rows.size() != o.rows.size()) return rows.size() < o.rows.size();
  return rows < o.rows;
}

SubspaceCode rref_code(const GaloisField& gf, int n, std::vector<std::vector<int>> vectors) {
  std::vector<std::vector<int>> rows;
  for (auto& v : vectors) {
    // Reduce v against the current rows, insert if independent.
    for (const auto& row : rows) {
      int pivot = 0;
      while (row[pivot] == 0) ++pivot;
      if (v[pivot] != 0) {
        const int c = v[pivot];
        for (int j = 0; j < n; ++j) v[j] = gf.sub(v[j], gf.mul(c, row[j]));
      }
    }
    int pivot = -1;
    for (int j = 0; j < n; ++j) {
      if (v[j] != 0) {
        pivot = j;
        break;
      }
    }
    if (pivot < 0) continue;
    const int inv = gf.inv(v[pivot]);
    for (int j = 0; j < n; ++j) v[j] = gf.mul(inv, v[j]);
    // Eliminate the new pivot from existing rows.
    for (auto& row : rows) {
      const int c = row[pivot];
      if (c != 0)
        for (int j = 0; j < n; ++j) row[j] = gf.sub(row[j], gf.mul(c, v[j]));
    }
    rows.push_back(std::move(v));
  }
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    int pa = 0, pb = 0;
    while (a[pa] == 0) ++pa;
    while (b[pb] == 0) ++pb;
    return pa < pb;
  });
  return SubspaceCode{n, std::move(rows)};
}

bool contains_vector(const GaloisField& gf, const SubspaceCode& code, std::vector<int> v) {
  for (const auto& row : code.rows) {
    int pivot = 0;
    while (row[pivot] == 0) ++pivot;
    if (v[pivot] != 0) {
      const int c = v[pivot];
      for (int j = 0; j < code.n; ++j) v[j] = gf.sub(v[j], gf.mul(c, row[j]));
    }
  }
  return std::all_of(v.begin(), v.end(), [](int x) { return x == 0; });
}

bool contains_subspace(const GaloisField& gf, const SubspaceCode& outer, const SubspaceCode& inner) {
  for (const auto& row : inner.rows)
    if (!contains_vector(gf, outer, row)) return false;
  return true;
}

namespace {

void enumerate_rref(const GaloisField& gf, int n, int k,
                    const std::vector<int>& column_of,  // local column -> ambient column
                    std::vector<SubspaceCode>& out) {
  const int q = gf.q();
  if (k == 0) {
    out.push_back(SubspaceCode{n, {}});
    return;
  }
  if (k > static_cast<int>(column_of.size())) return;
  const int s = static_cast<int>(column_of.size());
  std::vector<int> pivots(k);
  std::iota(pivots.begin(), pivots.end(), 0);
  while (true) {
    // Free positions: (row i, local column j) with j > pivots[i], j not a pivot.
    std::vector<bool> is_pivot(s, false);
    for (int c : pivots) is_pivot[c] = true;
    std::vector<std::pair<int, int>> free_pos;
    for (int i = 0; i < k; ++i)
      for (int j = pivots[i] + 1; j < s; ++j)
        if (!is_pivot[j]) free_pos.emplace_back(i, j);

    std::vector<int> values(free_pos.size(), 0);
    while (true) {
      SubspaceCode code;
      code.n = n;
      code.rows.assign(k, std::vector<int>(n, 0));
      for (int i = 0; i < k; ++i) code.rows[i][column_of[pivots[i]]] = 1;
      for (size_t t = 0; t < free_pos.size(); ++t)
        code.rows[free_pos[t].first][column_of[free_pos[t].second]] = values[t];
      out.push_back(std::move(code));

      int carry = static_cast<int>(values.size()) - 1;
      while (carry >= 0 && ++values[carry] == q) values[carry--] = 0;
      if (carry < 0) break;
    }

    // Next pivot combination in lexicographic order.
    int i = k - 1;
    while (i >= 0 && pivots[i] == s - k + i) --i;
    if (i < 0) break;
    ++pivots[i];
    for (int j = i + 1; j < k; ++j) pivots[j] = pivots[j - 1] + 1;
  }
}

}  // namespace

std::vector<SubspaceCode> enumerate_subspaces(const GaloisField& gf, int n, int k) {
  std::vector<int> cols(n);
  std::iota(cols.begin(), cols.end(), 0);
  std::vector<SubspaceCode> out;
  enumerate_rref(gf, n, k, cols, out);
  return out;
}

std::vector<SubspaceCode> enumerate_subspaces_supported(const GaloisField& gf, int n, int k,
                                                        const std::vector<int>& support) {
  std::vector<int> cols = support;
  std::sort(cols.begin(), cols.end());
  std::vector<SubspaceCode> out;
  enumerate_rref(gf, n, k, cols, out);
  return out;
}

long long gaussian_binomial(int n, int k, int q) {
  if (n < 0 || k < 0 || k > n || q < 2 || !GaloisField::is_prime_power(q))
    fail(ErrorCode::BadArgs, "gaussian_binomial arguments out of range");
  // Pascal-style recurrence keeps everything in exact integers.
  std::vector<long long> row(k + 1, 0);
  row[0] = 1;
  for (int m = 1; m <= n; ++m) {
    long long qpow = 1;
    std::vector<long long> next(k + 1, 0);
    next[0] = 1;
    for (int j = 1; j <= std::min(k, m); ++j) {
      if (__builtin_mul_overflow(qpow, static_cast<long long>(q), &qpow))
        fail(ErrorCode::BadArgs, "gaussian_binomial overflow");
      long long term = 0;
      if (__builtin_mul_overflow(qpow, row[j], &term) || __builtin_add_overflow(row[j - 1], term, &next[j]))
        fail(ErrorCode::BadArgs, "gaussian_binomial overflow");
    }
    row = std::move(next);
  }
  return row[k];
}

}  // namespace posethdx
