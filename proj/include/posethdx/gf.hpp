#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace posethdx {

// Arithmetic tables for GF(q), q = p^e a prime power. Elements are encoded
// as 0..q-1; for e > 1 the encoding is the base-p digit expansion of the
// polynomial representative. The reducing polynomial defaults to the
// lexicographically smallest monic irreducible of degree e over F_p and can
// be overridden with custom coefficients.
class GaloisField {
 public:
  explicit GaloisField(int q);
  GaloisField(int q, const std::vector<int>& irreducible_coeffs);

  int q() const { return q_; }
  int characteristic() const { return p_; }
  int degree() const { return e_; }

  int add(int a, int b) const { return add_[idx(a, b)]; }
  int sub(int a, int b) const { return add(a, neg_[b]); }
  int neg(int a) const { return neg_[a]; }
  int mul(int a, int b) const { return mul_[idx(a, b)]; }
  int inv(int a) const;

  static bool is_prime_power(int q);

 private:
  void build_tables(const std::vector<int>& irreducible);
  int idx(int a, int b) const { return a * q_ + b; }

  int q_ = 0;
  int p_ = 0;
  int e_ = 0;
  std::vector<int> add_;
  std::vector<int> mul_;
  std::vector<int> neg_;
  std::vector<int> inv_;
};

// A subspace of F_q^n identified by its reduced-row-echelon-form basis.
// RREF is the unique canonical representative, so two codes are equal as
// subspaces iff their row data is identical.
struct SubspaceCode {
  int n = 0;
  std::vector<std::vector<int>> rows;  // RREF, each row length n, no zero rows

  int dim() const { return static_cast<int>(rows.size()); }

  // Row-major digits, rows joined by '|'.
  std::string to_string() const;

  bool operator==(const SubspaceCode& o) const { return n == o.n && rows == o.rows; }
  bool operator<(const SubspaceCode& o) const;
};

// Reduce an arbitrary spanning set to the canonical RREF code.
SubspaceCode rref_code(const GaloisField& gf, int n, std::vector<std::vector<int>> vectors);

// Membership of a vector in the row space of an RREF code.
bool contains_vector(const GaloisField& gf, const SubspaceCode& code, std::vector<int> v);

// Subspace containment: every row of `inner` lies in `outer`.
bool contains_subspace(const GaloisField& gf, const SubspaceCode& outer, const SubspaceCode& inner);

// All k-dimensional subspaces of F_q^n, enumerated in a deterministic order.
std::vector<SubspaceCode> enumerate_subspaces(const GaloisField& gf, int n, int k);

// All subspaces of the coordinate subspace spanned by {e_i : i in support},
// of the given dimension, as codes in the ambient F_q^n.
std::vector<SubspaceCode> enumerate_subspaces_supported(const GaloisField& gf, int n, int k,
                                                        const std::vector<int>& support);

// Number of k-dimensional subspaces of F_q^n (Gaussian binomial).
long long gaussian_binomial(int n, int k, int q);

}  // namespace posethdx
