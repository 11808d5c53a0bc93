#include <doctest.h>

#include <set>

#include "posethdx/errors.hpp"
#include "posethdx/gf.hpp"

using namespace posethdx;

TEST_CASE("field axioms hold in GF(q) for q = 2, 3, 4, 9") {
  for (int q : {2, 3, 4, 9}) {
    const GaloisField gf(q);
    for (int a = 0; a < q; ++a) {
      CHECK(gf.add(a, gf.neg(a)) == 0);
      if (a != 0) CHECK(gf.mul(a, gf.inv(a)) == 1);
      for (int b = 0; b < q; ++b) {
        CHECK(gf.add(a, b) == gf.add(b, a));
        CHECK(gf.mul(a, b) == gf.mul(b, a));
        for (int c = 0; c < q; ++c) {
          CHECK(gf.mul(a, gf.add(b, c)) == gf.add(gf.mul(a, b), gf.mul(a, c)));
        }
      }
    }
  }
  CHECK_THROWS_AS(GaloisField(6), Error);
}

TEST_CASE("gaussian binomial values") {
  CHECK(gaussian_binomial(3, 1, 2) == 7);
  CHECK(gaussian_binomial(4, 2, 2) == 35);
  CHECK(gaussian_binomial(5, 0, 3) == 1);
  CHECK(gaussian_binomial(5, 5, 3) == 1);
  CHECK(gaussian_binomial(5, 2, 3) == 1210);
  CHECK_THROWS_AS(gaussian_binomial(3, 4, 2), Error);
  CHECK_THROWS_AS(gaussian_binomial(3, 1, 6), Error);
}

namespace {

// Independent count of 2-dimensional subspaces of F_2^4: spans enumerated as
// vector sets, no echelon forms involved.
int count_planes_by_span() {
  std::set<std::set<int>> spans;
  for (int u = 1; u < 16; ++u) {
    for (int v = 1; v < 16; ++v) {
      if (v == u) continue;
      std::set<int> span{0, u, v, u ^ v};
      if (span.size() == 4) spans.insert(span);
    }
  }
  return static_cast<int>(spans.size());
}

}  // namespace

TEST_CASE("subspace enumeration matches the span-count oracle") {
  const GaloisField gf(2);
  const auto planes = enumerate_subspaces(gf, 4, 2);
  CHECK(static_cast<int>(planes.size()) == count_planes_by_span());
  CHECK(static_cast<long long>(planes.size()) == gaussian_binomial(4, 2, 2));
  // Codes are canonical: all distinct.
  std::set<std::string> keys;
  for (const auto& code : planes) keys.insert(code.to_string());
  CHECK(keys.size() == planes.size());
}

TEST_CASE("enumeration sizes match gaussian binomials over q = 2, 3") {
  for (int q : {2, 3}) {
    const GaloisField gf(q);
    for (int n = 1; n <= 4; ++n) {
      for (int k = 0; k <= n; ++k) {
        CHECK(static_cast<long long>(enumerate_subspaces(gf, n, k).size()) ==
              gaussian_binomial(n, k, q));
      }
    }
  }
}

TEST_CASE("rref canonicalization and containment") {
  const GaloisField gf(2);
  // Two spanning sets of the same plane in F_2^3.
  const auto a = rref_code(gf, 3, {{1, 1, 0}, {0, 1, 1}});
  const auto b = rref_code(gf, 3, {{1, 0, 1}, {1, 1, 0}});
  CHECK(a == b);
  const auto whole = rref_code(gf, 3, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  CHECK(contains_subspace(gf, whole, a));
  CHECK_FALSE(contains_subspace(gf, a, whole));
  const auto line = rref_code(gf, 3, {{1, 1, 0}});
  CHECK(contains_subspace(gf, a, line));
}

TEST_CASE("supported enumeration stays inside the coordinate subspace") {
  const GaloisField gf(2);
  const auto lines = enumerate_subspaces_supported(gf, 5, 1, {1, 3});
  CHECK(lines.size() == 3);  // lines of a 2-dimensional coordinate space
  for (const auto& code : lines) {
    for (const auto& row : code.rows) {
      CHECK(row[0] == 0);
      CHECK(row[2] == 0);
      CHECK(row[4] == 0);
    }
  }
}
