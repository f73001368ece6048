#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "l2hodge/linalg.hpp"

using namespace l2hodge;

namespace {

RatMatrix make(Count r, Count c, std::vector<long long> v) {
  std::vector<Rat> e(v.begin(), v.end());
  return RatMatrix(r, c, std::move(e));
}

// Small random rational matrices for the property tests.
RatMatrix random_matrix(std::mt19937& rng, Count r, Count c) {
  std::uniform_int_distribution<int> num(-5, 5);
  std::uniform_int_distribution<int> den(1, 4);
  RatMatrix m(r, c);
  for (Count i = 0; i < r; ++i)
    for (Count j = 0; j < c; ++j) m.at(i, j) = Rat(num(rng), den(rng));
  return m;
}

RatMatrix random_invertible(std::mt19937& rng, Count n) {
  for (;;) {
    RatMatrix s = random_matrix(rng, n, n);
    if (rank(s) == n) return s;
  }
}

}  // namespace

TEST_CASE("rank on pinned examples") {
  CHECK(rank(RatMatrix::identity(2)) == 2);
  CHECK(rank(RatMatrix(2, 2)) == 0);
  CHECK(rank(make(2, 2, {1, 2, 2, 4})) == 1);
  CHECK(rank(RatMatrix()) == 0);
}

TEST_CASE("kernel_dim on pinned examples") {
  CHECK(kernel_dim(RatMatrix::identity(3)) == 0);
  CHECK(kernel_dim(RatMatrix(2, 3)) == 3);
  CHECK(kernel_dim(make(2, 3, {1, 1, 0, 0, 0, 1})) == 1);
}

TEST_CASE("kernel_basis spans the kernel") {
  RatMatrix m = make(2, 3, {1, 1, 0, 0, 0, 1});
  RatMatrix k = kernel_basis(m);
  REQUIRE(k.cols() == 1);
  CHECK((m * k).is_zero());
  CHECK(rank(k) == 1);
}

TEST_CASE("inertia on pinned examples") {
  RatMatrix d(3, 3);
  d.at(0, 0) = 1;
  d.at(1, 1) = -1;
  CHECK(inertia(d) == InertiaTriple{1, 1, 1});

  // Negative of the A2 Cartan matrix: negative definite.
  CHECK(inertia(make(2, 2, {-2, 1, 1, -2})) == InertiaTriple{0, 2, 0});

  CHECK(inertia(make(1, 1, {0})) == InertiaTriple{0, 0, 1});
  CHECK(inertia(RatMatrix()) == InertiaTriple{0, 0, 0});
}

TEST_CASE("inertia handles hyperbolic planes without diagonal pivots") {
  CHECK(inertia(make(2, 2, {0, 1, 1, 0})) == InertiaTriple{1, 1, 0});
  // Zero diagonal, rank 2, trace 0.
  CHECK(inertia(make(3, 3, {0, 0, 1, 0, 0, 2, 1, 2, 0})) ==
        InertiaTriple{1, 1, 1});
}

TEST_CASE("inertia rejects non-symmetric input") {
  CHECK_THROWS_AS(inertia(make(2, 2, {0, 1, 0, 0})), ValidationError);
  CHECK_THROWS_AS(inertia(RatMatrix(2, 3)), ValidationError);
}

TEST_CASE("rank equals rank of transpose") {
  std::mt19937 rng(20260810);
  for (int it = 0; it < 60; ++it) {
    RatMatrix m = random_matrix(rng, 1 + it % 5, 1 + (it * 7) % 5);
    CHECK(rank(m) == rank(m.transposed()));
  }
}

TEST_CASE("rank-nullity identity") {
  std::mt19937 rng(7);
  for (int it = 0; it < 60; ++it) {
    RatMatrix m = random_matrix(rng, 1 + it % 4, 1 + (it * 3) % 6);
    CHECK(kernel_dim(m) + rank(m) == m.cols());
  }
}

TEST_CASE("inertia is congruence invariant") {
  std::mt19937 rng(42);
  for (int it = 0; it < 30; ++it) {
    Count n = 2 + it % 3;
    RatMatrix a = random_matrix(rng, n, n);
    // Symmetrize.
    RatMatrix sym(n, n);
    for (Count i = 0; i < n; ++i)
      for (Count j = 0; j < n; ++j) sym.at(i, j) = a.at(i, j) + a.at(j, i);
    RatMatrix s = random_invertible(rng, n);
    RatMatrix conj = s.transposed() * sym * s;
    CHECK(inertia(conj) == inertia(sym));
  }
}

TEST_CASE("column span intersection dimension") {
  RatMatrix a = make(3, 1, {1, 0, 0});
  RatMatrix b = make(3, 2, {1, 0, 0, 1, 0, 0});
  CHECK(column_span_intersection_dim(a, b) == 1);
  RatMatrix c = make(3, 1, {0, 0, 1});
  CHECK(column_span_intersection_dim(a, c) == 0);
}
