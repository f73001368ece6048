#include <catch2/catch_amalgamated.hpp>

#include "l2hodge/leray.hpp"

using namespace l2hodge;

namespace {

// Hopf-type circle bundle S^1 -> S^3/Z_m -> S^2 (rationally S^3): two rows,
// d2 : E2^{0,1} -> E2^{2,0} of rank 1.
LerayData hopf_leray() {
  LerayData l = LerayData::product(Dims{1, 0, 1}, Dims{1, 1});
  LerayDifferential d;
  d.r = 2;
  d.p = 0;
  d.q = 1;
  d.matrix = RatMatrix(1, 1);
  d.matrix.at(0, 0) = 1;
  l.differentials.push_back(d);
  l.abutment_check = Dims{1, 0, 0, 1};
  return l;
}

}  // namespace

TEST_CASE("product fibration with no truncation reproduces Kunneth") {
  // dM = S^2 x T^2.
  Dims betti_B{1, 0, 1}, betti_F{1, 2, 1};
  LerayData l = LerayData::product(betti_B, betti_F);
  Dims dims = truncated_leray(l, 3, Perversity{-1}, 5);
  Dims expect(5, 0);
  for (Count p = 0; p <= 2; ++p)
    for (Count q = 0; q <= 2; ++q)
      expect[static_cast<std::size_t>(p + q)] +=
          betti_B[static_cast<std::size_t>(p)] *
          betti_F[static_cast<std::size_t>(q)];
  CHECK(dims == expect);
  CHECK(dims == Dims{1, 2, 2, 2, 1});
}

TEST_CASE("truncation kills high fibre rows") {
  // Trivial circle bundle over S^2, j = 0, ell = 2: rows q >= 1 die.
  LerayData l = LerayData::product(Dims{1, 0, 1}, Dims{1, 1});
  CHECK(truncated_leray(l, 2, Perversity{0}, 4) == Dims{1, 0, 1, 0});
}

TEST_CASE("full truncation gives zero in every degree") {
  LerayData l = LerayData::product(Dims{1, 0, 1}, Dims{1, 1});
  for (Count j = 1; j <= 3; ++j)  // j >= ell-1 = 1
    CHECK(truncated_leray(l, 2, Perversity{j}, 4) == Dims{0, 0, 0, 0});
}

TEST_CASE("nonzero d2 collapses the Hopf bundle to S^3") {
  LerayData l = hopf_leray();
  SpectralResult full = run_spectral(l, std::nullopt);
  CHECK(full.degree_dims(4) == Dims{1, 0, 0, 1});
  check_abutment(l, full);

  // Truncating at q <= 0 removes the differential: the kept row survives
  // untouched and the cone-bundle cohomology is that of the disk bundle.
  CHECK(truncated_leray(l, 2, Perversity{0}, 4) == Dims{1, 0, 1, 0});
  // No truncation: S^3.
  CHECK(truncated_leray(l, 2, Perversity{-2}, 4) == Dims{1, 0, 0, 1});
}

TEST_CASE("abutment mismatch is reported") {
  LerayData l = hopf_leray();
  l.abutment_check = Dims{1, 0, 1, 1};  // corrupted
  SpectralResult full = run_spectral(l, std::nullopt);
  CHECK_THROWS_AS(check_abutment(l, full), ValidationError);
}

TEST_CASE("differential shape mismatches are rejected") {
  LerayData l = hopf_leray();
  l.differentials[0].matrix = RatMatrix(2, 1);
  CHECK_THROWS_AS(run_spectral(l, std::nullopt), ValidationError);

  LerayData m = hopf_leray();
  m.differentials[0].p = 1;  // target (3,0) outside the grid
  CHECK_THROWS_AS(run_spectral(m, std::nullopt), ValidationError);
}

TEST_CASE("composite differentials must vanish") {
  // Three-row grid admitting d2 twice: (0,2) -> (2,1) -> (4,0).
  LerayData l;
  l.e2 = {Dims{1, 0, 0, 0, 1}, Dims{0, 0, 1, 0, 0}, Dims{1, 0, 0, 0, 0}};
  LerayDifferential a;
  a.r = 2;
  a.p = 0;
  a.q = 2;
  a.matrix = RatMatrix(1, 1);
  a.matrix.at(0, 0) = 1;
  LerayDifferential c;
  c.r = 2;
  c.p = 2;
  c.q = 1;
  c.matrix = RatMatrix(1, 1);
  c.matrix.at(0, 0) = 1;
  l.differentials = {a, c};
  CHECK_THROWS_AS(run_spectral(l, std::nullopt), ValidationError);

  // With a zero second arrow the sequence runs; the middle cell dies into
  // its image and the corner survives.
  l.differentials[1].matrix.at(0, 0) = 0;
  SpectralResult r = run_spectral(l, std::nullopt);
  CHECK(r.cell_dim(2, 1) == 0);
  CHECK(r.cell_dim(4, 0) == 1);  // nothing kills the corner once the arrow is zero
  CHECK(r.cell_dim(0, 2) == 0);
  CHECK(r.cell_dim(0, 0) == 1);
}

TEST_CASE("higher-page differential acts on the recomputed page") {
  // d3 : E3^{0,2} -> E3^{3,0} on a grid where both cells survive page 2.
  LerayData l;
  l.e2 = {Dims{1, 0, 0, 2}, Dims{0, 0, 0, 0}, Dims{1, 0, 0, 0}};
  LerayDifferential d;
  d.r = 3;
  d.p = 0;
  d.q = 2;
  d.matrix = RatMatrix(2, 1);
  d.matrix.at(0, 0) = 1;
  l.differentials = {d};
  SpectralResult r = run_spectral(l, std::nullopt);
  CHECK(r.cell_dim(0, 2) == 0);
  CHECK(r.cell_dim(3, 0) == 1);
  CHECK(r.degree_dims(4) == Dims{1, 0, 0, 1});
}
