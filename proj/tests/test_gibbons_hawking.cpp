#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "l2hodge/gibbons_hawking.hpp"

using namespace l2hodge;
using namespace l2hodge::gh;

namespace {

MonopoleConfig taub_nut() {
  MonopoleConfig c;
  c.m = 1.0;
  c.points = {Vec3{0, 0, 0}};
  return c;
}

MonopoleConfig two_centre() {
  MonopoleConfig c;
  c.m = 0.5;
  c.points = {Vec3{0, 0, 1}, Vec3{0, 0, -1}};
  return c;
}

Vec3 random_admissible(std::mt19937& rng, const MonopoleConfig& c,
                       double rmin = 0.3, double rmax = 6.0,
                       double clearance = 5e-2) {
  std::uniform_real_distribution<double> u(-1, 1);
  for (;;) {
    Vec3 x{u(rng) * rmax, u(rng) * rmax, u(rng) * rmax};
    if (x.norm() < rmin || x.norm() > rmax) continue;
    bool ok = true;
    for (const Vec3& p : c.points) {
      if ((x - p).norm() < 0.25) ok = false;
      if (string_distance(x - p, StringGauge::Lower) < clearance) ok = false;
      if (string_distance(x - p, StringGauge::Upper) < clearance) ok = false;
    }
    if (ok) return x;
  }
}

// Independent oracle: central finite differences of a vector field's curl.
Vec3 fd_curl(const MonopoleConfig& c, const Vec3& x, StringGauge g,
             double h = 1e-5) {
  auto comp = [&](const Vec3& y, int i) { return alpha_at(c, y, g)[i]; };
  auto d = [&](int i, int j) {
    Vec3 xp = x, xm = x;
    xp[j] += h;
    xm[j] -= h;
    return (comp(xp, i) - comp(xm, i)) / (2 * h);
  };
  // curl components: (d2 a3 - d3 a2, d3 a1 - d1 a3, d1 a2 - d2 a1)
  return {d(2, 1) - d(1, 2), d(0, 2) - d(2, 0), d(1, 0) - d(0, 1)};
}

}  // namespace

TEST_CASE("potential values and gradients") {
  MonopoleConfig c = taub_nut();
  PotentialValue p = potential(c, Vec3{2, 0, 0});
  CHECK(p.V == Catch::Approx(2.0));
  CHECK(p.gradV[0] == Catch::Approx(-0.5));
  CHECK(p.gradV[1] == 0.0);
  CHECK(p.gradV[2] == 0.0);

  // Decay at large radius.
  CHECK(potential(c, Vec3{1000, 0, 0}).V == Catch::Approx(1.0).margin(1e-2));

  // Symmetric two-centre configuration: axial gradient cancels between them.
  MonopoleConfig tc = two_centre();
  PotentialValue q = potential(tc, Vec3{0.5, 0, 0});
  CHECK(q.gradV[2] == Catch::Approx(0.0).margin(1e-14));

  CHECK_THROWS_AS(potential(c, Vec3{0, 0, 0}), SingularPointError);
}

TEST_CASE("alpha gauge properties") {
  MonopoleConfig c = taub_nut();
  // Lower-string gauge vanishes on the positive axis.
  Vec3 a = alpha_at(c, Vec3{0, 0, 3});
  CHECK(std::fabs(a[0]) < 1e-15);
  CHECK(std::fabs(a[1]) < 1e-15);
  CHECK(a[2] == 0.0);

  // Equatorial point at unit radius: phi-component magnitude 2m(1-cos t) = 2.
  Vec3 e = alpha_at(c, Vec3{1, 0, 0});
  double phi_comp = std::sqrt(e.dot(e));
  CHECK(phi_comp == Catch::Approx(2.0));

  // Chart error near the excluded half-line.
  CHECK_THROWS_AS(alpha_at(c, Vec3{1e-5, 0, -2}), ChartError);
  CHECK_THROWS_AS(alpha_at(c, Vec3{1e-5, 0, 2}, StringGauge::Upper),
                  ChartError);
}

TEST_CASE("finite-difference curl of alpha equals *dV") {
  std::mt19937 rng(99);
  for (const MonopoleConfig& c : {taub_nut(), two_centre()}) {
    for (int it = 0; it < 20; ++it) {
      Vec3 x = random_admissible(rng, c);
      PotentialValue p = potential(c, x);
      for (StringGauge g : {StringGauge::Lower, StringGauge::Upper}) {
        Vec3 curl = fd_curl(c, x, g);
        // d alpha = *dV: curl(alpha) = grad V as vector proxies.
        for (int i = 0; i < 3; ++i)
          CHECK(curl[i] == Catch::Approx(p.gradV[i]).margin(1e-6));
      }
    }
  }
}

TEST_CASE("metric structure at a pinned point") {
  MonopoleConfig c = taub_nut();
  ChartPoint pt{Vec3{2, 0, 0}, 0.0};
  Metric4 g = metric_at(c, pt);
  Vec3 a = alpha_at(c, pt.x);
  for (int i = 0; i < 3; ++i) {
    CHECK(g[3][i] == Catch::Approx(a[i] / 2.0).margin(1e-15));
    for (int j = 0; j < 3; ++j) {
      double expect = (i == j ? 2.0 : 0.0) + a[i] * a[j] / 2.0;
      CHECK(g[i][j] == Catch::Approx(expect));
    }
  }
  CHECK(g[3][3] == Catch::Approx(0.5));
}

TEST_CASE("det g = V^2 at random admissible points") {
  std::mt19937 rng(7);
  for (const MonopoleConfig& c : {taub_nut(), two_centre()}) {
    for (int it = 0; it < 120; ++it) {
      Vec3 x = random_admissible(rng, c);
      ChartPoint pt{x, 0.3};
      double det = det4(metric_at(c, pt));
      double v = potential(c, x).V;
      CHECK(std::fabs(det - v * v) <= 1e-12 * v * v);
    }
  }
}

TEST_CASE("omega for a single centre matches d(V^{-1}(dtheta+alpha))") {
  // For k = 1, dV_1 = dV, so Omega_1 = V^{-1} *dV - d(V_1/V) ^ eta exactly
  // equals the exterior derivative of V^{-1}(dtheta + alpha); check against
  // finite differences of that explicit potential form.
  MonopoleConfig c = taub_nut();
  std::mt19937 rng(13);
  auto xi = [&](const Vec3& y) {
    double v = potential(c, y).V;
    Vec3 a = alpha_at(c, y);
    // components of V^{-1}(dtheta + alpha) on (dx1, dx2, dx3, dtheta)
    return std::array<double, 4>{a[0] / v, a[1] / v, a[2] / v, 1.0 / v};
  };
  double h = 1e-5;
  for (int it = 0; it < 10; ++it) {
    Vec3 x = random_admissible(rng, c);
    TwoFormValue om = omega_at(c, 0, ChartPoint{x, 0.0});
    for (int s = 0; s < 6; ++s) {
      int a = kFormPairs[s][0], b = kFormPairs[s][1];
      double d_ab;
      if (b == 3) {
        // d(xi)_a,theta = -d_a xi_theta... theta-independent components:
        Vec3 xp = x, xm = x;
        xp[a] += h;
        xm[a] -= h;
        d_ab = (xi(xp)[3] - xi(xm)[3]) / (2 * h);
      } else {
        Vec3 xpa = x, xma = x, xpb = x, xmb = x;
        xpa[a] += h;
        xma[a] -= h;
        xpb[b] += h;
        xmb[b] -= h;
        d_ab = (xi(xpb)[1 * 0 + a] - xi(xmb)[a]) / (2 * h) * -1.0 +
               (xi(xpa)[b] - xi(xma)[b]) / (2 * h);
      }
      CHECK(om[s] == Catch::Approx(d_ab).margin(1e-6));
    }
  }
}

TEST_CASE("omega components are finite and nonzero at the pinned point") {
  MonopoleConfig c = taub_nut();
  TwoFormValue om = omega_at(c, 0, ChartPoint{Vec3{1, 0, 0}, 0.0});
  double n2 = om.norm2_plain();
  CHECK(std::isfinite(n2));
  CHECK(n2 > 1e-6);
}

TEST_CASE("omega is closed: finite-difference exterior derivative vanishes") {
  std::mt19937 rng(31);
  double h = 1e-4;
  for (const MonopoleConfig& c : {taub_nut(), two_centre()}) {
    for (Count i = 0; i < c.k(); ++i) {
      for (int it = 0; it < 12; ++it) {
        Vec3 x = random_admissible(rng, c);
        auto om = [&](const Vec3& y) {
          return omega_at(c, static_cast<std::size_t>(i), ChartPoint{y, 0.0});
        };
        // dOmega components: (abc) over spatial triples and (ab theta).
        auto d_of = [&](int slot, int dir) {
          Vec3 xp = x, xm = x;
          xp[dir] += h;
          xm[dir] -= h;
          return (om(xp)[slot] - om(xm)[slot]) / (2 * h);
        };
        double d123 = d_of(pair_slot(1, 2), 0) - d_of(pair_slot(0, 2), 1) +
                      d_of(pair_slot(0, 1), 2);
        CHECK(std::fabs(d123) < 1e-6);
        double d12t = d_of(pair_slot(1, 3), 0) - d_of(pair_slot(0, 3), 1);
        double d13t = d_of(pair_slot(2, 3), 0) - d_of(pair_slot(0, 3), 2);
        double d23t = d_of(pair_slot(2, 3), 1) - d_of(pair_slot(1, 3), 2);
        CHECK(std::fabs(d12t) < 1e-6);
        CHECK(std::fabs(d13t) < 1e-6);
        CHECK(std::fabs(d23t) < 1e-6);
      }
    }
  }
}

TEST_CASE("omega is anti-self-dual pointwise") {
  std::mt19937 rng(41);
  for (const MonopoleConfig& c : {taub_nut(), two_centre()}) {
    for (Count i = 0; i < c.k(); ++i) {
      for (int it = 0; it < 30; ++it) {
        Vec3 x = random_admissible(rng, c);
        ChartPoint pt{x, 0.1};
        TwoFormValue om = omega_at(c, static_cast<std::size_t>(i), pt);
        TwoFormValue st = star2(metric_at(c, pt), om);
        double resid = 0, norm = 0;
        for (int s = 0; s < 6; ++s) {
          resid += (st[s] + om[s]) * (st[s] + om[s]);
          norm += om[s] * om[s];
        }
        CHECK(std::sqrt(resid) <= 1e-10 * std::sqrt(norm));
      }
    }
  }
}

TEST_CASE("gauge independence in the invariant coframe") {
  std::mt19937 rng(59);
  MonopoleConfig c = two_centre();
  for (int it = 0; it < 25; ++it) {
    Vec3 x = random_admissible(rng, c);
    for (Count i = 0; i < c.k(); ++i) {
      // dx^dtheta block is chart-independent as printed.
      TwoFormValue lo = omega_at(c, static_cast<std::size_t>(i),
                                 ChartPoint{x, 0.0}, StringGauge::Lower);
      TwoFormValue up = omega_at(c, static_cast<std::size_t>(i),
                                 ChartPoint{x, 0.0}, StringGauge::Upper);
      for (int s = 3; s < 6; ++s)
        CHECK(lo[s] == Catch::Approx(up[s]).margin(1e-12));
      // Full agreement after moving the dx^dx block to the invariant
      // coframe {dx^dx, dx^(dtheta+alpha)}: B_ab = raw_ab - (C_a alpha_b -
      // C_b alpha_a) with C the dx^dtheta block.
      for (StringGauge g : {StringGauge::Lower, StringGauge::Upper}) {
        (void)g;
      }
      Vec3 alo = alpha_at(c, x, StringGauge::Lower);
      Vec3 aup = alpha_at(c, x, StringGauge::Upper);
      auto invariant_B = [&](const TwoFormValue& om, const Vec3& a) {
        std::array<double, 3> B;
        B[0] = om[pair_slot(0, 1)] -
               (om[pair_slot(0, 3)] * a[1] - om[pair_slot(1, 3)] * a[0]);
        B[1] = om[pair_slot(0, 2)] -
               (om[pair_slot(0, 3)] * a[2] - om[pair_slot(2, 3)] * a[0]);
        B[2] = om[pair_slot(1, 2)] -
               (om[pair_slot(1, 3)] * a[2] - om[pair_slot(2, 3)] * a[1]);
        return B;
      };
      auto blo = invariant_B(lo, alo);
      auto bup = invariant_B(up, aup);
      for (int s = 0; s < 3; ++s)
        CHECK(blo[static_cast<std::size_t>(s)] ==
              Catch::Approx(bup[static_cast<std::size_t>(s)]).margin(1e-10));
    }
  }
}

TEST_CASE("L2 Gram against the exact single-centre integral") {
  // For k = 1, m = 1 at the origin, the invariant integrand reduces to
  // 2 |grad(2/(r+2))|^2 (1 + 2/r), and
  //   G_11(R) = 2*pi * 64*pi * int_0^R r/(r+2)^3 dr
  //           = 64*pi^2 (1/4 - 1/(R+2) + 1/(R+2)^2),
  // an exact closed form derived by hand and frozen here as the oracle.
  MonopoleConfig c = taub_nut();
  QuadratureSpec spec;
  GramResult g = l2_gram(c, spec);
  double pi2 = M_PI * M_PI;
  for (std::size_t i = 0; i < spec.cutoffs.size(); ++i) {
    double R = spec.cutoffs[i];
    double exact = 64.0 * pi2 * (0.25 - 1.0 / (R + 2) + 1.0 / ((R + 2) * (R + 2)));
    CHECK(g.certificate.partials[i][0] ==
          Catch::Approx(exact).epsilon(1e-9));
  }
  // Frozen endpoints of the oracle evaluation.
  CHECK(g.certificate.partials[0][0] == Catch::Approx(109.6622711232).epsilon(1e-9));
  CHECK(g.at(0, 0) == Catch::Approx(143.2323541201).epsilon(1e-9));
}

TEST_CASE("L2 Gram matrix: positivity, rank, Cauchy tail") {
  QuadratureSpec spec;
  spec.cutoffs = {10.0, 20.0, 40.0};

  GramResult g1 = l2_gram(taub_nut(), spec);
  CHECK(g1.at(0, 0) > 0);
  CHECK(g1.certificate.cauchy_decreasing);
  CHECK(g1.certificate.diagonal_monotone);

  GramResult g2 = l2_gram(two_centre(), spec);
  auto ev = sym_eigenvalues(g2.gram, 2);
  CHECK(ev.front() > 1e-8 * ev.back());
  CHECK(ev.front() > 0);
  // Symmetry of the computed Gram matrix.
  CHECK(g2.at(0, 1) == Catch::Approx(g2.at(1, 0)).margin(1e-14));
}

TEST_CASE("zero form has zero Gram") {
  // Sanity for the quadrature plumbing: integrate the zero integrand by
  // scaling weights via an empty... the public surface has no zero form, so
  // assert bilinearity instead: G(c)_01 <= sqrt(G_00 G_11) (Cauchy-Schwarz).
  GramResult g = l2_gram(two_centre(), QuadratureSpec{{10.0, 20.0}, 1e-6, 18});
  CHECK(std::fabs(g.at(0, 1)) <= std::sqrt(g.at(0, 0) * g.at(1, 1)) + 1e-12);
}

TEST_CASE("coclosedness via finite differences of the starred form") {
  // Redundant consequence of anti-self-duality plus closedness: d(*Omega) =
  // -d(Omega), so its finite-difference residual must be small as well.
  std::mt19937 rng(77);
  double h = 1e-4;
  MonopoleConfig c = two_centre();
  for (Count i = 0; i < c.k(); ++i) {
    for (int it = 0; it < 8; ++it) {
      Vec3 x = random_admissible(rng, c);
      auto starred = [&](const Vec3& y) {
        ChartPoint pt{y, 0.0};
        return star2(metric_at(c, pt),
                     omega_at(c, static_cast<std::size_t>(i), pt));
      };
      auto d_of = [&](int slot, int dir) {
        Vec3 xp = x, xm = x;
        xp[dir] += h;
        xm[dir] -= h;
        return (starred(xp)[slot] - starred(xm)[slot]) / (2 * h);
      };
      double d123 = d_of(pair_slot(1, 2), 0) - d_of(pair_slot(0, 2), 1) +
                    d_of(pair_slot(0, 1), 2);
      double d12t = d_of(pair_slot(1, 3), 0) - d_of(pair_slot(0, 3), 1);
      double d13t = d_of(pair_slot(2, 3), 0) - d_of(pair_slot(0, 3), 2);
      double d23t = d_of(pair_slot(2, 3), 1) - d_of(pair_slot(1, 3), 2);
      CHECK(std::fabs(d123) < 1e-5);
      CHECK(std::fabs(d12t) < 1e-5);
      CHECK(std::fabs(d13t) < 1e-5);
      CHECK(std::fabs(d23t) < 1e-5);
    }
  }
}

TEST_CASE("configurations without monopole points are rejected") {
  MonopoleConfig none;
  none.m = 1.0;
  CHECK_THROWS_AS(none.validate(), ValidationError);
  CHECK_THROWS_AS(potential(none, Vec3{1, 0, 0}), ValidationError);

  MonopoleConfig dup;
  dup.m = 1.0;
  dup.points = {Vec3{0, 0, 0}, Vec3{0, 0, 0}};
  CHECK_THROWS_AS(dup.validate(), ValidationError);

  MonopoleConfig negmass;
  negmass.m = -1.0;
  negmass.points = {Vec3{0, 0, 0}};
  CHECK_THROWS_AS(negmass.validate(), ValidationError);
}
