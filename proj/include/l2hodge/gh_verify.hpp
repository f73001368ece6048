#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "l2hodge/gibbons_hawking.hpp"

namespace l2hodge::gh {

/// Results of the numerical verification suite for one monopole
/// configuration: pointwise metric/duality checks, finite-difference
/// closedness (the independent oracle), cross-gauge agreement, and the L^2
/// Gram quadrature with its certificate.
struct GhVerification {
  int points = 0;
  double sigma = 0.0;  // measured self-duality sign, frozen after first use
  double max_det_rel_err = 0.0;
  double max_duality_resid = 0.0;    // relative, against frozen sigma
  double max_closedness_resid = 0.0; // FD exterior derivative, h = 1e-4
  double max_gauge_resid = 0.0;      // invariant-coframe mismatch
  GramResult gram;
  std::vector<double> gram_eigenvalues;
  bool rank_ok = false;
  bool cauchy_ok = false;
  bool diagonal_monotone = false;

  bool passed() const {
    return points >= 100 && max_det_rel_err < 1e-12 &&
           max_duality_resid < 1e-10 && max_closedness_resid < 1e-6 &&
           max_gauge_resid < 1e-10 && rank_ok && cauchy_ok;
  }
};

namespace detail_verify {

inline Vec3 sample_point(std::mt19937& rng, const MonopoleConfig& c) {
  std::uniform_real_distribution<double> u(-6.0, 6.0);
  for (;;) {
    Vec3 x{u(rng), u(rng), u(rng)};
    if (x.norm() < 0.4 || x.norm() > 6.0) continue;
    bool ok = true;
    for (const Vec3& p : c.points) {
      if ((x - p).norm() < 0.3) ok = false;
      if (string_distance(x - p, StringGauge::Lower) < 0.05) ok = false;
      if (string_distance(x - p, StringGauge::Upper) < 0.05) ok = false;
    }
    if (ok) return x;
  }
}

inline double fd_closedness(const MonopoleConfig& c, std::size_t i,
                            const Vec3& x, double h) {
  auto om = [&](const Vec3& y) { return omega_at(c, i, ChartPoint{y, 0.0}); };
  auto d_of = [&](int slot, int dir) {
    Vec3 xp = x, xm = x;
    xp[dir] += h;
    xm[dir] -= h;
    return (om(xp)[slot] - om(xm)[slot]) / (2 * h);
  };
  double d123 = d_of(pair_slot(1, 2), 0) - d_of(pair_slot(0, 2), 1) +
                d_of(pair_slot(0, 1), 2);
  double d12t = d_of(pair_slot(1, 3), 0) - d_of(pair_slot(0, 3), 1);
  double d13t = d_of(pair_slot(2, 3), 0) - d_of(pair_slot(0, 3), 2);
  double d23t = d_of(pair_slot(2, 3), 1) - d_of(pair_slot(1, 3), 2);
  return std::sqrt(d123 * d123 + d12t * d12t + d13t * d13t + d23t * d23t);
}

inline double gauge_mismatch(const MonopoleConfig& c, std::size_t i,
                             const Vec3& x) {
  TwoFormValue lo = omega_at(c, i, ChartPoint{x, 0.0}, StringGauge::Lower);
  TwoFormValue up = omega_at(c, i, ChartPoint{x, 0.0}, StringGauge::Upper);
  Vec3 alo = alpha_at(c, x, StringGauge::Lower);
  Vec3 aup = alpha_at(c, x, StringGauge::Upper);
  auto invariant = [&](const TwoFormValue& om, const Vec3& a) {
    std::vector<double> v(6);
    // dx^dx block moved to the coframe {dx, dtheta+alpha}.
    v[0] = om[pair_slot(0, 1)] -
           (om[pair_slot(0, 3)] * a[1] - om[pair_slot(1, 3)] * a[0]);
    v[1] = om[pair_slot(0, 2)] -
           (om[pair_slot(0, 3)] * a[2] - om[pair_slot(2, 3)] * a[0]);
    v[2] = om[pair_slot(1, 2)] -
           (om[pair_slot(1, 3)] * a[2] - om[pair_slot(2, 3)] * a[1]);
    v[3] = om[pair_slot(0, 3)];
    v[4] = om[pair_slot(1, 3)];
    v[5] = om[pair_slot(2, 3)];
    return v;
  };
  std::vector<double> a = invariant(lo, alo), b = invariant(up, aup);
  double num = 0, den = 0;
  for (int s = 0; s < 6; ++s) {
    num += (a[static_cast<std::size_t>(s)] - b[static_cast<std::size_t>(s)]) *
           (a[static_cast<std::size_t>(s)] - b[static_cast<std::size_t>(s)]);
    den += a[static_cast<std::size_t>(s)] * a[static_cast<std::size_t>(s)];
  }
  return std::sqrt(num / den);
}

}  // namespace detail_verify

/// Runs the whole numerical suite. The self-duality sign is measured on the
/// first sample and then frozen; callers comparing several configurations
/// should assert the signs agree.
inline GhVerification gh_verify(const MonopoleConfig& c,
                                const QuadratureSpec& spec, int npoints = 120,
                                unsigned seed = 20260810u) {
  using namespace detail_verify;
  c.validate();
  GhVerification out;
  std::mt19937 rng(seed);
  const double h = 1e-4;

  for (int s = 0; s < npoints; ++s) {
    Vec3 x = sample_point(rng, c);
    ChartPoint pt{x, 0.15};
    Metric4 g = metric_at(c, pt);
    double v = 1.0;
    for (const Vec3& p : c.points) v += 2.0 * c.m / (x - p).norm();
    out.max_det_rel_err = std::max(out.max_det_rel_err,
                                   std::fabs(det4(g) - v * v) / (v * v));
    for (std::size_t i = 0; i < c.points.size(); ++i) {
      TwoFormValue om = omega_at(c, i, pt);
      TwoFormValue st = star2(g, om);
      if (out.points == 0 && i == 0) {
        double rp = 0, rm = 0;
        for (int slot = 0; slot < 6; ++slot) {
          rp += (st[slot] - om[slot]) * (st[slot] - om[slot]);
          rm += (st[slot] + om[slot]) * (st[slot] + om[slot]);
        }
        out.sigma = rp <= rm ? 1.0 : -1.0;
      }
      double resid = 0, norm = 0;
      for (int slot = 0; slot < 6; ++slot) {
        double d = st[slot] - out.sigma * om[slot];
        resid += d * d;
        norm += om[slot] * om[slot];
      }
      out.max_duality_resid =
          std::max(out.max_duality_resid, std::sqrt(resid / norm));
      out.max_closedness_resid =
          std::max(out.max_closedness_resid, fd_closedness(c, i, x, h));
      out.max_gauge_resid =
          std::max(out.max_gauge_resid, gauge_mismatch(c, i, x));
    }
    ++out.points;
  }

  out.gram = l2_gram(c, spec);
  out.cauchy_ok = out.gram.certificate.cauchy_decreasing;
  out.diagonal_monotone = out.gram.certificate.diagonal_monotone;
  out.gram_eigenvalues = sym_eigenvalues(out.gram.gram, out.gram.k);
  out.rank_ok = out.gram_eigenvalues.front() > 0 &&
                out.gram_eigenvalues.front() >
                    1e-8 * out.gram_eigenvalues.back();
  return out;
}

}  // namespace l2hodge::gh
