#pragma once

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "l2hodge/gibbons_hawking.hpp"
#include "l2hodge/hodge.hpp"
#include "l2hodge/intersection.hpp"
#include "l2hodge/manifest.hpp"

namespace l2hodge {

struct CatalogEntry {
  std::string name;
  Manifest manifest;
  std::string provenance;
};

namespace detail_catalog {

inline RatMatrix mat(Count rows, Count cols, std::vector<long long> v = {}) {
  if (v.empty()) return RatMatrix(rows, cols);
  std::vector<Rat> e(v.begin(), v.end());
  return RatMatrix(rows, cols, std::move(e));
}

inline LerayData hopf_over_s2() {
  LerayData l = LerayData::product(Dims{1, 0, 1}, Dims{1, 1});
  LerayDifferential d;
  d.r = 2;
  d.p = 0;
  d.q = 1;
  d.matrix = mat(1, 1, {1});
  l.differentials.push_back(d);
  return l;
}

/// A_type ALF profile: the boundary lens space is rationally S^3, fibred
/// over S^2; the compactification adds the base sphere.
inline Manifest alf_base(Count rank_h2) {
  Manifest m;
  m.metric = MetricKind::FibredBoundary;
  m.profile.n = 4;
  m.profile.b = 2;
  m.profile.f = 1;
  m.profile.betti_M = {1, 0, rank_h2, 0, 0};
  m.profile.betti_dM = {1, 0, 0, 1};
  m.profile.betti_B = {1, 0, 1};
  m.profile.betti_F = {1, 1};
  m.profile.restriction = std::vector<RatMatrix>{
      mat(1, 1, {1}), mat(0, 0), mat(0, rank_h2), mat(1, 0)};
  m.leray = hopf_over_s2();
  m.hyperkahler_k = 1;
  return m;
}

/// A-type ALE profile: boundary rationally S^3, trivial fibre, scattering.
inline Manifest ale_base(Count rank_h2) {
  Manifest m;
  m.metric = MetricKind::Scattering;
  m.profile.n = 4;
  m.profile.b = 3;
  m.profile.f = 0;
  m.profile.betti_M = {1, 0, rank_h2, 0, 0};
  m.profile.betti_dM = {1, 0, 0, 1};
  m.profile.betti_B = {1, 0, 0, 1};
  m.profile.betti_F = {1};
  m.profile.restriction = std::vector<RatMatrix>{
      mat(1, 1, {1}), mat(0, 0), mat(0, rank_h2), mat(1, 0)};
  m.hyperkahler_k = 1;
  return m;
}

inline gh::MonopoleConfig monopoles_for(Count k) {
  gh::MonopoleConfig c;
  c.m = (k == 1) ? 1.0 : 0.5;
  switch (k) {
    case 1:
      c.points = {gh::Vec3{0, 0, 0}};
      break;
    case 2:
      c.points = {gh::Vec3{0.9, 0, 0.2}, gh::Vec3{-0.9, 0.1, -0.3}};
      break;
    case 3:
      c.points = {gh::Vec3{1, 0, 0}, gh::Vec3{-0.5, 0.8, 0.1},
                  gh::Vec3{-0.4, -0.9, -0.2}};
      break;
    default:
      c.points = {gh::Vec3{1, 0, 0}, gh::Vec3{-0.5, 0.8, 0.1},
                  gh::Vec3{-0.4, -0.9, -0.2}, gh::Vec3{0.1, 0.2, 1.1}};
      break;
  }
  return c;
}

}  // namespace detail_catalog

/// The shipped example registry. Betti inputs are derived from the named
/// compactifications and recorded as inputs with their derivations in the
/// provenance strings; expected dims make every entry a regression test.
inline std::vector<CatalogEntry> builtin_catalog() {
  using namespace detail_catalog;
  std::vector<CatalogEntry> out;

  // --- ALE A-type, k = number of cyclic conjugacy classes --------------
  for (Count k = 2; k <= 5; ++k) {
    Manifest m = ale_base(k - 1);
    m.name = "ale_A" + std::to_string(k);
    m.provenance =
        "minimal resolution of C^2/Z_" + std::to_string(k) +
        " with asymptotically conical metric; boundary lens space is a "
        "rational S^3; intersection form -Cartan(A_" + std::to_string(k - 1) +
        ")";
    m.pairing = PairingInput{negated(cartan_A(k - 1)), negated(cartan_A(k - 1))};
    m.expected = Dims{0, 0, k - 1, 0, 0};
    out.push_back({m.name, m, m.provenance});
  }

  // --- ALF A-type (multi-Taub-NUT), k monopole points -------------------
  for (Count k = 1; k <= 4; ++k) {
    Manifest m = alf_base(k - 1);
    m.name = "alf_A" + std::to_string(k);
    m.provenance =
        "multi-Taub-NUT with " + std::to_string(k) +
        " monopole points; compactification adds the base S^2, raising "
        "b_2 to " + std::to_string(k);
    m.pairing =
        PairingInput{negated(RatMatrix::identity(k)),
                     k >= 2 ? negated(cartan_A(k - 1)) : RatMatrix(0, 0)};
    m.monopoles = monopoles_for(k);
    m.expected = Dims{0, 0, k, 0, 0};
    out.push_back({m.name, m, m.provenance});
  }

  // --- ALF D-type with four conjugacy classes ---------------------------
  {
    Manifest m = alf_base(3);
    m.name = "alf_D4";
    m.provenance =
        "dihedral ALF instanton with four conjugacy classes; same "
        "compactification pattern as the cyclic family (base sphere added)";
    m.pairing = PairingInput{negated(RatMatrix::identity(4)), negated(cartan_D(3))};
    m.expected = Dims{0, 0, 4, 0, 0};
    out.push_back({m.name, m, m.provenance});
  }

  // --- Taub-NUT ---------------------------------------------------------
  {
    Manifest m = alf_base(0);
    m.name = "taub_nut";
    m.provenance =
        "one-centre ALF metric on R^4; ALF compactification is CP^2, whose "
        "degree-2 class sources the single harmonic form";
    // Explicit (identity) abutment coordinates, as an exemplar of the field.
    std::vector<RatMatrix> ident;
    for (Count kk = 0; kk < 4; ++kk)
      ident.push_back(RatMatrix::identity(m.profile.betti_dM[static_cast<std::size_t>(kk)]));
    m.boundary_maps = ident;
    m.pairing = PairingInput{negated(RatMatrix::identity(1)), RatMatrix(0, 0)};
    m.monopoles = monopoles_for(1);
    m.expected = Dims{0, 0, 1, 0, 0};
    out.push_back({m.name, m, m.provenance});
  }

  // --- Atiyah-Hitchin and its double cover -------------------------------
  {
    Manifest m;
    m.name = "atiyah_hitchin";
    m.metric = MetricKind::FibredBoundary;
    m.profile.n = 4;
    m.profile.b = 2;
    m.profile.f = 1;
    m.profile.betti_M = {1, 0, 0, 0, 0};
    m.profile.betti_dM = {1, 0, 0, 1};
    m.profile.betti_B = {1, 0, 0};  // RP^2 rationally
    m.profile.betti_F = {1, 1};
    m.profile.restriction = std::vector<RatMatrix>{mat(1, 1, {1}), mat(0, 0),
                                                   mat(0, 0), mat(1, 0)};
    LerayData l;
    l.e2 = {Dims{1, 0, 0}, Dims{0, 0, 1}};  // twisted circle row over RP^2
    m.leray = l;
    m.pairing = PairingInput{RatMatrix(0, 0), RatMatrix(0, 0)};
    m.hyperkahler_k = 1;
    m.expected = Dims{0, 0, 0, 0, 0};
    m.provenance =
        "two-monopole moduli space; compactification by RP^2 gives S^4, "
        "which has no middle cohomology";
    out.push_back({m.name, m, m.provenance});

    Manifest c = m;
    c.name = "atiyah_hitchin_cover";
    c.profile.betti_M = {1, 0, 1, 0, 0};
    c.profile.restriction = std::vector<RatMatrix>{mat(1, 1, {1}), mat(0, 0),
                                                   mat(0, 1), mat(1, 0)};
    c.pairing = PairingInput{negated(RatMatrix::identity(1)),
                             negated(RatMatrix::identity(1))};
    c.expected = Dims{0, 0, 1, 0, 0};
    c.provenance =
        "double cover of the two-monopole moduli space; compactification by "
        "RP^2 is CP^2 with one degree-2 class";
    out.push_back({c.name, c, c.provenance});
  }

  // --- Euclidean Schwarzschild -------------------------------------------
  {
    Manifest m;
    m.name = "schwarzschild";
    m.metric = MetricKind::FibredBoundary;
    m.profile.n = 4;
    m.profile.b = 2;
    m.profile.f = 1;
    m.profile.betti_M = {1, 0, 1, 0, 0};
    m.profile.betti_dM = {1, 1, 1, 1};
    m.profile.betti_B = {1, 0, 1};
    m.profile.betti_F = {1, 1};
    m.profile.restriction = std::vector<RatMatrix>{mat(1, 1, {1}), mat(1, 0),
                                                   mat(1, 1, {1}), mat(1, 0)};
    m.leray = LerayData::product(Dims{1, 0, 1}, Dims{1, 1});
    m.pairing = PairingInput{mat(2, 2, {1, 0, 0, -1}), RatMatrix(0, 0)};
    m.expected = Dims{0, 0, 2, 0, 0};
    m.provenance =
        "R^2 x S^2 with the Ricci-flat ALF metric (not hyperkahler); "
        "boundary S^1 x S^2 trivially fibred, compactification S^2 x S^2";
    out.push_back({m.name, m, m.provenance});
  }

  // --- ALG of type D4 hat -------------------------------------------------
  {
    Manifest m;
    m.name = "alg_D4";
    m.metric = MetricKind::FibredBoundary;
    m.profile.n = 4;
    m.profile.b = 1;
    m.profile.f = 2;
    m.profile.betti_M = {1, 0, 5, 0, 0};
    m.profile.betti_dM = {1, 1, 1, 1};
    m.profile.betti_B = {1, 1};
    m.profile.betti_F = {1, 2, 1};
    m.profile.restriction = std::vector<RatMatrix>{
        mat(1, 1, {1}), mat(1, 0), mat(1, 5, {1, 1, 1, 1, 2}), mat(1, 0)};
    LerayData l;
    l.e2 = {Dims{1, 1}, Dims{0, 0}, Dims{1, 1}};
    m.leray = l;
    m.pairing = PairingInput{negated(RatMatrix::identity(4)), negated(cartan_D(4))};
    m.hyperkahler_k = 1;
    m.expected = Dims{0, 0, 4, 0, 0};
    m.provenance =
        "elliptic fibration with one singular fibre of affine-D4 type; "
        "torus bundle at infinity is flat over S^1, so the monodromy "
        "invariants kill the middle row; intersection matrix has rank 4";
    out.push_back({m.name, m, m.provenance});
  }

  // --- Calabi metric on T*CP^2 -------------------------------------------
  {
    Manifest m;
    m.name = "calabi_tcpn";
    m.metric = MetricKind::Scattering;
    m.profile.n = 8;
    m.profile.b = 7;
    m.profile.f = 0;
    m.profile.betti_M = {1, 0, 1, 0, 1, 0, 0, 0, 0};
    m.profile.betti_dM = {1, 0, 1, 0, 0, 1, 0, 1};
    m.profile.betti_B = {1, 0, 1, 0, 0, 1, 0, 1};
    m.profile.betti_F = {1};
    m.profile.restriction = std::vector<RatMatrix>{
        mat(1, 1, {1}), mat(0, 0), mat(1, 1, {1}), mat(0, 0),
        mat(0, 1),      mat(1, 0), mat(0, 0),      mat(1, 0)};
    m.pairing = PairingInput{mat(1, 1, {1}), mat(1, 1, {1})};
    m.hyperkahler_k = 2;
    m.expected = Dims{0, 0, 0, 0, 1, 0, 0, 0, 0};
    m.provenance =
        "cotangent bundle of CP^2 with the asymptotically conical "
        "hyperkahler metric; middle cohomology of the zero section survives";
    out.push_back({m.name, m, m.provenance});
  }

  // --- Stenzel metric on T*S^4 --------------------------------------------
  {
    Manifest m;
    m.name = "stenzel_ts2k";
    m.metric = MetricKind::Scattering;
    m.profile.n = 8;
    m.profile.b = 7;
    m.profile.f = 0;
    m.profile.betti_M = {1, 0, 0, 0, 1, 0, 0, 0, 0};
    m.profile.betti_dM = {1, 0, 0, 0, 0, 0, 0, 1};  // unit bundle: rational S^7
    m.profile.betti_B = {1, 0, 0, 0, 0, 0, 0, 1};
    m.profile.betti_F = {1};
    m.profile.restriction = std::vector<RatMatrix>{
        mat(1, 1, {1}), mat(0, 0), mat(0, 0), mat(0, 0),
        mat(0, 1),      mat(0, 0), mat(0, 0), mat(1, 0)};
    m.pairing = PairingInput{mat(1, 1, {2}), mat(1, 1, {2})};
    m.expected = Dims{0, 0, 0, 0, 1, 0, 0, 0, 0};
    m.provenance =
        "cotangent bundle of S^4 with the asymptotically conical Ricci-flat "
        "metric; even-dimensional zero section pairs with itself by its "
        "Euler number";
    out.push_back({m.name, m, m.provenance});
  }

  // --- Rank-3 bundle over S^4 with the conical G2 metric -------------------
  {
    Manifest m;
    m.name = "bryant_salamon_g2";
    m.metric = MetricKind::Scattering;
    m.profile.n = 7;
    m.profile.b = 6;
    m.profile.f = 0;
    m.profile.betti_M = {1, 0, 0, 0, 1, 0, 0, 0};
    m.profile.betti_dM = {1, 0, 1, 0, 1, 0, 1};  // twistor space CP^3
    m.profile.betti_B = {1, 0, 1, 0, 1, 0, 1};
    m.profile.betti_F = {1};
    m.profile.restriction = std::vector<RatMatrix>{
        mat(1, 1, {1}), mat(0, 0), mat(1, 0), mat(0, 0),
        mat(1, 1, {1}), mat(0, 0), mat(1, 0)};
    m.expected = Dims{0, 0, 0, 1, 1, 0, 0, 0};
    m.provenance =
        "anti-self-dual 3-plane bundle over S^4 with the conical holonomy-G2 "
        "metric; boundary is the twistor space CP^3, whose degree-4 class "
        "pulls back injectively";
    out.push_back({m.name, m, m.provenance});
  }

  // --- ALF G2 example on R^4 x S^3 ----------------------------------------
  {
    Manifest m;
    m.name = "gomis_g2";
    m.metric = MetricKind::FibredBoundary;
    m.profile.n = 7;
    m.profile.b = 5;
    m.profile.f = 1;
    m.profile.betti_M = {1, 0, 0, 1, 0, 0, 0, 0};
    m.profile.betti_dM = {1, 0, 0, 2, 0, 0, 1};
    m.profile.betti_B = {1, 0, 1, 1, 0, 1};  // S^2 x S^3
    m.profile.betti_F = {1, 1};
    m.profile.restriction = std::vector<RatMatrix>{
        mat(1, 1, {1}), mat(0, 0), mat(0, 0), mat(2, 1, {1, 0}),
        mat(0, 0),      mat(0, 0), mat(1, 0)};
    LerayData l = LerayData::product(Dims{1, 0, 1, 1, 0, 1}, Dims{1, 1});
    LerayDifferential d1;  // Euler class of the Hopf factor: H^0 -> H^2
    d1.r = 2;
    d1.p = 0;
    d1.q = 1;
    d1.matrix = mat(1, 1, {1});
    LerayDifferential d2;  // cup with the Euler class: H^3 -> H^5
    d2.r = 2;
    d2.p = 3;
    d2.q = 1;
    d2.matrix = mat(1, 1, {1});
    l.differentials = {d1, d2};
    m.leray = l;
    m.expected = Dims{0, 0, 0, 0, 0, 0, 0, 0};
    m.provenance =
        "R^4 x S^3 with the asymptotically locally flat holonomy-G2 metric; "
        "Hopf circle at infinity collapses to CP^2 x S^3, base S^2 x S^3, "
        "and no harmonic form survives the odd-base window";
    out.push_back({m.name, m, m.provenance});
  }

  // --- Small generic toric hyperkahler example -----------------------------
  {
    Manifest m = ale_base(1);
    m.name = "toric_hk";
    m.provenance =
        "smooth generic toric hyperkahler surface (cotangent bundle of "
        "CP^1); harmonic forms concentrate in the middle degree";
    m.pairing = PairingInput{negated(cartan_A(1)), negated(cartan_A(1))};
    m.expected = Dims{0, 0, 1, 0, 0};
    out.push_back({m.name, m, m.provenance});
  }

  std::sort(out.begin(), out.end(),
            [](const CatalogEntry& a, const CatalogEntry& b) {
              return a.name < b.name;
            });
  return out;
}

inline const CatalogEntry& catalog_entry(const std::string& name) {
  static const std::vector<CatalogEntry> entries = builtin_catalog();
  for (const CatalogEntry& e : entries)
    if (e.name == name) return e;
  throw ValidationError("no catalog entry named '" + name + "'");
}

// --- entry execution ---------------------------------------------------

struct CheckLine {
  bool ok = false;
  std::string text;
};

struct EntryReport {
  std::string name;
  HodgeTable table;
  std::vector<CheckLine> checks;
  std::optional<Count> l2sig;
  std::optional<Count> tau;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const CheckLine& c) { return c.ok; });
  }
};

namespace detail_catalog {

inline void push(EntryReport& rep, bool ok, const std::string& text) {
  rep.checks.push_back({ok, text});
}

inline std::string dims_str(const Dims& d) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < d.size(); ++i)
    os << (i ? "," : "") << d[i];
  os << ")";
  return os.str();
}

inline void run_gh_pointwise(const Manifest& m, EntryReport& rep) {
  const gh::MonopoleConfig& c = *m.monopoles;
  // Deterministic admissible sample points on a coarse spiral.
  int tested = 0;
  double max_det_err = 0, max_sd_resid = 0;
  for (int s = 0; s < 80 && tested < 40; ++s) {
    double t = 0.31 * s;
    gh::Vec3 x{2.5 * std::cos(t) * (1 + 0.1 * s), 2.3 * std::sin(t),
               1.7 * std::cos(1.7 * t)};
    if (!gh::admissible(c, x)) continue;
    bool clear = true;
    for (const gh::Vec3& p : c.points)
      if ((x - p).norm() < 0.2) clear = false;
    if (!clear) continue;
    ++tested;
    gh::ChartPoint pt{x, 0.2};
    gh::Metric4 g = gh::metric_at(c, pt);
    double v = gh::potential(c, x).V;
    max_det_err = std::max(max_det_err,
                           std::fabs(gh::det4(g) - v * v) / (v * v));
    for (Count i = 0; i < c.k(); ++i) {
      gh::TwoFormValue om = gh::omega_at(c, static_cast<std::size_t>(i), pt);
      gh::TwoFormValue st = gh::star2(g, om);
      double resid = 0, norm = 0;
      for (int slot = 0; slot < 6; ++slot) {
        resid += (st[slot] + om[slot]) * (st[slot] + om[slot]);
        norm += om[slot] * om[slot];
      }
      max_sd_resid = std::max(max_sd_resid, std::sqrt(resid / norm));
    }
  }
  std::ostringstream os;
  os << "gh pointwise: det g = V^2 rel err " << max_det_err
     << ", anti-self-dual resid " << max_sd_resid << " at " << tested
     << " points";
  push(rep, tested >= 20 && max_det_err < 1e-12 && max_sd_resid < 1e-10,
       os.str());
}

}  // namespace detail_catalog

/// Computes the Hodge table of one entry, compares it to the recorded
/// expectation, and runs the structural cross-checks (duality, engine
/// agreement, symmetry, pairings, hyperkahler laws, pointwise metric
/// numerics). `full_numerics` adds the L^2 Gram quadrature.
inline EntryReport run_entry(const CatalogEntry& entry,
                             bool full_numerics = false) {
  using namespace detail_catalog;
  const Manifest& m = entry.manifest;
  EntryReport rep;
  rep.name = entry.name;

  IHEngine eng(m.profile, m.leray,
               m.boundary_maps ? std::optional<std::vector<RatMatrix>>(
                                     *m.boundary_maps)
                               : std::nullopt);
  const std::vector<RatMatrix>* mm =
      m.middle_map ? &*m.middle_map : nullptr;
  rep.table = hodge_dims(eng, m.metric, mm);

  if (m.expected) {
    bool ok = rep.table.dims == *m.expected;
    push(rep, ok,
         "dims " + dims_str(rep.table.dims) +
             (ok ? " match expected" : " != expected " + dims_str(*m.expected)));
  }

  const Count n = m.profile.n;
  bool sym = true;
  for (Count k = 0; k <= n; ++k)
    if (rep.table.dims[static_cast<std::size_t>(k)] !=
        rep.table.dims[static_cast<std::size_t>(n - k)])
      sym = false;
  push(rep, sym, "hodge star symmetry dims[k] = dims[n-k]");

  bool dual_ok = true;
  for (Count j = -1; j <= m.profile.ell() - 1; ++j)
    if (eng.duality_defect(Perversity{j}) != 0) dual_ok = false;
  push(rep, dual_ok, "duality defect = 0 across perversities");

  bool agree = true;
  for (Count j = -2; j <= m.profile.ell(); ++j) {
    Perversity pj{j};
    if (!eng.engine_a_applicable(pj)) continue;
    if (eng.engine_a(pj).dims != eng.engine_b(pj).dims) agree = false;
  }
  push(rep, agree, "closed-form and spectral-sequence engines agree");

  if (m.pairing) {
    std::optional<Count> middle;
    if (n % 2 == 0) middle = rep.table.middle_dim();
    rep.l2sig = l2_signature(*m.pairing, middle);
    rep.tau = tau_invariant(*m.pairing);
    push(rep, true,
         "l2 signature " + std::to_string(*rep.l2sig) + ", tau " +
             std::to_string(*rep.tau));
    if (m.hyperkahler_k) {
      HyperkahlerReport hk = hyperkahler_checks(rep.table, *rep.l2sig, true,
                                                *m.hyperkahler_k, *m.pairing);
      std::string msg = "hyperkahler laws";
      for (const std::string& f : hk.failures) msg += "; " + f;
      push(rep, hk.passed(), msg);
    }
  }

  if (m.monopoles) {
    run_gh_pointwise(m, rep);
    if (full_numerics) {
      gh::QuadratureSpec spec = m.quadrature.value_or(gh::QuadratureSpec{});
      gh::GramResult gram = gh::l2_gram(*m.monopoles, spec);
      auto ev = gh::sym_eigenvalues(gram.gram, gram.k);
      bool rank_ok = ev.front() > 1e-8 * ev.back() && ev.front() > 0;
      std::ostringstream os;
      os << "L2 Gram rank " << gram.k << " (eigen range " << ev.front()
         << " .. " << ev.back() << "), Cauchy tail "
         << (gram.certificate.cauchy_decreasing ? "ok" : "violated");
      push(rep, rank_ok && gram.certificate.cauchy_decreasing, os.str());
      bool expect_rank = !m.expected ||
                         (*m.expected)[static_cast<std::size_t>(n / 2)] ==
                             gram.k;
      push(rep, expect_rank,
           "Gram rank matches the predicted middle dimension");
    }
  }
  return rep;
}

}  // namespace l2hodge
