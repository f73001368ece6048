#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "l2hodge/gibbons_hawking.hpp"
#include "l2hodge/hodge.hpp"
#include "l2hodge/indicial.hpp"
#include "l2hodge/leray.hpp"
#include "l2hodge/topology.hpp"

namespace l2hodge {

using Json = nlohmann::ordered_json;

/// Everything a computation needs, as one validated document. Rationals are
/// serialized as "p/q" strings and matrices carry explicit shapes, so files
/// are bit-exact regression artifacts.
struct Manifest {
  std::string schema_version = "1";
  std::string name;
  std::string provenance;
  MetricKind metric = MetricKind::FibredBoundary;
  StratumProfile profile;
  std::optional<LerayData> leray;
  std::optional<std::vector<RatMatrix>> boundary_maps;  // grid identification
  std::optional<std::vector<RatMatrix>> middle_map;
  std::optional<PairingInput> pairing;
  std::optional<gh::MonopoleConfig> monopoles;
  std::optional<gh::QuadratureSpec> quadrature;
  std::optional<BaseSpectrum> spectrum;
  std::optional<Count> hyperkahler_k;
  std::optional<Dims> expected;
};

namespace detail_json {

inline Json matrix_to_json(const RatMatrix& m) {
  Json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  Json entries = Json::array();
  for (const Rat& r : m.entries()) entries.push_back(rat_to_string(r));
  j["entries"] = std::move(entries);
  return j;
}

inline RatMatrix matrix_from_json(const Json& j, const std::string& path) {
  require(j.is_object() && j.contains("rows") && j.contains("cols") &&
              j.contains("entries"),
          path + ": matrix must be {rows, cols, entries}");
  Count rows = j.at("rows").get<Count>();
  Count cols = j.at("cols").get<Count>();
  const Json& ent = j.at("entries");
  require(ent.is_array() &&
              static_cast<Count>(ent.size()) == rows * cols,
          path + ": entries length must equal rows*cols");
  std::vector<Rat> vals;
  vals.reserve(ent.size());
  for (const Json& e : ent) {
    if (e.is_number_integer())
      vals.emplace_back(e.get<long long>());
    else if (e.is_string())
      vals.push_back(parse_rat(e.get<std::string>()));
    else
      throw ValidationError(path + ": rational entries must be integers or \"p/q\" strings");
  }
  return RatMatrix(rows, cols, std::move(vals));
}

inline Json dims_to_json(const Dims& d) {
  Json j = Json::array();
  for (Count x : d) j.push_back(x);
  return j;
}

inline Dims dims_from_json(const Json& j, const std::string& path) {
  require(j.is_array(), path + ": expected an array of counts");
  Dims d;
  for (const Json& e : j) {
    require(e.is_number_integer(), path + ": entries must be integers");
    d.push_back(e.get<Count>());
  }
  return d;
}

inline std::vector<RatMatrix> matrices_from_json(const Json& j,
                                                 const std::string& path) {
  require(j.is_array(), path + ": expected an array of matrices");
  std::vector<RatMatrix> ms;
  for (std::size_t i = 0; i < j.size(); ++i)
    ms.push_back(matrix_from_json(j[i], path + "[" + std::to_string(i) + "]"));
  return ms;
}

inline Json matrices_to_json(const std::vector<RatMatrix>& ms) {
  Json j = Json::array();
  for (const RatMatrix& m : ms) j.push_back(matrix_to_json(m));
  return j;
}

inline MetricKind metric_from_string(const std::string& s) {
  if (s == "b") return MetricKind::B;
  if (s == "scattering") return MetricKind::Scattering;
  if (s == "fibred_cusp") return MetricKind::FibredCusp;
  if (s == "fibred_boundary") return MetricKind::FibredBoundary;
  throw ValidationError("metric: unknown kind '" + s +
                        "' (want b | scattering | fibred_cusp | fibred_boundary)");
}

}  // namespace detail_json

inline Json manifest_to_json(const Manifest& m) {
  using namespace detail_json;
  Json j;
  j["schema_version"] = m.schema_version;
  if (!m.name.empty()) j["name"] = m.name;
  if (!m.provenance.empty()) j["provenance"] = m.provenance;
  j["metric"] = metric_name(m.metric);
  Json prof;
  prof["n"] = m.profile.n;
  prof["b"] = m.profile.b;
  prof["f"] = m.profile.f;
  prof["betti_M"] = dims_to_json(m.profile.betti_M);
  prof["betti_dM"] = dims_to_json(m.profile.betti_dM);
  prof["betti_B"] = dims_to_json(m.profile.betti_B);
  prof["betti_F"] = dims_to_json(m.profile.betti_F);
  if (m.profile.restriction)
    prof["restriction"] = matrices_to_json(*m.profile.restriction);
  if (m.profile.restriction_ranks)
    prof["restriction_ranks"] = dims_to_json(*m.profile.restriction_ranks);
  j["profile"] = std::move(prof);
  if (m.leray) {
    Json l;
    Json rows = Json::array();
    for (const Dims& row : m.leray->e2) rows.push_back(dims_to_json(row));
    l["e2"] = std::move(rows);
    if (!m.leray->differentials.empty()) {
      Json ds = Json::array();
      for (const LerayDifferential& d : m.leray->differentials) {
        Json dj;
        dj["r"] = d.r;
        dj["p"] = d.p;
        dj["q"] = d.q;
        dj["matrix"] = matrix_to_json(d.matrix);
        ds.push_back(std::move(dj));
      }
      l["differentials"] = std::move(ds);
    }
    if (m.leray->abutment_check)
      l["abutment_check"] = dims_to_json(*m.leray->abutment_check);
    j["leray"] = std::move(l);
  }
  if (m.boundary_maps) j["boundary_maps"] = matrices_to_json(*m.boundary_maps);
  if (m.middle_map) j["middle_map"] = matrices_to_json(*m.middle_map);
  if (m.pairing) {
    Json p;
    p["matrix"] = matrix_to_json(m.pairing->matrix);
    p["rel_matrix"] = matrix_to_json(m.pairing->rel_matrix);
    j["pairing"] = std::move(p);
  }
  if (m.monopoles) {
    Json mono;
    mono["m"] = m.monopoles->m;
    Json pts = Json::array();
    for (const gh::Vec3& p : m.monopoles->points)
      pts.push_back(Json::array({p[0], p[1], p[2]}));
    mono["points"] = std::move(pts);
    j["monopoles"] = std::move(mono);
  }
  if (m.quadrature) {
    Json q;
    q["cutoffs"] = m.quadrature->cutoffs;
    q["rel_tol"] = m.quadrature->rel_tol;
    q["max_depth"] = m.quadrature->max_depth;
    j["quadrature"] = std::move(q);
  }
  if (m.spectrum) {
    Json sp;
    Json evs = Json::array();
    for (const SpectrumEntry& e : m.spectrum->eigenvalues) {
      Json ej;
      ej["lambda_sq"] = rat_to_string(e.lambda_sq);
      ej["degree"] = e.degree;
      ej["multiplicity"] = e.multiplicity;
      evs.push_back(std::move(ej));
    }
    sp["eigenvalues"] = std::move(evs);
    j["spectrum"] = std::move(sp);
  }
  if (m.hyperkahler_k) {
    Json h;
    h["quaternionic_k"] = *m.hyperkahler_k;
    j["hyperkahler"] = std::move(h);
  }
  if (m.expected) {
    Json e;
    e["dims"] = dims_to_json(*m.expected);
    j["expected"] = std::move(e);
  }
  return j;
}

inline std::string emit_manifest(const Manifest& m) {
  return manifest_to_json(m).dump(2) + "\n";
}

/// Parses and validates a manifest document. Parse failures carry the JSON
/// error location; invariant violations name the offending field.
inline Manifest load_manifest(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("manifest parse error: ") + e.what());
  }
  using namespace detail_json;
  Manifest m;
  require(j.is_object(), "manifest: top level must be an object");
  require(j.contains("schema_version"), "manifest: schema_version missing");
  m.schema_version = j.at("schema_version").get<std::string>();
  require(m.schema_version == "1",
          "manifest: unrecognized schema_version '" + m.schema_version + "'");
  if (j.contains("name")) m.name = j.at("name").get<std::string>();
  if (j.contains("provenance"))
    m.provenance = j.at("provenance").get<std::string>();
  require(j.contains("metric"), "manifest: metric missing");
  m.metric = metric_from_string(j.at("metric").get<std::string>());

  require(j.contains("profile"), "manifest: profile missing");
  const Json& pj = j.at("profile");
  m.profile.n = pj.at("n").get<Count>();
  m.profile.b = pj.at("b").get<Count>();
  m.profile.f = pj.at("f").get<Count>();
  m.profile.betti_M = dims_from_json(pj.at("betti_M"), "profile.betti_M");
  m.profile.betti_dM = dims_from_json(pj.at("betti_dM"), "profile.betti_dM");
  m.profile.betti_B = dims_from_json(pj.at("betti_B"), "profile.betti_B");
  m.profile.betti_F = dims_from_json(pj.at("betti_F"), "profile.betti_F");
  if (pj.contains("restriction"))
    m.profile.restriction =
        matrices_from_json(pj.at("restriction"), "profile.restriction");
  if (pj.contains("restriction_ranks"))
    m.profile.restriction_ranks =
        dims_from_json(pj.at("restriction_ranks"), "profile.restriction_ranks");
  m.profile.validate();
  if (m.metric == MetricKind::B || m.metric == MetricKind::Scattering)
    require(m.profile.f == 0,
            "metric: b and scattering classes require f = 0 (trivial fibre)");

  if (j.contains("leray")) {
    const Json& lj = j.at("leray");
    LerayData l;
    require(lj.contains("e2") && lj.at("e2").is_array(),
            "leray.e2: expected array of rows");
    for (std::size_t q = 0; q < lj.at("e2").size(); ++q)
      l.e2.push_back(dims_from_json(lj.at("e2")[q],
                                    "leray.e2[" + std::to_string(q) + "]"));
    if (lj.contains("differentials")) {
      for (std::size_t i = 0; i < lj.at("differentials").size(); ++i) {
        const Json& dj = lj.at("differentials")[i];
        std::string path = "leray.differentials[" + std::to_string(i) + "]";
        LerayDifferential d;
        d.r = dj.at("r").get<Count>();
        d.p = dj.at("p").get<Count>();
        d.q = dj.at("q").get<Count>();
        d.matrix = matrix_from_json(dj.at("matrix"), path + ".matrix");
        l.differentials.push_back(std::move(d));
      }
    }
    if (lj.contains("abutment_check"))
      l.abutment_check =
          dims_from_json(lj.at("abutment_check"), "leray.abutment_check");
    l.validate();
    require(l.b() == m.profile.b && l.f() == m.profile.f,
            "leray: grid shape must be (b+1) x (f+1)");
    m.leray = std::move(l);
  }
  if (j.contains("boundary_maps"))
    m.boundary_maps = matrices_from_json(j.at("boundary_maps"), "boundary_maps");
  if (j.contains("middle_map"))
    m.middle_map = matrices_from_json(j.at("middle_map"), "middle_map");
  if (j.contains("pairing")) {
    PairingInput p;
    p.matrix = matrix_from_json(j.at("pairing").at("matrix"), "pairing.matrix");
    p.rel_matrix =
        matrix_from_json(j.at("pairing").at("rel_matrix"), "pairing.rel_matrix");
    p.validate();
    m.pairing = std::move(p);
  }
  if (j.contains("monopoles")) {
    gh::MonopoleConfig c;
    c.m = j.at("monopoles").at("m").get<double>();
    for (const Json& pt : j.at("monopoles").at("points")) {
      require(pt.is_array() && pt.size() == 3,
              "monopoles.points: each point is [x1, x2, x3]");
      c.points.push_back(
          gh::Vec3{pt[0].get<double>(), pt[1].get<double>(), pt[2].get<double>()});
    }
    c.validate();
    m.monopoles = std::move(c);
  }
  if (j.contains("quadrature")) {
    gh::QuadratureSpec q;
    const Json& qj = j.at("quadrature");
    if (qj.contains("cutoffs"))
      q.cutoffs = qj.at("cutoffs").get<std::vector<double>>();
    if (qj.contains("rel_tol")) q.rel_tol = qj.at("rel_tol").get<double>();
    if (qj.contains("max_depth")) q.max_depth = qj.at("max_depth").get<int>();
    q.validate();
    m.quadrature = q;
  }
  if (j.contains("spectrum")) {
    BaseSpectrum s;
    for (const Json& ej : j.at("spectrum").at("eigenvalues")) {
      SpectrumEntry e;
      const Json& lsq = ej.at("lambda_sq");
      e.lambda_sq = lsq.is_string() ? parse_rat(lsq.get<std::string>())
                                    : Rat(lsq.get<long long>());
      e.degree = ej.at("degree").get<Count>();
      e.multiplicity = ej.contains("multiplicity")
                           ? ej.at("multiplicity").get<Count>()
                           : 1;
      s.eigenvalues.push_back(std::move(e));
    }
    s.validate();
    m.spectrum = std::move(s);
  }
  if (j.contains("hyperkahler")) {
    m.hyperkahler_k = j.at("hyperkahler").at("quaternionic_k").get<Count>();
    require(*m.hyperkahler_k >= 1 && m.profile.n == 4 * *m.hyperkahler_k,
            "hyperkahler.quaternionic_k: real dimension must equal 4k");
  }
  if (j.contains("expected")) {
    Dims d = dims_from_json(j.at("expected").at("dims"), "expected.dims");
    require(static_cast<Count>(d.size()) == m.profile.n + 1,
            "expected.dims: length must be n+1");
    m.expected = std::move(d);
  }
  return m;
}

// Structural equality, used by the round-trip tests.
inline bool operator==(const LerayDifferential& a, const LerayDifferential& b) {
  return a.r == b.r && a.p == b.p && a.q == b.q && a.matrix == b.matrix;
}
inline bool operator==(const LerayData& a, const LerayData& b) {
  return a.e2 == b.e2 && a.differentials == b.differentials &&
         a.abutment_check == b.abutment_check;
}
inline bool operator==(const StratumProfile& a, const StratumProfile& b) {
  return a.n == b.n && a.b == b.b && a.f == b.f && a.betti_M == b.betti_M &&
         a.betti_dM == b.betti_dM && a.betti_B == b.betti_B &&
         a.betti_F == b.betti_F && a.restriction == b.restriction &&
         a.restriction_ranks == b.restriction_ranks;
}
inline bool operator==(const PairingInput& a, const PairingInput& b) {
  return a.matrix == b.matrix && a.rel_matrix == b.rel_matrix;
}
inline bool operator==(const SpectrumEntry& a, const SpectrumEntry& b) {
  return a.lambda_sq == b.lambda_sq && a.degree == b.degree &&
         a.multiplicity == b.multiplicity;
}
inline bool operator==(const BaseSpectrum& a, const BaseSpectrum& b) {
  return a.eigenvalues == b.eigenvalues;
}
inline bool operator==(const Manifest& a, const Manifest& b) {
  return a.schema_version == b.schema_version && a.name == b.name &&
         a.provenance == b.provenance && a.metric == b.metric &&
         a.profile == b.profile && a.leray == b.leray &&
         a.boundary_maps == b.boundary_maps && a.middle_map == b.middle_map &&
         a.pairing == b.pairing && a.monopoles == b.monopoles &&
         a.quadrature == b.quadrature && a.spectrum == b.spectrum &&
         a.hyperkahler_k == b.hyperkahler_k && a.expected == b.expected;
}

}  // namespace l2hodge
