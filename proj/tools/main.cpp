// Command-line front end: intersection cohomology tables, Hodge dimensions,
// indicial reports, signatures, Gibbons-Hawking verification, and the shipped
// example catalog. Exit codes: 0 success, 1 engine error, 2 usage error,
// 3 verification mismatch.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "l2hodge/catalog.hpp"
#include "l2hodge/gh_verify.hpp"
#include "l2hodge/hodge.hpp"
#include "l2hodge/indicial.hpp"
#include "l2hodge/intersection.hpp"
#include "l2hodge/manifest.hpp"
#include "l2hodge/report.hpp"

namespace {

using namespace l2hodge;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open manifest file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Manifest load_from(const std::string& path) {
  return load_manifest(read_file(path));
}

IHEngine engine_for(const Manifest& m) {
  return IHEngine(m.profile, m.leray,
                  m.boundary_maps
                      ? std::optional<std::vector<RatMatrix>>(*m.boundary_maps)
                      : std::nullopt);
}

int cmd_ih(const std::string& path, Count j, OutputFormat fmt) {
  Manifest m = load_from(path);
  IHEngine eng = engine_for(m);
  Perversity pj{j};
  IHTable t = eng.engine_a_applicable(pj) ? eng.engine_a(pj) : eng.engine_b(pj);
  print_ih_table(std::cout, t, m.name, fmt);
  return 0;
}

int cmd_hodge(const std::string& path, OutputFormat fmt) {
  Manifest m = load_from(path);
  IHEngine eng = engine_for(m);
  const std::vector<RatMatrix>* mm = m.middle_map ? &*m.middle_map : nullptr;
  HodgeTable t = hodge_dims(eng, m.metric, mm);
  print_hodge_table(std::cout, t, m.name, fmt);
  return 0;
}

int cmd_indicial(const std::string& path, const std::string& weight_str,
                 OutputFormat fmt) {
  Manifest m = load_from(path);
  if (!m.spectrum)
    throw InsufficientDataError("manifest has no spectrum block");
  Rat weight = parse_rat(weight_str);
  IndicialReport rep;
  switch (m.metric) {
    case MetricKind::B:
    case MetricKind::FibredCusp:
      rep = b_indicial(*m.spectrum);
      break;
    case MetricKind::Scattering:
      rep = scattering_indicial(*m.spectrum, m.profile.n);
      break;
    case MetricKind::FibredBoundary:
      // The base cone has dimension b+1; its critical weight (b-1)/2 is the
      // scattering critical value of that cone.
      rep = scattering_indicial(*m.spectrum, m.profile.b + 1);
      break;
  }
  rep.critical = critical_weight(m.metric, m.profile.b, m.profile.f);
  bool fred = is_fredholm(rep, weight);
  print_indicial_report(std::cout, rep, weight, fred, fmt);
  return 0;
}

int cmd_signature(const std::string& path, OutputFormat fmt) {
  Manifest m = load_from(path);
  if (!m.pairing)
    throw InsufficientDataError("manifest has no pairing block");
  IHEngine eng = engine_for(m);
  const std::vector<RatMatrix>* mm = m.middle_map ? &*m.middle_map : nullptr;
  HodgeTable t = hodge_dims(eng, m.metric, mm);
  std::optional<Count> middle;
  if (m.profile.n % 2 == 0) middle = t.middle_dim();
  Count sig = l2_signature(*m.pairing, middle);
  Count tau = tau_invariant(*m.pairing);
  if (fmt == OutputFormat::JsonFmt) {
    Json j;
    j["entry"] = m.name;
    j["l2_signature"] = sig;
    j["tau"] = tau;
    j["status"] = "ok";
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "l2 signature: " << sig << "\ntau: " << tau << "\n";
  }
  return 0;
}

int cmd_gh_verify(const std::string& path, OutputFormat fmt) {
  Manifest m = load_from(path);
  if (!m.monopoles)
    throw InsufficientDataError("manifest has no monopoles block");
  gh::QuadratureSpec spec = m.quadrature.value_or(gh::QuadratureSpec{});
  gh::GhVerification v = gh::gh_verify(*m.monopoles, spec);
  if (fmt == OutputFormat::JsonFmt) {
    Json j;
    j["entry"] = m.name;
    j["points"] = v.points;
    j["sigma"] = v.sigma;
    j["max_det_rel_err"] = v.max_det_rel_err;
    j["max_duality_resid"] = v.max_duality_resid;
    j["max_closedness_resid"] = v.max_closedness_resid;
    j["max_gauge_resid"] = v.max_gauge_resid;
    j["gram_eigenvalues"] = v.gram_eigenvalues;
    j["cauchy_decreasing"] = v.cauchy_ok;
    j["status"] = v.passed() ? "pass" : "fail";
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << (v.passed() ? "PASS" : "FAIL") << "  " << m.name << "\n"
              << "  points sampled:        " << v.points << "\n"
              << "  self-duality sign:     " << v.sigma << "\n"
              << "  det g = V^2 rel err:   " << v.max_det_rel_err << "\n"
              << "  duality residual:      " << v.max_duality_resid << "\n"
              << "  d(omega) FD residual:  " << v.max_closedness_resid << "\n"
              << "  cross-gauge residual:  " << v.max_gauge_resid << "\n"
              << "  Gram eigenvalues:     ";
    for (double e : v.gram_eigenvalues) std::cout << " " << e;
    std::cout << "\n  tail Cauchy-decreasing: " << (v.cauchy_ok ? "yes" : "NO")
              << "\n";
  }
  return v.passed() ? 0 : 3;
}

int cmd_catalog_run(const std::string& only, bool full, OutputFormat fmt) {
  if (!only.empty()) catalog_entry(only);  // throws for unknown names
  int status = 0;
  for (const CatalogEntry& e : builtin_catalog()) {
    if (!only.empty() && e.name != only) continue;
    EntryReport rep = run_entry(e, full);
    print_entry_report(std::cout, rep, fmt);
    if (!rep.passed()) status = 3;
  }
  return status;
}

int cmd_catalog_export(const std::string& dir) {
  std::filesystem::create_directories(dir);
  for (const CatalogEntry& e : builtin_catalog()) {
    std::ofstream out(dir + "/" + e.name + ".json", std::ios::binary);
    if (!out) throw ValidationError("cannot write to '" + dir + "'");
    out << emit_manifest(e.manifest);
  }
  std::cout << "wrote " << builtin_catalog().size() << " manifests to " << dir
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"L2 harmonic-form dimensions on manifolds with fibred ends"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string format = "table";
  app.add_option("--format", format, "output encoding: table or json")
      ->check(CLI::IsMember({"table", "json"}));

  std::string path, weight, only, dir = "data/catalog";
  long long jval = 0;
  bool full = false;

  CLI::App* ih = app.add_subcommand("ih", "extended intersection cohomology table");
  ih->fallthrough();
  ih->add_option("manifest", path, "manifest JSON file")->required();
  ih->add_option("--j", jval, "perversity value")->required();

  CLI::App* hodge = app.add_subcommand("hodge", "L2 harmonic dimensions with case tags");
  hodge->fallthrough();
  hodge->add_option("manifest", path)->required();

  CLI::App* ind = app.add_subcommand("indicial", "indicial roots and Fredholm verdict");
  ind->fallthrough();
  ind->add_option("manifest", path)->required();
  ind->add_option("--weight", weight, "weight a as a rational p/q")->required();

  CLI::App* sig = app.add_subcommand("signature", "L2 signature and tau invariant");
  sig->fallthrough();
  sig->add_option("manifest", path)->required();

  CLI::App* ghv = app.add_subcommand("gh-verify", "numerical harmonic-form verification");
  ghv->fallthrough();
  ghv->add_option("manifest", path)->required();

  CLI::App* cat = app.add_subcommand("catalog", "operate on the shipped example registry");
  cat->fallthrough();
  cat->require_subcommand(1);
  CLI::App* run = cat->add_subcommand("run", "execute catalog entries");
  run->fallthrough();
  run->add_option("--only", only, "run a single entry by name");
  run->add_flag("--full", full, "include the L2 Gram quadrature");
  CLI::App* exp = cat->add_subcommand("export", "write entry manifests as JSON files");
  exp->fallthrough();
  exp->add_option("--dir", dir, "output directory (default data/catalog)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    OutputFormat fmt = parse_format(format);
    if (*ih) return cmd_ih(path, jval, fmt);
    if (*hodge) return cmd_hodge(path, fmt);
    if (*ind) return cmd_indicial(path, weight, fmt);
    if (*sig) return cmd_signature(path, fmt);
    if (*ghv) return cmd_gh_verify(path, fmt);
    if (*run) return cmd_catalog_run(only, full, fmt);
    if (*exp) return cmd_catalog_export(dir);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
