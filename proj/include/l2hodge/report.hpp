#pragma once

#include <ostream>
#include <string>

#include "l2hodge/catalog.hpp"
#include "l2hodge/indicial.hpp"
#include "l2hodge/manifest.hpp"

namespace l2hodge {

enum class OutputFormat { Table, JsonFmt };

inline OutputFormat parse_format(const std::string& s) {
  if (s == "table") return OutputFormat::Table;
  if (s == "json") return OutputFormat::JsonFmt;
  throw ValidationError("unknown --format '" + s + "' (want table | json)");
}

/// Stable machine-readable encoding of a Hodge table:
/// keys {dims, case_tags, metric, entry, status}.
inline Json hodge_table_json(const HodgeTable& t, const std::string& entry,
                             const std::string& status) {
  Json j;
  j["dims"] = detail_json::dims_to_json(t.dims);
  Json tags = Json::array();
  for (const std::string& s : t.case_tags) tags.push_back(s);
  j["case_tags"] = std::move(tags);
  j["metric"] = metric_name(t.metric);
  j["entry"] = entry;
  j["status"] = status;
  return j;
}

inline void print_hodge_table(std::ostream& os, const HodgeTable& t,
                              const std::string& entry, OutputFormat fmt,
                              const std::string& status = "ok") {
  if (fmt == OutputFormat::JsonFmt) {
    os << hodge_table_json(t, entry, status).dump(2) << "\n";
    return;
  }
  if (!entry.empty()) os << entry << "  (" << metric_name(t.metric) << ")\n";
  os << "  k   dim L2H^k   case\n";
  for (std::size_t k = 0; k < t.dims.size(); ++k)
    os << "  " << k << "   " << t.dims[k] << "           " << t.case_tags[k]
       << "\n";
}

inline void print_ih_table(std::ostream& os, const IHTable& t,
                           const std::string& entry, OutputFormat fmt) {
  if (fmt == OutputFormat::JsonFmt) {
    Json j;
    j["dims"] = detail_json::dims_to_json(t.dims);
    j["j"] = t.j.j;
    j["engine"] = t.engine == EngineTag::ClosedForm ? "closed_form"
                                                    : "spectral_sequence";
    j["entry"] = entry;
    j["status"] = "ok";
    os << j.dump(2) << "\n";
    return;
  }
  os << "IH_j with j = " << t.j.j << "  (engine: "
     << (t.engine == EngineTag::ClosedForm ? "closed form" : "spectral sequence")
     << ")\n";
  os << "  k   dim\n";
  for (std::size_t k = 0; k < t.dims.size(); ++k)
    os << "  " << k << "   " << t.dims[k] << "\n";
}

inline void print_indicial_report(std::ostream& os, const IndicialReport& rep,
                                  const Rat& weight, bool fredholm,
                                  OutputFormat fmt) {
  if (fmt == OutputFormat::JsonFmt) {
    Json j;
    Json roots = Json::array();
    for (const IndicialRoot& r : rep.roots) {
      Json rj;
      rj["value"] = r.value.str();
      rj["approx"] = r.value.to_double();
      rj["multiplicity"] = r.multiplicity;
      rj["complex_pair"] = r.complex_pair;
      rj["source"] = r.source;
      roots.push_back(std::move(rj));
    }
    j["roots"] = std::move(roots);
    Json gaps = Json::array();
    for (const FredholmGap& g : rep.fredholm_gaps) {
      Json gj;
      gj["lo"] = g.lo ? Json(g.lo->str()) : Json(nullptr);
      gj["hi"] = g.hi ? Json(g.hi->str()) : Json(nullptr);
      gaps.push_back(std::move(gj));
    }
    j["fredholm_gaps"] = std::move(gaps);
    if (rep.critical) j["critical"] = rat_to_string(*rep.critical);
    j["weight"] = rat_to_string(weight);
    j["fredholm"] = fredholm;
    Json notes = Json::array();
    for (const std::string& nline : rep.notes) notes.push_back(nline);
    j["notes"] = std::move(notes);
    os << j.dump(2) << "\n";
    return;
  }
  os << "indicial roots:\n";
  for (const IndicialRoot& r : rep.roots)
    os << "  " << r.value.str() << "  x" << r.multiplicity
       << (r.complex_pair ? "  (complex pair)" : "") << "   [" << r.source
       << "]\n";
  os << "fredholm gaps:\n";
  for (const FredholmGap& g : rep.fredholm_gaps)
    os << "  (" << (g.lo ? g.lo->str() : "-inf") << ", "
       << (g.hi ? g.hi->str() : "+inf") << ")\n";
  if (rep.critical) os << "critical weight: " << rat_to_string(*rep.critical) << "\n";
  os << "weight " << rat_to_string(weight) << ": "
     << (fredholm ? "Fredholm" : "NOT Fredholm") << "\n";
  for (const std::string& nline : rep.notes) os << "note: " << nline << "\n";
}

inline void print_entry_report(std::ostream& os, const EntryReport& rep,
                               OutputFormat fmt) {
  if (fmt == OutputFormat::JsonFmt) {
    Json j = hodge_table_json(rep.table, rep.name,
                              rep.passed() ? "pass" : "fail");
    Json checks = Json::array();
    for (const CheckLine& c : rep.checks) {
      Json cj;
      cj["ok"] = c.ok;
      cj["check"] = c.text;
      checks.push_back(std::move(cj));
    }
    j["checks"] = std::move(checks);
    if (rep.l2sig) j["l2_signature"] = *rep.l2sig;
    if (rep.tau) j["tau"] = *rep.tau;
    os << j.dump(2) << "\n";
    return;
  }
  os << (rep.passed() ? "PASS" : "FAIL") << "  " << rep.name << "  dims=";
  os << detail_catalog::dims_str(rep.table.dims);
  if (rep.l2sig) os << "  sgn=" << *rep.l2sig;
  if (rep.tau) os << "  tau=" << *rep.tau;
  os << "\n";
  for (const CheckLine& c : rep.checks)
    os << "    " << (c.ok ? "ok  " : "FAIL") << "  " << c.text << "\n";
}

}  // namespace l2hodge
