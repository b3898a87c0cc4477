#pragma once

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "popax/axiology.hpp"
#include "popax/population.hpp"
#include "popax/xrisk.hpp"

namespace popax {

using Json = nlohmann::json;

// %.*g with enough digits round-trips doubles; with fewer it gives the
// shortest deterministic decimal at that precision.  snprintf keeps the
// byte output independent of stream locale/state.
inline std::string fmt_sig(double v, int sigfigs) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", sigfigs, v);
  return buf;
}

namespace detail {

[[noreturn]] inline void field_error(const std::string& where, const std::string& what) {
  throw ValidationError(where + ": " + what);
}

inline Rational rational_field(const Json& j, const std::string& where) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (j.is_number_float()) return rational_from_double(j.get<double>());
  field_error(where, "expected a number or a decimal/rational string");
}

inline double double_field(const Json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return to_double(parse_rational(j.get<std::string>()));
  field_error(where, "expected a number");
}

inline const Json& member(const Json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) field_error(where, std::string("missing field \"") + key + "\"");
  return *it;
}

}  // namespace detail

inline Population population_from_json(const Json& j, const std::string& where) {
  if (!j.is_object()) detail::field_error(where, "expected an object with an \"entries\" array");
  const Json& entries = detail::member(j, "entries", where);
  if (!entries.is_array()) detail::field_error(where + ".entries", "expected an array");
  std::vector<Entry> es;
  es.reserve(entries.size());
  std::size_t i = 0;
  for (const Json& e : entries) {
    std::string at = where + ".entries[" + std::to_string(i++) + "]";
    if (!e.is_object()) detail::field_error(at, "expected an object {\"w\": ..., \"n\": ...}");
    Rational w = detail::rational_field(detail::member(e, "w", at), at + ".w");
    Rational n = detail::rational_field(detail::member(e, "n", at), at + ".n");
    if (!(n > 0)) detail::field_error(at + ".n", "count must be positive, got " + format_rational(n));
    es.push_back({std::move(w), std::move(n)});
  }
  return Population(std::move(es));
}

inline Json population_to_json(const Population& p) {
  Json entries = Json::array();
  for (const auto& e : p.entries()) {
    Json je;
    je["w"] = fits_double(e.w) ? Json(to_double(e.w)) : Json(format_rational(e.w));
    je["n"] = fits_double(e.count) ? Json(to_double(e.count)) : Json(format_rational(e.count));
    entries.push_back(std::move(je));
  }
  return Json{{"entries", std::move(entries)}};
}

inline Population population_from_csv(std::istream& in, const std::string& where) {
  std::string line;
  if (!std::getline(in, line)) detail::field_error(where, "empty file; expected a w,n header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "w,n")
    detail::field_error(where + ":1", "expected header \"w,n\", got \"" + line + "\"");
  std::vector<Entry> es;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::string at = where + ":" + std::to_string(lineno);
    auto comma = line.find(',');
    if (comma == std::string::npos) detail::field_error(at, "expected two comma-separated fields");
    Rational w = parse_rational(line.substr(0, comma));
    Rational n = parse_rational(line.substr(comma + 1));
    if (!(n > 0)) detail::field_error(at, "count must be positive, got " + format_rational(n));
    es.push_back({std::move(w), std::move(n)});
  }
  return Population(std::move(es));
}

inline std::string population_to_csv(const Population& p) {
  std::string out = "w,n\n";
  for (const auto& e : p.entries())
    out += format_rational(e.w) + "," + format_rational(e.count) + "\n";
  return out;
}

inline FuncPreset preset_from_json(const Json& j, const std::string& where) {
  if (!j.is_object()) detail::field_error(where, "expected a preset object with a \"kind\" field");
  const Json& kj = detail::member(j, "kind", where);
  if (!kj.is_string()) detail::field_error(where + ".kind", "expected a string");
  std::string kind = kj.get<std::string>();
  auto num = [&](const char* key) {
    return detail::double_field(detail::member(j, key, where), where + "." + key);
  };
  if (kind == "linear") return preset_linear(num("a"), num("b"));
  if (kind == "power") return preset_power(num("p"));
  if (kind == "negexp") return preset_negexp(num("rate"));
  if (kind == "logistic") return preset_logistic(num("scale"));
  if (kind == "geometric") return preset_geometric(num("beta"));
  if (kind == "bounded_rational") return preset_bounded_rational(num("L"), num("a"));
  if (kind == "saturating") return preset_saturating(num("bound"), num("scale"));
  detail::field_error(where + ".kind", "unknown preset kind \"" + kind + "\"");
}

inline Json preset_to_json(const FuncPreset& f) {
  switch (f.kind) {
    case PresetKind::linear: return Json{{"kind", "linear"}, {"a", f.p1}, {"b", f.p2}};
    case PresetKind::power: return Json{{"kind", "power"}, {"p", f.p1}};
    case PresetKind::negexp: return Json{{"kind", "negexp"}, {"rate", f.p1}};
    case PresetKind::logistic: return Json{{"kind", "logistic"}, {"scale", f.p1}};
    case PresetKind::geometric: return Json{{"kind", "geometric"}, {"beta", f.p1}};
    case PresetKind::bounded_rational:
      return Json{{"kind", "bounded_rational"}, {"L", f.p1}, {"a", f.p2}};
    case PresetKind::saturating:
      return Json{{"kind", "saturating"}, {"bound", f.p1}, {"scale", f.p2}};
  }
  throw DomainError("unknown preset kind");
}

inline AxiologySpec axiology_from_json(const Json& j, const std::string& where) {
  if (!j.is_object()) detail::field_error(where, "expected an object with a \"family\" field");
  const Json& fj = detail::member(j, "family", where);
  if (!fj.is_string()) detail::field_error(where + ".family", "expected a string");
  std::string family = fj.get<std::string>();
  Json params = j.value("params", Json::object());
  std::string pw = where + ".params";
  auto preset = [&](const char* key) {
    return preset_from_json(detail::member(params, key, pw), pw + "." + key);
  };
  if (family == "TU") return AxiologySpec::tu();
  if (family == "CL")
    return AxiologySpec::cl(detail::rational_field(detail::member(params, "c", pw), pw + ".c"));
  if (family == "PR") return AxiologySpec::pr(preset("f"));
  if (family == "AU") return AxiologySpec::au();
  if (family == "VV1") return AxiologySpec::vv1(preset("g"));
  if (family == "VV2") return AxiologySpec::vv2(preset("f"), preset("g"));
  if (family == "MDT")
    return AxiologySpec::mdt(detail::double_field(detail::member(params, "alpha", pw), pw + ".alpha"));
  if (family == "QAA") return AxiologySpec::qaa(preset("g"));
  if (family == "BRD") return AxiologySpec::brd(preset("f"));
  if (family == "GRD")
    return AxiologySpec::grd(detail::double_field(detail::member(params, "beta", pw), pw + ".beta"));
  if (family == "CLL")
    return AxiologySpec::cll(detail::rational_field(detail::member(params, "c", pw), pw + ".c"));
  detail::field_error(where + ".family", "unknown family \"" + family + "\"");
}

inline Json axiology_to_json(const AxiologySpec& a) {
  Json out{{"family", family_name(a.family())}};
  Json params = Json::object();
  switch (a.family()) {
    case Family::TU:
    case Family::AU:
      break;
    case Family::CL:
    case Family::CLL:
      params["c"] = fits_double(a.c()) ? Json(to_double(a.c())) : Json(format_rational(a.c()));
      break;
    case Family::PR:
      if (a.has_derived_f())
        throw DomainError("background-derived weightings have no file representation");
      params["f"] = preset_to_json(a.f());
      break;
    case Family::VV1:
      params["g"] = preset_to_json(a.g());
      break;
    case Family::VV2:
      params["f"] = preset_to_json(a.f());
      params["g"] = preset_to_json(a.g());
      break;
    case Family::MDT:
      params["alpha"] = a.alpha();
      break;
    case Family::QAA:
      params["g"] = preset_to_json(a.g());
      break;
    case Family::BRD:
      params["f"] = preset_to_json(a.f());
      break;
    case Family::GRD:
      params["beta"] = a.beta();
      break;
  }
  if (!params.empty()) out["params"] = std::move(params);
  return out;
}

inline Scenario scenario_from_json(const Json& j, const std::string& where) {
  if (!j.is_object()) detail::field_error(where, "expected a scenario object");
  const Json& zj = detail::member(j, "Z", where);
  Population z = zj.is_null() ? Population() : population_from_json(zj, where + ".Z");
  return Scenario(std::move(z), population_from_json(detail::member(j, "C", where), where + ".C"),
                  population_from_json(detail::member(j, "C_prime", where), where + ".C_prime"),
                  population_from_json(detail::member(j, "F", where), where + ".F"));
}

inline Json scenario_to_json(const Scenario& s) {
  Json out;
  out["Z"] = s.z.empty() ? Json() : population_to_json(s.z);
  out["C"] = population_to_json(s.c);
  out["C_prime"] = population_to_json(s.c_prime);
  out["F"] = population_to_json(s.f);
  return out;
}

// --- file loading -----------------------------------------------------

namespace detail {
inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Json parse_json_text(const std::string& text, const std::string& path) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

inline bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}
}  // namespace detail

inline Population load_population(const std::string& path) {
  std::string text = detail::slurp(path);
  if (detail::ends_with(path, ".csv")) {
    std::istringstream in(text);
    return population_from_csv(in, path);
  }
  return population_from_json(detail::parse_json_text(text, path), path);
}

inline Distribution load_distribution(const std::string& path) {
  return Distribution(load_population(path));
}

inline AxiologySpec load_axiology(const std::string& path) {
  std::string text = detail::slurp(path);
  return axiology_from_json(detail::parse_json_text(text, path), path);
}

inline FuncPreset load_preset(const std::string& path) {
  std::string text = detail::slurp(path);
  return preset_from_json(detail::parse_json_text(text, path), path);
}

inline Scenario load_scenario(const std::string& path) {
  std::string text = detail::slurp(path);
  return scenario_from_json(detail::parse_json_text(text, path), path);
}

}  // namespace popax
