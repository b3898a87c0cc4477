#pragma once

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "popax/io.hpp"
#include "popax/limits.hpp"
#include "popax/xrisk.hpp"

namespace popax {
namespace detail {

struct CliState {
  // common
  std::string format;  // csv | json; empty -> env POPAX_FORMAT -> csv
  std::string output;  // path; empty -> stdout
  int sigfigs = 10;
  // inputs
  std::string axiology_path, population_path, x_path, y_path, scenario_path;
  std::string g_path;  // preset file
  std::string background_dist_path;
  std::string background_average, c_level, epsilon;  // rationals as text
  std::string scales;                                // comma-separated background sizes
  std::string scaling = "one";
  std::string from, to;  // weighting grid bounds, rationals as text
  int points = 50;
  double step = 0.0;       // weighting difference-quotient step; 0 -> ladder
  double marginal_n = 1e6;  // background size for the marginal verb
  std::uint64_t cap = 1000000;

  std::string resolved_format() const {
    std::string f = format;
    if (f.empty()) {
      const char* env = std::getenv("POPAX_FORMAT");
      f = env ? env : "csv";
    }
    if (f != "csv" && f != "json")
      throw ValidationError("format must be csv or json, got \"" + f + "\"");
    return f;
  }
};

inline std::string csv_scalar(double v, const CliState& st) { return fmt_sig(v, st.sigfigs) + "\n"; }

inline std::string json_line(const Json& j) { return j.dump() + "\n"; }

inline Background parse_background(const CliState& st) {
  bool have_avg = !st.background_average.empty();
  bool have_dist = !st.background_dist_path.empty();
  if (have_avg == have_dist)
    throw ValidationError(
        "exactly one of --background-average and --background-dist is required");
  if (have_avg) return FixedAverage{parse_rational(st.background_average)};
  return FixedDistribution{load_distribution(st.background_dist_path)};
}

// Point mass at c when only an average is given.
inline Distribution background_distribution(const CliState& st) {
  Background bg = parse_background(st);
  if (const auto* fd = std::get_if<FixedDistribution>(&bg)) return fd->d;
  return Distribution(Population::single(std::get<FixedAverage>(bg).c, Rational(1)));
}

inline std::vector<double> parse_scales(const std::string& text) {
  std::vector<double> out;
  std::istringstream in(text);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(to_double(parse_rational(tok)));
    if (!(out.back() > 0)) throw ValidationError("--scales entries must be positive");
  }
  if (out.empty()) throw ValidationError("--scales given but contained no values");
  return out;
}

inline std::string run_scalar_verb(double v, const CliState& st) {
  if (st.resolved_format() == "json") return json_line(Json{{"value", v}});
  return csv_scalar(v, st);
}

inline std::string run_value(const CliState& st) {
  AxiologySpec a = load_axiology(st.axiology_path);
  Population p = load_population(st.population_path);
  return run_scalar_verb(evaluate(a, p), st);
}

inline std::string run_compare(const CliState& st) {
  AxiologySpec a = load_axiology(st.axiology_path);
  ComparisonResult r = compare(a, load_population(st.x_path), load_population(st.y_path));
  if (st.resolved_format() == "json") {
    Json j{{"ordering", ordering_name(r.ordering)}};
    j["value_gap"] = r.value_gap ? Json(*r.value_gap) : Json();
    return json_line(j);
  }
  std::string gap = r.value_gap ? fmt_sig(*r.value_gap, st.sigfigs) : std::string();
  return "ordering,value_gap\n" + std::string(ordering_name(r.ordering)) + "," + gap + "\n";
}

inline std::string run_mad(const CliState& st) {
  return run_scalar_verb(mad(load_population(st.population_path)), st);
}

inline std::string run_qam(const CliState& st) {
  Population p = load_population(st.population_path);
  FuncPreset g = load_preset(st.g_path);
  return run_scalar_verb(qam(p, g), st);
}

inline std::string run_threshold(const CliState& st) {
  double t = au_threshold(load_population(st.x_path), load_population(st.y_path),
                          parse_rational(st.c_level));
  return run_scalar_verb(t, st);
}

inline std::string run_marginal(const CliState& st) {
  if (st.scaling != "one" && st.scaling != "linear")
    throw ValidationError("--scaling must be one or linear, got \"" + st.scaling + "\"");
  AxiologySpec a = load_axiology(st.axiology_path);
  double v = marginal_value(a, load_population(st.x_path), background_distribution(st),
                            st.scaling == "linear" ? SizeScaling::linear : SizeScaling::one,
                            st.marginal_n);
  return run_scalar_verb(v, st);
}

inline std::string run_converge(const CliState& st) {
  AxiologySpec a = load_axiology(st.axiology_path);
  Population x = load_population(st.x_path), y = load_population(st.y_path);
  Background bg = parse_background(st);
  std::vector<double> scales;
  if (!st.scales.empty()) scales = parse_scales(st.scales);
  ConvergenceScan scan = convergence_scan(a, x, y, bg, std::move(scales));
  if (st.resolved_format() == "json") {
    Json pts = Json::array();
    for (const auto& p : scan.points)
      pts.push_back(Json{{"scale", p.scale},
                         {"counterpart_ordering", ordering_name(p.counterpart)},
                         {"base_ordering", ordering_name(p.base)},
                         {"agree", p.agree}});
    Json j{{"counterpart", scan.counterpart.target.label()}, {"points", std::move(pts)}};
    j["stable_from"] = scan.stable_from ? Json(*scan.stable_from) : Json();
    return json_line(j);
  }
  std::string out = "scale,counterpart_ordering,base_ordering,agree\n";
  for (const auto& p : scan.points)
    out += fmt_sig(p.scale, st.sigfigs) + "," + ordering_name(p.counterpart) + "," +
           ordering_name(p.base) + "," + (p.agree ? "true" : "false") + "\n";
  return out;
}

inline std::string run_weighting(const CliState& st) {
  AxiologySpec a = load_axiology(st.axiology_path);
  Distribution d = load_distribution(st.background_dist_path);
  if (st.points < 2) throw ValidationError("--points must be at least 2");
  Rational lo = parse_rational(st.from), hi = parse_rational(st.to);
  if (!(hi > lo)) throw ValidationError("--to must exceed --from");
  DerivedWeighting closed = derived_weighting(a, d);
  Json rows = Json::array();
  std::string csv = "w,f_numeric,f_closed_form\n";
  for (int i = 0; i < st.points; ++i) {
    Rational w = lo + (hi - lo) * Rational(i) / Rational(st.points - 1);
    double fn = st.step > 0 ? numeric_weighting(a, d, w, st.step)
                            : numeric_weighting_converged(a, d, w);
    double fc = closed.at(w);
    if (st.resolved_format() == "json")
      rows.push_back(Json{{"w", to_double(w)}, {"f_numeric", fn}, {"f_closed_form", fc}});
    else
      csv += fmt_sig(to_double(w), st.sigfigs) + "," + fmt_sig(fn, st.sigfigs) + "," +
             fmt_sig(fc, st.sigfigs) + "\n";
  }
  if (st.resolved_format() == "json") return json_line(Json{{"points", std::move(rows)}});
  return csv;
}

inline std::string xrisk_csv_header() { return "Axiology,Z_size,MIC,MOC,VDR\n"; }

inline std::string run_xrisk(const CliState& st) {
  AxiologySpec a = load_axiology(st.axiology_path);
  Scenario s = load_scenario(st.scenario_path);
  double m1 = mic(a, s), m2 = moc(a, s), m3 = vdr(a, s);
  std::string zs = format_rational(s.z.empty() ? Rational(0) : Rational(s.z.size_exact()));
  if (st.resolved_format() == "json")
    return json_line(Json{
        {"axiology", a.label()}, {"Z_size", zs}, {"MIC", m1}, {"MOC", m2}, {"VDR", m3}});
  return xrisk_csv_header() + a.label() + "," + zs + "," + fmt_sig(m1, st.sigfigs) + "," +
         fmt_sig(m2, st.sigfigs) + "," + fmt_sig(m3, st.sigfigs) + "\n";
}

inline std::string run_table1(const CliState& st) {
  std::vector<XRiskRow> rows = cost_table();
  if (st.resolved_format() == "json") {
    Json arr = Json::array();
    for (const auto& r : rows)
      arr.push_back(Json{{"axiology", r.axiology},
                         {"Z_size", r.z_size ? Json(format_rational(*r.z_size)) : Json("any")},
                         {"MIC", r.mic},
                         {"MOC", r.moc},
                         {"VDR", r.vdr}});
    return json_line(Json{{"rows", std::move(arr)}});
  }
  std::string out = xrisk_csv_header();
  for (const auto& r : rows)
    out += r.axiology + "," + (r.z_size ? format_rational(*r.z_size) : std::string("any")) + "," +
           fmt_sig(r.mic, st.sigfigs) + "," + fmt_sig(r.moc, st.sigfigs) + "," +
           fmt_sig(r.vdr, st.sigfigs) + "\n";
  return out;
}

inline std::string run_repugnant(const CliState& st) {
  AxiologySpec a = load_axiology(st.axiology_path);
  Population y = load_population(st.y_path);
  auto w = repugnant_background(a, y, parse_rational(st.epsilon), st.cap);
  if (st.resolved_format() == "json") {
    Json j{{"found", w.has_value()}};
    if (w) {
      j["x_size"] = format_rational(w->x.size_exact());
      j["epsilon"] = to_double(parse_rational(st.epsilon));
      j["background"] = w->background;
    }
    return json_line(j);
  }
  std::string out = "found,x_size,background\n";
  if (w)
    out += "true," + format_rational(w->x.size_exact()) + "," + std::to_string(w->background) + "\n";
  else
    out += "false,,\n";
  return out;
}

}  // namespace detail

inline int cli_run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  detail::CliState st;
  CLI::App app{"population axiology toolkit: value functions, orderings, large-background "
               "limits, and existential-risk cost accounting"};
  app.require_subcommand(1);
  app.fallthrough(false);

  auto add_common = [&st](CLI::App* sub) {
    sub->add_option("--format", st.format, "output format: csv or json (default: POPAX_FORMAT or csv)");
    sub->add_option("--output", st.output, "write the report to this path instead of stdout");
    sub->add_option("--sigfigs", st.sigfigs, "significant digits for CSV numbers (default 10)")
        ->check(CLI::Range(1, 17));
  };

  CLI::App* value = app.add_subcommand("value", "evaluate an axiology on a population");
  value->add_option("--axiology", st.axiology_path, "axiology JSON file")->required();
  value->add_option("--population", st.population_path, "population JSON/CSV file")->required();
  add_common(value);

  CLI::App* cmp = app.add_subcommand("compare", "order two populations under an axiology");
  cmp->add_option("--axiology", st.axiology_path, "axiology JSON file")->required();
  cmp->add_option("--x", st.x_path, "first population")->required();
  cmp->add_option("--y", st.y_path, "second population")->required();
  add_common(cmp);

  CLI::App* madc = app.add_subcommand("mad", "mean absolute difference of a population");
  madc->add_option("--population", st.population_path, "population JSON/CSV file")->required();
  add_common(madc);

  CLI::App* qamc = app.add_subcommand("qam", "quasi-arithmetic mean under a transform");
  qamc->add_option("--population", st.population_path, "population JSON/CSV file")->required();
  qamc->add_option("--g", st.g_path, "transform preset JSON file")->required();
  add_common(qamc);

  CLI::App* thr = app.add_subcommand(
      "threshold", "background size where averagism starts agreeing with the critical level");
  thr->add_option("--x", st.x_path, "first population")->required();
  thr->add_option("--y", st.y_path, "second population")->required();
  thr->add_option("--c", st.c_level, "background welfare level (rational)")->required();
  add_common(thr);

  CLI::App* conv = app.add_subcommand("converge",
                                      "scan background sizes for agreement with the limit counterpart");
  conv->add_option("--axiology", st.axiology_path, "axiology JSON file")->required();
  conv->add_option("--x", st.x_path, "first population")->required();
  conv->add_option("--y", st.y_path, "second population")->required();
  conv->add_option("--background-average", st.background_average,
                   "background of identical lives at this welfare (rational)");
  conv->add_option("--background-dist", st.background_dist_path,
                   "background drawn from this distribution file");
  conv->add_option("--scales", st.scales, "comma-separated background sizes (default: 10^(k/16), k=0..144)");
  add_common(conv);

  CLI::App* wgt = app.add_subcommand("weighting",
                                     "limit priority weighting: closed form vs numeric marginal");
  wgt->add_option("--axiology", st.axiology_path, "MDT or QAA axiology JSON file")->required();
  wgt->add_option("--background-dist", st.background_dist_path, "background distribution file")
      ->required();
  wgt->add_option("--from", st.from, "grid start welfare (rational)")->required();
  wgt->add_option("--to", st.to, "grid end welfare (rational)")->required();
  wgt->add_option("--points", st.points, "grid size (default 50)");
  wgt->add_option("--t", st.step,
                  "difference-quotient step (default: ladder 1e-3..1e-6, finest reported)");
  add_common(wgt);

  CLI::App* marg = app.add_subcommand("marginal", "marginal value of adding x to a background");
  marg->add_option("--axiology", st.axiology_path, "axiology JSON file")->required();
  marg->add_option("--x", st.x_path, "added population")->required();
  marg->add_option("--background-average", st.background_average,
                   "background of identical lives at this welfare (rational)");
  marg->add_option("--background-dist", st.background_dist_path,
                   "background drawn from this distribution file");
  marg->add_option("--n", st.marginal_n, "background size (default 1e6)");
  marg->add_option("--scaling", st.scaling, "one | linear (multiply the gap by n)");
  add_common(marg);

  CLI::App* xr = app.add_subcommand("xrisk", "catastrophe costs for a scenario: MIC, MOC, VDR");
  xr->add_option("--axiology", st.axiology_path, "axiology JSON file")->required();
  xr->add_option("--scenario", st.scenario_path, "scenario JSON file")->required();
  add_common(xr);

  CLI::App* t1 = app.add_subcommand("table1", "headline cost table across background sizes");
  add_common(t1);

  CLI::App* rep = app.add_subcommand("repugnant",
                                     "minimal zero-welfare background forcing the repugnant verdict");
  rep->add_option("--axiology", st.axiology_path, "AU/VV1/VV2 axiology JSON file")->required();
  rep->add_option("--y", st.y_path, "blissful population")->required();
  rep->add_option("--epsilon", st.epsilon, "barely-worth-living welfare (rational)")->required();
  rep->add_option("--cap", st.cap, "largest background to try (default 10^6)");
  add_common(rep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream usage;
    int code = app.exit(e, usage, usage);
    (code == 0 ? out : err) << usage.str();
    return code == 0 ? 0 : 2;
  }

  try {
    std::string payload;
    if (value->parsed()) payload = detail::run_value(st);
    else if (cmp->parsed()) payload = detail::run_compare(st);
    else if (madc->parsed()) payload = detail::run_mad(st);
    else if (qamc->parsed()) payload = detail::run_qam(st);
    else if (thr->parsed()) payload = detail::run_threshold(st);
    else if (conv->parsed()) payload = detail::run_converge(st);
    else if (wgt->parsed()) payload = detail::run_weighting(st);
    else if (marg->parsed()) payload = detail::run_marginal(st);
    else if (xr->parsed()) payload = detail::run_xrisk(st);
    else if (t1->parsed()) payload = detail::run_table1(st);
    else if (rep->parsed()) payload = detail::run_repugnant(st);
    else throw ValidationError("no verb given");

    if (!st.output.empty()) {
      std::ofstream f(st.output, std::ios::binary);
      if (!f) throw ValidationError(st.output + ": cannot open for writing");
      f << payload;
    } else {
      out << payload;
    }
    return 0;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
}

inline int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("popax");
  for (const auto& a : args) argv.push_back(a.c_str());
  return cli_run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace popax
