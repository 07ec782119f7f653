// combtest: batch front end for the detection laboratory.
//
// Exit status: 0 success, 2 invalid configuration, 3 enumeration cap
// exceeded, 1 anything else. Errors are reported on stderr as one JSON
// object {"error": <class>, "message": <text>}.

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "combtest/bounds.hpp"
#include "combtest/classes.hpp"
#include "combtest/errors.hpp"
#include "combtest/io.hpp"
#include "combtest/risk.hpp"

namespace {

using combtest::ClassSpec;
using Json = nlohmann::ordered_json;

constexpr int kExitInvalid = 2;
constexpr int kExitCap = 3;

struct ClassArgs {
  std::string family;
  std::map<std::string, std::int64_t> values;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--class", family, "disjoint, ksets, stars, matchings, trees, cliques or grid")
        ->required();
    for (const char* name : {"n", "K", "N", "m", "k", "side", "square"}) {
      cmd->add_option_function<std::int64_t>(std::string("--") + name,
                                             [this, name](std::int64_t v) { values[name] = v; });
    }
  }

  ClassSpec spec() const {
    const auto parsed = combtest::parse_family(family);
    auto spec = ClassSpec::from_parameters(parsed, values);
    const auto used = spec.parameters();
    for (const auto& [key, value] : values) {
      if (!used.count(key)) {
        throw combtest::InvalidArgument("class " + family + " takes no --" + key + " parameter");
      }
    }
    return spec;
  }

  Json config() const {
    Json j;
    j["class"] = family;
    for (const auto& [key, value] : spec().parameters()) j[key] = value;
    return j;
  }
};

struct Common {
  std::string format = "csv";
  std::string out;
  std::uint64_t cap = combtest::kDefaultEnumerationCap;
  int workers = 1;
  std::optional<std::uint64_t> seed;

  void add_to(CLI::App* cmd, bool stochastic) {
    cmd->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", out, "output file (default: stdout)");
    cmd->add_option("--cap", cap, "enumeration cap")->check(CLI::PositiveNumber);
    cmd->add_option("--workers", workers, "worker threads")->check(CLI::Range(1, 256));
    auto* s = cmd->add_option("--seed", seed, "master seed");
    if (stochastic) s->required();
  }

  combtest::RiskOptions risk_options() const {
    combtest::RiskOptions o;
    o.workers = workers;
    o.cap = cap;
    return o;
  }

  // The config echoed into outputs excludes --workers and --out: neither
  // changes any emitted number.
  void annotate(Json& config) const {
    config["format"] = format;
    config["cap"] = cap;
  }

  void emit(const std::string& text) const {
    if (out.empty()) {
      std::cout << text;
      std::cout.flush();
      return;
    }
    std::ofstream file(out, std::ios::binary);
    if (!file) throw combtest::InvalidArgument("cannot open output file " + out);
    file << text;
  }
};

std::vector<double> make_grid(const std::vector<double>& mus, const std::string& grid_spec) {
  if (!mus.empty() && !grid_spec.empty()) {
    throw combtest::InvalidArgument("give either --mu or --mu-grid, not both");
  }
  if (!mus.empty()) return mus;
  if (grid_spec.empty()) throw combtest::InvalidArgument("need --mu or --mu-grid");
  // start:stop:count, inclusive and evenly spaced.
  const auto a = grid_spec.find(':');
  const auto b = grid_spec.find(':', a == std::string::npos ? a : a + 1);
  if (a == std::string::npos || b == std::string::npos) {
    throw combtest::InvalidArgument("--mu-grid expects start:stop:count");
  }
  const double start = combtest::parse_real(grid_spec.substr(0, a));
  const double stop = combtest::parse_real(grid_spec.substr(a + 1, b - a - 1));
  const long count = std::stol(grid_spec.substr(b + 1));
  if (count < 1) throw combtest::InvalidArgument("--mu-grid count must be >= 1");
  std::vector<double> grid;
  for (long i = 0; i < count; ++i) {
    grid.push_back(count == 1 ? start : start + (stop - start) * static_cast<double>(i) / (count - 1));
  }
  return grid;
}

Json real_list(const std::vector<double>& values) {
  Json j = Json::array();
  for (double v : values) j.push_back(combtest::real_json(v));
  return j;
}

std::string render_risk(const Common& common, const combtest::RunInfo& info,
                        const std::vector<combtest::RiskRow>& rows,
                        const std::vector<std::pair<std::string, std::string>>& extra,
                        Json extra_json) {
  if (common.format == "csv") return combtest::risk_table_csv(info, rows, extra);
  Json j = combtest::run_json(info);
  Json list = Json::array();
  for (const auto& row : rows) {
    Json r;
    r["mu"] = combtest::real_json(row.mu);
    const Json estimate = combtest::to_json(row.estimate);
    for (const auto& [k, v] : estimate.items()) r[k] = v;
    list.push_back(r);
  }
  j["rows"] = list;
  for (auto& [k, v] : extra_json.items()) j[k] = v;
  return j.dump(2) + "\n";
}

std::string render_scalars(const Common& common, const combtest::RunInfo& info,
                           std::string_view schema, const Json& result) {
  if (common.format == "json") {
    Json j = combtest::run_json(info);
    j["result"] = result;
    return j.dump(2) + "\n";
  }
  // Flatten one level of nesting as parent.child keys.
  std::vector<std::pair<std::string, std::string>> entries;
  auto cell = [](const Json& v) {
    if (v.is_number_float()) return combtest::format_real(v.get<double>());
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
  };
  for (const auto& [k, v] : result.items()) {
    if (v.is_object()) {
      for (const auto& [k2, v2] : v.items()) entries.emplace_back(k + "." + k2, cell(v2));
    } else {
      entries.emplace_back(k, cell(v));
    }
  }
  return combtest::key_value_csv(info, schema, entries);
}

void report_error(const char* kind, const std::string& message) {
  Json j;
  j["error"] = kind;
  j["message"] = message;
  std::cerr << j.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"combtest: structured Gaussian detection laboratory"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(combtest::version()));

  // risk
  auto* risk = app.add_subcommand("risk", "Monte Carlo risk of one test at given mu values");
  ClassArgs risk_class;
  Common risk_common;
  std::string risk_test = "optimal";
  std::vector<double> risk_mu;
  std::int64_t risk_trials = 10000;
  std::optional<double> risk_emax0;
  std::int64_t risk_emax_trials = 10000;
  risk_class.add_to(risk);
  risk_common.add_to(risk, true);
  risk->add_option("--test", risk_test, "averaging, maximum or optimal")
      ->check(CLI::IsMember({"averaging", "maximum", "optimal"}));
  risk->add_option("--mu", risk_mu, "contamination level(s)")->required();
  risk->add_option("--trials", risk_trials, "trials per arm");
  risk->add_option("--emax0", risk_emax0, "upper estimate of E_0 max X_S (maximum test)");
  risk->add_option("--emax-trials", risk_emax_trials, "draws for estimating emax0 when not given");

  // scan
  auto* scan = app.add_subcommand("scan", "risk curve over a mu grid with the critical mu");
  ClassArgs scan_class;
  Common scan_common;
  std::string scan_test = "optimal";
  std::vector<double> scan_mu;
  std::string scan_grid;
  std::int64_t scan_trials = 5000;
  std::optional<double> scan_emax0;
  std::int64_t scan_emax_trials = 10000;
  scan_class.add_to(scan);
  scan_common.add_to(scan, true);
  scan->add_option("--test", scan_test)->check(CLI::IsMember({"averaging", "maximum", "optimal"}));
  scan->add_option("--mu", scan_mu, "explicit increasing grid");
  scan->add_option("--mu-grid", scan_grid, "start:stop:count");
  scan->add_option("--trials", scan_trials, "trials per arm and grid point");
  scan->add_option("--emax0", scan_emax0);
  scan->add_option("--emax-trials", scan_emax_trials);

  // bounds
  auto* bounds = app.add_subcommand("bounds", "closed-form thresholds and bounds");
  Common bounds_common;
  std::string prop;
  std::map<std::string, double> bound_params;
  ClassArgs bounds_class;
  std::int64_t bounds_trials = 10000;
  double dudley_c = 1.0;
  bounds_common.add_to(bounds, false);
  bounds->add_option("--prop", prop, "bound name, or type1 / dudley (need a class)")->required();
  for (const char* name : {"n", "K", "delta", "emax0", "mgf", "m", "k", "M", "t", "V"}) {
    bounds->add_option_function<double>(std::string("--") + name,
                                        [&bound_params, name](double v) { bound_params[name] = v; });
  }
  bounds->add_option("--class", bounds_class.family, "class for type1 / dudley");
  for (const char* name : {"N", "side", "square"}) {
    bounds->add_option_function<std::int64_t>(std::string("--") + name, [&bounds_class, name](std::int64_t v) {
      bounds_class.values[name] = v;
    });
  }
  bounds->add_option("--trials", bounds_trials, "draws for type1");
  bounds->add_option("--C", dudley_c, "constant for dudley");

  // overlap
  auto* overlap = app.add_subcommand("overlap", "overlap MGF E exp(mu^2 Z) and the pairs bound");
  ClassArgs overlap_class;
  Common overlap_common;
  double overlap_mu = 0.0;
  std::int64_t overlap_pairs = 10000;
  std::optional<std::int64_t> tc_m;
  std::int64_t tc_reps = 101;
  overlap_class.add_to(overlap);
  overlap_common.add_to(overlap, true);
  overlap->add_option("--mu", overlap_mu)->required();
  overlap->add_option("--pairs", overlap_pairs);
  overlap->add_option("--tC-M", tc_m, "also estimate t_C(M) for this subclass size");
  overlap->add_option("--tC-reps", tc_reps);

  // emax
  auto* emax = app.add_subcommand("emax", "Monte Carlo E_0 max_S X_S");
  ClassArgs emax_class;
  Common emax_common;
  std::int64_t emax_trials = 10000;
  emax_class.add_to(emax);
  emax_common.add_to(emax, true);
  emax->add_option("--trials", emax_trials);

  // cover
  auto* cover = app.add_subcommand("cover", "greedy cover and packing sizes");
  ClassArgs cover_class;
  Common cover_common;
  double cover_radius = 0.0;
  std::optional<double> packing_t;
  cover_class.add_to(cover);
  cover_common.add_to(cover, false);
  cover->add_option("--radius", cover_radius)->required();
  cover->add_option("--packing", packing_t, "also a greedy t-separated set size");

  // nonmono
  auto* nonmono = app.add_subcommand("nonmono", "subclass non-monotonicity construction");
  Common nonmono_common;
  int nonmono_k = 0;
  double nonmono_eps = 0.0;
  std::optional<double> nonmono_mu;
  std::int64_t nonmono_trials = 2000;
  std::string nonmono_form = "absolute";
  nonmono_common.add_to(nonmono, true);
  nonmono->add_option("--K", nonmono_k)->required();
  nonmono->add_option("--epsilon", nonmono_eps)->required();
  nonmono->add_option("--mu", nonmono_mu, "override the mu derived from epsilon");
  nonmono->add_option("--trials", nonmono_trials);
  nonmono->add_option("--bayes-form", nonmono_form, "absolute or truncated")
      ->check(CLI::IsMember({"absolute", "truncated"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report_error("InvalidConfig", e.what());
    return kExitInvalid;
  }

  try {
    if (*risk) {
      const auto spec = risk_class.spec();
      const auto test = combtest::parse_test(risk_test);
      const combtest::SeededRng rng(*risk_common.seed);
      auto options = risk_common.risk_options();
      Json config = risk_class.config();
      config["test"] = risk_test;
      config["mu"] = real_list(risk_mu);
      config["trials"] = risk_trials;
      std::vector<std::pair<std::string, std::string>> extra;
      Json extra_json = Json::object();
      if (test == combtest::TestKind::maximum) {
        if (risk_emax0) {
          config["emax0"] = combtest::real_json(*risk_emax0);
          options.emax0 = risk_emax0;
        } else {
          config["emax_trials"] = risk_emax_trials;
          const auto e = combtest::estimate_emax0(spec, risk_emax_trials, rng.derive(1 << 20), options);
          options.emax0 = e.emax;
          extra.emplace_back("emax0", combtest::format_real(e.emax));
          extra_json["emax0"] = combtest::real_json(e.emax);
        }
      }
      risk_common.annotate(config);
      std::vector<combtest::RiskRow> rows;
      for (std::size_t i = 0; i < risk_mu.size(); ++i) {
        const combtest::ProblemInstance instance(spec, risk_mu[i]);
        rows.push_back({risk_mu[i], combtest::estimate_risk(test, instance, risk_trials, rng.derive(i), options)});
      }
      const combtest::RunInfo info{"risk", config, *risk_common.seed};
      risk_common.emit(render_risk(risk_common, info, rows, extra, extra_json));
    } else if (*scan) {
      const auto spec = scan_class.spec();
      const auto test = combtest::parse_test(scan_test);
      const auto grid = make_grid(scan_mu, scan_grid);
      const combtest::SeededRng rng(*scan_common.seed);
      auto options = scan_common.risk_options();
      Json config = scan_class.config();
      config["test"] = scan_test;
      config["mu"] = real_list(grid);
      config["trials"] = scan_trials;
      std::vector<std::pair<std::string, std::string>> extra;
      Json extra_json = Json::object();
      if (test == combtest::TestKind::maximum) {
        if (scan_emax0) {
          config["emax0"] = combtest::real_json(*scan_emax0);
          options.emax0 = scan_emax0;
        } else {
          config["emax_trials"] = scan_emax_trials;
          const auto e = combtest::estimate_emax0(spec, scan_emax_trials, rng.derive(1 << 20), options);
          options.emax0 = e.emax;
          extra.emplace_back("emax0", combtest::format_real(e.emax));
          extra_json["emax0"] = combtest::real_json(e.emax);
        }
      }
      scan_common.annotate(config);
      const auto curve = combtest::scan_critical_mu(spec, test, grid, scan_trials, rng, options);
      std::vector<combtest::RiskRow> rows;
      for (std::size_t i = 0; i < grid.size(); ++i) rows.push_back({grid[i], curve.estimates[i]});
      extra.emplace_back("critical_mu", curve.critical_mu ? combtest::format_real(*curve.critical_mu) : "none");
      extra_json["critical_mu"] = curve.critical_mu ? combtest::real_json(*curve.critical_mu) : Json();
      const combtest::RunInfo info{"scan", config, *scan_common.seed};
      scan_common.emit(render_risk(scan_common, info, rows, extra, extra_json));
    } else if (*bounds) {
      Json config;
      config["prop"] = prop;
      for (const auto& [k, v] : bound_params) config[k] = combtest::real_json(v);
      combtest::BoundReport report;
      std::optional<std::uint64_t> seed_used;
      if (prop == "type1" || prop == "dudley") {
        // Class parameters share names with the bound inputs (n, K, m, k).
        for (const char* key : {"n", "K", "m", "k"}) {
          if (bound_params.count(key)) bounds_class.values[key] = static_cast<std::int64_t>(bound_params[key]);
        }
        if (bounds_class.family.empty()) throw combtest::InvalidArgument(prop + " needs --class");
        const auto spec = bounds_class.spec();
        config = bounds_class.config();
        config["prop"] = prop;
        if (prop == "type1") {
          if (!bounds_common.seed) throw combtest::InvalidArgument("type1 needs --seed");
          if (!bound_params.count("delta")) throw combtest::InvalidArgument("type1 needs --delta");
          config["delta"] = combtest::real_json(bound_params["delta"]);
          config["trials"] = bounds_trials;
          seed_used = bounds_common.seed;
          report = combtest::type1_bound_threshold(spec, bound_params["delta"], bounds_trials,
                                                   combtest::SeededRng(*bounds_common.seed),
                                                   bounds_common.risk_options())
                       .report;
        } else {
          config["C"] = combtest::real_json(dudley_c);
          const auto d = combtest::dudley_bound(spec, dudley_c, bounds_common.cap);
          report.name = "dudley";
          report.formula = "C * integral_0^diam sqrt(log N(t)) dt (greedy N, 64-point left sum)";
          report.inputs = {{"C", dudley_c}};
          report.value = d.value;
          report.direction = combtest::BoundDirection::upper_bound_on_risk;
          report.note = "upper estimate of E_0 max X_S for the given constant";
          report.outputs = {{"diameter", d.diameter},
                            {"cap_diam_sqrt_logN", d.diameter * std::sqrt(spec.log_cardinality())}};
        }
      } else {
        report = combtest::evaluate_bound(prop, bound_params);
      }
      bounds_common.annotate(config);
      const combtest::RunInfo info{"bounds", config, seed_used.value_or(0)};
      bounds_common.emit(render_scalars(bounds_common, info, "combtest.bounds/1", combtest::to_json(report)));
    } else if (*overlap) {
      const auto spec = overlap_class.spec();
      const combtest::SeededRng rng(*overlap_common.seed);
      Json config = overlap_class.config();
      config["mu"] = combtest::real_json(overlap_mu);
      config["pairs"] = overlap_pairs;
      const auto mgf = combtest::estimate_overlap_mgf(spec, overlap_mu, overlap_pairs, rng.derive(0));
      Json result;
      result["mgf"] = combtest::real_json(mgf.estimate);
      result["mgf_se"] = combtest::real_json(mgf.std_error);
      result["exact"] = mgf.exact;
      result["pairs_lower_bound"] =
          combtest::real_json(combtest::pairs_risk_lower_bound(std::max(1.0, mgf.estimate)));
      if (tc_m) {
        config["tC_M"] = *tc_m;
        config["tC_reps"] = tc_reps;
        const double t = combtest::estimate_tC(spec, *tc_m, tc_reps, rng.derive(1), overlap_common.cap);
        result["tC"] = combtest::real_json(t);
        result["random_subclass"] =
            combtest::to_json(combtest::random_subclass_bound(spec.set_size(), static_cast<double>(*tc_m), t));
      }
      overlap_common.annotate(config);
      const combtest::RunInfo info{"overlap", config, *overlap_common.seed};
      overlap_common.emit(render_scalars(overlap_common, info, "combtest.overlap/1", result));
    } else if (*emax) {
      const auto spec = emax_class.spec();
      Json config = emax_class.config();
      config["trials"] = emax_trials;
      const auto e = combtest::estimate_emax0(spec, emax_trials, combtest::SeededRng(*emax_common.seed),
                                              emax_common.risk_options());
      Json result;
      result["emax"] = combtest::real_json(e.emax);
      result["std_error"] = combtest::real_json(e.std_error);
      result["analytic_cap"] = combtest::real_json(e.analytic_cap);
      emax_common.annotate(config);
      const combtest::RunInfo info{"emax", config, *emax_common.seed};
      emax_common.emit(render_scalars(emax_common, info, "combtest.emax/1", result));
    } else if (*cover) {
      const auto spec = cover_class.spec();
      Json config = cover_class.config();
      config["radius"] = combtest::real_json(cover_radius);
      const auto table = combtest::enumerate_members(spec, cover_common.cap);
      const auto centers = combtest::greedy_cover(table, cover_radius);
      Json result;
      result["class_size"] = table.size();
      result["cover_size"] = centers.size();
      if (packing_t) {
        config["packing_t"] = combtest::real_json(*packing_t);
        result["packing_size"] = combtest::packing_estimate(table, *packing_t);
      }
      Json members = Json::array();
      for (std::size_t i : centers) members.push_back(table.at(i).encode());
      if (cover_common.format == "json") result["cover"] = members;
      cover_common.annotate(config);
      const combtest::RunInfo info{"cover", config, 0};
      cover_common.emit(render_scalars(cover_common, info, "combtest.cover/1", result));
    } else if (*nonmono) {
      Json config;
      config["K"] = nonmono_k;
      config["epsilon"] = combtest::real_json(nonmono_eps);
      if (nonmono_mu) config["mu"] = combtest::real_json(*nonmono_mu);
      config["trials"] = nonmono_trials;
      config["bayes_form"] = nonmono_form;
      auto options = nonmono_common.risk_options();
      options.bayes_form = nonmono_form == "truncated" ? combtest::BayesForm::truncated_ratio
                                                       : combtest::BayesForm::absolute_deviation;
      const auto report = combtest::nonmonotonicity_demo(
          nonmono_k, nonmono_eps, nonmono_trials, combtest::SeededRng(*nonmono_common.seed), options, nonmono_mu);
      nonmono_common.annotate(config);
      const combtest::RunInfo info{"nonmono", config, *nonmono_common.seed};
      nonmono_common.emit(render_scalars(nonmono_common, info, "combtest.nonmono/1", combtest::to_json(report)));
    }
  } catch (const combtest::CapExceeded& e) {
    report_error("CapExceeded", e.what());
    return kExitCap;
  } catch (const combtest::InvalidArgument& e) {
    report_error("InvalidConfig", e.what());
    return kExitInvalid;
  } catch (const std::exception& e) {
    report_error("Error", e.what());
    return 1;
  }
  return 0;
}
