#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "combtest/bounds.hpp"
#include "combtest/detectors.hpp"
#include "combtest/io.hpp"
#include "combtest/risk.hpp"

namespace py = pybind11;
using namespace combtest;

namespace {

std::vector<int> to_list(const IndexSet& s) { return {s.indices().begin(), s.indices().end()}; }

RiskOptions make_options(int workers, std::uint64_t cap, std::optional<double> emax0, const std::string& bayes_form) {
  RiskOptions o;
  o.workers = workers;
  o.cap = cap;
  o.emax0 = emax0;
  if (bayes_form == "absolute") {
    o.bayes_form = BayesForm::absolute_deviation;
  } else if (bayes_form == "truncated") {
    o.bayes_form = BayesForm::truncated_ratio;
  } else {
    throw InvalidArgument("bayes_form must be 'absolute' or 'truncated'");
  }
  return o;
}

py::dict estimate_dict(const Estimate& e) {
  py::dict d;
  d["value"] = e.value;
  d["std_error"] = e.std_error;
  return d;
}

py::object from_json(const nlohmann::ordered_json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Detection of a contaminated subset in Gaussian noise: classes, tests, risks and bounds.";
  m.attr("__version__") = std::string(version());

  auto error = py::register_exception<Error>(m, "Error");
  auto invalid = py::register_exception<InvalidArgument>(m, "InvalidArgument", error.ptr());
  py::register_exception<DimensionError>(m, "DimensionError", invalid.ptr());
  py::register_exception<MTooLargeForClass>(m, "MTooLargeForClass", invalid.ptr());
  py::register_exception<CapExceeded>(m, "CapExceeded", error.ptr());

  m.attr("DEFAULT_CAP") = kDefaultEnumerationCap;

  py::class_<SeededRng>(m, "SeededRng")
      .def(py::init<std::uint64_t, std::uint64_t>(), py::arg("seed"), py::arg("stream") = 0)
      .def_property_readonly("seed", &SeededRng::master_seed)
      .def_property_readonly("stream", &SeededRng::stream_id)
      .def("derive", &SeededRng::derive, py::arg("key"))
      .def("uniform", &SeededRng::uniform)
      .def("normal", &SeededRng::normal)
      .def("below", &SeededRng::below, py::arg("bound"))
      .def("next", [](SeededRng& r) { return r(); });

  py::class_<ClassSpec>(m, "ClassSpec")
      .def_static("disjoint_sets", &ClassSpec::disjoint_sets, py::arg("N"), py::arg("K"))
      .def_static("k_sets", &ClassSpec::k_sets, py::arg("n"), py::arg("K"))
      .def_static("stars", &ClassSpec::stars, py::arg("m"))
      .def_static("perfect_matchings", &ClassSpec::perfect_matchings, py::arg("m"))
      .def_static("spanning_trees", &ClassSpec::spanning_trees, py::arg("m"))
      .def_static("cliques", &ClassSpec::cliques, py::arg("m"), py::arg("k"))
      .def_static("grid_squares", &ClassSpec::grid_squares, py::arg("side"), py::arg("square"))
      .def_static(
          "from_parameters",
          [](const std::string& family, const std::map<std::string, std::int64_t>& params) {
            return ClassSpec::from_parameters(parse_family(family), params);
          },
          py::arg("family"), py::arg("params"))
      .def_property_readonly("family", [](const ClassSpec& s) { return family_name(s.family()); })
      .def_property_readonly("n", &ClassSpec::n)
      .def_property_readonly("K", &ClassSpec::set_size)
      .def_property_readonly("N", [](const ClassSpec& s) {
        return py::int_(py::str(s.cardinality().str()));
      })
      .def_property_readonly("log_N", &ClassSpec::log_cardinality)
      .def("parameters", &ClassSpec::parameters)
      .def("__eq__", [](const ClassSpec& a, const ClassSpec& b) { return a == b; })
      .def("__repr__", &ClassSpec::describe);

  m.def(
      "enumerate",
      [](const ClassSpec& spec, std::uint64_t cap) {
        std::vector<std::vector<int>> out;
        enumerate(spec, [&](std::span<const int> s) { out.emplace_back(s.begin(), s.end()); }, cap);
        return out;
      },
      py::arg("spec"), py::arg("cap") = kDefaultEnumerationCap);
  m.def(
      "sample_uniform", [](const ClassSpec& spec, SeededRng& rng) { return to_list(sample_uniform(spec, rng)); },
      py::arg("spec"), py::arg("rng"));
  m.def(
      "is_member",
      [](const ClassSpec& spec, const std::vector<int>& s) { return is_member(spec, IndexSet::from_unsorted(spec.n(), s)); },
      py::arg("spec"), py::arg("indices"));
  m.def(
      "max_weight_member",
      [](const ClassSpec& spec, const std::vector<double>& x, std::uint64_t cap) {
        const auto r = max_weight_member(spec, x, cap);
        return py::make_tuple(to_list(r.argmax), r.value);
      },
      py::arg("spec"), py::arg("x"), py::arg("cap") = kDefaultEnumerationCap);
  m.def(
      "gaussian_sample",
      [](const ClassSpec& spec, double mu, std::optional<std::vector<int>> support, SeededRng& rng) {
        const ProblemInstance inst(spec, mu);
        const Hypothesis h = support ? Hypothesis(Contaminated{IndexSet::from_unsorted(spec.n(), *support)})
                                     : Hypothesis(Null{});
        const auto x = gaussian_sample(inst, h, rng);
        return std::vector<double>(x.values().begin(), x.values().end());
      },
      py::arg("spec"), py::arg("mu"), py::arg("support"), py::arg("rng"));

  m.def(
      "averaging_test",
      [](const std::vector<double>& x, const ClassSpec& spec, double mu) {
        const auto d = averaging_test(x, ProblemInstance(spec, mu));
        return py::make_tuple(d.reject, d.statistic, d.threshold);
      },
      py::arg("x"), py::arg("spec"), py::arg("mu"));
  m.def(
      "maximum_test",
      [](const std::vector<double>& x, const ClassSpec& spec, double mu, double emax0, std::uint64_t cap) {
        const auto d = maximum_test(x, ProblemInstance(spec, mu), emax0, cap);
        return py::make_tuple(d.reject, d.statistic, d.threshold);
      },
      py::arg("x"), py::arg("spec"), py::arg("mu"), py::arg("emax0"), py::arg("cap") = kDefaultEnumerationCap);
  m.def(
      "log_likelihood_ratio",
      [](const std::vector<double>& x, const ClassSpec& spec, double mu, std::uint64_t cap) {
        return log_likelihood_ratio(Observation(x), ProblemInstance(spec, mu), cap);
      },
      py::arg("x"), py::arg("spec"), py::arg("mu"), py::arg("cap") = kDefaultEnumerationCap);
  m.def(
      "optimal_test",
      [](const std::vector<double>& x, const ClassSpec& spec, double mu, std::uint64_t cap) {
        const auto d = optimal_test(Observation(x), ProblemInstance(spec, mu), cap);
        return py::make_tuple(d.reject, d.statistic, d.threshold);
      },
      py::arg("x"), py::arg("spec"), py::arg("mu"), py::arg("cap") = kDefaultEnumerationCap);

  m.def(
      "estimate_risk",
      [](const std::string& test, const ClassSpec& spec, double mu, std::int64_t trials, std::uint64_t seed,
         int workers, std::uint64_t cap, std::optional<double> emax0) {
        RiskEstimate r;
        {
          py::gil_scoped_release release;
          r = estimate_risk(parse_test(test), ProblemInstance(spec, mu), trials, SeededRng(seed),
                            make_options(workers, cap, emax0, "absolute"));
        }
        return from_json(to_json(r));
      },
      py::arg("test"), py::arg("spec"), py::arg("mu"), py::arg("trials"), py::arg("seed"), py::arg("workers") = 1,
      py::arg("cap") = kDefaultEnumerationCap, py::arg("emax0") = py::none());
  m.def(
      "estimate_bayes_risk",
      [](const ClassSpec& spec, double mu, std::int64_t trials, std::uint64_t seed, int workers,
         const std::string& bayes_form, std::uint64_t cap) {
        const auto options = make_options(workers, cap, std::nullopt, bayes_form);
        Estimate e;
        {
          py::gil_scoped_release release;
          e = estimate_bayes_risk(ProblemInstance(spec, mu), trials, SeededRng(seed), options);
        }
        return estimate_dict(e);
      },
      py::arg("spec"), py::arg("mu"), py::arg("trials"), py::arg("seed"), py::arg("workers") = 1,
      py::arg("bayes_form") = "absolute", py::arg("cap") = kDefaultEnumerationCap);
  m.def(
      "estimate_emax0",
      [](const ClassSpec& spec, std::int64_t trials, std::uint64_t seed, int workers, std::uint64_t cap) {
        EmaxEstimate e;
        {
          py::gil_scoped_release release;
          e = estimate_emax0(spec, trials, SeededRng(seed), make_options(workers, cap, std::nullopt, "absolute"));
        }
        py::dict d;
        d["emax"] = e.emax;
        d["std_error"] = e.std_error;
        d["analytic_cap"] = e.analytic_cap;
        return d;
      },
      py::arg("spec"), py::arg("trials"), py::arg("seed"), py::arg("workers") = 1,
      py::arg("cap") = kDefaultEnumerationCap);
  m.def(
      "scan_critical_mu",
      [](const ClassSpec& spec, const std::string& test, const std::vector<double>& grid, std::int64_t trials,
         std::uint64_t seed, int workers, std::optional<double> emax0) {
        RiskCurve c;
        {
          py::gil_scoped_release release;
          c = scan_critical_mu(spec, parse_test(test), grid, trials, SeededRng(seed),
                               make_options(workers, kDefaultEnumerationCap, emax0, "absolute"));
        }
        return from_json(to_json(c));
      },
      py::arg("spec"), py::arg("test"), py::arg("mu_grid"), py::arg("trials"), py::arg("seed"),
      py::arg("workers") = 1, py::arg("emax0") = py::none());
  m.def(
      "monotonicity_check",
      [](const ClassSpec& spec, double fraction, const std::vector<double>& grid, std::int64_t trials,
         std::uint64_t seed, int workers) {
        std::optional<MonotonicityReport> report;
        {
          py::gil_scoped_release release;
          report = monotonicity_check(spec, fraction, grid, trials, SeededRng(seed),
                                 make_options(workers, kDefaultEnumerationCap, std::nullopt, "absolute"));
        }
        const auto& r = *report;
        py::list rows;
        for (const auto& row : r.rows) {
          py::dict d;
          d["mu"] = row.mu;
          d["subclass"] = estimate_dict(row.subclass);
          d["full"] = estimate_dict(row.full);
          d["violated"] = row.violated;
          rows.append(d);
        }
        py::dict out;
        out["subclass_size"] = r.subclass.size();
        out["class_size"] = r.class_size;
        out["rows"] = rows;
        return out;
      },
      py::arg("spec"), py::arg("fraction"), py::arg("mu_grid"), py::arg("trials"), py::arg("seed"),
      py::arg("workers") = 1);
  m.def(
      "nonmonotonicity_demo",
      [](int k, double epsilon, std::int64_t trials, std::uint64_t seed, int workers, std::optional<double> mu,
         const std::string& bayes_form) {
        const auto options = make_options(workers, kDefaultEnumerationCap, std::nullopt, bayes_form);
        NonmonotonicityReport r;
        {
          py::gil_scoped_release release;
          r = nonmonotonicity_demo(k, epsilon, trials, SeededRng(seed), options, mu);
        }
        return from_json(to_json(r));
      },
      py::arg("K"), py::arg("epsilon"), py::arg("trials"), py::arg("seed"), py::arg("workers") = 1,
      py::arg("mu") = py::none(), py::arg("bayes_form") = "absolute");

  m.def("exact_overlap_pmf", &exact_overlap_pmf, py::arg("spec"));
  m.def(
      "estimate_overlap_mgf",
      [](const ClassSpec& spec, double mu, std::int64_t pairs, std::uint64_t seed) {
        const auto e = estimate_overlap_mgf(spec, mu, pairs, SeededRng(seed));
        py::dict d;
        d["estimate"] = e.estimate;
        d["std_error"] = e.std_error;
        d["exact"] = e.exact;
        return d;
      },
      py::arg("spec"), py::arg("mu"), py::arg("pairs"), py::arg("seed"));
  m.def(
      "estimate_tC",
      [](const ClassSpec& spec, std::int64_t m_subclass, std::int64_t repetitions, std::uint64_t seed) {
        return estimate_tC(spec, m_subclass, repetitions, SeededRng(seed));
      },
      py::arg("spec"), py::arg("M"), py::arg("repetitions"), py::arg("seed"));

  m.def("averaging_threshold", &averaging_threshold, py::arg("n"), py::arg("K"), py::arg("delta"));
  m.def("max_test_threshold", &max_test_threshold, py::arg("emax0"), py::arg("K"), py::arg("delta"));
  m.def("universal_threshold", &universal_threshold, py::arg("K"));
  m.def("pairs_risk_lower_bound", &pairs_risk_lower_bound, py::arg("mgf"));
  m.def("symmetric_threshold", &symmetric_threshold, py::arg("n"), py::arg("K"), py::arg("delta"));
  m.def("negass_threshold", &negass_threshold, py::arg("n"), py::arg("K"), py::arg("delta"));
  m.def(
      "clique_bounds",
      [](int mm, int k, double delta) {
        const auto b = clique_bounds(mm, k, delta);
        return py::make_tuple(b.lower_mu, b.upper_mu);
      },
      py::arg("m"), py::arg("k"), py::arg("delta"));
  m.def("vc_cover_bound", &vc_cover_bound, py::arg("n"), py::arg("vc_dimension"), py::arg("t"));
  m.def(
      "evaluate_bound",
      [](const std::string& name, const std::map<std::string, double>& params) {
        return from_json(to_json(evaluate_bound(name, params)));
      },
      py::arg("name"), py::arg("params"));
  m.def("bound_names", &bound_names);
}
