#include <doctest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <vector>

#include "combtest/io.hpp"

using namespace combtest;

namespace {

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0 || (std::isnan(a) && std::isnan(b)); }

RunInfo sample_info() {
  RunInfo info;
  info.command = "scan";
  info.seed = 18446744073709551615ull;
  info.config["class"] = "ksets";
  info.config["n"] = 10;
  info.config["K"] = 3;
  return info;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("reals round-trip through text") {
  SeededRng rng(1);
  for (int i = 0; i < 10000; ++i) {
    const double v = std::ldexp(rng.uniform() - 0.5, static_cast<int>(rng.below(200)) - 100);
    CHECK(same_bits(parse_real(format_real(v)), v));
  }
  for (double v : {0.0, -0.0, 1e-320, std::numeric_limits<double>::max(), 0.1, 1.0 / 3.0}) {
    CHECK(same_bits(parse_real(format_real(v)), v));
  }
  CHECK(format_real(NAN) == "nan");
  CHECK(format_real(INFINITY) == "inf");
  CHECK(format_real(-INFINITY) == "-inf");
  CHECK(std::isnan(parse_real("nan")));
  CHECK(parse_real("-inf") == -INFINITY);
  CHECK_THROWS_AS(parse_real("1.5x"), InvalidArgument);
  CHECK_THROWS_AS(parse_real(""), InvalidArgument);
}

TEST_CASE("risk table CSV round-trips") {
  SeededRng rng(2);
  std::vector<RiskRow> rows;
  for (int i = 0; i < 20; ++i) {
    RiskRow row;
    row.mu = 0.1 * i + rng.uniform() * 1e-7;
    row.estimate = RiskEstimate::from_counts(static_cast<std::int64_t>(rng.below(1000)),
                                             static_cast<std::int64_t>(rng.below(1000)), 1000);
    rows.push_back(row);
  }
  const auto text = risk_table_csv(sample_info(), rows, {{"critical_mu", format_real(0.75)}});
  CHECK(text.rfind("#schema=combtest.risk/1 columns=mu,type1,se1,type2,se2,total,se_total,trials\n", 0) == 0);
  CHECK(text.find('\r') == std::string::npos);
  const auto parsed = parse_risk_table_csv(text);
  CHECK(parsed.meta.at("seed") == "18446744073709551615");
  CHECK(parsed.meta.at("command") == "scan");
  CHECK(parsed.meta.at("critical_mu") == "0.75");
  CHECK(parsed.meta.at("version") == version());
  CHECK(nlohmann::ordered_json::parse(parsed.meta.at("config")) == sample_info().config);
  REQUIRE(parsed.rows.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& a = rows[i].estimate;
    const auto& b = parsed.rows[i].estimate;
    CHECK(same_bits(parsed.rows[i].mu, rows[i].mu));
    CHECK(same_bits(a.type1, b.type1));
    CHECK(same_bits(a.se_type1, b.se_type1));
    CHECK(same_bits(a.type2, b.type2));
    CHECK(same_bits(a.se_type2, b.se_type2));
    CHECK(same_bits(a.total, b.total));
    CHECK(same_bits(a.se_total, b.se_total));
    CHECK(a.trials == b.trials);
  }
  // Same input, same bytes.
  CHECK(risk_table_csv(sample_info(), rows) == risk_table_csv(sample_info(), rows));
}

TEST_CASE("malformed risk tables are rejected") {
  CHECK_THROWS_AS(parse_risk_table_csv("#schema=x\n"), InvalidArgument);
  CHECK_THROWS_AS(parse_risk_table_csv("a,b\n1,2\n"), InvalidArgument);
  CHECK_THROWS_AS(parse_risk_table_csv(std::string(kRiskColumns) + "\n1,2,3\n"), InvalidArgument);
}

TEST_CASE("JSON estimates round-trip") {
  const auto e = RiskEstimate::from_counts(3, 997, 1000);
  const auto j = to_json(e);
  const auto back = risk_estimate_from_json(nlohmann::ordered_json::parse(j.dump()));
  CHECK(same_bits(back.type1, e.type1));
  CHECK(same_bits(back.se_total, e.se_total));
  CHECK(back.trials == e.trials);
  CHECK(real_from_json(real_json(NAN)) != real_from_json(real_json(NAN)));
  CHECK(real_from_json(nlohmann::ordered_json::parse(real_json(INFINITY).dump())) == INFINITY);
  SeededRng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const double v = rng.normal() * std::pow(10.0, static_cast<double>(rng.below(40)) - 20);
    CHECK(same_bits(real_from_json(nlohmann::ordered_json::parse(real_json(v).dump())), v));
  }
}

TEST_CASE("bound reports and curves serialize with their inputs") {
  const auto r = random_subclass_bound(10, 100, 2.0);
  const auto j = to_json(r);
  CHECK(j.at("name") == "random_subclass");
  CHECK(j.at("inputs").at("M") == 100.0);
  CHECK(j.at("direction") == "mu_threshold_for_risk_ge_delta");
  CHECK(j.at("flags").at("second_term_degenerate") == true);

  RiskCurve curve;
  curve.mu_grid = {0.0, 1.0};
  curve.estimates = {RiskEstimate::from_counts(0, 100, 100), RiskEstimate::from_counts(1, 2, 100)};
  curve.critical_mu = 0.6;
  const auto c = to_json(curve);
  CHECK(c.at("rows").size() == 2);
  CHECK(c.at("rows")[1].at("mu") == 1.0);
  CHECK(c.at("critical_mu") == 0.6);
  curve.critical_mu.reset();
  CHECK(to_json(curve).at("critical_mu").is_null());

  const auto run = run_json(sample_info());
  CHECK(run.at("seed") == 18446744073709551615ull);
  CHECK(run.at("version") == std::string(version()));
}

TEST_CASE("key-value tables carry provenance") {
  const auto text = key_value_csv(sample_info(), "combtest.emax/1", {{"emax", "1.5"}});
  CHECK(text.rfind("#schema=combtest.emax/1 columns=key,value\n", 0) == 0);
  CHECK(text.find("#seed=18446744073709551615\n") != std::string::npos);
  CHECK(text.find("\nkey,value\nemax,1.5\n") != std::string::npos);
}

}  // TEST_SUITE
