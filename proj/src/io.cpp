#include "combtest/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "combtest/errors.hpp"

#ifndef COMBTEST_VERSION
#define COMBTEST_VERSION "0.0.0"
#endif

namespace combtest {

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

void write_meta(std::ostringstream& out, const RunInfo& info, std::string_view schema,
                std::string_view columns) {
  out << "#schema=" << schema << " columns=" << columns << '\n';
  out << "#version=" << version() << '\n';
  out << "#command=" << info.command << '\n';
  out << "#seed=" << info.seed << '\n';
  out << "#config=" << info.config.dump() << '\n';
}

}  // namespace

std::string_view version() { return COMBTEST_VERSION; }

std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

double parse_real(std::string_view text) {
  if (text == "nan") return std::nan("");
  if (text == "inf") return HUGE_VAL;
  if (text == "-inf") return -HUGE_VAL;
  const std::string copy(text);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(copy.c_str(), &end);
  if (copy.empty() || end != copy.c_str() + copy.size() || (errno == ERANGE && std::isinf(v))) {
    throw InvalidArgument("not a real number: '" + copy + "'");
  }
  return v;
}

std::string risk_table_csv(const RunInfo& info, const std::vector<RiskRow>& rows,
                           const std::vector<std::pair<std::string, std::string>>& extra) {
  std::ostringstream out;
  write_meta(out, info, kRiskSchema, kRiskColumns);
  for (const auto& [k, v] : extra) out << '#' << k << '=' << v << '\n';
  out << kRiskColumns << '\n';
  for (const auto& row : rows) {
    const auto& e = row.estimate;
    out << format_real(row.mu) << ',' << format_real(e.type1) << ',' << format_real(e.se_type1) << ','
        << format_real(e.type2) << ',' << format_real(e.se_type2) << ',' << format_real(e.total) << ','
        << format_real(e.se_total) << ',' << e.trials << '\n';
  }
  return out.str();
}

ParsedRiskTable parse_risk_table_csv(std::string_view text) {
  ParsedRiskTable table;
  bool header_seen = false;
  for (auto line : split(text, '\n')) {
    if (line.empty()) continue;
    if (line.front() == '#') {
      const auto eq = line.find('=');
      if (eq != std::string_view::npos) {
        table.meta.emplace(std::string(line.substr(1, eq - 1)), std::string(line.substr(eq + 1)));
      }
      continue;
    }
    if (!header_seen) {
      if (line != kRiskColumns) throw InvalidArgument("unexpected risk table header: " + std::string(line));
      header_seen = true;
      continue;
    }
    const auto cells = split(line, ',');
    if (cells.size() != 8) throw InvalidArgument("risk table row needs 8 cells: " + std::string(line));
    RiskRow row;
    row.mu = parse_real(cells[0]);
    auto& e = row.estimate;
    e.type1 = parse_real(cells[1]);
    e.se_type1 = parse_real(cells[2]);
    e.type2 = parse_real(cells[3]);
    e.se_type2 = parse_real(cells[4]);
    e.total = parse_real(cells[5]);
    e.se_total = parse_real(cells[6]);
    e.trials = std::stoll(std::string(cells[7]));
    table.rows.push_back(row);
  }
  if (!header_seen) throw InvalidArgument("risk table has no header line");
  return table;
}

std::string key_value_csv(const RunInfo& info, std::string_view schema,
                          const std::vector<std::pair<std::string, std::string>>& entries) {
  std::ostringstream out;
  write_meta(out, info, schema, "key,value");
  out << "key,value\n";
  for (const auto& [k, v] : entries) out << k << ',' << v << '\n';
  return out.str();
}

nlohmann::ordered_json real_json(double value) {
  if (std::isfinite(value)) return value;
  return format_real(value);
}

double real_from_json(const nlohmann::ordered_json& j) {
  if (j.is_string()) return parse_real(j.get<std::string>());
  return j.get<double>();
}

nlohmann::ordered_json run_json(const RunInfo& info) {
  nlohmann::ordered_json j;
  j["version"] = std::string(version());
  j["command"] = info.command;
  j["seed"] = info.seed;
  j["config"] = info.config;
  return j;
}

nlohmann::ordered_json to_json(const RiskEstimate& e) {
  nlohmann::ordered_json j;
  j["type1"] = real_json(e.type1);
  j["se1"] = real_json(e.se_type1);
  j["type2"] = real_json(e.type2);
  j["se2"] = real_json(e.se_type2);
  j["total"] = real_json(e.total);
  j["se_total"] = real_json(e.se_total);
  j["trials"] = e.trials;
  return j;
}

RiskEstimate risk_estimate_from_json(const nlohmann::ordered_json& j) {
  RiskEstimate e;
  e.type1 = real_from_json(j.at("type1"));
  e.se_type1 = real_from_json(j.at("se1"));
  e.type2 = real_from_json(j.at("type2"));
  e.se_type2 = real_from_json(j.at("se2"));
  e.total = real_from_json(j.at("total"));
  e.se_total = real_from_json(j.at("se_total"));
  e.trials = j.at("trials").get<std::int64_t>();
  return e;
}

nlohmann::ordered_json to_json(const Estimate& e) {
  return {{"estimate", real_json(e.value)}, {"std_error", real_json(e.std_error)}};
}

nlohmann::ordered_json to_json(const BoundReport& r) {
  nlohmann::ordered_json j;
  j["name"] = r.name;
  j["formula"] = r.formula;
  nlohmann::ordered_json inputs = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.inputs) inputs[k] = real_json(v);
  j["inputs"] = inputs;
  j["value"] = real_json(r.value);
  j["direction"] = direction_name(r.direction);
  j["degenerate"] = r.degenerate;
  nlohmann::ordered_json outputs = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.outputs) outputs[k] = real_json(v);
  j["outputs"] = outputs;
  nlohmann::ordered_json flags = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.flags) flags[k] = v;
  j["flags"] = flags;
  j["note"] = r.note;
  return j;
}

nlohmann::ordered_json to_json(const RiskCurve& curve) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < curve.mu_grid.size(); ++i) {
    auto row = to_json(curve.estimates[i]);
    nlohmann::ordered_json with_mu;
    with_mu["mu"] = real_json(curve.mu_grid[i]);
    for (auto it = row.begin(); it != row.end(); ++it) with_mu[it.key()] = it.value();
    rows.push_back(with_mu);
  }
  nlohmann::ordered_json j;
  j["rows"] = rows;
  j["critical_mu"] = curve.critical_mu ? real_json(*curve.critical_mu) : nlohmann::ordered_json();
  return j;
}

nlohmann::ordered_json to_json(const NonmonotonicityReport& r) {
  nlohmann::ordered_json j;
  j["K"] = r.set_size_k;
  j["epsilon"] = real_json(r.epsilon);
  j["n"] = r.n;
  j["mu"] = real_json(r.mu);
  j["mu_from_epsilon"] = r.mu_from_epsilon;
  j["side_condition"] = r.side_condition;
  j["side_lhs"] = real_json(r.side_lhs);
  j["side_rhs"] = real_json(r.side_rhs);
  j["size_a"] = r.size_a;
  j["size_b"] = r.size_b;
  j["size_c"] = r.size_c;
  j["risk_a"] = to_json(r.risk_a);
  j["witness_b"] = to_json(r.witness_b);
  j["risk_c"] = to_json(r.risk_c);
  j["gap"] = real_json(r.gap);
  j["gap_se"] = real_json(r.gap_se);
  return j;
}

}  // namespace combtest
