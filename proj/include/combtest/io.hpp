#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "combtest/bounds.hpp"
#include "combtest/risk.hpp"

namespace combtest {

std::string_view version();

// Fixed column schema of risk tables.
inline constexpr std::string_view kRiskSchema = "combtest.risk/1";
inline constexpr std::string_view kRiskColumns = "mu,type1,se1,type2,se2,total,se_total,trials";

// 17 significant digits; "nan", "inf" and "-inf" for non-finite values.
std::string format_real(double value);
double parse_real(std::string_view text);

// Provenance written into every result file.
struct RunInfo {
  std::string command;
  nlohmann::ordered_json config;
  std::uint64_t seed = 0;
};

struct RiskRow {
  double mu = 0.0;
  RiskEstimate estimate;
};

// Comment lines (#schema=, #version=, #command=, #seed=, #config=, then
// `extra` in order), the column header, then one row per estimate.
std::string risk_table_csv(const RunInfo& info, const std::vector<RiskRow>& rows,
                           const std::vector<std::pair<std::string, std::string>>& extra = {});

struct ParsedRiskTable {
  std::map<std::string, std::string> meta;  // keys of the '#key=value' lines
  std::vector<RiskRow> rows;
};

ParsedRiskTable parse_risk_table_csv(std::string_view text);

// Two-column key,value table for scalar results.
std::string key_value_csv(const RunInfo& info, std::string_view schema,
                          const std::vector<std::pair<std::string, std::string>>& entries);

nlohmann::ordered_json run_json(const RunInfo& info);
nlohmann::ordered_json to_json(const RiskEstimate& estimate);
nlohmann::ordered_json to_json(const Estimate& estimate);
nlohmann::ordered_json to_json(const BoundReport& report);
nlohmann::ordered_json to_json(const RiskCurve& curve);
nlohmann::ordered_json to_json(const NonmonotonicityReport& report);

RiskEstimate risk_estimate_from_json(const nlohmann::ordered_json& j);

// Non-finite doubles become the strings "nan", "inf", "-inf".
nlohmann::ordered_json real_json(double value);
double real_from_json(const nlohmann::ordered_json& j);

}  // namespace combtest
