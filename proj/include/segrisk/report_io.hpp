#pragma once
// JSON and CSV serialization of risk reports and simulation traces.
//
// Non-finite doubles become JSON null. A +inf value additionally sets
// "<field>_infinite": true so it can be told apart from NaN on reading.

#include <ostream>

#include <json.hpp>

#include "segrisk/estimation.hpp"
#include "segrisk/risk.hpp"

namespace segrisk {

nlohmann::json to_json(const RiskReport& report);
RiskReport risk_report_from_json(const nlohmann::json& doc);

nlohmann::json to_json(const Estimate& estimate);
Estimate estimate_from_json(const nlohmann::json& doc);

nlohmann::json to_json(const QTable& table);
QTable q_table_from_json(const nlohmann::json& doc);

nlohmann::json to_json(const AsymptoticRiskReport& report);
AsymptoticRiskReport asymptotic_report_from_json(const nlohmann::json& doc);

// Columns: n,replicate,empirical_r1,conditional_r1,rbar1_viterbi,rbar1_pmap,
// rbar_inf_direct,rbar_inf_decomposed. Values use %.17g; inf/nan spelled out.
void write_trace_csv(std::ostream& out, const SimulationTrace& trace);

// %.17g with -0 printed as 0.
std::string format_double(double v);

}  // namespace segrisk
