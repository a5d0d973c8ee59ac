#include "segrisk/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace segrisk {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void put(json& doc, const std::string& key, double v) {
    if (std::isfinite(v)) {
        doc[key] = v + 0.0;
        return;
    }
    doc[key] = nullptr;
    if (std::isinf(v)) doc[key + "_infinite"] = v > 0 ? 1 : -1;
}

double get(const json& doc, const std::string& key) {
    const json& v = doc.at(key);
    if (!v.is_null()) return v.get<double>();
    auto flag = doc.find(key + "_infinite");
    if (flag != doc.end()) {
        return flag->get<int>() > 0 ? std::numeric_limits<double>::infinity()
                                    : -std::numeric_limits<double>::infinity();
    }
    return kNaN;
}

json double_array(const std::vector<double>& values) {
    json arr = json::array();
    for (double v : values) arr.push_back(std::isfinite(v) ? json(v + 0.0) : json(nullptr));
    return arr;
}

std::vector<double> read_double_array(const json& arr) {
    std::vector<double> out;
    for (const auto& v : arr) out.push_back(v.is_null() ? kNaN : v.get<double>());
    return out;
}

}  // namespace

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v + 0.0);
    return buf;
}

json to_json(const RiskReport& report) {
    json doc;
    put(doc, "r1", report.r1);
    put(doc, "rbar1", report.rbar1);
    put(doc, "rbar_inf", report.rbar_inf);
    json grid = json::object();
    for (const auto& [c, v] : report.rbar_c) put(grid, format_double(c), v);
    doc["rbar_c"] = grid;
    if (report.empirical_r1) put(doc, "empirical_r1", *report.empirical_r1);
    return doc;
}

RiskReport risk_report_from_json(const json& doc) {
    RiskReport r;
    r.r1 = get(doc, "r1");
    r.rbar1 = get(doc, "rbar1");
    r.rbar_inf = get(doc, "rbar_inf");
    const json& grid = doc.at("rbar_c");
    for (auto it = grid.begin(); it != grid.end(); ++it) {
        const std::string& key = it.key();
        if (key.ends_with("_infinite")) continue;
        r.rbar_c[std::stod(key)] = get(grid, key);
    }
    if (doc.contains("empirical_r1")) r.empirical_r1 = get(doc, "empirical_r1");
    return r;
}

json to_json(const Estimate& e) {
    json doc;
    put(doc, "value", e.value);
    put(doc, "se", e.se);
    doc["count"] = e.count;
    return doc;
}

Estimate estimate_from_json(const json& doc) {
    return Estimate{get(doc, "value"), get(doc, "se"), doc.at("count").get<std::size_t>()};
}

json to_json(const QTable& q) {
    json doc;
    doc["count"] = q.count;
    doc["probs"] = double_array(q.probs);
    put(doc, "mean", q.mean);
    put(doc, "variance", q.variance);
    put(doc, "mean_log_density", q.mean_log_density);
    return doc;
}

QTable q_table_from_json(const json& doc) {
    QTable q;
    q.count = doc.at("count").get<std::size_t>();
    q.probs = read_double_array(doc.at("probs"));
    q.mean = get(doc, "mean");
    q.variance = get(doc, "variance");
    q.mean_log_density = get(doc, "mean_log_density");
    return q;
}

json to_json(const AsymptoticRiskReport& r) {
    json doc;
    doc["model_id"] = r.model_id;
    doc["n"] = r.n;
    doc["reps"] = r.reps;
    doc["seed"] = r.seed;
    doc["r1_longrun"] = to_json(r.r1_longrun);
    doc["r1_conditional"] = to_json(r.r1_conditional);
    doc["r1_renewal"] = to_json(r.r1_renewal);
    doc["rbar1"] = to_json(r.rbar1);
    doc["rbar1_star"] = to_json(r.rbar1_star);
    doc["rbar_inf_direct"] = to_json(r.rbar_inf_direct);
    doc["rbar_inf_decomposed"] = to_json(r.rbar_inf_decomposed);
    doc["rbar_y_inf"] = to_json(r.rbar_y_inf);
    doc["mean_cycle"] = to_json(r.mean_cycle);
    json tables = json::array();
    for (const auto& q : r.q_s_tables) tables.push_back(to_json(q));
    doc["q_s_tables"] = tables;
    doc["m_s"] = double_array(r.m_s);
    doc["excluded_replicates"] = r.excluded_replicates;
    doc["pmap_dominance_violations"] = r.pmap_dominance_violations;
    doc["burn_in"] = r.burn_in;
    return doc;
}

AsymptoticRiskReport asymptotic_report_from_json(const json& doc) {
    AsymptoticRiskReport r;
    r.model_id = doc.at("model_id").get<std::string>();
    r.n = doc.at("n").get<std::size_t>();
    r.reps = doc.at("reps").get<std::size_t>();
    r.seed = doc.at("seed").get<std::uint64_t>();
    r.r1_longrun = estimate_from_json(doc.at("r1_longrun"));
    r.r1_conditional = estimate_from_json(doc.at("r1_conditional"));
    r.r1_renewal = estimate_from_json(doc.at("r1_renewal"));
    r.rbar1 = estimate_from_json(doc.at("rbar1"));
    r.rbar1_star = estimate_from_json(doc.at("rbar1_star"));
    r.rbar_inf_direct = estimate_from_json(doc.at("rbar_inf_direct"));
    r.rbar_inf_decomposed = estimate_from_json(doc.at("rbar_inf_decomposed"));
    r.rbar_y_inf = estimate_from_json(doc.at("rbar_y_inf"));
    r.mean_cycle = estimate_from_json(doc.at("mean_cycle"));
    for (const auto& q : doc.at("q_s_tables")) r.q_s_tables.push_back(q_table_from_json(q));
    r.m_s = read_double_array(doc.at("m_s"));
    r.excluded_replicates = doc.at("excluded_replicates").get<std::size_t>();
    r.pmap_dominance_violations = doc.at("pmap_dominance_violations").get<std::size_t>();
    r.burn_in = doc.at("burn_in").get<std::vector<std::size_t>>();
    return r;
}

void write_trace_csv(std::ostream& out, const SimulationTrace& trace) {
    out << "n,replicate,empirical_r1,conditional_r1,rbar1_viterbi,rbar1_pmap,rbar_inf_direct,rbar_inf_decomposed\n";
    for (const auto& row : trace.rows) {
        out << row.n << ',' << row.replicate << ',' << format_double(row.empirical_r1) << ','
            << format_double(row.conditional_r1) << ',' << format_double(row.rbar1_viterbi) << ','
            << format_double(row.rbar1_pmap) << ',' << format_double(row.rbar_inf_direct) << ','
            << format_double(row.rbar_inf_decomposed) << '\n';
    }
}

}  // namespace segrisk
