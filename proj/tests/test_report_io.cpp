#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "segrisk/report_io.hpp"
#include "support.hpp"

using namespace segrisk;

TEST_CASE("risk report round trip") {
    RiskReport r;
    r.r1 = 0.125;
    r.rbar1 = 0.3;
    r.rbar_inf = 1.0 / 3.0;
    r.rbar_c = {{0.0, 0.3}, {0.5, 0.3 + 0.5 / 3.0}, {10.0, 0.3 + 10.0 / 3.0}};
    r.empirical_r1 = 0.2;
    const std::string text = to_json(r).dump();
    CHECK(risk_report_from_json(nlohmann::json::parse(text)) == r);
}

TEST_CASE("infinite risks survive the round trip") {
    RiskReport r;
    r.rbar1 = std::numeric_limits<double>::infinity();
    r.rbar_inf = std::numeric_limits<double>::infinity();
    r.rbar_c = {{1.0, std::numeric_limits<double>::infinity()}};
    nlohmann::json doc = to_json(r);
    CHECK(doc["rbar1"].is_null());
    CHECK(doc["rbar1_infinite"] == 1);
    RiskReport back = risk_report_from_json(nlohmann::json::parse(doc.dump()));
    CHECK(back == r);
    CHECK_FALSE(back.empirical_r1.has_value());
}

TEST_CASE("asymptotic report round trip") {
    EstimationConfig cfg;
    cfg.n = 2000;
    cfg.reps = 3;
    cfg.threads = 1;
    cfg.model_id = "m2";
    AsymptoticRiskReport rep = run_estimation(canonical_m2(), cfg).report;
    const std::string text = to_json(rep).dump(2);
    AsymptoticRiskReport back = asymptotic_report_from_json(nlohmann::json::parse(text));
    CHECK(back == rep);
    CHECK(to_json(back).dump(2) == text);
}

TEST_CASE("NaN fields read back as NaN") {
    Estimate e{1.5, std::numeric_limits<double>::quiet_NaN(), 1};
    Estimate back = estimate_from_json(nlohmann::json::parse(to_json(e).dump()));
    CHECK(back.value == 1.5);
    CHECK(std::isnan(back.se));
    CHECK(back.count == 1);
    QTable q;
    q.count = 3;
    q.probs = {0.5, 0.5};
    q.mean = q.variance = std::numeric_limits<double>::quiet_NaN();
    q.mean_log_density = -0.7;
    QTable qb = q_table_from_json(nlohmann::json::parse(to_json(q).dump()));
    CHECK(qb.probs == q.probs);
    CHECK(std::isnan(qb.mean));
}

TEST_CASE("trace csv") {
    SimulationTrace tr;
    CheckpointRow row;
    row.n = 1000;
    row.replicate = 2;
    row.empirical_r1 = 0.1;
    row.rbar1_viterbi = std::numeric_limits<double>::infinity();
    row.rbar_inf_direct = -0.0;
    tr.rows.push_back(row);
    std::ostringstream out;
    write_trace_csv(out, tr);
    CHECK(out.str() ==
          "n,replicate,empirical_r1,conditional_r1,rbar1_viterbi,rbar1_pmap,rbar_inf_direct,rbar_inf_decomposed\n"
          "1000,2,0.10000000000000001,0,inf,0,0,0\n");
}
