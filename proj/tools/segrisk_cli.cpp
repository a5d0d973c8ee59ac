// segrisk: sampling, alignment, risk evaluation and asymptotic-risk
// estimation for hidden Markov models.
//
// Exit codes: 0 success, 1 usage or malformed input, 2 invalid model,
// 3 runtime failure (e.g. zero-likelihood observation).

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "segrisk/alignment.hpp"
#include "segrisk/estimation.hpp"
#include "segrisk/inference.hpp"
#include "segrisk/model_io.hpp"
#include "segrisk/oracle.hpp"
#include "segrisk/regeneration.hpp"
#include "segrisk/report_io.hpp"
#include "segrisk/risk.hpp"

using namespace segrisk;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kUsage = 1, kModel = 2, kRuntime = 3 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ModelFileError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

HmmModel read_model(const std::string& path) {
    try {
        return load_model(path);
    } catch (const ModelValidationError&) {
        throw;
    } catch (const std::exception& e) {
        throw ModelFileError(path + ": " + e.what());
    }
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

// Comma-separated file with a header row.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

Table read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open " + path);
    Table table;
    std::string line;
    if (!std::getline(in, line)) throw UsageError(path + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    table.header = split(line);
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto cells = split(line);
        if (cells.size() != table.header.size())
            throw UsageError(path + ":" + std::to_string(lineno) + ": expected " +
                             std::to_string(table.header.size()) + " fields");
        table.rows.push_back(std::move(cells));
    }
    return table;
}

int parse_int(const std::string& s, const std::string& where) {
    std::size_t pos = 0;
    int v = 0;
    try {
        v = std::stoi(s, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos == 0 || pos != s.size()) throw UsageError(where + ": not an integer: '" + s + "'");
    return v;
}

double parse_double(const std::string& s, const std::string& where) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos == 0 || pos != s.size() || !std::isfinite(v))
        throw UsageError(where + ": not a finite number: '" + s + "'");
    return v;
}

std::size_t column(const Table& table, const std::string& name, const std::string& path) {
    for (std::size_t i = 0; i < table.header.size(); ++i)
        if (table.header[i] == name) return i;
    throw UsageError(path + ": missing column '" + name + "'");
}

Observations read_observations(const HmmModel& model, const Table& table, const std::string& path) {
    const std::size_t col = column(table, "x", path);
    if (table.rows.empty()) throw UsageError(path + ": no observations");
    if (model.is_categorical()) {
        std::vector<int> x;
        for (std::size_t i = 0; i < table.rows.size(); ++i) {
            int v = parse_int(table.rows[i][col], path + ":" + std::to_string(i + 2));
            if (v < 0 || v >= model.alphabet_size())
                throw UsageError(path + ":" + std::to_string(i + 2) + ": symbol outside the alphabet");
            x.push_back(v);
        }
        return x;
    }
    std::vector<double> x;
    for (std::size_t i = 0; i < table.rows.size(); ++i)
        x.push_back(parse_double(table.rows[i][col], path + ":" + std::to_string(i + 2)));
    return x;
}

std::vector<State> read_states(const Table& table, const std::string& name, const HmmModel& model,
                               const std::string& path) {
    const std::size_t col = column(table, name, path);
    std::vector<State> s;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        int v = parse_int(table.rows[i][col], path + ":" + std::to_string(i + 2));
        if (v < 0 || v >= model.num_states())
            throw UsageError(path + ":" + std::to_string(i + 2) + ": state outside [0, |S|)");
        s.push_back(v);
    }
    return s;
}

// Writes to `path`, or stdout when empty.
void emit(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::string path_string(const std::vector<State>& path) {
    std::string s;
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(path[i]);
    }
    return s;
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v + 0.0) : json(nullptr); }

std::string observation_string(const Observations& x, std::size_t t) {
    if (auto* c = std::get_if<std::vector<int>>(&x)) return std::to_string((*c)[t]);
    return format_double(std::get<std::vector<double>>(x)[t]);
}

// ---- sample ---------------------------------------------------------------

struct SampleArgs {
    std::string model, out;
    std::size_t n = 0;
    std::uint64_t seed = 1;
    bool with_truth = false;
};

void run_sample(const SampleArgs& a) {
    if (a.n == 0) throw UsageError("--n must be positive");
    const HmmModel model = read_model(a.model);
    const LabeledSample s = sample(model, a.n, a.seed);
    std::string text = a.with_truth ? "x,y\n" : "x\n";
    for (std::size_t t = 0; t < a.n; ++t) {
        text += observation_string(s.x, t);
        if (a.with_truth) text += "," + std::to_string(s.y[t]);
        text += '\n';
    }
    emit(a.out, text);
}

// ---- align / risk -----------------------------------------------------------

struct AlignArgs {
    std::string model, input, out, method = "all", hybrid_kind = "logR1";
    double c = 1.0;
    std::vector<double> c_grid{0.0, 0.5, 1.0, 2.0, 10.0};
};

json method_entry(const HmmModel& model, const Matrix& log_em, const Posteriors& post, const StatePath& path,
                  const std::vector<double>& c_grid, const std::optional<std::vector<State>>& truth) {
    const LossMatrix loss = LossMatrix::symmetric(model.num_states());
    RiskReport report = evaluate_risks(model, log_em, post, path.states, loss, c_grid);
    if (truth) report.empirical_r1 = empirical_r1(*truth, path.states, loss);
    json entry = to_json(report);
    entry["path"] = path_string(path.states);
    entry["log_joint"] = finite_or_null(log_joint(model, log_em, path.states));
    if (path.kind == PathKind::hybrid_log_r1 || path.kind == PathKind::hybrid_r1) {
        entry["c"] = path.c;
        entry["kind"] = to_string(path.kind);
    }
    return entry;
}

void run_align(const AlignArgs& a) {
    const HmmModel model = read_model(a.model);
    const Table table = read_csv(a.input);
    const Observations x = read_observations(model, table, a.input);
    std::optional<std::vector<State>> truth;
    for (const auto& h : table.header)
        if (h == "y") truth = read_states(table, "y", model, a.input);
    if (a.hybrid_kind != "logR1" && a.hybrid_kind != "R1") throw UsageError("--hybrid-kind must be logR1 or R1");
    if (!std::isfinite(a.c) || a.c < 0) throw UsageError("--c must be finite and >= 0");

    const Matrix log_em = log_emission_matrix(model, x);
    const Posteriors post = forward_backward(model, log_em);
    const StatePath v = viterbi(model, log_em);

    json methods = json::object();
    const bool all = a.method == "all";
    if (all || a.method == "viterbi") methods["viterbi"] = method_entry(model, log_em, post, v, a.c_grid, truth);
    if (all || a.method == "pmap")
        methods["pmap"] = method_entry(model, log_em, post, pmap(post), a.c_grid, truth);
    if (all || a.method == "hybrid") {
        StatePath h = a.hybrid_kind == "logR1" ? hybrid_log_r1(model, log_em, post, a.c)
                                               : hybrid_r1(model, log_em, post, a.c);
        json entry = method_entry(model, log_em, post, h, a.c_grid, truth);
        entry["coincides_with_viterbi"] = h.states == v.states;
        methods["hybrid"] = entry;
    }
    if (methods.empty()) throw UsageError("--method must be viterbi, pmap, hybrid or all");

    json doc;
    doc["n"] = length(x);
    doc["log_likelihood"] = post.log_likelihood;
    doc["methods"] = methods;
    emit(a.out, doc.dump(2) + "\n");
}

struct RiskArgs {
    std::string model, input, path_file, out;
    std::vector<double> c_grid{0.0, 0.5, 1.0, 2.0, 10.0};
};

void run_risk(const RiskArgs& a) {
    const HmmModel model = read_model(a.model);
    const Table table = read_csv(a.input);
    const Observations x = read_observations(model, table, a.input);
    std::optional<std::vector<State>> truth;
    for (const auto& h : table.header)
        if (h == "y") truth = read_states(table, "y", model, a.input);

    std::vector<State> path;
    if (!a.path_file.empty()) {
        const Table pt = read_csv(a.path_file);
        path = read_states(pt, pt.header.empty() ? "s" : pt.header.front(), model, a.path_file);
    } else if (truth) {
        path = *truth;
    } else {
        throw UsageError("--path is required when the input has no y column");
    }
    if (path.size() != length(x)) throw UsageError("path length differs from observation length");

    const Matrix log_em = log_emission_matrix(model, x);
    const Posteriors post = forward_backward(model, log_em);
    const LossMatrix loss = LossMatrix::symmetric(model.num_states());
    RiskReport report = evaluate_risks(model, log_em, post, path, loss, a.c_grid);
    if (truth) report.empirical_r1 = empirical_r1(*truth, path, loss);
    json doc = to_json(report);
    doc["log_joint"] = finite_or_null(log_joint(model, log_em, path));
    doc["log_likelihood"] = post.log_likelihood;
    emit(a.out, doc.dump(2) + "\n");
}

// ---- check --------------------------------------------------------------

struct CheckArgs {
    std::string model, out;
    std::optional<double> eps;
    std::vector<double> interval;
};

void run_check(const CheckArgs& a) {
    const HmmModel model = read_model(a.model);
    BarrierOptions opts;
    opts.eps = a.eps;
    if (!a.interval.empty()) {
        if (a.interval.size() != 2 || !(a.interval[0] <= a.interval[1]))
            throw UsageError("--interval takes LO HI with LO <= HI");
        opts.interval = std::make_pair(a.interval[0], a.interval[1]);
    }
    const ClusterDetection det = detect_cluster(model, opts);
    json a1;
    a1["holds"] = det.holds();
    if (det.holds()) {
        const ClusterInfo& info = *det.info;
        a1["cluster"] = info.cluster;
        a1["r"] = info.r;
        a1["eps"] = info.eps;
        a1["M"] = info.m_bound;
        if (info.barrier.interval)
            a1["barrier_set"] = {info.barrier.interval->first, info.barrier.interval->second};
        else
            a1["barrier_set"] = info.barrier.symbols;
    } else {
        a1["diagnostic"] = det.diagnostic;
    }
    json candidates = json::array();
    for (const auto& c : det.candidates) candidates.push_back({{"states", c.states}, {"r", c.r}});
    a1["candidates"] = candidates;

    const A2Result a2r = check_a2(model);
    json a2;
    a2["holds"] = a2r.holds;
    json wits = json::array();
    for (const auto& w : a2r.witnesses) {
        json j{{"state", w.state}, {"holds", w.holds}};
        j["x"] = w.x ? json(*w.x) : json(nullptr);
        j["lhs"] = finite_or_null(w.lhs);
        j["rhs"] = finite_or_null(w.rhs);
        wits.push_back(j);
    }
    a2["witnesses"] = wits;
    if (a2r.advisory) a2["advisory"] = *a2r.advisory;

    emit(a.out, json{{"a1", a1}, {"a2", a2}}.dump(2) + "\n");
}

// ---- estimate -------------------------------------------------------------

struct EstimateArgs {
    std::string model, out, trace;
    EstimationConfig cfg;
};

void run_estimate(EstimateArgs a) {
    const HmmModel model = read_model(a.model);
    if (a.cfg.n < 1000) throw UsageError("--n must be at least 1000");
    if (a.cfg.reps < 1) throw UsageError("--reps must be positive");
    if (a.cfg.probe_step < 1) throw UsageError("--probe-step must be positive");
    if (a.cfg.model_id == "model") a.cfg.model_id = std::filesystem::path(a.model).stem().string();
    EstimationResult res;
    try {
        res = run_estimation(model, a.cfg);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    if (!a.trace.empty()) {
        std::ostringstream csv;
        write_trace_csv(csv, res.trace);
        emit(a.trace, csv.str());
    }
    emit(a.out, to_json(res.report).dump(2) + "\n");
}

// ---- forgetting -------------------------------------------------------------

struct ForgettingArgs {
    std::string model, input, out;
    std::size_t n = 500, max_gap = 40, anchor_step = 1;
    std::uint64_t seed = 1;
    std::vector<std::size_t> anchors;
};

void run_forgetting(const ForgettingArgs& a) {
    const HmmModel model = read_model(a.model);
    Observations x;
    if (!a.input.empty()) {
        x = read_observations(model, read_csv(a.input), a.input);
    } else {
        if (a.n == 0) throw UsageError("--n must be positive");
        x = sample(model, a.n, a.seed).x;
    }
    const std::size_t n = length(x);
    if (a.max_gap < 2) throw UsageError("--max-gap must be at least 2");
    if (a.anchor_step < 1) throw UsageError("--anchor-step must be positive");
    if (a.max_gap >= n) throw UsageError("--max-gap must be below the sequence length");
    std::vector<std::size_t> gaps;
    for (std::size_t g = 1; g <= a.max_gap; ++g) gaps.push_back(g);
    std::vector<std::size_t> anchors = a.anchors;
    if (anchors.empty())
        for (std::size_t t = 0; t + a.max_gap < n; t += a.anchor_step) anchors.push_back(t);
    for (std::size_t t : anchors)
        if (t + a.max_gap >= n) throw UsageError("anchor " + std::to_string(t) + " + max gap exceeds the sequence");

    std::string text = "t,gap,tv\n";
    std::string summary;
    double slope_sum = 0.0;
    std::size_t slope_count = 0;
    for (std::size_t t : anchors) {
        const ForgettingProfile prof = forgetting_profile(model, x, t, gaps);
        for (std::size_t k = 0; k < gaps.size(); ++k)
            text += std::to_string(t) + "," + std::to_string(gaps[k]) + "," + format_double(prof.tv[k]) + "\n";
        summary += std::to_string(t) + ",fit," + format_double(prof.fitted_log_slope) + "\n";
        if (std::isfinite(prof.fitted_log_slope)) {
            slope_sum += prof.fitted_log_slope;
            ++slope_count;
        }
    }
    const double mean = slope_count ? slope_sum / static_cast<double>(slope_count) : std::nan("");
    text += summary + "mean,fit," + format_double(mean) + "\n";
    emit(a.out, text);
}

// ---- oracle ---------------------------------------------------------------

struct OracleArgs {
    std::string model, input, out, objective = "viterbi";
    double c = 1.0;
};

void run_oracle(const OracleArgs& a) {
    const HmmModel model = read_model(a.model);
    const Observations x = read_observations(model, read_csv(a.input), a.input);
    oracle::Objective obj;
    if (a.objective == "viterbi") obj = oracle::Objective::viterbi;
    else if (a.objective == "pmap") obj = oracle::Objective::pmap;
    else if (a.objective == "hybrid_logR1") obj = oracle::Objective::hybrid_log_r1;
    else if (a.objective == "hybrid_R1") obj = oracle::Objective::hybrid_r1;
    else throw UsageError("--objective must be viterbi, pmap, hybrid_logR1 or hybrid_R1");
    if (!std::isfinite(a.c) || a.c < 0) throw UsageError("--c must be finite and >= 0");

    oracle::EnumeratedPosterior post;
    try {
        post = oracle::enumerate(model, x);
    } catch (const oracle::InstanceTooLarge& e) {
        throw UsageError(e.what());
    }
    const oracle::BestPath best = oracle::brute_best(post, obj, a.c, LossMatrix::symmetric(model.num_states()));
    json marg = json::array();
    for (Eigen::Index t = 0; t < post.marginals.rows(); ++t) {
        json row = json::array();
        for (Eigen::Index s = 0; s < post.marginals.cols(); ++s) row.push_back(post.marginals(t, s));
        marg.push_back(row);
    }
    json doc;
    doc["objective"] = a.objective;
    doc["c"] = a.c;
    doc["path"] = path_string(best.path.states);
    doc["value"] = finite_or_null(best.value);
    doc["log_evidence"] = finite_or_null(post.log_evidence);
    doc["marginals"] = marg;
    emit(a.out, doc.dump(2) + "\n");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Segmentation risks of hidden Markov model classifiers"};
    app.require_subcommand(1);

    SampleArgs sa;
    auto* sample_cmd = app.add_subcommand("sample", "Draw (x, y) from a model");
    sample_cmd->add_option("--model", sa.model, "Model JSON")->required()->check(CLI::ExistingFile);
    sample_cmd->add_option("--n", sa.n, "Sequence length")->required();
    sample_cmd->add_option("--seed", sa.seed, "Seed");
    sample_cmd->add_option("--out", sa.out, "Output CSV (default stdout)");
    sample_cmd->add_flag("--with-truth", sa.with_truth, "Also write the hidden states as column y");

    AlignArgs aa;
    auto* align_cmd = app.add_subcommand("align", "Viterbi, PMAP and hybrid alignments with their risks");
    align_cmd->add_option("--model", aa.model, "Model JSON")->required()->check(CLI::ExistingFile);
    align_cmd->add_option("--input", aa.input, "Observation CSV with column x")->required();
    align_cmd->add_option("--method", aa.method, "viterbi|pmap|hybrid|all");
    align_cmd->add_option("--c", aa.c, "Hybrid penalty weight");
    align_cmd->add_option("--hybrid-kind", aa.hybrid_kind, "logR1|R1");
    align_cmd->add_option("--c-grid", aa.c_grid, "Weights c for rbar1 + c * rbar_inf")->delimiter(',');
    align_cmd->add_option("--out", aa.out, "Output JSON (default stdout)");
    std::uint64_t unused_seed = 0;
    align_cmd->add_option("--seed", unused_seed, "Accepted for uniformity; unused");

    RiskArgs ra;
    auto* risk_cmd = app.add_subcommand("risk", "Risks of a given path");
    risk_cmd->add_option("--model", ra.model, "Model JSON")->required()->check(CLI::ExistingFile);
    risk_cmd->add_option("--input", ra.input, "Observation CSV with column x (and optionally y)")->required();
    risk_cmd->add_option("--path", ra.path_file, "CSV whose first column is the path (default: column y)");
    risk_cmd->add_option("--c-grid", ra.c_grid, "Weights c for rbar1 + c * rbar_inf")->delimiter(',');
    risk_cmd->add_option("--out", ra.out, "Output JSON (default stdout)");
    risk_cmd->add_option("--seed", unused_seed, "Accepted for uniformity; unused");

    CheckArgs ca;
    auto* check_cmd = app.add_subcommand("check", "Cluster and dominance conditions");
    check_cmd->add_option("--model", ca.model, "Model JSON")->required()->check(CLI::ExistingFile);
    check_cmd->add_option("--eps", ca.eps, "Barrier density threshold");
    check_cmd->add_option("--interval", ca.interval, "Gaussian barrier interval LO HI")->expected(2);
    check_cmd->add_option("--out", ca.out, "Output JSON (default stdout)");
    check_cmd->add_option("--seed", unused_seed, "Accepted for uniformity; unused");

    EstimateArgs ea;
    std::size_t m_pad = ea.cfg.fixation.m_pad;
    auto* est_cmd = app.add_subcommand("estimate", "Monte Carlo estimates of the asymptotic risks");
    est_cmd->add_option("--model", ea.model, "Model JSON")->required()->check(CLI::ExistingFile);
    est_cmd->add_option("--n", ea.cfg.n, "Sequence length per replicate");
    est_cmd->add_option("--reps", ea.cfg.reps, "Replicates");
    est_cmd->add_option("--seed", ea.cfg.seed, "Seed");
    est_cmd->add_option("--checkpoints", ea.cfg.checkpoints, "Prefix lengths (default 1e3, 1e4, ..., n)")
        ->delimiter(',');
    est_cmd->add_option("--probe-step", ea.cfg.probe_step, "Spacing of fixation probes");
    est_cmd->add_option("--m-pad", m_pad, "Probe padding beyond a candidate fixation point");
    est_cmd->add_option("--min-burn-in", ea.cfg.min_burn_in, "Lower bound on the burn-in window");
    est_cmd->add_option("--threads", ea.cfg.threads, "Worker threads (0: hardware)");
    est_cmd->add_option("--model-id", ea.cfg.model_id, "Identifier written to the report");
    est_cmd->add_option("--trace", ea.trace, "Per-checkpoint trace CSV");
    est_cmd->add_option("--out", ea.out, "Report JSON (default stdout)");

    ForgettingArgs fa;
    auto* forget_cmd = app.add_subcommand("forgetting", "Total-variation forgetting profiles");
    forget_cmd->add_option("--model", fa.model, "Model JSON")->required()->check(CLI::ExistingFile);
    forget_cmd->add_option("--input", fa.input, "Observation CSV (default: sample --n/--seed)");
    forget_cmd->add_option("--n", fa.n, "Sample length when no input is given");
    forget_cmd->add_option("--seed", fa.seed, "Seed");
    forget_cmd->add_option("--max-gap", fa.max_gap, "Gaps 1..max-gap");
    forget_cmd->add_option("--anchors", fa.anchors, "Anchor times (0-based)")->delimiter(',');
    forget_cmd->add_option("--anchor-step", fa.anchor_step, "Spacing of default anchors");
    forget_cmd->add_option("--out", fa.out, "Output CSV (default stdout)");

    OracleArgs oa;
    auto* oracle_cmd = app.add_subcommand("oracle", "Brute-force optimum over all paths (small inputs)");
    oracle_cmd->add_option("--model", oa.model, "Model JSON")->required()->check(CLI::ExistingFile);
    oracle_cmd->add_option("--input", oa.input, "Observation CSV with column x")->required();
    oracle_cmd->add_option("--objective", oa.objective, "viterbi|pmap|hybrid_logR1|hybrid_R1");
    oracle_cmd->add_option("--c", oa.c, "Hybrid penalty weight");
    oracle_cmd->add_option("--out", oa.out, "Output JSON (default stdout)");
    oracle_cmd->add_option("--seed", unused_seed, "Accepted for uniformity; unused");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (sample_cmd->parsed()) run_sample(sa);
        else if (align_cmd->parsed()) run_align(aa);
        else if (risk_cmd->parsed()) run_risk(ra);
        else if (check_cmd->parsed()) run_check(ca);
        else if (est_cmd->parsed()) {
            ea.cfg.fixation.m_pad = m_pad;
            run_estimate(ea);
        } else if (forget_cmd->parsed()) run_forgetting(fa);
        else if (oracle_cmd->parsed()) run_oracle(oa);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const ModelValidationError& e) {
        std::cerr << "invalid model:\n";
        for (const auto& d : e.diagnostics()) std::cerr << "  " << d.code << ": " << d.message << "\n";
        return kModel;
    } catch (const ModelFileError& e) {
        std::cerr << "invalid model: " << e.what() << "\n";
        return kModel;
    } catch (const ZeroLikelihoodError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntime;
    }
    return kOk;
}
