#include "segrisk/estimation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>
#include <thread>

#include "segrisk/alignment.hpp"
#include "segrisk/inference.hpp"
#include "segrisk/risk.hpp"
#include "segrisk/rng.hpp"

namespace segrisk {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

struct ReplicateResult {
    std::vector<CheckpointRow> rows;
    std::vector<std::vector<double>> m_s;      // per checkpoint
    std::vector<std::vector<QTable>> q_s;      // per checkpoint
    std::vector<std::size_t> state_counts;     // final checkpoint, for pooling
    std::vector<std::vector<double>> symbol_counts;
    std::vector<double> sum_x, sum_x2, sum_log_f;
    double renewal_r1 = kNaN;
    double mean_cycle = kNaN;
    double rbar_y_inf = kNaN;
    std::size_t burn_in = 0;
};

void validate_config(const EstimationConfig& cfg, std::vector<std::size_t>& checkpoints) {
    if (cfg.n < 1000) throw std::invalid_argument("estimation needs n >= 1000");
    if (cfg.reps < 1) throw std::invalid_argument("estimation needs reps >= 1");
    checkpoints = cfg.checkpoints.empty() ? default_checkpoints(cfg.n) : cfg.checkpoints;
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
        if (checkpoints[i] < 2 || checkpoints[i] > cfg.n)
            throw std::invalid_argument("checkpoints must lie in [2, n]");
        if (i > 0 && checkpoints[i] <= checkpoints[i - 1])
            throw std::invalid_argument("checkpoints must be strictly increasing");
    }
}

// Aligned-observation tallies over [burn, len).
struct Tally {
    std::vector<std::size_t> count;
    std::vector<std::vector<double>> symbols;
    std::vector<double> sum_x, sum_x2, sum_log_f;
};

Tally tally_window(const HmmModel& model, const Observations& x, LogEmissions log_em,
                   const std::vector<State>& path, std::size_t burn) {
    const auto m = static_cast<std::size_t>(model.num_states());
    Tally tally;
    tally.count.assign(m, 0);
    tally.sum_x.assign(m, 0.0);
    tally.sum_x2.assign(m, 0.0);
    tally.sum_log_f.assign(m, 0.0);
    const int k = model.alphabet_size();
    if (k > 0) tally.symbols.assign(m, std::vector<double>(static_cast<std::size_t>(k), 0.0));
    for (std::size_t t = burn; t < path.size(); ++t) {
        const auto s = static_cast<std::size_t>(path[t]);
        ++tally.count[s];
        tally.sum_log_f[s] += log_em(static_cast<Eigen::Index>(t), path[t]);
        if (k > 0) {
            tally.symbols[s][static_cast<std::size_t>(std::get<std::vector<int>>(x)[t])] += 1.0;
        } else {
            double v = std::get<std::vector<double>>(x)[t];
            tally.sum_x[s] += v;
            tally.sum_x2[s] += v * v;
        }
    }
    return tally;
}

QTable make_q_table(std::size_t count, const std::vector<double>* symbols, double sum_x, double sum_x2,
                    double sum_log_f) {
    QTable q;
    q.count = count;
    if (count == 0) {
        q.mean = q.variance = q.mean_log_density = kNaN;
        return q;
    }
    const double c = static_cast<double>(count);
    if (symbols) {
        q.probs.resize(symbols->size());
        for (std::size_t i = 0; i < symbols->size(); ++i) q.probs[i] = (*symbols)[i] / c;
        q.mean = q.variance = kNaN;
    } else {
        q.mean = sum_x / c;
        q.variance = std::max(0.0, sum_x2 / c - q.mean * q.mean);
    }
    q.mean_log_density = sum_log_f / c;
    return q;
}

ReplicateResult simulate_replicate(const HmmModel& model, const EstimationConfig& cfg,
                                   const std::vector<std::size_t>& checkpoints, const LossMatrix& loss,
                                   std::size_t replicate) {
    const std::size_t n = cfg.n;
    const LabeledSample smp = sample(model, n, derive_seed(cfg.seed, replicate));
    const Matrix log_em = log_emission_matrix(model, smp.x);
    const Matrix log_p = log_transition_matrix(model);
    const ViterbiLattice lattice = viterbi_lattice(model, log_em);
    const std::vector<State> full_path = lattice.backtrack(n);

    ReplicateResult out;

    const RenewalDiagnostics fix = fixation_points(lattice, regular_probe_grid(n, cfg.probe_step), cfg.fixation);
    out.mean_cycle = fix.mean_cycle;
    if (fix.fixation_points.size() >= 2) {
        double reward = 0.0;
        const std::size_t first = fix.fixation_points.front(), last = fix.fixation_points.back();
        for (std::size_t t = first + 1; t <= last; ++t) reward += loss(smp.y[t], full_path[t]);
        out.renewal_r1 = reward / static_cast<double>(last - first);
    }
    std::size_t burn = std::max<std::size_t>(cfg.min_burn_in, 1);
    if (std::isfinite(fix.mean_cycle))
        burn = std::max(burn, static_cast<std::size_t>(std::ceil(2.0 * fix.mean_cycle)));
    out.burn_in = burn;

    for (std::size_t nk : checkpoints) {
        const auto sub = log_em.topRows(static_cast<Eigen::Index>(nk));
        const Posteriors post = forward_backward(model, sub);
        const std::vector<State> v = lattice.backtrack(nk);
        const StatePath pm = pmap(post);
        const std::vector<State> truth(smp.y.begin(), smp.y.begin() + static_cast<std::ptrdiff_t>(nk));

        CheckpointRow row;
        row.n = nk;
        row.replicate = replicate;
        row.empirical_r1 = empirical_r1(truth, v, loss);
        row.conditional_r1 = conditional_r1(post, v, loss);
        row.rbar1_viterbi = segrisk::rbar1(post, v);
        row.rbar1_pmap = segrisk::rbar1(post, pm.states);
        const double lj = log_joint(model, sub, v);
        if (lj == -kInf) throw std::logic_error("Viterbi path has zero likelihood");
        row.rbar_inf_direct = rbar_inf(lj, post.log_likelihood, nk);

        // Window [b, nk): emission terms at t, transitions (v_{t-1}, v_t),
        // predictive increments ln p(x_t | x_1..x_{t-1}).
        const std::size_t b = std::min(burn, nk / 2 > 0 ? nk / 2 : 1);
        row.burn_in = b;
        const double len = static_cast<double>(nk - b);
        const Tally tally = tally_window(model, smp.x, sub, v, b);
        double emission_sum = 0.0;
        for (double s : tally.sum_log_f) emission_sum += s;
        double transition_sum = 0.0, increment_sum = 0.0;
        for (std::size_t t = b; t < nk; ++t) {
            transition_sum += log_p(v[t - 1], v[t]);
            increment_sum += post.log_increments[t];
        }
        row.emission_term = emission_sum / len;
        row.transition_term = transition_sum / len;
        row.hx_term = -increment_sum / len;
        row.rbar_inf_decomposed = -(row.emission_term + row.transition_term + row.hx_term) + 0.0;
        out.rows.push_back(row);

        const auto m = static_cast<std::size_t>(model.num_states());
        std::vector<double> occupancy(m);
        std::vector<QTable> tables(m);
        for (std::size_t s = 0; s < m; ++s) {
            occupancy[s] = static_cast<double>(tally.count[s]) / len;
            tables[s] = make_q_table(tally.count[s], tally.symbols.empty() ? nullptr : &tally.symbols[s],
                                     tally.sum_x[s], tally.sum_x2[s], tally.sum_log_f[s]);
        }
        out.m_s.push_back(std::move(occupancy));
        out.q_s.push_back(std::move(tables));
        if (nk == checkpoints.back()) {
            out.state_counts = tally.count;
            out.symbol_counts = tally.symbols;
            out.sum_x = tally.sum_x;
            out.sum_x2 = tally.sum_x2;
            out.sum_log_f = tally.sum_log_f;
            double expected = 0.0;
            for (State s = 0; s < model.num_states(); ++s) expected += model.initial[s] * expected_log_emission(model, s);
            const double hx = -post.log_likelihood / static_cast<double>(nk);
            out.rbar_y_inf = -(expected - markov_entropy_rate(model) + hx);
        }
    }
    return out;
}

std::vector<ReplicateResult> run_replicates(const HmmModel& model, const EstimationConfig& cfg,
                                            std::vector<std::size_t>& checkpoints) {
    validate_config(cfg, checkpoints);
    const LossMatrix loss = cfg.loss.value_or(LossMatrix::symmetric(model.num_states()));
    if (loss.l.rows() != model.num_states() || loss.l.cols() != model.num_states())
        throw std::invalid_argument("loss matrix must be |S| x |S|");

    std::vector<ReplicateResult> results(cfg.reps);
    std::vector<std::exception_ptr> errors(cfg.reps);
    std::size_t workers = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, cfg.reps);

    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t r = next++; r < cfg.reps; r = next++) {
            try {
                results[r] = simulate_replicate(model, cfg, checkpoints, loss, r);
            } catch (...) {
                errors[r] = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(work);
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return results;
}

bool same(double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); }

}  // namespace

bool Estimate::operator==(const Estimate& o) const {
    return same(value, o.value) && same(se, o.se) && count == o.count;
}

bool QTable::operator==(const QTable& o) const {
    return count == o.count && probs == o.probs && same(mean, o.mean) && same(variance, o.variance) &&
           same(mean_log_density, o.mean_log_density);
}

std::vector<std::size_t> default_checkpoints(std::size_t n) {
    std::vector<std::size_t> cps;
    for (std::size_t c = 1000; c < n; c *= 10) cps.push_back(c);
    cps.push_back(n);
    return cps;
}

Estimate summarize(const std::vector<double>& values) {
    Estimate e;
    std::vector<double> finite;
    for (double v : values)
        if (std::isfinite(v)) finite.push_back(v);
    e.count = finite.size();
    if (finite.empty()) {
        e.value = e.se = kNaN;
        return e;
    }
    double mean = 0.0;
    for (double v : finite) mean += v;
    mean /= static_cast<double>(finite.size());
    e.value = mean;
    if (finite.size() < 2) {
        e.se = kNaN;
        return e;
    }
    double ss = 0.0;
    for (double v : finite) ss += (v - mean) * (v - mean);
    e.se = std::sqrt(ss / static_cast<double>(finite.size() - 1) / static_cast<double>(finite.size()));
    return e;
}

EstimationResult run_estimation(const HmmModel& model, const EstimationConfig& config) {
    std::vector<std::size_t> checkpoints;
    const std::vector<ReplicateResult> reps = run_replicates(model, config, checkpoints);
    const std::size_t last = checkpoints.size() - 1;
    const auto m = static_cast<std::size_t>(model.num_states());

    EstimationResult res;
    res.trace.model_id = config.model_id;
    res.trace.seed = config.seed;
    res.trace.checkpoints = checkpoints;

    AsymptoticRiskReport& rep = res.report;
    rep.model_id = config.model_id;
    rep.n = config.n;
    rep.reps = config.reps;
    rep.seed = config.seed;

    std::vector<double> emp, cond, renewal, rb1, rb1s, direct, decomposed, ryi, cycles;
    std::vector<std::size_t> counts(m, 0);
    std::vector<std::vector<double>> symbols;
    std::vector<double> sum_x(m, 0.0), sum_x2(m, 0.0), sum_log_f(m, 0.0);
    if (model.is_categorical()) symbols.assign(m, std::vector<double>(static_cast<std::size_t>(model.alphabet_size()), 0.0));

    for (const auto& r : reps) {
        res.trace.rows.insert(res.trace.rows.end(), r.rows.begin(), r.rows.end());
        res.m_s_by_checkpoint.push_back(r.m_s);
        res.q_s_by_checkpoint.push_back(r.q_s);
        rep.burn_in.push_back(r.burn_in);

        for (const auto& row : r.rows)
            if (row.rbar1_pmap > row.rbar1_viterbi) ++rep.pmap_dominance_violations;

        const CheckpointRow& fin = r.rows[last];
        emp.push_back(fin.empirical_r1);
        cond.push_back(fin.conditional_r1);
        renewal.push_back(r.renewal_r1);
        cycles.push_back(r.mean_cycle);
        if (std::isinf(fin.rbar1_viterbi)) {
            ++rep.excluded_replicates;
        } else {
            rb1.push_back(fin.rbar1_viterbi);
            rb1s.push_back(fin.rbar1_pmap);
        }
        direct.push_back(fin.rbar_inf_direct);
        decomposed.push_back(fin.rbar_inf_decomposed);
        ryi.push_back(r.rbar_y_inf);

        for (std::size_t s = 0; s < m; ++s) {
            counts[s] += r.state_counts[s];
            sum_x[s] += r.sum_x[s];
            sum_x2[s] += r.sum_x2[s];
            sum_log_f[s] += r.sum_log_f[s];
            if (!symbols.empty())
                for (std::size_t k = 0; k < symbols[s].size(); ++k) symbols[s][k] += r.symbol_counts[s][k];
        }
    }

    rep.r1_longrun = summarize(emp);
    rep.r1_conditional = summarize(cond);
    rep.r1_renewal = summarize(renewal);
    rep.rbar1 = summarize(rb1);
    rep.rbar1_star = summarize(rb1s);
    rep.rbar_inf_direct = summarize(direct);
    rep.rbar_inf_decomposed = summarize(decomposed);
    rep.rbar_y_inf = summarize(ryi);
    rep.mean_cycle = summarize(cycles);

    std::size_t total = 0;
    for (std::size_t c : counts) total += c;
    for (std::size_t s = 0; s < m; ++s) {
        rep.m_s.push_back(total ? static_cast<double>(counts[s]) / static_cast<double>(total) : kNaN);
        rep.q_s_tables.push_back(make_q_table(counts[s], symbols.empty() ? nullptr : &symbols[s], sum_x[s],
                                              sum_x2[s], sum_log_f[s]));
    }
    return res;
}

R1Estimate estimate_r1(const HmmModel& model, const EstimationConfig& config) {
    EstimationResult res = run_estimation(model, config);
    return R1Estimate{std::move(res.trace), res.report.r1_longrun, res.report.r1_conditional, res.report.r1_renewal};
}

Rbar1Estimate estimate_rbar1(const HmmModel& model, const EstimationConfig& config) {
    EstimationResult res = run_estimation(model, config);
    Rbar1Estimate out;
    out.rbar1 = res.report.rbar1;
    out.rbar1_star = res.report.rbar1_star;
    out.excluded_replicates = res.report.excluded_replicates;
    out.dominance_violations = res.report.pmap_dominance_violations;
    for (std::size_t k = 0; k < res.trace.checkpoints.size(); ++k) {
        std::vector<double> vals;
        for (const auto& row : res.trace.rows)
            if (row.n == res.trace.checkpoints[k]) vals.push_back(row.rbar1_viterbi);
        out.rbar1_checkpoint_means.push_back(summarize(vals).value);
    }
    return out;
}

RbarInfEstimate estimate_rbar_inf(const HmmModel& model, const EstimationConfig& config) {
    EstimationResult res = run_estimation(model, config);
    RbarInfEstimate out;
    out.direct = res.report.rbar_inf_direct;
    out.decomposed = res.report.rbar_inf_decomposed;
    const std::size_t final_n = res.trace.checkpoints.back();
    for (const auto& row : res.trace.rows)
        if (row.n == final_n) out.gaps.push_back(std::abs(row.rbar_inf_direct - row.rbar_inf_decomposed));
    out.q_s_tables = res.report.q_s_tables;
    out.m_s = res.report.m_s;
    return out;
}

double estimate_rbar_y_inf(const HmmModel& model, std::size_t n, std::uint64_t seed) {
    if (n < 1000) throw std::invalid_argument("estimation needs n >= 1000");
    const LabeledSample smp = sample(model, n, seed);
    const Posteriors post = forward_backward(model, smp.x);
    double expected = 0.0;
    for (State s = 0; s < model.num_states(); ++s) expected += model.initial[s] * expected_log_emission(model, s);
    const double hx = -post.log_likelihood / static_cast<double>(n);
    return -(expected - markov_entropy_rate(model) + hx);
}

PosteriorFloorStats posterior_floor_stats(const HmmModel& model, std::size_t n, std::uint64_t seed,
                                          const BarrierOptions& barrier) {
    return posterior_floor_stats(model, sample(model, n, seed).x, barrier);
}

PosteriorFloorStats posterior_floor_stats(const HmmModel& model, const Observations& x,
                                          const BarrierOptions& barrier) {
    PosteriorFloorStats out;
    out.n = length(x);
    out.rho_hat = kNaN;
    const ClusterDetection det = detect_cluster(model, barrier);
    if (!det.holds()) {
        out.diagnostic = det.diagnostic;
        return out;
    }
    const RenewalDiagnostics stops = stopping_times(x, *det.info);
    const Matrix log_em = log_emission_matrix(model, x);
    const Posteriors post = forward_backward(model, log_em);
    const StatePath v = viterbi(model, log_em);

    for (std::size_t t = 0; t < out.n; ++t) {
        if (!stops.stopping_u[t] || !stops.stopping_w[t]) continue;
        FloorEntry e;
        e.t = t;
        double p = post.smoothing(static_cast<Eigen::Index>(t), v.states[t]);
        e.neg_log_posterior = p > 0.0 ? -std::log(p) : kInf;
        if (e.neg_log_posterior <= 0.0) e.neg_log_posterior = 0.0;
        e.span = *stops.stopping_w[t] - *stops.stopping_u[t];
        out.entries.push_back(e);
    }
    if (out.entries.empty()) {
        out.diagnostic = "no position has both stopping times defined";
        return out;
    }
    double rho = 0.0;
    for (const auto& e : out.entries) rho = std::max(rho, e.neg_log_posterior / static_cast<double>(e.span));
    out.rho_hat = rho;
    return out;
}

}  // namespace segrisk
