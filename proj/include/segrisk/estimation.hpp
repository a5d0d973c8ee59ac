#pragma once
// Monte Carlo estimation of the asymptotic segmentation risks of the Viterbi
// alignment, and of their decompositions, from long simulated runs.
//
// Every replicate draws its sample from derive_seed(seed, replicate), so all
// outputs are deterministic functions of (model, config) regardless of how
// replicates are scheduled across threads.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "segrisk/model.hpp"
#include "segrisk/regeneration.hpp"

namespace segrisk {

struct EstimationConfig {
    std::size_t n = 200'000;
    std::size_t reps = 8;
    std::uint64_t seed = 1;
    std::vector<std::size_t> checkpoints;  // empty: default_checkpoints(n)
    std::optional<LossMatrix> loss;        // empty: symmetric loss
    std::size_t probe_step = 100;
    FixationOptions fixation;
    std::size_t min_burn_in = 100;
    std::size_t threads = 0;  // 0: one per hardware thread, capped by reps
    std::string model_id = "model";
};

// 10^3, 10^4, ... below n, then n.
std::vector<std::size_t> default_checkpoints(std::size_t n);

// Replicate mean with its standard error (replicate-level variance).
struct Estimate {
    double value = 0.0;
    double se = 0.0;      // NaN with fewer than two contributing replicates
    std::size_t count = 0;

    // NaN fields compare equal to NaN.
    bool operator==(const Estimate& other) const;
};

Estimate summarize(const std::vector<double>& values);

// Per-checkpoint quantities of one replicate. Log-risks are +inf when a
// marginal or transition along the path is zero.
struct CheckpointRow {
    std::size_t n = 0;
    std::size_t replicate = 0;
    double empirical_r1 = 0.0;
    double conditional_r1 = 0.0;
    double rbar1_viterbi = 0.0;
    double rbar1_pmap = 0.0;
    double rbar_inf_direct = 0.0;
    double rbar_inf_decomposed = 0.0;
    // rbar_inf_decomposed = -(emission_term + transition_term + hx_term),
    // each averaged over the window [burn_in, n).
    double emission_term = 0.0;
    double transition_term = 0.0;
    double hx_term = 0.0;
    std::size_t burn_in = 0;
};

struct SimulationTrace {
    std::string model_id;
    std::uint64_t seed = 0;
    std::vector<std::size_t> checkpoints;
    std::vector<CheckpointRow> rows;  // replicate-major, checkpoints increasing
};

// Empirical law of the observations aligned to one Viterbi state.
struct QTable {
    std::size_t count = 0;
    std::vector<double> probs;  // categorical: frequencies over the alphabet
    double mean = 0.0;          // gaussian: sample mean and variance
    double variance = 0.0;
    double mean_log_density = 0.0;  // integral of ln f_s against the empirical law

    // NaN fields compare equal to NaN.
    bool operator==(const QTable& other) const;
};

struct AsymptoticRiskReport {
    std::string model_id;
    std::size_t n = 0;
    std::size_t reps = 0;
    std::uint64_t seed = 0;

    Estimate r1_longrun;      // empirical misclassification risk of Viterbi
    Estimate r1_conditional;  // R_1(v, x^n)
    Estimate r1_renewal;      // renewal-reward over fixation cycles
    Estimate rbar1;           // Rbar_1 of Viterbi
    Estimate rbar1_star;      // Rbar_1 of PMAP
    Estimate rbar_inf_direct;
    Estimate rbar_inf_decomposed;
    Estimate rbar_y_inf;
    Estimate mean_cycle;

    std::vector<QTable> q_s_tables;  // pooled over replicates, final checkpoint
    std::vector<double> m_s;

    std::size_t excluded_replicates = 0;          // infinite Rbar_1 at the final checkpoint
    std::size_t pmap_dominance_violations = 0;    // rbar1_star > rbar1 in some replicate/checkpoint
    std::vector<std::size_t> burn_in;             // per replicate

    bool operator==(const AsymptoticRiskReport&) const = default;
};

struct EstimationResult {
    SimulationTrace trace;
    AsymptoticRiskReport report;
    // Per replicate, per checkpoint: Viterbi-state occupancy and aligned
    // observation laws over the burn-in window.
    std::vector<std::vector<std::vector<double>>> m_s_by_checkpoint;
    std::vector<std::vector<std::vector<QTable>>> q_s_by_checkpoint;
};

EstimationResult run_estimation(const HmmModel& model, const EstimationConfig& config);

struct R1Estimate {
    SimulationTrace trace;
    Estimate longrun;
    Estimate conditional;
    Estimate renewal;
};
R1Estimate estimate_r1(const HmmModel& model, const EstimationConfig& config);

struct Rbar1Estimate {
    Estimate rbar1;
    Estimate rbar1_star;
    std::size_t excluded_replicates = 0;
    std::size_t dominance_violations = 0;
    std::vector<double> rbar1_checkpoint_means;  // across replicates, per checkpoint
};
Rbar1Estimate estimate_rbar1(const HmmModel& model, const EstimationConfig& config);

struct RbarInfEstimate {
    Estimate direct;
    Estimate decomposed;
    std::vector<double> gaps;  // |direct - decomposed| per replicate, final checkpoint
    std::vector<QTable> q_s_tables;
    std::vector<double> m_s;
};
RbarInfEstimate estimate_rbar_inf(const HmmModel& model, const EstimationConfig& config);

// -[sum_s pi_s E_s ln f_s - H_Y + H_X], with H_Y in closed form and
// H_X = -(1/n) ln p(x^n) from one sample.
double estimate_rbar_y_inf(const HmmModel& model, std::size_t n, std::uint64_t seed);

struct FloorEntry {
    std::size_t t = 0;
    double neg_log_posterior = 0.0;  // -ln p_t(v_t | x^n)
    std::size_t span = 0;            // W_t - U_t
};

struct PosteriorFloorStats {
    std::size_t n = 0;
    std::vector<FloorEntry> entries;
    double rho_hat = 0.0;  // max_t neg_log_posterior / span; NaN with no entries
    std::string diagnostic;
};

PosteriorFloorStats posterior_floor_stats(const HmmModel& model, std::size_t n, std::uint64_t seed,
                                          const BarrierOptions& barrier = {});
PosteriorFloorStats posterior_floor_stats(const HmmModel& model, const Observations& x,
                                          const BarrierOptions& barrier = {});

}  // namespace segrisk
