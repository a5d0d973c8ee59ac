#pragma once
// Structural diagnostics behind the regenerative behaviour of the Viterbi
// process: clusters of states with a common detectable support, the barrier
// observation set, the stopping times around barrier blocks, and empirical
// prefix fixation of the Viterbi path under suffix extension.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "segrisk/alignment.hpp"
#include "segrisk/model.hpp"

namespace segrisk {

// Categorical: explicit symbol set. Gaussian: closed interval [lo, hi].
struct BarrierSet {
    std::vector<int> symbols;
    std::optional<std::pair<double, double>> interval;

    bool contains(int symbol) const;
    bool contains(double value) const;
    bool contains_at(const Observations& x, std::size_t t) const;
};

struct ClusterInfo {
    std::vector<State> cluster;
    int r = 0;          // smallest r with R^r > 0, R = P restricted to the cluster
    BarrierSet barrier;
    double eps = 0.0;   // min of f_s over barrier x cluster
    double m_bound = 0.0;  // max of f_s over barrier x cluster
};

struct ClusterCandidate {
    std::vector<State> states;
    Matrix restricted;  // P restricted to the candidate
    int r = 0;          // 0 when not primitive
};

struct ClusterDetection {
    std::optional<ClusterInfo> info;          // set iff A1 holds
    std::vector<ClusterCandidate> candidates; // every cluster found, primitive or not
    std::string diagnostic;                   // why A1 fails, when it does

    bool holds() const { return info.has_value(); }
};

struct BarrierOptions {
    // Categorical: keep only symbols with min_{s in C} f_s(x) >= eps.
    // Gaussian: barrier = {x : min_s f_s(x) >= eps}.
    std::optional<double> eps;
    // Gaussian only: explicit barrier interval; takes precedence over eps.
    std::optional<std::pair<double, double>> interval;
};

// Standard normal quantile at 0.75; half-width of the central 50% interval.
inline constexpr double kCentralHalfWidth = 0.6744897501960817;

ClusterDetection detect_cluster(const HmmModel& model, const BarrierOptions& options = {});

struct A2Witness {
    State state = 0;
    bool holds = false;
    std::optional<double> x;  // an observation in the strict-dominance region
    double lhs = 0.0;         // f_l(x) p*_l at the witness
    double rhs = 0.0;         // max_{s != l} f_s(x) p*_s at the witness
};

struct A2Result {
    bool holds = false;
    std::vector<A2Witness> witnesses;
    std::optional<std::string> advisory;
};

A2Result check_a2(const HmmModel& model);

struct RenewalDiagnostics {
    // 0-based stopping times; nullopt where no barrier block exists in range.
    std::vector<std::optional<std::size_t>> stopping_u;
    std::vector<std::optional<std::size_t>> stopping_w;
    std::vector<std::size_t> fixation_points;  // 0-based, increasing
    std::vector<std::size_t> cycle_lengths;
    double mean_cycle = 0.0;                   // NaN without at least one cycle
    std::size_t assessed_upto = 0;             // positions [0, assessed_upto) had enough probes
    std::vector<std::string> diagnostics;
};

// W_t = min{tau >= t+r+1 : x_{tau-r..tau} all in barrier},
// U_t = max{tau <= t-r-1 : x_{tau..tau+r} all in barrier}.
RenewalDiagnostics stopping_times(const Observations& x, const ClusterInfo& info);

struct FixationOptions {
    std::size_t m_pad = 10;
    std::size_t min_probes = 3;  // probes with length >= t + 1 + m_pad needed to assess t
};

// t (0-based) is a fixation point if the Viterbi paths of every probe prefix
// length L >= t + 1 + m_pad agree on positions 0..t. Probe lengths outside
// [1, n] are rejected; duplicates are ignored.
RenewalDiagnostics fixation_points(const HmmModel& model, const Observations& x,
                                   std::vector<std::size_t> probe_grid, const FixationOptions& options = {});
RenewalDiagnostics fixation_points(const ViterbiLattice& lattice, std::vector<std::size_t> probe_grid,
                                   const FixationOptions& options = {});

// 100, 200, ..., plus n itself.
std::vector<std::size_t> regular_probe_grid(std::size_t n, std::size_t step);

}  // namespace segrisk
