#pragma once
// Exact log-space forward-backward inference.

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "segrisk/model.hpp"

namespace segrisk {

// Raised when an observation has zero probability under every reachable
// state; the likelihood is 0 and risks would divide by it.
class ZeroLikelihoodError : public std::runtime_error {
public:
    explicit ZeroLikelihoodError(std::size_t position);
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

struct Posteriors {
    double log_likelihood = 0.0;        // ln p(x^n)
    Matrix smoothing;                   // p_t(s | x^n), n x |S|
    Matrix log_alpha;                   // ln p(x_1..x_t, Y_t = s)
    Matrix log_beta;                    // ln p(x_{t+1}..x_n | Y_t = s)
    std::vector<double> log_increments; // ln p(x_t | x_1..x_{t-1}); sums to log_likelihood

    std::size_t length() const { return static_cast<std::size_t>(smoothing.rows()); }
    int num_states() const { return static_cast<int>(smoothing.cols()); }
};

// Normalized forward recursion: log filter ln P(Y_t = s | x_1..x_t) and the
// one-step predictive log-likelihoods.
struct FilterPass {
    Matrix log_filter;
    std::vector<double> log_increments;
};

using LogEmissions = Eigen::Ref<const Matrix>;

FilterPass forward_filter(const HmmModel& model, LogEmissions log_em);

Posteriors forward_backward(const HmmModel& model, const Observations& x);
Posteriors forward_backward(const HmmModel& model, LogEmissions log_em);

// P(Y_t = . | x_1..x_last) for t <= last, by a backward pass over the
// truncated window [t, last]. `filter` must cover at least `last + 1` steps.
Vector windowed_marginal(const HmmModel& model, const FilterPass& filter, LogEmissions log_em,
                         std::size_t t, std::size_t last);

// Half L1 distance, in [0, 1].
double tv_distance(const Vector& p, const Vector& q);

struct ForgettingProfile {
    std::size_t t = 0;
    std::vector<std::size_t> gaps;
    std::vector<double> tv;
    double fitted_log_slope = 0.0;  // NaN when fewer than two usable points
};

// tv[k] = TV(P(Y_t | x_1..x_{t+gaps[k]}), P(Y_t | x_1..x_{t+max gap})).
// Times are 0-based; requires t + max(gaps) < n and strictly increasing gaps.
ForgettingProfile forgetting_profile(const HmmModel& model, const Observations& x, std::size_t t,
                                     const std::vector<std::size_t>& gaps);

// Least-squares slope of ln(tv) against gap over entries with tv > 1e-14.
double fit_log_slope(const std::vector<std::size_t>& gaps, const std::vector<double>& tv);

}  // namespace segrisk
