#pragma once
// Risk functionals of a candidate segmentation against one observation
// sequence. All log-risks are in nats per position.
//
// Infinite risks are stored as +inf doubles and serialized with an explicit
// "<field>_infinite" flag.

#include <map>
#include <optional>
#include <vector>

#include "segrisk/alignment.hpp"
#include "segrisk/inference.hpp"
#include "segrisk/model.hpp"

namespace segrisk {

struct RiskReport {
    double r1 = 0.0;        // (1/n) sum_t sum_a l(a, s_t) p_t(a | x^n)
    double rbar1 = 0.0;     // -(1/n) sum_t ln p_t(s_t | x^n)
    double rbar_inf = 0.0;  // -(1/n) ln p(s^n | x^n)
    std::map<double, double> rbar_c;  // c -> rbar1 + c * rbar_inf
    std::optional<double> empirical_r1;

    bool operator==(const RiskReport&) const = default;
};

RiskReport evaluate_risks(const HmmModel& model, LogEmissions log_em, const Posteriors& posteriors,
                          const std::vector<State>& path, const LossMatrix& loss,
                          const std::vector<double>& c_grid = {});
RiskReport evaluate_risks(const HmmModel& model, const Observations& x, const Posteriors& posteriors,
                          const StatePath& path, const LossMatrix& loss,
                          const std::vector<double>& c_grid = {});

// Individual terms, for callers that need only one of them.
double conditional_r1(const Posteriors& posteriors, const std::vector<State>& path, const LossMatrix& loss);
double rbar1(const Posteriors& posteriors, const std::vector<State>& path);
double rbar_inf(double log_joint, double log_likelihood, std::size_t n);

// (1/n) sum_t l(y_t, s_t).
double empirical_r1(const std::vector<State>& truth, const std::vector<State>& path, const LossMatrix& loss);

}  // namespace segrisk
