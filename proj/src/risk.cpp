#include "segrisk/risk.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace segrisk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_path(const std::vector<State>& path, std::size_t n, int num_states) {
    if (path.size() != n) throw std::invalid_argument("path length " + std::to_string(path.size()) +
                                                      " differs from sequence length " + std::to_string(n));
    for (std::size_t t = 0; t < path.size(); ++t)
        if (path[t] < 0 || path[t] >= num_states)
            throw std::out_of_range("path state " + std::to_string(path[t]) + " at position " + std::to_string(t) +
                                    " outside [0, " + std::to_string(num_states) + ")");
}

}  // namespace

double conditional_r1(const Posteriors& posteriors, const std::vector<State>& path, const LossMatrix& loss) {
    const auto& sm = posteriors.smoothing;
    check_path(path, posteriors.length(), posteriors.num_states());
    double total = 0.0;
    for (std::size_t t = 0; t < path.size(); ++t) {
        const auto row = static_cast<Eigen::Index>(t);
        double pointwise = 0.0;
        for (State a = 0; a < sm.cols(); ++a) pointwise += loss(a, path[t]) * sm(row, a);
        total += pointwise;
    }
    return total / static_cast<double>(path.size());
}

double rbar1(const Posteriors& posteriors, const std::vector<State>& path) {
    check_path(path, posteriors.length(), posteriors.num_states());
    double total = 0.0;
    for (std::size_t t = 0; t < path.size(); ++t) {
        double p = posteriors.smoothing(static_cast<Eigen::Index>(t), path[t]);
        if (p <= 0.0) return kInf;
        total += std::log(p);
    }
    return -total / static_cast<double>(path.size());
}

double rbar_inf(double log_joint, double log_likelihood, std::size_t n) {
    if (log_joint == -kInf) return kInf;
    double v = -(log_joint - log_likelihood) / static_cast<double>(n);
    // ln p(s^n | x^n) <= 0; only rounding can push it above.
    return v <= 0.0 ? 0.0 : v;
}

RiskReport evaluate_risks(const HmmModel& model, LogEmissions log_em, const Posteriors& posteriors,
                          const std::vector<State>& path, const LossMatrix& loss,
                          const std::vector<double>& c_grid) {
    const std::size_t n = posteriors.length();
    if (static_cast<std::size_t>(log_em.rows()) != n)
        throw std::invalid_argument("posteriors do not match the observation sequence");
    check_path(path, n, model.num_states());

    RiskReport report;
    report.r1 = conditional_r1(posteriors, path, loss);
    report.rbar1 = rbar1(posteriors, path);
    report.rbar_inf = rbar_inf(log_joint(model, log_em, path), posteriors.log_likelihood, n);
    for (double c : c_grid) {
        if (!(c >= 0.0)) throw std::invalid_argument("c grid entries must be >= 0");
        report.rbar_c[c] = c == 0.0 ? report.rbar1 : report.rbar1 + c * report.rbar_inf;
    }
    return report;
}

RiskReport evaluate_risks(const HmmModel& model, const Observations& x, const Posteriors& posteriors,
                          const StatePath& path, const LossMatrix& loss, const std::vector<double>& c_grid) {
    const Matrix log_em = log_emission_matrix(model, x);
    return evaluate_risks(model, log_em, posteriors, path.states, loss, c_grid);
}

double empirical_r1(const std::vector<State>& truth, const std::vector<State>& path, const LossMatrix& loss) {
    if (truth.size() != path.size()) throw std::invalid_argument("empirical_r1: length mismatch");
    if (truth.empty()) throw std::invalid_argument("empirical_r1: empty paths");
    double total = 0.0;
    for (std::size_t t = 0; t < truth.size(); ++t) total += loss(truth[t], path[t]);
    return total / static_cast<double>(truth.size());
}

}  // namespace segrisk
