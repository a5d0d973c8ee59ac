#include "segrisk/inference.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "segrisk/logmath.hpp"

namespace segrisk {

ZeroLikelihoodError::ZeroLikelihoodError(std::size_t position)
    : std::runtime_error("observation at position " + std::to_string(position) +
                         " has zero likelihood under every reachable state"),
      position_(position) {}

FilterPass forward_filter(const HmmModel& model, LogEmissions log_em) {
    const Eigen::Index n = log_em.rows();
    const int m = model.num_states();
    const Matrix log_p = log_transition_matrix(model);
    const Vector log_pi = log_initial_vector(model);

    FilterPass out;
    out.log_filter.resize(n, m);
    out.log_increments.resize(static_cast<std::size_t>(n));
    std::vector<double> joint(static_cast<std::size_t>(m));
    std::vector<double> terms(static_cast<std::size_t>(m));

    for (Eigen::Index t = 0; t < n; ++t) {
        for (int j = 0; j < m; ++j) {
            double pred;
            if (t == 0) {
                pred = log_pi[j];
            } else {
                for (int i = 0; i < m; ++i) terms[static_cast<std::size_t>(i)] = out.log_filter(t - 1, i) + log_p(i, j);
                pred = log_sum_exp(terms);
            }
            joint[static_cast<std::size_t>(j)] = pred + log_em(t, j);
        }
        double inc = log_sum_exp(joint);
        if (inc == kNegInf || std::isnan(inc)) throw ZeroLikelihoodError(static_cast<std::size_t>(t));
        out.log_increments[static_cast<std::size_t>(t)] = inc;
        for (int j = 0; j < m; ++j) out.log_filter(t, j) = joint[static_cast<std::size_t>(j)] - inc;
    }
    return out;
}

Posteriors forward_backward(const HmmModel& model, const Observations& x) {
    if (length(x) == 0) throw std::invalid_argument("forward_backward needs at least one observation");
    const Matrix log_em = log_emission_matrix(model, x);
    return forward_backward(model, log_em);
}

Posteriors forward_backward(const HmmModel& model, LogEmissions log_em) {
    const Eigen::Index n = log_em.rows();
    const int m = model.num_states();
    if (n == 0) throw std::invalid_argument("forward_backward needs at least one observation");
    FilterPass fwd = forward_filter(model, log_em);
    const Matrix log_p = log_transition_matrix(model);

    // Backward recursion scaled by the same increments as the forward pass,
    // so that log_filter + scaled_beta is the log smoothing marginal.
    Matrix scaled_beta(n, m);
    scaled_beta.row(n - 1).setZero();
    std::vector<double> terms(static_cast<std::size_t>(m));
    for (Eigen::Index t = n - 2; t >= 0; --t) {
        const double inc = fwd.log_increments[static_cast<std::size_t>(t + 1)];
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j)
                terms[static_cast<std::size_t>(j)] = log_p(i, j) + log_em(t + 1, j) + scaled_beta(t + 1, j);
            scaled_beta(t, i) = log_sum_exp(terms) - inc;
        }
    }

    Posteriors post;
    post.smoothing.resize(n, m);
    post.log_alpha.resize(n, m);
    post.log_beta.resize(n, m);

    double cum = 0.0;
    std::vector<double> cumulative(static_cast<std::size_t>(n));
    for (Eigen::Index t = 0; t < n; ++t) {
        cum += fwd.log_increments[static_cast<std::size_t>(t)];
        cumulative[static_cast<std::size_t>(t)] = cum;
    }
    post.log_likelihood = cum;

    for (Eigen::Index t = 0; t < n; ++t) {
        double total = 0.0;
        for (int s = 0; s < m; ++s) {
            double lg = fwd.log_filter(t, s) + scaled_beta(t, s);
            double p = lg == kNegInf ? 0.0 : std::exp(lg);
            post.smoothing(t, s) = p;
            total += p;
        }
        post.smoothing.row(t) /= total;
        const double before = cumulative[static_cast<std::size_t>(t)];
        for (int s = 0; s < m; ++s) {
            post.log_alpha(t, s) = fwd.log_filter(t, s) + before;
            post.log_beta(t, s) = scaled_beta(t, s) + (cum - before);
        }
    }
    post.log_increments = std::move(fwd.log_increments);
    return post;
}

Vector windowed_marginal(const HmmModel& model, const FilterPass& filter, LogEmissions log_em,
                         std::size_t t, std::size_t last) {
    if (t > last || static_cast<Eigen::Index>(last) >= filter.log_filter.rows() ||
        static_cast<Eigen::Index>(last) >= log_em.rows())
        throw std::out_of_range("windowed_marginal: window out of range");
    const int m = model.num_states();
    const Matrix log_p = log_transition_matrix(model);

    std::vector<double> beta(static_cast<std::size_t>(m), 0.0), next(static_cast<std::size_t>(m));
    std::vector<double> terms(static_cast<std::size_t>(m));
    for (std::size_t u = last; u > t; --u) {
        const auto row = static_cast<Eigen::Index>(u);
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j)
                terms[static_cast<std::size_t>(j)] = log_p(i, j) + log_em(row, j) + beta[static_cast<std::size_t>(j)];
            next[static_cast<std::size_t>(i)] = log_sum_exp(terms);
        }
        double norm = log_sum_exp(next);
        for (int i = 0; i < m; ++i) beta[static_cast<std::size_t>(i)] = next[static_cast<std::size_t>(i)] - norm;
    }

    for (int s = 0; s < m; ++s)
        terms[static_cast<std::size_t>(s)] = filter.log_filter(static_cast<Eigen::Index>(t), s) + beta[static_cast<std::size_t>(s)];
    const double norm = log_sum_exp(terms);
    Vector out(m);
    for (int s = 0; s < m; ++s) {
        double lg = terms[static_cast<std::size_t>(s)];
        out[s] = lg == kNegInf ? 0.0 : std::exp(lg - norm);
    }
    return out;
}

double tv_distance(const Vector& p, const Vector& q) {
    if (p.size() != q.size()) throw std::invalid_argument("tv_distance: length mismatch");
    if (std::abs(p.sum() - 1.0) > 1e-9 || std::abs(q.sum() - 1.0) > 1e-9)
        throw std::invalid_argument("tv_distance: inputs must be probability vectors");
    double tv = 0.5 * (p - q).cwiseAbs().sum();
    return std::min(1.0, std::max(0.0, tv));
}

double fit_log_slope(const std::vector<std::size_t>& gaps, const std::vector<double>& tv) {
    std::vector<double> xs, ys;
    for (std::size_t k = 0; k < gaps.size() && k < tv.size(); ++k) {
        if (tv[k] > 1e-14) {
            xs.push_back(static_cast<double>(gaps[k]));
            ys.push_back(std::log(tv[k] + 1e-300));
        }
    }
    if (xs.size() < 2) return std::numeric_limits<double>::quiet_NaN();
    double mx = 0.0, my = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        mx += xs[k];
        my += ys[k];
    }
    mx /= static_cast<double>(xs.size());
    my /= static_cast<double>(xs.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        sxy += (xs[k] - mx) * (ys[k] - my);
        sxx += (xs[k] - mx) * (xs[k] - mx);
    }
    if (sxx == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return sxy / sxx;
}

ForgettingProfile forgetting_profile(const HmmModel& model, const Observations& x, std::size_t t,
                                     const std::vector<std::size_t>& gaps) {
    if (gaps.empty()) throw std::invalid_argument("forgetting_profile: empty gap list");
    for (std::size_t k = 1; k < gaps.size(); ++k)
        if (gaps[k] <= gaps[k - 1]) throw std::invalid_argument("forgetting_profile: gaps must be strictly increasing");
    const std::size_t n = length(x);
    const std::size_t max_gap = gaps.back();
    if (t + max_gap >= n)
        throw std::out_of_range("forgetting_profile: t + max gap must be < n (t=" + std::to_string(t) +
                                ", max gap=" + std::to_string(max_gap) + ", n=" + std::to_string(n) + ")");

    const Matrix log_em = log_emission_matrix(model, prefix(x, t + max_gap + 1));
    const FilterPass filter = forward_filter(model, log_em);
    const Vector reference = windowed_marginal(model, filter, log_em, t, t + max_gap);

    ForgettingProfile profile;
    profile.t = t;
    profile.gaps = gaps;
    profile.tv.reserve(gaps.size());
    for (std::size_t gap : gaps)
        profile.tv.push_back(tv_distance(windowed_marginal(model, filter, log_em, t, t + gap), reference));
    profile.fitted_log_slope = fit_log_slope(profile.gaps, profile.tv);
    return profile;
}

}  // namespace segrisk
