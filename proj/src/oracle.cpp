#include "segrisk/oracle.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace segrisk::oracle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::size_t count_paths(int num_states, std::size_t n) {
    std::size_t count = 1;
    for (std::size_t t = 0; t < n; ++t) {
        if (count > kMaxEnumeratedPaths / static_cast<std::size_t>(num_states))
            throw InstanceTooLarge("enumeration needs more than " + std::to_string(kMaxEnumeratedPaths) + " paths");
        count *= static_cast<std::size_t>(num_states);
    }
    return count;
}

double path_r1(const EnumeratedPosterior& post, const std::vector<State>& path, const LossMatrix& loss) {
    double total = 0.0;
    for (std::size_t t = 0; t < post.n; ++t)
        for (State a = 0; a < post.num_states; ++a)
            total += loss(a, path[t]) * post.marginals(static_cast<Eigen::Index>(t), a);
    return total / static_cast<double>(post.n);
}

double path_rbar1(const EnumeratedPosterior& post, const std::vector<State>& path) {
    double total = 0.0;
    for (std::size_t t = 0; t < post.n; ++t) {
        double p = post.marginals(static_cast<Eigen::Index>(t), path[t]);
        if (p <= 0.0) return kInf;
        total -= std::log(p);
    }
    return total / static_cast<double>(post.n);
}

double path_rbar_inf(const EnumeratedPosterior& post, double lj) {
    if (lj == -kInf) return kInf;
    return -(lj - post.log_evidence) / static_cast<double>(post.n);
}

std::size_t path_index(const std::vector<State>& path, int num_states) {
    std::size_t idx = 0;
    for (std::size_t t = path.size(); t-- > 0;) idx = idx * static_cast<std::size_t>(num_states) + static_cast<std::size_t>(path[t]);
    return idx;
}

}  // namespace

std::vector<State> EnumeratedPosterior::path(std::size_t index) const {
    std::vector<State> out(n);
    for (std::size_t t = 0; t < n; ++t) {
        out[t] = static_cast<State>(index % static_cast<std::size_t>(num_states));
        index /= static_cast<std::size_t>(num_states);
    }
    return out;
}

EnumeratedPosterior enumerate(const HmmModel& model, const Observations& x) {
    const int m = model.num_states();
    const std::size_t n = length(x);
    if (n == 0) throw std::invalid_argument("enumerate needs at least one observation");
    const std::size_t total = count_paths(m, n);

    // Per-position log densities straight from the model parameters.
    std::vector<std::vector<double>> log_f(n, std::vector<double>(static_cast<std::size_t>(m)));
    for (std::size_t t = 0; t < n; ++t)
        for (State s = 0; s < m; ++s)
            log_f[t][static_cast<std::size_t>(s)] = std::visit(
                [&](const auto& v) { return model.log_emission(s, v[t]); }, x);

    EnumeratedPosterior post;
    post.num_states = m;
    post.n = n;
    post.log_joint.resize(total);
    double max_lj = -kInf;
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::vector<State> p = post.path(idx);
        double lj = model.log_initial(p[0]) + log_f[0][static_cast<std::size_t>(p[0])];
        for (std::size_t t = 1; t < n; ++t)
            lj += model.log_transition(p[t - 1], p[t]) + log_f[t][static_cast<std::size_t>(p[t])];
        post.log_joint[idx] = lj;
        if (lj > max_lj) max_lj = lj;
    }
    if (max_lj == -kInf) throw std::domain_error("observation sequence has zero likelihood");

    double evidence = 0.0;
    post.marginals = Matrix::Zero(static_cast<Eigen::Index>(n), m);
    for (std::size_t idx = 0; idx < total; ++idx) {
        double w = std::exp(post.log_joint[idx] - max_lj);
        evidence += w;
        std::size_t rest = idx;
        for (std::size_t t = 0; t < n; ++t) {
            post.marginals(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(rest % static_cast<std::size_t>(m))) += w;
            rest /= static_cast<std::size_t>(m);
        }
    }
    post.marginals /= evidence;
    post.log_evidence = max_lj + std::log(evidence);
    return post;
}

double objective_value(const EnumeratedPosterior& post, const std::vector<State>& path, Objective objective,
                       double c, const LossMatrix& loss) {
    if (path.size() != post.n) throw std::invalid_argument("objective_value: path length mismatch");
    const double lj = post.log_joint[path_index(path, post.num_states)];
    switch (objective) {
        case Objective::viterbi: return lj;
        case Objective::pmap: return path_r1(post, path, loss);
        case Objective::hybrid_log_r1: {
            double base = path_rbar1(post, path);
            return c == 0.0 ? base : base + c * path_rbar_inf(post, lj);
        }
        case Objective::hybrid_r1: {
            double base = path_r1(post, path, loss);
            return c == 0.0 ? base : base + c * path_rbar_inf(post, lj);
        }
    }
    return kInf;
}

BestPath brute_best(const EnumeratedPosterior& post, Objective objective, double c, const LossMatrix& loss) {
    if (!(c >= 0.0)) throw std::invalid_argument("c must be >= 0");
    const bool maximize = objective == Objective::viterbi;
    std::size_t best_idx = 0;
    double best = maximize ? -kInf : kInf;
    bool found = false;
    for (std::size_t idx = 0; idx < post.num_paths(); ++idx) {
        double v = objective_value(post, post.path(idx), objective, c, loss);
        bool better = !found || (maximize ? v > best : v < best);
        if (better) {
            best = v;
            best_idx = idx;
            found = true;
        }
    }
    BestPath out;
    out.value = best;
    out.path.states = post.path(best_idx);
    out.path.log_joint = post.log_joint[best_idx];
    out.path.c = c;
    switch (objective) {
        case Objective::viterbi: out.path.kind = PathKind::viterbi; break;
        case Objective::pmap: out.path.kind = PathKind::pmap; break;
        case Objective::hybrid_log_r1: out.path.kind = PathKind::hybrid_log_r1; break;
        case Objective::hybrid_r1: out.path.kind = PathKind::hybrid_r1; break;
    }
    return out;
}

BestPath brute_best(const HmmModel& model, const Observations& x, Objective objective, double c,
                    const LossMatrix& loss) {
    return brute_best(enumerate(model, x), objective, c, loss);
}

}  // namespace segrisk::oracle
