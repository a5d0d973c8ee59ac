#include "segrisk/alignment.hpp"

#include <cmath>
#include <stdexcept>

#include "segrisk/logmath.hpp"

namespace segrisk {

std::string to_string(PathKind kind) {
    switch (kind) {
        case PathKind::viterbi: return "viterbi";
        case PathKind::pmap: return "pmap";
        case PathKind::hybrid_log_r1: return "hybrid_logR1";
        case PathKind::hybrid_r1: return "hybrid_R1";
        case PathKind::truth: return "truth";
    }
    return "unknown";
}

double log_joint(const HmmModel& model, LogEmissions log_em, const std::vector<State>& path) {
    if (path.size() != static_cast<std::size_t>(log_em.rows()))
        throw std::invalid_argument("log_joint: path length differs from observation length");
    if (path.empty()) return 0.0;
    const int m = model.num_states();
    for (State s : path)
        if (s < 0 || s >= m) throw std::out_of_range("log_joint: state " + std::to_string(s) + " outside [0, |S|)");
    double acc = model.log_initial(path[0]) + log_em(0, path[0]);
    for (std::size_t t = 1; t < path.size(); ++t) {
        acc = acc + model.log_transition(path[t - 1], path[t]);
        acc = acc + log_em(static_cast<Eigen::Index>(t), path[t]);
    }
    return acc;
}

double log_joint(const HmmModel& model, const Observations& x, const std::vector<State>& path) {
    const Matrix log_em = log_emission_matrix(model, x);
    return log_joint(model, log_em, path);
}

State ViterbiLattice::terminal(std::size_t len) const {
    if (len == 0 || len > length()) throw std::out_of_range("ViterbiLattice: prefix length out of range");
    const auto row = static_cast<Eigen::Index>(len - 1);
    State best = 0;
    for (State s = 1; s < delta.cols(); ++s)
        if (delta(row, s) > delta(row, best)) best = s;
    return best;
}

std::vector<State> ViterbiLattice::backtrack(std::size_t len) const {
    std::vector<State> path(len);
    State s = terminal(len);
    for (std::size_t t = len; t-- > 0;) {
        path[t] = s;
        if (t > 0) s = backpointer(static_cast<Eigen::Index>(t), s);
    }
    return path;
}

namespace {

// Shared max-sum recursion:
//   score_0(s)  = w(0, s) + c * (ln pi_s + ln f_s(x_0))
//   score_t(j)  = w(t, j) + c * ln f_j(x_t) + max_i [score_{t-1}(i) + c * ln P(i, j)]
// with ties to the smallest predecessor.
template <typename Pointwise>
ViterbiLattice max_sum(const HmmModel& model, LogEmissions log_em, double c, Pointwise&& w) {
    const Eigen::Index n = log_em.rows();
    const int m = model.num_states();
    const Matrix log_p = log_transition_matrix(model);
    const Vector log_pi = log_initial_vector(model);

    ViterbiLattice lat;
    lat.delta.resize(n, m);
    lat.backpointer.resize(n, m);
    lat.backpointer.row(0).setZero();
    for (int s = 0; s < m; ++s) lat.delta(0, s) = w(0, s) + c * (log_pi[s] + log_em(0, s));
    for (Eigen::Index t = 1; t < n; ++t) {
        for (int j = 0; j < m; ++j) {
            int arg = 0;
            double best = lat.delta(t - 1, 0) + c * log_p(0, j);
            for (int i = 1; i < m; ++i) {
                double v = lat.delta(t - 1, i) + c * log_p(i, j);
                if (v > best) {
                    best = v;
                    arg = i;
                }
            }
            lat.backpointer(t, j) = arg;
            lat.delta(t, j) = w(t, j) + c * log_em(t, j) + best;
        }
    }
    return lat;
}

std::vector<State> pointwise_argmax(const Posteriors& post) {
    const Eigen::Index n = post.smoothing.rows();
    std::vector<State> path(static_cast<std::size_t>(n));
    for (Eigen::Index t = 0; t < n; ++t) {
        State best = 0;
        for (State s = 1; s < post.smoothing.cols(); ++s)
            if (post.smoothing(t, s) > post.smoothing(t, best)) best = s;
        path[static_cast<std::size_t>(t)] = best;
    }
    return path;
}

void check_shapes(LogEmissions log_em, const Posteriors& post) {
    if (log_em.rows() != post.smoothing.rows() || log_em.cols() != post.smoothing.cols())
        throw std::invalid_argument("posteriors do not match the observation sequence");
}

StatePath hybrid(const HmmModel& model, LogEmissions log_em, const Posteriors& post, double c, PathKind kind) {
    if (!(c >= 0.0) || !std::isfinite(c)) throw std::invalid_argument("hybrid penalty c must be finite and >= 0");
    check_shapes(log_em, post);
    StatePath out;
    out.kind = kind;
    out.c = c;
    if (c == 0.0) {
        // Transition and emission terms vanish; the optimum is pointwise.
        out.states = pointwise_argmax(post);
    } else {
        const auto& sm = post.smoothing;
        ViterbiLattice lat =
            kind == PathKind::hybrid_log_r1
                ? max_sum(model, log_em, c, [&](Eigen::Index t, int s) { return safe_log(sm(t, s)); })
                : max_sum(model, log_em, c, [&](Eigen::Index t, int s) { return sm(t, s); });
        out.states = lat.backtrack(lat.length());
    }
    out.log_joint = log_joint(model, log_em, out.states);
    return out;
}

}  // namespace

ViterbiLattice viterbi_lattice(const HmmModel& model, LogEmissions log_em) {
    if (log_em.rows() == 0) throw std::invalid_argument("viterbi needs at least one observation");
    ViterbiLattice lat = max_sum(model, log_em, 1.0, [](Eigen::Index, int) { return 0.0; });
    const auto last = lat.delta.rows() - 1;
    if (lat.delta.row(last).maxCoeff() == kNegInf) {
        // Locate the first position at which every state is dead.
        for (Eigen::Index t = 0; t <= last; ++t)
            if (lat.delta.row(t).maxCoeff() == kNegInf) throw ZeroLikelihoodError(static_cast<std::size_t>(t));
    }
    return lat;
}

StatePath viterbi(const HmmModel& model, const Observations& x) {
    const Matrix log_em = log_emission_matrix(model, x);
    return viterbi(model, log_em);
}

StatePath viterbi(const HmmModel& model, LogEmissions log_em) {
    ViterbiLattice lat = viterbi_lattice(model, log_em);
    StatePath out;
    out.kind = PathKind::viterbi;
    out.states = lat.backtrack(lat.length());
    out.log_joint = log_joint(model, log_em, out.states);
    return out;
}

StatePath pmap(const Posteriors& posteriors) {
    StatePath out;
    out.kind = PathKind::pmap;
    out.states = pointwise_argmax(posteriors);
    return out;
}

StatePath pmap(const HmmModel& model, LogEmissions log_em, const Posteriors& posteriors) {
    check_shapes(log_em, posteriors);
    StatePath out = pmap(posteriors);
    out.log_joint = log_joint(model, log_em, out.states);
    return out;
}

StatePath hybrid_log_r1(const HmmModel& model, const Observations& x, const Posteriors& posteriors, double c) {
    const Matrix log_em = log_emission_matrix(model, x);
    return hybrid(model, log_em, posteriors, c, PathKind::hybrid_log_r1);
}

StatePath hybrid_log_r1(const HmmModel& model, LogEmissions log_em, const Posteriors& posteriors, double c) {
    return hybrid(model, log_em, posteriors, c, PathKind::hybrid_log_r1);
}

StatePath hybrid_r1(const HmmModel& model, const Observations& x, const Posteriors& posteriors, double c) {
    const Matrix log_em = log_emission_matrix(model, x);
    return hybrid(model, log_em, posteriors, c, PathKind::hybrid_r1);
}

StatePath hybrid_r1(const HmmModel& model, LogEmissions log_em, const Posteriors& posteriors, double c) {
    return hybrid(model, log_em, posteriors, c, PathKind::hybrid_r1);
}

}  // namespace segrisk
