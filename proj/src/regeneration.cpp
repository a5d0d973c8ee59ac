#include "segrisk/regeneration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "segrisk/logmath.hpp"

namespace segrisk {

bool BarrierSet::contains(int symbol) const {
    return std::binary_search(symbols.begin(), symbols.end(), symbol);
}

bool BarrierSet::contains(double value) const {
    return interval && value >= interval->first && value <= interval->second;
}

bool BarrierSet::contains_at(const Observations& x, std::size_t t) const {
    return std::visit([&](const auto& v) { return contains(v[t]); }, x);
}

namespace {

std::string format_states(const std::vector<State>& states) {
    std::ostringstream os;
    os << '{';
    for (std::size_t i = 0; i < states.size(); ++i) os << (i ? "," : "") << states[i];
    os << '}';
    return os.str();
}

std::string format_matrix(const Matrix& m) {
    std::ostringstream os;
    os << '[';
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        os << (i ? ",[" : "[");
        for (Eigen::Index j = 0; j < m.cols(); ++j) os << (j ? "," : "") << m(i, j);
        os << ']';
    }
    os << ']';
    return os.str();
}

Matrix restrict_transition(const Matrix& p, const std::vector<State>& states) {
    const auto k = static_cast<Eigen::Index>(states.size());
    Matrix r(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = 0; j < k; ++j)
            r(i, j) = p(states[static_cast<std::size_t>(i)], states[static_cast<std::size_t>(j)]);
    return r;
}

double gaussian_density(const GaussianEmission& g, State s, double x) {
    double sd = g.stds[s];
    double z = (x - g.means[s]) / sd;
    return std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * std::numbers::pi));
}

// Categorical clusters: every subset C whose common support G_C is nonempty
// and carries no mass under any state outside C.
std::vector<ClusterCandidate> categorical_candidates(const HmmModel& model, const CategoricalEmission& cat) {
    const int m = model.num_states();
    if (m > 20) throw std::invalid_argument("cluster enumeration supports at most 20 states");
    const auto k = cat.probs.cols();
    std::vector<ClusterCandidate> out;
    for (unsigned mask = 1; mask < (1u << m); ++mask) {
        std::vector<State> states;
        for (State s = 0; s < m; ++s)
            if (mask & (1u << s)) states.push_back(s);
        bool nonempty = false;
        bool leaks = false;
        for (Eigen::Index x = 0; x < k; ++x) {
            bool in_common = std::all_of(states.begin(), states.end(), [&](State s) { return cat.probs(s, x) > 0.0; });
            if (!in_common) continue;
            nonempty = true;
            for (State j = 0; j < m; ++j)
                if (!(mask & (1u << j)) && cat.probs(j, x) > 0.0) leaks = true;
        }
        if (!nonempty || leaks) continue;
        ClusterCandidate c;
        c.states = std::move(states);
        c.restricted = restrict_transition(model.transition, c.states);
        c.r = primitivity_index(c.restricted);
        out.push_back(std::move(c));
    }
    return out;
}

// Larger clusters first, then smaller r, then enumeration order.
const ClusterCandidate* pick_primitive(const std::vector<ClusterCandidate>& candidates) {
    const ClusterCandidate* best = nullptr;
    for (const auto& c : candidates) {
        if (c.r == 0) continue;
        if (!best || c.states.size() > best->states.size() ||
            (c.states.size() == best->states.size() && c.r < best->r))
            best = &c;
    }
    return best;
}

std::string a1_failure(const std::vector<ClusterCandidate>& candidates) {
    if (candidates.empty()) return "A1 fails: no cluster exists";
    std::string msg = "A1 fails: no cluster has a primitive restricted transition matrix;";
    for (const auto& c : candidates) msg += " C=" + format_states(c.states) + " R=" + format_matrix(c.restricted) + ";";
    return msg;
}

}  // namespace

ClusterDetection detect_cluster(const HmmModel& model, const BarrierOptions& options) {
    ClusterDetection det;
    if (const auto* cat = std::get_if<CategoricalEmission>(&model.emission)) {
        det.candidates = categorical_candidates(model, *cat);
        const ClusterCandidate* chosen = pick_primitive(det.candidates);
        if (!chosen) {
            det.diagnostic = a1_failure(det.candidates);
            return det;
        }
        ClusterInfo info;
        info.cluster = chosen->states;
        info.r = chosen->r;
        info.eps = std::numeric_limits<double>::infinity();
        info.m_bound = 0.0;
        for (Eigen::Index x = 0; x < cat->probs.cols(); ++x) {
            double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
            for (State s : info.cluster) {
                lo = std::min(lo, cat->probs(s, x));
                hi = std::max(hi, cat->probs(s, x));
            }
            if (lo <= 0.0) continue;
            if (options.eps && lo < *options.eps) continue;
            info.barrier.symbols.push_back(static_cast<int>(x));
            info.eps = std::min(info.eps, lo);
            info.m_bound = std::max(info.m_bound, hi);
        }
        if (info.barrier.symbols.empty()) {
            det.diagnostic = "A1 fails: no symbol of the common support reaches eps";
            return det;
        }
        det.info = std::move(info);
        return det;
    }

    // Gaussian: every support is the real line, so the only cluster is S.
    const auto& g = std::get<GaussianEmission>(model.emission);
    const int m = model.num_states();
    ClusterCandidate all;
    for (State s = 0; s < m; ++s) all.states.push_back(s);
    all.restricted = model.transition;
    all.r = primitivity_index(model.transition);
    det.candidates.push_back(all);
    if (all.r == 0) {
        det.diagnostic = a1_failure(det.candidates);
        return det;
    }

    double lo, hi;
    if (options.interval) {
        std::tie(lo, hi) = *options.interval;
    } else if (options.eps) {
        // {x : f_s(x) >= eps} = [mu_s - a_s, mu_s + a_s] for each s.
        lo = -std::numeric_limits<double>::infinity();
        hi = std::numeric_limits<double>::infinity();
        for (State s = 0; s < m; ++s) {
            double peak = 1.0 / (g.stds[s] * std::sqrt(2.0 * std::numbers::pi));
            if (*options.eps > peak) {
                lo = 1.0;
                hi = 0.0;
                break;
            }
            double a = g.stds[s] * std::sqrt(2.0 * std::log(peak / *options.eps));
            lo = std::max(lo, g.means[s] - a);
            hi = std::min(hi, g.means[s] + a);
        }
    } else {
        // Smallest interval holding the central 50% of every emission law.
        lo = std::numeric_limits<double>::infinity();
        hi = -std::numeric_limits<double>::infinity();
        for (State s = 0; s < m; ++s) {
            lo = std::min(lo, g.means[s] - kCentralHalfWidth * g.stds[s]);
            hi = std::max(hi, g.means[s] + kCentralHalfWidth * g.stds[s]);
        }
    }
    if (!(lo < hi)) {
        det.diagnostic = "A1 fails: barrier interval is empty";
        return det;
    }

    ClusterInfo info;
    info.cluster = all.states;
    info.r = all.r;
    info.barrier.interval = std::make_pair(lo, hi);
    info.eps = std::numeric_limits<double>::infinity();
    info.m_bound = 0.0;
    for (State s = 0; s < m; ++s) {
        // Unimodal density: the minimum over an interval sits at an endpoint.
        double at_lo = gaussian_density(g, s, lo), at_hi = gaussian_density(g, s, hi);
        info.eps = std::min({info.eps, at_lo, at_hi});
        double top = (g.means[s] >= lo && g.means[s] <= hi) ? gaussian_density(g, s, g.means[s]) : std::max(at_lo, at_hi);
        info.m_bound = std::max(info.m_bound, top);
    }
    det.info = std::move(info);
    return det;
}

namespace {

// Coefficients of ln(f_l p_l) - ln(f_s p_s) = a x^2 + b x + c.
struct Quadratic {
    double a, b, c;
};

Quadratic gaussian_log_ratio(const GaussianEmission& g, State l, State s, double log_pl, double log_ps) {
    double vl = g.stds[l] * g.stds[l], vs = g.stds[s] * g.stds[s];
    Quadratic q;
    q.a = -0.5 / vl + 0.5 / vs;
    q.b = g.means[l] / vl - g.means[s] / vs;
    q.c = (log_pl - log_ps) + std::log(g.stds[s] / g.stds[l]) - 0.5 * g.means[l] * g.means[l] / vl +
          0.5 * g.means[s] * g.means[s] / vs;
    return q;
}

void append_roots(const Quadratic& q, std::vector<double>& roots) {
    const double scale = std::max({std::abs(q.a), std::abs(q.b), std::abs(q.c), 1.0});
    if (std::abs(q.a) > 1e-14 * scale) {
        double disc = q.b * q.b - 4.0 * q.a * q.c;
        if (disc < 0.0) return;
        double sq = std::sqrt(disc);
        roots.push_back((-q.b - sq) / (2.0 * q.a));
        roots.push_back((-q.b + sq) / (2.0 * q.a));
    } else if (std::abs(q.b) > 1e-14 * scale) {
        roots.push_back(-q.c / q.b);
    }
}

}  // namespace

A2Result check_a2(const HmmModel& model) {
    const int m = model.num_states();
    std::vector<double> p_star(static_cast<std::size_t>(m), 0.0);
    for (State l = 0; l < m; ++l) p_star[static_cast<std::size_t>(l)] = model.transition.col(l).maxCoeff();

    A2Result result;
    result.holds = true;
    for (State l = 0; l < m; ++l) {
        A2Witness w;
        w.state = l;
        const double pl = p_star[static_cast<std::size_t>(l)];

        auto score = [&](State s, auto x) {
            return std::exp(model.log_emission(s, x)) * p_star[static_cast<std::size_t>(s)];
        };
        auto test = [&](auto x) {
            double lhs = score(l, x);
            double rhs = 0.0;
            for (State s = 0; s < m; ++s)
                if (s != l) rhs = std::max(rhs, score(s, x));
            if (lhs > rhs && lhs > 0.0) {
                w.holds = true;
                w.x = static_cast<double>(x);
                w.lhs = lhs;
                w.rhs = rhs;
            }
            return w.holds;
        };

        if (pl > 0.0) {
            if (const auto* cat = std::get_if<CategoricalEmission>(&model.emission)) {
                for (int x = 0; x < cat->probs.cols() && !test(x); ++x) {}
            } else {
                const auto& g = std::get<GaussianEmission>(model.emission);
                std::vector<double> roots;
                for (State s = 0; s < m; ++s) {
                    if (s == l) continue;
                    double ps = p_star[static_cast<std::size_t>(s)];
                    if (ps <= 0.0) continue;
                    append_roots(gaussian_log_ratio(g, l, s, std::log(pl), std::log(ps)), roots);
                }
                std::sort(roots.begin(), roots.end());
                // The sign pattern is constant between consecutive roots, so
                // one probe per segment decides the question.
                std::vector<double> probes{g.means[l]};
                if (roots.empty()) {
                    probes.push_back(0.0);
                } else {
                    probes.push_back(roots.front() - 1.0);
                    for (std::size_t i = 1; i < roots.size(); ++i) probes.push_back(0.5 * (roots[i - 1] + roots[i]));
                    probes.push_back(roots.back() + 1.0);
                }
                for (double x : probes)
                    if (test(x)) break;
            }
        }
        result.holds = result.holds && w.holds;
        result.witnesses.push_back(w);
    }

    if (!result.holds && m == 2) {
        std::string held;
        for (const auto& w : result.witnesses)
            if (w.holds) held += (held.empty() ? "" : ",") + std::to_string(w.state);
        result.advisory = "two-state model: the dominance condition is only needed for one state" +
                          (held.empty() ? std::string(" (it holds for none here)")
                                        : std::string(" (holds for state ") + held + ")");
    }
    return result;
}

RenewalDiagnostics stopping_times(const Observations& x, const ClusterInfo& info) {
    const std::size_t n = length(x);
    const auto r = static_cast<std::size_t>(info.r);
    RenewalDiagnostics out;
    out.stopping_u.assign(n, std::nullopt);
    out.stopping_w.assign(n, std::nullopt);
    out.mean_cycle = std::numeric_limits<double>::quiet_NaN();

    // block_end[tau]: x_{tau-r..tau} all in the barrier set.
    std::vector<char> block_end(n, 0);
    std::size_t run = 0;
    for (std::size_t t = 0; t < n; ++t) {
        run = info.barrier.contains_at(x, t) ? run + 1 : 0;
        block_end[t] = run >= r + 1 ? 1 : 0;
    }

    // next_end[t]: smallest tau >= t with block_end[tau].
    std::vector<std::optional<std::size_t>> next_end(n + 1);
    for (std::size_t t = n; t-- > 0;) next_end[t] = block_end[t] ? std::optional<std::size_t>(t) : next_end[t + 1];
    // prev_start[t]: largest tau <= t with a block starting at tau.
    std::vector<std::optional<std::size_t>> prev_start(n);
    for (std::size_t t = 0; t < n; ++t) {
        bool starts = t + r < n && block_end[t + r];
        prev_start[t] = starts ? std::optional<std::size_t>(t) : (t > 0 ? prev_start[t - 1] : std::nullopt);
    }

    for (std::size_t t = 0; t < n; ++t) {
        if (t + r + 1 < n) out.stopping_w[t] = next_end[t + r + 1];
        if (t >= r + 1) out.stopping_u[t] = prev_start[t - r - 1];
    }
    return out;
}

std::vector<std::size_t> regular_probe_grid(std::size_t n, std::size_t step) {
    if (step == 0) throw std::invalid_argument("probe step must be >= 1");
    std::vector<std::size_t> grid;
    for (std::size_t len = step; len < n; len += step) grid.push_back(len);
    grid.push_back(n);
    return grid;
}

RenewalDiagnostics fixation_points(const HmmModel& model, const Observations& x,
                                   std::vector<std::size_t> probe_grid, const FixationOptions& options) {
    const Matrix log_em = log_emission_matrix(model, x);
    return fixation_points(viterbi_lattice(model, log_em), std::move(probe_grid), options);
}

RenewalDiagnostics fixation_points(const ViterbiLattice& lattice, std::vector<std::size_t> probe_grid,
                                   const FixationOptions& options) {
    const std::size_t n = lattice.length();
    const auto m = static_cast<std::size_t>(lattice.delta.cols());
    std::sort(probe_grid.begin(), probe_grid.end());
    probe_grid.erase(std::unique(probe_grid.begin(), probe_grid.end()), probe_grid.end());
    for (std::size_t len : probe_grid)
        if (len == 0 || len > n) throw std::out_of_range("probe length " + std::to_string(len) + " outside [1, n]");
    if (probe_grid.size() < options.min_probes)
        throw std::invalid_argument("probe grid too sparse: " + std::to_string(probe_grid.size()) + " probes, need " +
                                    std::to_string(options.min_probes));

    RenewalDiagnostics out;
    out.mean_cycle = std::numeric_limits<double>::quiet_NaN();

    // Sweep backwards in time carrying every probe's Viterbi path at once.
    // Probes at the same state share their whole past, so it suffices to
    // track, per state, the longest probe currently passing through it.
    std::vector<std::size_t> longest(m, 0), moved(m, 0);
    std::size_t next_probe = probe_grid.size();  // probes [next_probe, end) have been inserted
    std::size_t eligible_from = probe_grid.size();
    std::vector<std::size_t> fixed;
    bool assessed_any = false;

    for (std::size_t t = n; t-- > 0;) {
        if (t + 1 < n) {
            std::fill(moved.begin(), moved.end(), 0);
            for (std::size_t s = 0; s < m; ++s) {
                if (longest[s] == 0) continue;
                auto prev = static_cast<std::size_t>(lattice.backpointer(static_cast<Eigen::Index>(t + 1), static_cast<Eigen::Index>(s)));
                moved[prev] = std::max(moved[prev], longest[s]);
            }
            longest.swap(moved);
        }
        while (next_probe > 0 && probe_grid[next_probe - 1] == t + 1) {
            --next_probe;
            auto s = static_cast<std::size_t>(lattice.terminal(t + 1));
            longest[s] = std::max(longest[s], t + 1);
        }

        const std::size_t threshold = t + 1 + options.m_pad;
        while (eligible_from > 0 && probe_grid[eligible_from - 1] >= threshold) --eligible_from;
        if (probe_grid.size() - eligible_from < options.min_probes) continue;
        if (!assessed_any) {
            out.assessed_upto = t + 1;
            assessed_any = true;
        }
        std::size_t groups = 0;
        for (std::size_t s = 0; s < m; ++s)
            if (longest[s] >= threshold) ++groups;
        if (groups <= 1) fixed.push_back(t);
    }

    std::reverse(fixed.begin(), fixed.end());
    out.fixation_points = std::move(fixed);
    for (std::size_t i = 1; i < out.fixation_points.size(); ++i)
        out.cycle_lengths.push_back(out.fixation_points[i] - out.fixation_points[i - 1]);
    if (!out.cycle_lengths.empty()) {
        double total = 0.0;
        for (std::size_t c : out.cycle_lengths) total += static_cast<double>(c);
        out.mean_cycle = total / static_cast<double>(out.cycle_lengths.size());
    }
    if (out.assessed_upto < n)
        out.diagnostics.push_back("positions >= " + std::to_string(out.assessed_upto) + " not assessed: fewer than " +
                                  std::to_string(options.min_probes) + " probes extend " + std::to_string(options.m_pad) +
                                  " beyond them");
    if (out.fixation_points.empty()) out.diagnostics.push_back("no fixation point found");
    return out;
}

}  // namespace segrisk
