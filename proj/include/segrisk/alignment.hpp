#pragma once
// Segmentation classifiers: Viterbi, PMAP and the penalized hybrids that
// interpolate between them.
//
// Every dynamic program breaks ties towards the smallest state index, both
// at backpointer selection and at the terminal argmax. Among equally good
// paths this selects the one that is smallest when compared from the last
// position backwards.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "segrisk/inference.hpp"
#include "segrisk/model.hpp"

namespace segrisk {

enum class PathKind { viterbi, pmap, hybrid_log_r1, hybrid_r1, truth };

std::string to_string(PathKind kind);

struct StatePath {
    std::vector<State> states;
    PathKind kind = PathKind::truth;
    double c = 0.0;                     // penalty weight for hybrid kinds
    std::optional<double> log_joint;    // ln p(x^n, s^n); -inf when the path is impossible
};

// ln p(x^n, s^n) = ln pi_{s_1} + ln f_{s_1}(x_1) + sum_t [ln P(s_{t-1}, s_t) + ln f_{s_t}(x_t)],
// accumulated left to right.
double log_joint(const HmmModel& model, LogEmissions log_em, const std::vector<State>& path);
double log_joint(const HmmModel& model, const Observations& x, const std::vector<State>& path);

// Max-product lattice. delta(t, s) depends on x_1..x_t only, so the Viterbi
// path of any prefix can be read off the same lattice.
struct ViterbiLattice {
    Matrix delta;
    Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> backpointer;  // row 0 unused

    std::size_t length() const { return static_cast<std::size_t>(delta.rows()); }
    // Terminal state of the Viterbi path of x_1..x_len.
    State terminal(std::size_t len) const;
    // Viterbi path of the prefix x_1..x_len.
    std::vector<State> backtrack(std::size_t len) const;
};

ViterbiLattice viterbi_lattice(const HmmModel& model, LogEmissions log_em);

StatePath viterbi(const HmmModel& model, const Observations& x);
StatePath viterbi(const HmmModel& model, LogEmissions log_em);

// Pointwise argmax of the smoothing marginals.
StatePath pmap(const Posteriors& posteriors);
StatePath pmap(const HmmModel& model, LogEmissions log_em, const Posteriors& posteriors);

// Minimizes Rbar_1 + c * Rbar_inf, i.e. maximizes
// sum_t ln p_t(s_t | x^n) + c * ln p(x^n, s^n). c = 0 gives PMAP.
StatePath hybrid_log_r1(const HmmModel& model, const Observations& x, const Posteriors& posteriors, double c);
StatePath hybrid_log_r1(const HmmModel& model, LogEmissions log_em, const Posteriors& posteriors, double c);

// Minimizes R_1 + c * Rbar_inf under the symmetric loss, i.e. maximizes
// sum_t p_t(s_t | x^n) + c * ln p(x^n, s^n). c = 0 gives PMAP.
StatePath hybrid_r1(const HmmModel& model, const Observations& x, const Posteriors& posteriors, double c);
StatePath hybrid_r1(const HmmModel& model, LogEmissions log_em, const Posteriors& posteriors, double c);

}  // namespace segrisk
