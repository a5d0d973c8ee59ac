#pragma once
// Brute-force reference implementations by exhaustive path enumeration.
// Independent of the forward-backward and dynamic-programming code paths;
// only usable for |S|^n <= kMaxEnumeratedPaths.

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "segrisk/alignment.hpp"
#include "segrisk/model.hpp"

namespace segrisk::oracle {

inline constexpr std::size_t kMaxEnumeratedPaths = 10'000'000;

class InstanceTooLarge : public std::length_error {
public:
    using std::length_error::length_error;
};

// Paths are indexed in mixed radix with position 0 least significant, so
// ascending index order compares paths from the last position backwards.
struct EnumeratedPosterior {
    int num_states = 0;
    std::size_t n = 0;
    std::vector<double> log_joint;  // per path index
    double log_evidence = 0.0;
    Matrix marginals;               // n x |S|

    std::size_t num_paths() const { return log_joint.size(); }
    std::vector<State> path(std::size_t index) const;
};

EnumeratedPosterior enumerate(const HmmModel& model, const Observations& x);

enum class Objective { viterbi, pmap, hybrid_log_r1, hybrid_r1 };

struct BestPath {
    StatePath path;
    // viterbi: ln p(x^n, s^n) (maximized). pmap: R_1 (minimized).
    // hybrid_log_r1: Rbar_1 + c Rbar_inf (minimized). hybrid_r1: R_1 + c Rbar_inf (minimized).
    double value = 0.0;
};

BestPath brute_best(const HmmModel& model, const Observations& x, Objective objective, double c,
                    const LossMatrix& loss);
BestPath brute_best(const EnumeratedPosterior& post, Objective objective, double c, const LossMatrix& loss);

// Objective value of an arbitrary path under the enumerated posterior.
double objective_value(const EnumeratedPosterior& post, const std::vector<State>& path, Objective objective,
                       double c, const LossMatrix& loss);

}  // namespace segrisk::oracle
