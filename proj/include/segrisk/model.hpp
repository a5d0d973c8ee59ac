#pragma once
// Hidden Markov model representation: a finite-state Markov chain Y with
// conditionally independent emissions X_t ~ f_{Y_t}.
//
// States are 0-based throughout the library. Observations are either
// categorical symbols in [0, K) or real numbers, depending on the emission
// family of the model they are paired with.

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace segrisk {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using State = int;

struct CategoricalEmission {
    Matrix probs;  // |S| x K, row-stochastic
};

struct GaussianEmission {
    Vector means;
    Vector stds;
};

using EmissionFamily = std::variant<CategoricalEmission, GaussianEmission>;

// One observation sequence. Categorical models take symbol indices, Gaussian
// models take reals.
using Observations = std::variant<std::vector<int>, std::vector<double>>;

std::size_t length(const Observations& x);
Observations prefix(const Observations& x, std::size_t len);

struct HmmModel {
    Matrix transition;
    Vector initial;
    bool stationary_initial = true;
    EmissionFamily emission;

    int num_states() const { return static_cast<int>(transition.rows()); }
    bool is_categorical() const { return std::holds_alternative<CategoricalEmission>(emission); }
    // Alphabet size K for categorical models, 0 for Gaussian.
    int alphabet_size() const;

    // ln f_s(x) for a categorical symbol / a real observation.
    double log_emission(State s, int symbol) const;
    double log_emission(State s, double value) const;
    double log_initial(State s) const;
    double log_transition(State from, State to) const;
};

struct LabeledSample {
    Observations x;
    std::vector<State> y;
    std::uint64_t seed = 0;
};

// Pointwise loss l(a, b): cost of labelling true state a as b.
struct LossMatrix {
    Matrix l;

    static LossMatrix symmetric(int num_states);
    double operator()(State truth, State guess) const { return l(truth, guess); }
};

struct Diagnostic {
    std::string code;     // e.g. "row_sum", "reducible", "periodic"
    std::string message;  // human-readable, carries row/column indices
};

class ModelValidationError : public std::runtime_error {
public:
    explicit ModelValidationError(std::vector<Diagnostic> diagnostics);
    const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

private:
    std::vector<Diagnostic> diagnostics_;
};

// Returns every violated invariant; an empty list means the model is valid.
std::vector<Diagnostic> validate_model(const HmmModel& model);

// Builds a model and fills `initial` with the stationary law when requested.
// Throws ModelValidationError when any invariant fails.
HmmModel make_model(Matrix transition, EmissionFamily emission);
HmmModel make_model(Matrix transition, Vector initial, EmissionFamily emission);

bool is_irreducible(const Matrix& transition);
// Primitive = some power is entrywise positive. For irreducible chains this
// is equivalent to aperiodicity. Checked up to the Wielandt bound (m-1)^2+1.
bool is_primitive(const Matrix& transition);
// Smallest r >= 1 with (pattern of M)^r entrywise positive, or 0 if none up
// to the Wielandt bound.
int primitivity_index(const Matrix& m);

// pi P = pi, sum(pi) = 1. Throws std::domain_error if the chain is not
// irreducible (the solution is not unique then).
Vector stationary_distribution(const Matrix& transition);

// Per-step entropy of the chain in nats, -sum_i pi_i sum_j P_ij ln P_ij,
// with 0 ln 0 = 0. Uses the stationary law of the transition matrix.
double markov_entropy_rate(const Matrix& transition);
double markov_entropy_rate(const HmmModel& model);

// Integral of ln f_s with respect to P_s.
double expected_log_emission(const HmmModel& model, State s);

// n x |S| table of ln f_s(x_t).
Matrix log_emission_matrix(const HmmModel& model, const Observations& x);

// Element-wise ln of the transition matrix (ln 0 = -inf).
Matrix log_transition_matrix(const HmmModel& model);
Vector log_initial_vector(const HmmModel& model);

// Draws (x, y) of length n. A pure function of (model, n, seed); the prefix
// of length m < n equals sample(model, m, seed).
LabeledSample sample(const HmmModel& model, std::size_t n, std::uint64_t seed);

// Canonical two-state categorical model used across tests and docs:
// P = [[0.9,0.1],[0.2,0.8]], f_0 = (0.8,0.2), f_1 = (0.3,0.7).
HmmModel canonical_m2();
// Identity-emission model with the same chain as canonical_m2: f_s(x) = 1{x = s}.
HmmModel identity_emission_model();

}  // namespace segrisk
