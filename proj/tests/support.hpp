#pragma once
// Random small models and sequences for property tests.

#include <cstdint>
#include <random>

#include "segrisk/model.hpp"

namespace testing {

using segrisk::HmmModel;
using segrisk::Matrix;
using segrisk::Vector;

// Row-stochastic matrix; each off-diagonal entry is zeroed with
// probability `sparsity`. The diagonal stays positive so the chain is
// aperiodic whenever it is irreducible.
inline Matrix random_stochastic(std::mt19937_64& g, int rows, int cols, double sparsity, bool keep_diagonal) {
    std::uniform_real_distribution<double> u(0.05, 1.0);
    std::bernoulli_distribution drop(sparsity);
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) m(i, j) = (keep_diagonal && i == j) || !drop(g) ? u(g) : 0.0;
        if (m.row(i).sum() == 0.0) m(i, i % cols) = 1.0;
        m.row(i) /= m.row(i).sum();
    }
    return m;
}

struct RandomInstance {
    HmmModel model;
    segrisk::Observations x;
};

// |S| in [2, max_states], K in [2, max_symbols]; roughly one in five models
// is Gaussian. Observations are drawn from the model, so their likelihood is
// positive.
inline RandomInstance random_instance(std::mt19937_64& g, int max_states = 3, int max_symbols = 4,
                                      std::size_t max_n = 8) {
    std::uniform_int_distribution<int> states(2, max_states), symbols(2, max_symbols);
    std::uniform_int_distribution<std::size_t> len(1, max_n);
    std::bernoulli_distribution gaussian(0.2), explicit_initial(0.3);
    for (;;) {
        const int m = states(g);
        Matrix p = random_stochastic(g, m, m, 0.3, true);
        segrisk::EmissionFamily em;
        if (gaussian(g)) {
            std::uniform_real_distribution<double> mean(-2.0, 2.0), sd(0.3, 2.0);
            Vector mu(m), sigma(m);
            for (int s = 0; s < m; ++s) {
                mu[s] = mean(g);
                sigma[s] = sd(g);
            }
            em = segrisk::GaussianEmission{mu, sigma};
        } else {
            em = segrisk::CategoricalEmission{random_stochastic(g, m, symbols(g), 0.3, false)};
        }
        if (!segrisk::is_irreducible(p)) continue;
        HmmModel model;
        if (explicit_initial(g)) {
            Matrix pi = random_stochastic(g, 1, m, 0.3, false);
            model = segrisk::make_model(p, Vector(pi.row(0).transpose()), em);
        } else {
            model = segrisk::make_model(p, em);
        }
        const auto smp = segrisk::sample(model, len(g), g());
        return {model, smp.x};
    }
}

inline HmmModel two_state(double p01, double p10, Matrix probs) {
    Matrix p(2, 2);
    p << 1 - p01, p01, p10, 1 - p10;
    return segrisk::make_model(p, segrisk::CategoricalEmission{std::move(probs)});
}

}  // namespace testing
