#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "segrisk/model.hpp"
#include "segrisk/model_io.hpp"
#include "segrisk/rng.hpp"
#include "support.hpp"

using namespace segrisk;
using doctest::Approx;

namespace {

bool has_code(const std::vector<Diagnostic>& d, const std::string& code) {
    for (const auto& x : d)
        if (x.code == code) return true;
    return false;
}

HmmModel raw(Matrix p, Matrix f) {
    HmmModel m;
    m.transition = std::move(p);
    m.initial = Vector::Constant(m.transition.rows(), 1.0 / static_cast<double>(m.transition.rows()));
    m.stationary_initial = false;
    m.emission = CategoricalEmission{std::move(f)};
    return m;
}

}  // namespace

TEST_CASE("canonical two-state model validates") {
    const HmmModel m = canonical_m2();
    CHECK(validate_model(m).empty());
    CHECK(m.num_states() == 2);
    CHECK(m.alphabet_size() == 2);
    CHECK(m.stationary_initial);
}

TEST_CASE("validation diagnostics") {
    Matrix f(2, 2);
    f << 0.8, 0.2, 0.3, 0.7;

    SUBCASE("identity chain is reducible") {
        auto d = validate_model(raw(Matrix::Identity(2, 2), f));
        CHECK(has_code(d, "reducible"));
    }
    SUBCASE("emission row summing to 1.1") {
        Matrix bad(2, 2);
        bad << 0.5, 0.6, 0.3, 0.7;
        Matrix p(2, 2);
        p << 0.9, 0.1, 0.2, 0.8;
        auto d = validate_model(raw(p, bad));
        REQUIRE(has_code(d, "emission_row_sum"));
        bool mentions = false;
        for (const auto& x : d) mentions |= x.message.find("row sum 1.1") != std::string::npos;
        CHECK(mentions);
    }
    SUBCASE("period two") {
        Matrix p(2, 2);
        p << 0, 1, 1, 0;
        CHECK(has_code(validate_model(raw(p, f)), "periodic"));
    }
    SUBCASE("non-stochastic transition row names its index") {
        Matrix p(2, 2);
        p << 0.9, 0.2, 0.2, 0.8;
        auto d = validate_model(raw(p, f));
        REQUIRE(has_code(d, "row_sum"));
        CHECK(d.front().message.find("row 0") != std::string::npos);
    }
    SUBCASE("negative std") {
        HmmModel m = canonical_m2();
        m.emission = GaussianEmission{Vector::Zero(2), Vector::Constant(2, -1.0)};
        CHECK(has_code(validate_model(m), "emission_std"));
    }
    SUBCASE("make_model throws with diagnostics") {
        CHECK_THROWS_AS(make_model(Matrix::Identity(2, 2), CategoricalEmission{f}), ModelValidationError);
    }
}

TEST_CASE("stationary distribution") {
    const Vector pi = stationary_distribution(canonical_m2().transition);
    CHECK(pi[0] == Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(pi[1] == Approx(1.0 / 3.0).epsilon(1e-14));

    Matrix half = Matrix::Constant(2, 2, 0.5);
    CHECK(stationary_distribution(half)[0] == Approx(0.5));
    Matrix sym(2, 2);
    sym << 0.9, 0.1, 0.1, 0.9;
    CHECK(stationary_distribution(sym)[1] == Approx(0.5));
    CHECK_THROWS_AS(stationary_distribution(Matrix::Identity(2, 2)), std::domain_error);
}

TEST_CASE("stationary distribution is a fixed point on random chains") {
    std::mt19937_64 g(11);
    for (int rep = 0; rep < 200; ++rep) {
        const int m = 2 + rep % 4;
        Matrix p = testing::random_stochastic(g, m, m, 0.3, true);
        if (!is_irreducible(p)) continue;
        const Vector pi = stationary_distribution(p);
        CHECK((pi.transpose() * p - pi.transpose()).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(pi.minCoeff() > 0.0);
        CHECK(std::abs(pi.sum() - 1.0) < 1e-12);
    }
}

TEST_CASE("entropy rate") {
    CHECK(markov_entropy_rate(canonical_m2()) == Approx(0.38352279010702806).epsilon(1e-12));
    Matrix cycle(2, 2);
    cycle << 0, 1, 1, 0;
    CHECK(markov_entropy_rate(cycle) == 0.0);
    Matrix uniform = Matrix::Constant(3, 3, 1.0 / 3.0);
    CHECK(markov_entropy_rate(uniform) == Approx(std::log(3.0)));

    std::mt19937_64 g(5);
    for (int rep = 0; rep < 100; ++rep) {
        const int m = 2 + rep % 3;
        Matrix p = testing::random_stochastic(g, m, m, 0.3, true);
        if (!is_irreducible(p)) continue;
        double h = markov_entropy_rate(p);
        CHECK(h >= 0.0);
        CHECK(h <= std::log(static_cast<double>(m)) + 1e-12);
    }
}

TEST_CASE("expected log emission") {
    const HmmModel m = canonical_m2();
    CHECK(expected_log_emission(m, 0) == Approx(-0.5004024235381879).epsilon(1e-12));
    CHECK(expected_log_emission(m, 1) == Approx(-0.6108643020548935).epsilon(1e-12));
    HmmModel g = m;
    g.emission = GaussianEmission{Vector::Zero(2), Vector::Ones(2)};
    CHECK(expected_log_emission(g, 0) == Approx(-1.4189385332046727).epsilon(1e-12));
}

TEST_CASE("sampling") {
    const HmmModel m = canonical_m2();
    SUBCASE("deterministic in the seed") {
        auto a = sample(m, 5, 7), b = sample(m, 5, 7);
        CHECK(a.x == b.x);
        CHECK(a.y == b.y);
    }
    SUBCASE("prefix property") {
        auto a = sample(m, 200, 3), b = sample(m, 50, 3);
        CHECK(std::get<std::vector<int>>(prefix(a.x, 50)) == std::get<std::vector<int>>(b.x));
        CHECK(std::vector<State>(a.y.begin(), a.y.begin() + 50) == b.y);
    }
    SUBCASE("identity emissions reveal the state") {
        auto s = sample(identity_emission_model(), 500, 9);
        const auto& x = std::get<std::vector<int>>(s.x);
        for (std::size_t t = 0; t < x.size(); ++t) CHECK(x[t] == s.y[t]);
    }
    SUBCASE("state frequency approaches the stationary law") {
        auto s = sample(m, 1'000'000, 1);
        double zeros = 0;
        for (State y : s.y) zeros += y == 0;
        CHECK(std::abs(zeros / 1e6 - 2.0 / 3.0) < 0.01);
    }
    SUBCASE("emission frequencies approach f_s") {
        auto s = sample(m, 100'000, 2);
        const auto& x = std::get<std::vector<int>>(s.x);
        double count[2][2] = {};
        for (std::size_t t = 0; t < x.size(); ++t) count[s.y[t]][x[t]] += 1;
        const auto& f = std::get<CategoricalEmission>(m.emission).probs;
        for (int st = 0; st < 2; ++st) {
            double tot = count[st][0] + count[st][1];
            for (int k = 0; k < 2; ++k) CHECK(std::abs(count[st][k] / tot - f(st, k)) < 0.02);
        }
    }
    SUBCASE("gaussian draws have the right moments") {
        HmmModel g = m;
        Vector mu(2), sd(2);
        mu << -1.0, 2.0;
        sd << 0.5, 1.5;
        g.emission = GaussianEmission{mu, sd};
        auto s = sample(g, 200'000, 4);
        const auto& x = std::get<std::vector<double>>(s.x);
        double sum[2] = {}, sq[2] = {}, cnt[2] = {};
        for (std::size_t t = 0; t < x.size(); ++t) {
            sum[s.y[t]] += x[t];
            sq[s.y[t]] += x[t] * x[t];
            cnt[s.y[t]] += 1;
        }
        for (int st = 0; st < 2; ++st) {
            double mean = sum[st] / cnt[st];
            CHECK(std::abs(mean - mu[st]) < 0.03);
            CHECK(std::abs(std::sqrt(sq[st] / cnt[st] - mean * mean) - sd[st]) < 0.03);
        }
    }
}

TEST_CASE("rng streams") {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());
    Rng c(1);
    for (int i = 0; i < 10000; ++i) {
        double u = c.uniform();
        CHECK(u > 0.0);
        CHECK(u < 1.0);
    }
    CHECK(derive_seed(1, 0) != derive_seed(1, 1));
    CHECK(derive_seed(1, 0) != derive_seed(2, 0));
}

TEST_CASE("log-space helpers") {
    const HmmModel m = canonical_m2();
    std::vector<int> x{0, 1, 1};
    Matrix le = log_emission_matrix(m, x);
    CHECK(le(1, 1) == Approx(std::log(0.7)));
    CHECK(log_transition_matrix(m)(0, 1) == Approx(std::log(0.1)));
    CHECK(log_initial_vector(m)[0] == Approx(std::log(2.0 / 3.0)));
    HmmModel mid = identity_emission_model();
    CHECK(std::isinf(mid.log_emission(0, 1)));
}

TEST_CASE("model json round trip") {
    const HmmModel m = canonical_m2();
    const HmmModel back = model_from_json(model_to_json(m));
    CHECK(back.transition.isApprox(m.transition));
    CHECK(back.initial.isApprox(m.initial));
    CHECK(back.stationary_initial);

    auto doc = nlohmann::json::parse(R"({"states":2,"transition":[[0.5,0.5],[0.3,0.7]],
        "initial":[1,0],"emission":{"type":"gaussian","means":[0,1],"stds":[1,2]}})");
    const HmmModel g = model_from_json(doc);
    CHECK_FALSE(g.is_categorical());
    CHECK(g.initial[0] == 1.0);
    const HmmModel g2 = model_from_json(model_to_json(g));
    CHECK(std::get<GaussianEmission>(g2.emission).stds[1] == 2.0);

    CHECK_THROWS_AS(model_from_json(nlohmann::json::parse(R"({"states":2})")), std::invalid_argument);
    auto bad = nlohmann::json::parse(R"({"states":2,"transition":[[1,0],[0,1]],
        "emission":{"type":"categorical","probs":[[1,0],[0,1]]}})");
    CHECK_THROWS_AS(model_from_json(bad), ModelValidationError);
}
