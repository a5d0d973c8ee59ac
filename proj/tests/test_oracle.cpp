#include <doctest.h>

#include <cmath>
#include <random>

#include "segrisk/oracle.hpp"
#include "support.hpp"

using namespace segrisk;
using doctest::Approx;

TEST_CASE("enumeration of M2 on (0, 0)") {
    auto en = oracle::enumerate(canonical_m2(), std::vector<int>{0, 0});
    REQUIRE(en.num_paths() == 4);
    // Index 0 = (0,0), 1 = (1,0), 2 = (0,1), 3 = (1,1).
    CHECK(std::exp(en.log_joint[0]) == Approx(0.384).epsilon(1e-12));
    CHECK(std::exp(en.log_joint[1]) == Approx(0.016).epsilon(1e-12));
    CHECK(std::exp(en.log_joint[2]) == Approx(0.016).epsilon(1e-12));
    CHECK(std::exp(en.log_joint[3]) == Approx(0.024).epsilon(1e-12));
    CHECK(std::exp(en.log_evidence) == Approx(0.44).epsilon(1e-12));
    CHECK(en.path(1) == std::vector<State>{1, 0});
}

TEST_CASE("single observation evidence") {
    const HmmModel m = canonical_m2();
    auto en = oracle::enumerate(m, std::vector<int>{1});
    CHECK(std::exp(en.log_evidence) == Approx(2.0 / 3.0 * 0.2 + 1.0 / 3.0 * 0.7).epsilon(1e-12));
}

TEST_CASE("joints sum to the evidence") {
    std::mt19937_64 g(71);
    for (int rep = 0; rep < 100; ++rep) {
        auto inst = testing::random_instance(g);
        auto en = oracle::enumerate(inst.model, inst.x);
        double sum = 0.0;
        for (double lj : en.log_joint) sum += std::exp(lj);
        CHECK(std::abs(sum - std::exp(en.log_evidence)) <= 1e-12 * std::exp(en.log_evidence));
        for (Eigen::Index t = 0; t < en.marginals.rows(); ++t)
            CHECK(std::abs(en.marginals.row(t).sum() - 1.0) < 1e-12);
    }
}

TEST_CASE("brute-force optima") {
    const HmmModel m = canonical_m2();
    std::vector<int> x{0, 0};
    const LossMatrix loss = LossMatrix::symmetric(2);
    auto v = oracle::brute_best(m, x, oracle::Objective::viterbi, 0.0, loss);
    CHECK(v.path.states == std::vector<State>{0, 0});
    CHECK(v.value == Approx(std::log(0.384)).epsilon(1e-12));
    auto h0 = oracle::brute_best(m, x, oracle::Objective::hybrid_log_r1, 0.0, loss);
    auto en = oracle::enumerate(m, x);
    double rbar1 = 0.0;
    for (int t = 0; t < 2; ++t) rbar1 -= std::log(en.marginals(t, h0.path.states[t]));
    CHECK(h0.value == Approx(rbar1 / 2.0).epsilon(1e-12));
    auto big = oracle::brute_best(m, x, oracle::Objective::hybrid_log_r1, 1e6, loss);
    CHECK(big.path.states == v.path.states);
}

TEST_CASE("enumeration guard counts paths, not length") {
    const HmmModel m = canonical_m2();
    std::vector<int> x20(20, 0);
    CHECK_NOTHROW(oracle::enumerate(m, x20));
    Matrix p = Matrix::Constant(4, 4, 0.25);
    Matrix f = Matrix::Constant(4, 2, 0.5);
    HmmModel m4 = make_model(p, CategoricalEmission{f});
    CHECK_THROWS_AS(oracle::enumerate(m4, std::vector<int>(12, 0)), oracle::InstanceTooLarge);
}
