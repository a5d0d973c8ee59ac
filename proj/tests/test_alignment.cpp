#include <doctest.h>

#include <cmath>
#include <random>

#include "segrisk/alignment.hpp"
#include "segrisk/oracle.hpp"
#include "support.hpp"

using namespace segrisk;
using doctest::Approx;

TEST_CASE("viterbi on M2") {
    const HmmModel m = canonical_m2();
    StatePath v = viterbi(m, std::vector<int>{0, 0});
    CHECK(v.states == std::vector<State>{0, 0});
    CHECK(*v.log_joint == Approx(std::log(0.384)).epsilon(1e-12));
    CHECK(v.kind == PathKind::viterbi);

    StatePath w = viterbi(m, std::vector<int>{0, 1, 1, 0, 1});
    CHECK(w.states == std::vector<State>{1, 1, 1, 1, 1});
    CHECK(*w.log_joint == Approx(-5.469156934393018).epsilon(1e-12));
}

TEST_CASE("viterbi with identity emissions returns the observations") {
    const HmmModel mid = identity_emission_model();
    auto s = sample(mid, 300, 4);
    StatePath v = viterbi(mid, s.x);
    CHECK(v.states == s.y);
    CHECK(std::isfinite(*v.log_joint));
}

TEST_CASE("prefix paths from a shared lattice") {
    const HmmModel m = canonical_m2();
    auto s = sample(m, 200, 6);
    const Matrix le = log_emission_matrix(m, s.x);
    ViterbiLattice lat = viterbi_lattice(m, le);
    for (std::size_t len : {1u, 7u, 50u, 199u, 200u})
        CHECK(lat.backtrack(len) == viterbi(m, prefix(s.x, len)).states);
    CHECK_THROWS_AS(lat.backtrack(201), std::out_of_range);
    CHECK_THROWS_AS(lat.backtrack(0), std::out_of_range);
}

TEST_CASE("ties resolve to the smallest state") {
    Matrix p = Matrix::Constant(3, 3, 1.0 / 3.0);
    Matrix f = Matrix::Constant(3, 2, 0.5);
    HmmModel m = make_model(p, CategoricalEmission{f});
    std::vector<int> x{0, 1, 0, 0};
    CHECK(viterbi(m, x).states == std::vector<State>{0, 0, 0, 0});
    Posteriors post = forward_backward(m, x);
    CHECK(pmap(post).states == std::vector<State>{0, 0, 0, 0});
    CHECK(hybrid_log_r1(m, x, post, 1.0).states == std::vector<State>{0, 0, 0, 0});
}

TEST_CASE("pmap and hybrids on M2") {
    const HmmModel m = canonical_m2();
    std::vector<int> x{0, 0};
    Posteriors post = forward_backward(m, x);
    CHECK(pmap(post).states == std::vector<State>{0, 0});
    CHECK(hybrid_log_r1(m, x, post, 1e6).states == viterbi(m, x).states);
    CHECK(hybrid_r1(m, x, post, 1e6).states == viterbi(m, x).states);
    CHECK_THROWS_AS(hybrid_log_r1(m, x, post, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(hybrid_r1(m, x, post, std::nan("")), std::invalid_argument);
}

TEST_CASE("c = 0 reproduces pmap") {
    std::mt19937_64 g(17);
    for (int rep = 0; rep < 100; ++rep) {
        auto inst = testing::random_instance(g, 3, 4, 10);
        Posteriors post = forward_backward(inst.model, inst.x);
        CHECK(hybrid_log_r1(inst.model, inst.x, post, 0.0).states == pmap(post).states);
        CHECK(hybrid_r1(inst.model, inst.x, post, 0.0).states == pmap(post).states);
    }
}

TEST_CASE("pmap may use a forbidden transition") {
    std::mt19937_64 g(2);
    bool seen_infinite = false;
    for (int rep = 0; rep < 2000 && !seen_infinite; ++rep) {
        auto inst = testing::random_instance(g, 3, 4, 8);
        const Matrix le = log_emission_matrix(inst.model, inst.x);
        Posteriors post = forward_backward(inst.model, le);
        StatePath pm = pmap(inst.model, le, post);
        seen_infinite = std::isinf(*pm.log_joint);
    }
    CHECK(seen_infinite);
}

TEST_CASE("log joint of explicit paths") {
    const HmmModel m = canonical_m2();
    std::vector<int> x{0, 0};
    CHECK(log_joint(m, x, {0, 1}) == Approx(std::log(0.016)).epsilon(1e-12));
    CHECK(log_joint(m, x, {1, 1}) == Approx(std::log(0.024)).epsilon(1e-12));
    CHECK_THROWS_AS(log_joint(m, x, {0}), std::invalid_argument);
    CHECK_THROWS_AS(log_joint(m, x, {0, 2}), std::out_of_range);
}

TEST_CASE("emission scaling leaves viterbi unchanged") {
    std::mt19937_64 g(9);
    for (int rep = 0; rep < 50; ++rep) {
        auto inst = testing::random_instance(g, 3, 4, 12);
        Matrix le = log_emission_matrix(inst.model, inst.x);
        StatePath a = viterbi(inst.model, le);
        const double shift = std::log(3.7);
        Matrix scaled = le.array() + shift;
        StatePath b = viterbi(inst.model, scaled);
        // Equal up to rounding-level ties.
        CHECK(std::abs(log_joint(inst.model, le, b.states) - *a.log_joint) < 1e-9);
        CHECK(*b.log_joint == Approx(*a.log_joint + static_cast<double>(le.rows()) * shift).epsilon(1e-12));
    }
}

TEST_CASE("hybrid interpolation is monotone in c") {
    std::mt19937_64 g(33);
    const std::vector<double> grid{0.0, 0.25, 0.5, 1.0, 2.0, 5.0, 10.0, 100.0};
    for (int rep = 0; rep < 100; ++rep) {
        auto inst = testing::random_instance(g, 3, 4, 8);
        const Matrix le = log_emission_matrix(inst.model, inst.x);
        Posteriors post = forward_backward(inst.model, le);
        double prev_lj = -INFINITY, prev_rb = -INFINITY;
        for (double c : grid) {
            StatePath h = hybrid_log_r1(inst.model, le, post, c);
            double lj = *h.log_joint;
            double rb = 0.0;
            for (std::size_t t = 0; t < h.states.size(); ++t)
                rb -= std::log(post.smoothing(static_cast<Eigen::Index>(t), h.states[t]));
            CHECK(lj >= prev_lj - 1e-9);
            CHECK(rb >= prev_rb - 1e-9);
            prev_lj = lj;
            prev_rb = rb;
        }
    }
}
