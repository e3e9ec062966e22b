#include <doctest.h>

#include <cmath>
#include <random>

#include "qfb/types.hpp"

using namespace qfb;

TEST_CASE("validate accepts an aligned configuration") {
    ModelParams p{1.0, 1.0, 0.0, 0.0};
    const auto grid = TimeGrid::from_dt(1.0, 0.001, 5);
    CHECK(grid.steps_per_tau() == 1000);
    CHECK(validate(p, grid).empty());
}

TEST_CASE("misaligned dt is rejected") {
    CHECK_THROWS_AS(TimeGrid::from_dt(1.0, 0.0003, 5), GridMisaligned);
}

TEST_CASE("non-positive tau is rejected") {
    CHECK_THROWS_AS(TimeGrid(0.0, 100, 1), NonPositiveTau);
    ModelParams p{1.0, 0.0, 0.0, 0.0};
    TimeGrid grid(1.0, 100, 1);
    const auto violations = validate(p, grid);
    REQUIRE(!violations.empty());
    CHECK(violations.front().find("NonPositiveTau") != std::string::npos);
}

TEST_CASE("negative rates are flagged") {
    TimeGrid grid(1.0, 100, 1);
    ModelParams p{-1.0, 1.0, 0.0, 0.0};
    CHECK_THROWS_AS(validate_or_throw(p, grid), NegativeRate);
}

TEST_CASE("feedback rate phases") {
    CHECK(ModelParams{1.0, 1.0, 0.0, 0.0}.gamma_tau() == cplx(1.0, 0.0));
    const cplx half_turn = ModelParams{1.0, 1.0, 0.0, M_PI}.gamma_tau();
    CHECK(half_turn.real() == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(std::abs(half_turn.imag()) < 1e-15);
    const cplx quarter = ModelParams{0.5, 1.0, 0.0, M_PI / 2}.gamma_tau();
    CHECK(std::abs(quarter.real()) < 1e-15);
    CHECK(quarter.imag() == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("feedback rate modulus equals gamma") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> gamma(0.0, 50.0), phase(-10.0, 10.0);
    for (int k = 0; k < 200; ++k) {
        ModelParams p{gamma(rng), 1.0, 0.0, phase(rng)};
        CHECK(std::abs(std::abs(p.gamma_tau()) - p.gamma) <= 1e-15 * std::max(1.0, p.gamma));
    }
}

TEST_CASE("step index round trip") {
    TimeGrid grid(0.7, 350, 20);
    std::mt19937 rng(11);
    std::uniform_int_distribution<long> step(0, grid.total_steps());
    for (int k = 0; k < 500; ++k) {
        const long s = step(rng);
        CHECK(grid.index_of(grid.time_of(s)) == s);
    }
    CHECK(grid.is_corner(0));
    CHECK(grid.is_corner(350));
    CHECK(!grid.is_corner(351));
    CHECK(grid.interval_of(349) == 0);
    CHECK(grid.interval_of(350) == 1);
}

TEST_CASE("trajectory indexing outside the span throws") {
    ComplexTrajectory tr(0.0, 0.1, {cplx(1, 0), cplx(2, 0)});
    CHECK(tr.at(1) == cplx(2, 0));
    CHECK_THROWS_AS(tr.at(2), OutOfRangeTime);
}
