#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "qfb/analytic.hpp"
#include "qfb/dde.hpp"

using namespace qfb;
using testing::jcm_system;
using testing::mirror_system;

TEST_CASE("pure exponential decay to 1e-12") {
    ModelParams p{1.0, 1.0, 0.0, 0.0};
    auto sys = mirror_system(p);
    sys.delayed = {cplx(0.0, 0.0)};
    TimeGrid grid(p.tau, 1000, 5);
    const auto run = dde::integrate(sys, grid);
    double worst = 0.0;
    for (long s = 0; s <= grid.total_steps(); ++s)
        worst = std::max(worst, std::abs(run[0][s] - std::exp(-grid.time_of(s))));
    CHECK(worst < 1e-12);
}

TEST_CASE("delayed decay matches the series solution") {
    ModelParams p{1.0, 1.0, 0.0, M_PI / 2};
    TimeGrid grid(p.tau, 2000, 5);
    const auto run = dde::integrate(mirror_system(p), grid);
    double worst = 0.0;
    for (long s = 0; s <= grid.total_steps(); ++s)
        worst = std::max(worst,
                         std::abs(run[0][s] - analytic::mirror_emitter_amplitude(p, grid.time_of(s))));
    CHECK(worst < 1e-10);
}

TEST_CASE("exchange system matches the closed form at coupling = gamma/2") {
    ModelParams p{1.0, 0.5, 0.5, 0.0};
    TimeGrid grid(p.tau, 2000, 10);
    const auto run = dde::integrate(jcm_system(p), grid);
    double worst = 0.0;
    for (long s = 0; s <= grid.total_steps(); ++s)
        worst = std::max(worst,
                         std::abs(run[1][s] - analytic::jcm_ground_amplitude(p, grid.time_of(s))));
    CHECK(worst < 1e-8);
}

TEST_CASE("output before the delay is independent of the delayed matrix") {
    ModelParams p{1.0, 1.0, 0.0, 1.0};
    TimeGrid grid(p.tau, 500, 2);
    auto gated = mirror_system(p);
    auto free_sys = gated;
    free_sys.delayed = {cplx(0.0, 0.0)};
    const auto a = dde::integrate(gated, grid);
    const auto b = dde::integrate(free_sys, grid);
    for (long s = 0; s <= grid.steps_per_tau(); ++s) CHECK(a[0][s] == b[0][s]);  // bitwise
    CHECK(a[0][grid.steps_per_tau() + 1] != b[0][grid.steps_per_tau() + 1]);
}

TEST_CASE("fourth order convergence against the series") {
    ModelParams p{1.0, 1.0, 0.0, M_PI / 3};
    double prev = 0.0;
    for (long n : {250L, 500L, 1000L}) {
        TimeGrid grid(p.tau, n, 5);
        const auto run = dde::integrate(mirror_system(p), grid);
        double worst = 0.0;
        for (long s = 0; s <= grid.total_steps(); ++s)
            worst = std::max(
                worst, std::abs(run[0][s] - analytic::mirror_emitter_amplitude(p, grid.time_of(s))));
        if (prev > 0.0) CHECK(prev / worst >= 8.0);
        prev = worst;
    }
}

TEST_CASE("single excitation norm is non-increasing before feedback returns") {
    ModelParams p{1.0, 1.0, 2.0, 0.0};
    TimeGrid grid(p.tau, 1000, 1);
    const auto run = dde::integrate(jcm_system(p), grid);
    double prev = 1.0 + 1e-15;
    for (long s = 0; s <= grid.total_steps(); ++s) {
        const double norm = std::norm(run[0][s]) + std::norm(run[1][s]);
        CHECK(norm <= prev + 1e-12);
        prev = norm;
    }
}

TEST_CASE("zero drive reproduces the homogeneous integration bitwise") {
    ModelParams p{1.0, 1.0, 0.5, 0.7};
    TimeGrid grid(p.tau, 400, 3);
    auto sys = jcm_system(p);
    const auto plain = dde::integrate(sys, grid);
    const std::vector<ComplexTrajectory> drive(
        2, ComplexTrajectory(0.0, grid.dt(),
                             std::vector<cplx>(static_cast<std::size_t>(grid.total_steps()) + 1,
                                               cplx(0.0, 0.0))));
    const auto driven = dde::integrate_with_drive(sys, drive, grid);
    for (long s = 0; s <= grid.total_steps(); ++s) {
        CHECK(plain[0][s] == driven[0][s]);
        CHECK(plain[1][s] == driven[1][s]);
    }
}

TEST_CASE("constant drive integrates to x0 + c t") {
    dde::LinearDdeSystem sys;
    sys.dim = 1;
    sys.instantaneous = {cplx(0.0, 0.0)};
    sys.delayed = {cplx(0.0, 0.0)};
    sys.tau = 1.0;
    sys.initial_state = {cplx(0.25, -0.5)};
    TimeGrid grid(1.0, 500, 4);
    const cplx c(0.3, 0.8);
    const std::vector<ComplexTrajectory> drive(
        1, ComplexTrajectory(0.0, grid.dt(),
                             std::vector<cplx>(static_cast<std::size_t>(grid.total_steps()) + 1, c)));
    const auto run = dde::integrate_with_drive(sys, drive, grid);
    double worst = 0.0;
    for (long s = 0; s <= grid.total_steps(); ++s)
        worst = std::max(worst,
                         std::abs(run[0][s] - (sys.initial_state[0] + c * grid.time_of(s))));
    CHECK(worst < 1e-12);
}

TEST_CASE("inhomogeneous scalar case against the closed form") {
    // x' = -x + e^{-t}, x(0) = x0  =>  x(t) = (x0 + t) e^{-t}
    dde::LinearDdeSystem sys;
    sys.dim = 1;
    sys.instantaneous = {cplx(-1.0, 0.0)};
    sys.delayed = {cplx(0.0, 0.0)};
    sys.tau = 1.0;
    sys.initial_state = {cplx(0.4, 0.0)};
    TimeGrid grid(1.0, 1000, 4);
    std::vector<cplx> samples;
    for (long s = 0; s <= grid.total_steps(); ++s)
        samples.emplace_back(std::exp(-grid.time_of(s)), 0.0);
    const std::vector<ComplexTrajectory> drive(1,
                                               ComplexTrajectory(0.0, grid.dt(), std::move(samples)));
    const auto run = dde::integrate_with_drive(sys, drive, grid);
    double worst = 0.0;
    for (long s = 0; s <= grid.total_steps(); ++s) {
        const double t = grid.time_of(s);
        worst = std::max(worst, std::abs(run[0][s] - cplx((0.4 + t) * std::exp(-t), 0.0)));
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("drive sample count is checked") {
    ModelParams p{1.0, 1.0, 0.0, 0.0};
    auto sys = mirror_system(p);
    TimeGrid grid(p.tau, 100, 2);
    const std::vector<ComplexTrajectory> bad(
        1, ComplexTrajectory(0.0, grid.dt(), std::vector<cplx>(7, cplx(0, 0))));
    CHECK_THROWS_AS(dde::integrate_with_drive(sys, bad, grid), DriveLengthMismatch);
}

TEST_CASE("divergence is detected with the offending step") {
    dde::LinearDdeSystem sys;
    sys.dim = 1;
    sys.instantaneous = {cplx(2000.0, 0.0)};
    sys.delayed = {cplx(0.0, 0.0)};
    sys.tau = 1.0;
    sys.initial_state = {cplx(1.0, 0.0)};
    TimeGrid grid(1.0, 1000, 2);
    CHECK(dde::step_size_warning(sys, grid));
    CHECK_THROWS_AS((void)dde::integrate(sys, grid), NonFiniteState);
}

TEST_CASE("mismatched delay is rejected") {
    ModelParams p{1.0, 2.0, 0.0, 0.0};
    auto sys = mirror_system(p);
    TimeGrid grid(1.0, 100, 2);
    CHECK_THROWS_AS((void)dde::integrate(sys, grid), GridMismatch);
}

TEST_CASE("integration is deterministic") {
    ModelParams p{1.0, 1.0, 0.8, 2.2};
    TimeGrid grid(p.tau, 700, 6);
    const auto a = dde::integrate(jcm_system(p), grid);
    const auto b = dde::integrate(jcm_system(p), grid);
    for (long s = 0; s <= grid.total_steps(); ++s) {
        CHECK(a[0][s] == b[0][s]);
        CHECK(a[1][s] == b[1][s]);
    }
}
