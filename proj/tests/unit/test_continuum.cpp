#include <doctest.h>

#include <cmath>

#include "qfb/analytic.hpp"
#include "qfb/continuum.hpp"

using namespace qfb;

TEST_CASE("mode grid bounds") {
    const auto grid = continuum::build_modes(1.0, 1.0, 4001, 40.0 * M_PI);
    CHECK(grid.mode_spacing * grid.tau == doctest::Approx(0.0628).epsilon(1e-3));
    CHECK(grid.gamma_check() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(continuum::build_modes(1.0, 1.0, 10, 40.0 * M_PI), TooFewModes);
    CHECK_THROWS_AS(continuum::build_modes(1.0, 1.0, 4001, 100.0), WindowTooNarrow);
    CHECK_THROWS_AS(continuum::build_modes(1.0, 0.0, 4001, 40.0 * M_PI), NonPositiveTau);
}

TEST_CASE("kernel reconstruction peaks at zero and one roundtrip with 2:1 weights") {
    const double tau = 1.0;
    const auto grid = continuum::build_modes(1.0, tau, 4001, 40.0 * M_PI, 0.7);
    const auto f = continuum::reconstruct_kernel(grid, 2.0 * tau, 2001);
    double peak0 = 0.0, peak_tau = 0.0, at0 = 0.0, at_tau = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double s = f.time_of(i);
        const double mag = std::abs(f[i]);
        if (std::abs(s) < 0.5 && mag > peak0) {
            peak0 = mag;
            at0 = s;
        }
        if (std::abs(s - tau) < 0.5 && mag > peak_tau) {
            peak_tau = mag;
            at_tau = s;
        }
    }
    CHECK(std::abs(at0) <= f.dt());
    CHECK(std::abs(at_tau - tau) <= f.dt());
    CHECK(peak0 / peak_tau == doctest::Approx(2.0).epsilon(0.03));
}

TEST_CASE("decoupled emitter stays put") {
    auto grid = continuum::build_modes(0.0, 1.0, 501, 40.0 * M_PI);
    TimeGrid tg(1.0, 100, 2);
    const auto run = continuum::evolve_emitter_only(grid, tg);
    for (long s = 0; s <= tg.total_steps(); ++s) CHECK(run.emitter[s] == cplx(1.0, 0.0));
}

TEST_CASE("flat couplings decay at twice gamma") {
    const double gamma = 1.0;
    auto grid =
        continuum::build_modes(gamma, 1.0, 4001, 80.0 * M_PI, 0.0, continuum::CouplingProfile::flat);
    TimeGrid tg(1.0, 200, 3);
    const auto run = continuum::evolve_emitter_only(grid, tg);
    CHECK(run.max_norm_deviation < 1e-8);
    std::vector<double> pop;
    for (long s = 0; s <= tg.total_steps(); ++s) pop.push_back(std::norm(run.emitter[s]));
    double worst_rel = 0.0;
    for (long s = 1; s <= tg.total_steps(); ++s) {
        const double want = std::exp(-2.0 * gamma * tg.time_of(s));
        worst_rel = std::max(worst_rel, std::abs(pop[static_cast<std::size_t>(s)] - want) / want);
    }
    CHECK(worst_rel < 0.02);
}

TEST_CASE("structured couplings reproduce the delayed-decay series and improve with resolution") {
    const double gamma = 1.0, tau = 1.0;
    ModelParams p{gamma, tau, 0.0, 0.0};
    TimeGrid tg(tau, 150, 2);
    double prev = 1e300;
    for (long n : {2001L, 4001L}) {
        const double window = 40.0 * M_PI * static_cast<double>(n - 1) / 2000.0;
        auto grid = continuum::build_modes(gamma, tau, static_cast<std::size_t>(n), window);
        const auto run = continuum::evolve_emitter_only(grid, tg);
        CHECK(run.max_norm_deviation < 1e-8);
        double worst = 0.0;
        for (long s = 0; s <= tg.total_steps(); ++s)
            worst = std::max(worst,
                             std::abs(std::abs(run.emitter[s]) -
                                      std::abs(analytic::mirror_emitter_amplitude(p, tg.time_of(s)))));
        CHECK(worst < prev);
        prev = worst;
    }
    CHECK(prev < 5e-3);
}

TEST_CASE("the delayed kink of |c_e| lands within one step of the roundtrip time") {
    const double tau = 1.0;
    auto grid = continuum::build_modes(1.0, tau, 4001, 80.0 * M_PI);
    TimeGrid tg(tau, 200, 2);
    const auto run = continuum::evolve_emitter_only(grid, tg);
    std::vector<double> mag;
    for (long s = 0; s <= tg.total_steps(); ++s) mag.push_back(std::abs(run.emitter[s]));
    // skip the short-time transient; the only kink in range is at t = tau
    long best = -1;
    double best_mag = -1.0;
    for (long s = tg.steps_per_tau() / 2; s < tg.total_steps(); ++s) {
        const double d2 = std::abs(mag[s - 1] - 2.0 * mag[s] + mag[s + 1]);
        if (d2 > best_mag) {
            best_mag = d2;
            best = s;
        }
    }
    CHECK(std::abs(best - tg.steps_per_tau()) <= 1);
}

TEST_CASE("combined system: decoupled emitter, norm conservation, series check") {
    const double gamma = 1.0, tau = 1.0;
    auto grid = continuum::build_modes(gamma, tau, 4001, 80.0 * M_PI);
    TimeGrid tg(tau, 150, 3);

    const auto idle = continuum::evolve_jcm(grid, 0.0, tg);
    for (long s = 0; s <= tg.total_steps(); ++s) CHECK(idle.emitter[s] == cplx(1.0, 0.0));

    const auto run = continuum::evolve_jcm(grid, gamma / 2.0, tg);
    CHECK(run.max_norm_deviation < 1e-8);
    ModelParams p{gamma, tau, gamma / 2.0, 0.0};
    double worst = 0.0;
    for (long s = 0; s <= tg.total_steps(); ++s)
        worst = std::max(worst, std::abs(std::abs(run.cavity[s]) -
                                         std::abs(analytic::jcm_ground_amplitude(p, tg.time_of(s)))));
    CHECK(worst < 2e-3);
}
