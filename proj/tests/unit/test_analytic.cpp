#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "qfb/analytic.hpp"
#include "qfb/dde.hpp"

using namespace qfb;
using testing::jcm_system;
using testing::mirror_system;
using testing::simpson;

TEST_CASE("mirror amplitude starts at one and decays freely before the delay") {
    ModelParams p{1.0, 1.0, 0.0, 0.0};
    CHECK(analytic::mirror_emitter_amplitude(p, 0.0) == cplx(1.0, 0.0));
    const cplx v = analytic::mirror_emitter_amplitude(p, 0.5);
    CHECK(v.real() == doctest::Approx(std::exp(-0.5)).epsilon(1e-15));
    CHECK(v.imag() == 0.0);
    CHECK_THROWS_AS(analytic::mirror_emitter_amplitude(p, -0.1), NegativeTime);
}

TEST_CASE("mirror amplitude matches the method-of-steps oracle past the delay") {
    for (double phase : {0.0, M_PI / 2, M_PI}) {
        ModelParams p{1.0, 1.0, 0.0, phase};
        TimeGrid grid(p.tau, 2000, 8);
        const auto dde_run = dde::integrate(mirror_system(p), grid);
        for (double t : {1.5, 3.7, 7.2}) {
            const long s = grid.index_of(t);
            const cplx series = analytic::mirror_emitter_amplitude(p, grid.time_of(s));
            CHECK(std::abs(series - dde_run[0][s]) < 1e-10);
        }
    }
}

TEST_CASE("strong damping keeps the first-interval modulus monotone") {
    ModelParams p{6.0, 1.0, 0.0, 0.0};
    double prev = 1.0;
    for (int k = 1; k <= 100; ++k) {
        const double mag = std::abs(analytic::mirror_emitter_amplitude(p, 0.01 * k));
        CHECK(mag <= prev + 1e-15);
        prev = mag;
    }
}

TEST_CASE("terms above floor(t/tau) have no support") {
    ModelParams p{1.3, 0.7, 0.0, 2.1};
    for (double t : {0.3, 1.9, 5.55}) {
        const cplx tight = analytic::mirror_emitter_amplitude(
            p, t, {static_cast<long>(std::floor(t / p.tau)), 0.0});
        const cplx loose = analytic::mirror_emitter_amplitude(p, t, {1000, 0.0});
        CHECK(tight == loose);  // bitwise: the gated terms are exactly absent
    }
}

TEST_CASE("one-photon amplitude initial value and coupling guard") {
    ModelParams p{1.0, 1.0, 0.5, 0.0};
    CHECK(analytic::jcm_ground_amplitude(p, 0.0) == cplx(0.0, 0.0));
    CHECK_THROWS_AS(analytic::jcm_ground_amplitude({1.0, 1.0, 0.7, 0.0}, 1.0),
                    UnsupportedCoupling);
    CHECK_THROWS_AS(analytic::jcm_ground_amplitude(p, -1.0), NegativeTime);
}

TEST_CASE("one-photon amplitude before the delay is the damped degenerate exchange") {
    // At coupling = gamma/2 the no-feedback system is critically damped:
    // c_g(t) = -i (gamma/2) t exp(-gamma t / 2).
    ModelParams p{1.0, 10.0, 0.5, 0.0};
    for (double t : {0.3, 1.7, 4.9, 9.5}) {
        const cplx want = cplx(0.0, -0.5 * t) * std::exp(-0.5 * t);
        CHECK(std::abs(analytic::jcm_ground_amplitude(p, t) - want) < 1e-13);
    }
}

TEST_CASE("one-photon amplitude matches the method-of-steps oracle") {
    ModelParams p{1.0, 2.0, 0.5, 0.0};
    TimeGrid grid(p.tau, 2000, 3);
    const auto dde_run = dde::integrate(jcm_system(p), grid);
    for (double t : {2.5, 5.1}) {
        const long s = grid.index_of(t);
        CHECK(std::abs(analytic::jcm_ground_amplitude(p, grid.time_of(s)) - dde_run[1][s]) <
              1e-8);
    }
}

TEST_CASE("empty cavity photon number: boundaries and continuity") {
    ModelParams p{1.0, 1.0, 0.0, 0.0};
    CHECK(analytic::empty_cavity_photon_number(p, 1.0, 0.0) == 1.0);
    const double left = analytic::empty_cavity_photon_number(p, 1.0, std::nextafter(1.0, 0.0));
    const double right = analytic::empty_cavity_photon_number(p, 1.0, 1.0);
    CHECK(left == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
    CHECK(right == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
    CHECK_THROWS_AS(analytic::empty_cavity_photon_number(p, 1.0, 2.0), OutOfRangeTime);
    CHECK_THROWS_AS(analytic::empty_cavity_photon_number(p, 1.0, -0.5), NegativeTime);
    CHECK_THROWS_AS(analytic::empty_cavity_photon_number(p, -1.0, 0.5), Error);
}

TEST_CASE("empty cavity second interval agrees with quadrature of the formal solution") {
    // <c+(t)c(t)> = e^{-2 G t} (N + 2 Re[g_tau] J N + |g_tau|^2 J^2 N) with
    // J the integral of e^{G t'} e^{-G(t'-tau)} over [tau, t], done numerically.
    for (double phase : {0.0, 1.1}) {
        ModelParams p{1.0, 1.0, 0.0, phase};
        const double n0 = 2.0, t = 1.5;
        const double j = simpson(
            [&](double tp) { return std::exp(p.gamma * tp) * std::exp(-p.gamma * (tp - p.tau)); },
            p.tau, t, 2000);
        const cplx gt = p.gamma_tau();
        const double want =
            std::exp(-2.0 * p.gamma * t) *
            (n0 + 2.0 * gt.real() * j * n0 + std::norm(gt) * j * j * n0);
        CHECK(std::abs(analytic::empty_cavity_photon_number(p, n0, t) - want) < 1e-10);
    }
}

TEST_CASE("empty cavity photon number stays non-negative") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> gamma(0.0, 4.0), phase(-M_PI, M_PI), frac(0.0, 2.0);
    for (int k = 0; k < 300; ++k) {
        ModelParams p{gamma(rng), 1.0, 0.0, phase(rng)};
        const double t = std::min(frac(rng), std::nextafter(2.0, 0.0));
        CHECK(analytic::empty_cavity_photon_number(p, 3.0, t) >= 0.0);
    }
}
