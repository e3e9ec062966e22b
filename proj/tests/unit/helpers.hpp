#pragma once

#include <cmath>
#include <random>

#include "qfb/dde.hpp"
#include "qfb/types.hpp"

namespace qfb::testing {

/// x' = -gamma x + gamma_tau x(t - tau) Theta, x(0) = 1.
inline dde::LinearDdeSystem mirror_system(const ModelParams& p) {
    dde::LinearDdeSystem sys;
    sys.dim = 1;
    sys.instantaneous = {cplx(-p.gamma, 0.0)};
    sys.delayed = {p.gamma_tau()};
    sys.tau = p.tau;
    sys.initial_state = {cplx(1.0, 0.0)};
    return sys;
}

/// (c_e, c_g): exchange at rate coupling, cavity decay gamma plus feedback.
inline dde::LinearDdeSystem jcm_system(const ModelParams& p) {
    dde::LinearDdeSystem sys;
    sys.dim = 2;
    const cplx iM(0.0, p.coupling);
    sys.instantaneous = {cplx(0, 0), -iM, -iM, cplx(-p.gamma, 0)};
    sys.delayed = {cplx(0, 0), cplx(0, 0), cplx(0, 0), p.gamma_tau()};
    sys.tau = p.tau;
    sys.initial_state = {cplx(1.0, 0.0), cplx(0.0, 0.0)};
    return sys;
}

/// Composite Simpson quadrature on [a, b].
template <typename F>
double simpson(F&& f, double a, double b, long n_panels) {
    const long n = 2 * n_panels;
    const double h = (b - a) / static_cast<double>(n);
    double acc = f(a) + f(b);
    for (long k = 1; k < n; ++k) acc += f(a + h * static_cast<double>(k)) * (k % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

}  // namespace qfb::testing
