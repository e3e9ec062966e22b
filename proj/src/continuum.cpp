#include "qfb/continuum.hpp"

#include <cmath>

#include "qfb/dde.hpp"

namespace qfb::continuum {

double ModeGrid::gamma_check() const {
    // The sine squared carries mean weight 1/2 across the window, the flat
    // profile full weight; both normalizations target the same Born rate.
    const double full = M_PI * g0 * g0;
    return profile == CouplingProfile::structured ? 0.5 * full : full;
}

ModeGrid build_modes(double gamma, double tau, std::size_t n_modes, double window, double phase,
                     CouplingProfile profile) {
    if (!(tau > 0.0)) throw NonPositiveTau("tau must be positive");
    if (gamma < 0.0) throw NegativeRate("gamma must be >= 0");
    if (n_modes < 2) throw TooFewModes("need at least two modes");
    if (window < 20.0 * 2.0 * M_PI / tau)
        throw WindowTooNarrow("window must satisfy W >= 20 * 2pi / tau to resolve the delay");
    const double spacing = 2.0 * window / static_cast<double>(n_modes - 1);
    if (spacing * tau >= 2.0 * M_PI / 10.0)
        throw TooFewModes("mode spacing too coarse: spacing * tau must stay below 2pi/10");

    ModeGrid grid;
    grid.n_modes = n_modes;
    grid.window = window;
    grid.mode_spacing = spacing;
    grid.tau = tau;
    grid.phase = phase;
    grid.gamma_target = gamma;
    grid.profile = profile;
    grid.g0 = profile == CouplingProfile::structured ? std::sqrt(2.0 * gamma / M_PI)
                                                     : std::sqrt(gamma / M_PI);
    grid.detunings.resize(n_modes);
    grid.couplings.resize(n_modes);
    const double scale = grid.g0 * std::sqrt(spacing);
    for (std::size_t j = 0; j < n_modes; ++j) {
        const double delta = -window + spacing * static_cast<double>(j);
        grid.detunings[j] = delta;
        const double shape = profile == CouplingProfile::structured
                                 ? std::sin(0.5 * phase + 0.5 * delta * tau)
                                 : 1.0;
        grid.couplings[j] = cplx(scale * shape, 0.0);
    }
    return grid;
}

ComplexTrajectory reconstruct_kernel(const ModeGrid& grid, double s_max, std::size_t n_samples) {
    if (n_samples < 2) throw Error("need at least two kernel samples");
    const double ds = 2.0 * s_max / static_cast<double>(n_samples - 1);
    std::vector<cplx> values(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i) {
        const double s = -s_max + ds * static_cast<double>(i);
        cplx acc(0.0, 0.0);
        for (std::size_t j = 0; j < grid.n_modes; ++j) {
            const double w2 = std::norm(grid.couplings[j]);
            acc += w2 * std::polar(1.0, -grid.detunings[j] * s);
        }
        values[i] = acc;
    }
    return ComplexTrajectory(-s_max, ds, std::move(values));
}

namespace {

// Shared fixed-substep RK4 march over the star-coupled mode system. The
// system channels come first in the state vector, modes afterwards; `probe`
// fills the derivative of the system channels from the collective mode sum.
struct StarSystem {
    const ModeGrid& grid;
    std::size_t n_sys;  // system channels ahead of the modes

    template <typename SysRhs>
    void rhs(const std::vector<cplx>& x, std::vector<cplx>& dx, SysRhs&& sys_rhs) const {
        const std::size_t n = grid.n_modes;
        cplx mode_sum(0.0, 0.0);
        for (std::size_t j = 0; j < n; ++j) mode_sum += grid.couplings[j] * x[n_sys + j];
        sys_rhs(x, dx, mode_sum);
        const cplx radiator = x[n_sys - 1];  // channel the reservoir attaches to
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t at = n_sys + j;
            dx[at] = cplx(0.0, -1.0) * (grid.detunings[j] * x[at] + std::conj(grid.couplings[j]) * radiator);
        }
    }
};

double total_norm(const std::vector<cplx>& x) {
    double acc = 0.0;
    for (const auto& v : x) acc += std::norm(v);
    return acc;
}

template <typename SysRhs>
ReservoirRun march(const ModeGrid& grid, const TimeGrid& time, double substep_target,
                   std::size_t n_sys, std::vector<cplx> x, SysRhs&& sys_rhs) {
    const double dt = time.dt();
    long substeps = 1;
    if (substep_target > 0.0)
        substeps = std::max(1L, static_cast<long>(std::ceil(grid.window * dt / substep_target)));
    const double h = dt / static_cast<double>(substeps);

    StarSystem star{grid, n_sys};
    const std::size_t dim = n_sys + grid.n_modes;
    std::vector<cplx> k1(dim), k2(dim), k3(dim), k4(dim), xs(dim);

    ReservoirRun run;
    run.substeps_per_sample = substeps;
    std::vector<cplx> emitter, cavity;
    const long n_samples = time.total_steps();
    emitter.reserve(n_samples + 1);
    if (n_sys == 2) cavity.reserve(n_samples + 1);

    emitter.push_back(x[0]);
    if (n_sys == 2) cavity.push_back(x[1]);

    for (long s = 0; s < n_samples; ++s) {
        for (long sub = 0; sub < substeps; ++sub) {
            star.rhs(x, k1, sys_rhs);
            for (std::size_t i = 0; i < dim; ++i) xs[i] = x[i] + 0.5 * h * k1[i];
            star.rhs(xs, k2, sys_rhs);
            for (std::size_t i = 0; i < dim; ++i) xs[i] = x[i] + 0.5 * h * k2[i];
            star.rhs(xs, k3, sys_rhs);
            for (std::size_t i = 0; i < dim; ++i) xs[i] = x[i] + h * k3[i];
            star.rhs(xs, k4, sys_rhs);
            for (std::size_t i = 0; i < dim; ++i)
                x[i] += h / 6.0 * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
        }
        if (!std::isfinite(x[0].real()) || !std::isfinite(x[0].imag()))
            throw NonFiniteState("reservoir integration diverged", s + 1);
        emitter.push_back(x[0]);
        if (n_sys == 2) cavity.push_back(x[1]);
        run.max_norm_deviation = std::max(run.max_norm_deviation, std::abs(total_norm(x) - 1.0));
    }

    run.emitter = ComplexTrajectory(0.0, dt, std::move(emitter));
    if (n_sys == 2) run.cavity = ComplexTrajectory(0.0, dt, std::move(cavity));
    return run;
}

}  // namespace

ReservoirRun evolve_emitter_only(const ModeGrid& grid, const TimeGrid& time,
                                 double substep_target) {
    std::vector<cplx> x(1 + grid.n_modes, cplx(0.0, 0.0));
    x[0] = cplx(1.0, 0.0);
    return march(grid, time, substep_target, 1, std::move(x),
                 [](const std::vector<cplx>&, std::vector<cplx>& dx, cplx mode_sum) {
                     dx[0] = cplx(0.0, -1.0) * mode_sum;
                 });
}

ReservoirRun evolve_jcm(const ModeGrid& grid, double coupling, const TimeGrid& time,
                        double substep_target) {
    if (coupling < 0.0) throw NegativeRate("coupling must be >= 0");
    std::vector<cplx> x(2 + grid.n_modes, cplx(0.0, 0.0));
    x[0] = cplx(1.0, 0.0);
    const cplx iM(0.0, coupling);
    return march(grid, time, substep_target, 2, std::move(x),
                 [iM](const std::vector<cplx>& xs, std::vector<cplx>& dx, cplx mode_sum) {
                     dx[0] = -iM * xs[1];
                     dx[1] = -iM * xs[0] + cplx(0.0, -1.0) * mode_sum;
                 });
}

}  // namespace qfb::continuum
