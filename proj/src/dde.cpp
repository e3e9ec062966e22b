#include "qfb/dde.hpp"

#include <cmath>

namespace qfb::dde {

namespace {

void check_system(const LinearDdeSystem& sys, const TimeGrid& grid) {
    const std::size_t d = sys.dim;
    if (sys.instantaneous.size() != d * d || sys.delayed.size() != d * d)
        throw Error("system matrices must be dim x dim");
    if (sys.initial_state.size() != d) throw Error("initial state size must equal dim");
    if (sys.tau != grid.tau())
        throw GridMismatch("system tau differs from grid tau: delay-aligned grid required");
    for (const auto& v : sys.instantaneous)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw Error("non-finite entry in instantaneous matrix");
    for (const auto& v : sys.delayed)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw Error("non-finite entry in delayed matrix");
}

bool all_finite(const cvec& x) {
    for (const auto& v : x)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

// Core march shared by the homogeneous and driven entry points. The drive is
// a nullable pointer to per-channel sample arrays of length total_steps + 1.
std::vector<ComplexTrajectory> run(const LinearDdeSystem& sys,
                                   const std::vector<ComplexTrajectory>* drive,
                                   const TimeGrid& grid) {
    check_system(sys, grid);
    const std::size_t d = sys.dim;
    const long n_delay = grid.steps_per_tau();
    const long n_total = grid.total_steps();
    const double dt = grid.dt();

    HistoryBuffer history(d, n_delay);
    std::vector<std::vector<cplx>> out(d);
    for (auto& ch : out) ch.reserve(static_cast<std::size_t>(n_total) + 1);

    cvec x = sys.initial_state;
    for (std::size_t i = 0; i < d; ++i) out[i].push_back(x[i]);

    cvec xd(d);  // delayed state at the current stage

    auto rhs = [&](long step, StageOffset off, const cvec& xs, cvec& dxdt) {
        // Feedback switches on per step: all stages of steps based at
        // t >= tau see the delayed term, earlier steps never do.
        const bool gated = step >= n_delay;
        if (gated) {
            const long m = step - n_delay;
            switch (off) {
                case StageOffset::base: history.read(m, xd); break;
                case StageOffset::half: history.read_half(m, dt, xd); break;
                case StageOffset::full: history.read(m + 1, xd); break;
            }
        }
        for (std::size_t r = 0; r < d; ++r) {
            cplx acc(0.0, 0.0);
            for (std::size_t c = 0; c < d; ++c) acc += sys.a(r, c) * xs[c];
            if (gated)
                for (std::size_t c = 0; c < d; ++c) acc += sys.b(r, c) * xd[c];
            dxdt[r] = acc;
        }
        if (drive) {
            const long last = n_total;
            for (std::size_t r = 0; r < d; ++r) {
                const cplx* y = (*drive)[r].values().data();
                switch (off) {
                    case StageOffset::base: dxdt[r] += y[step]; break;
                    case StageOffset::half: dxdt[r] += detail::sample_half(y, last, step); break;
                    case StageOffset::full: dxdt[r] += y[step + 1]; break;
                }
            }
        }
        if (off == StageOffset::base) history.begin_segment(step, xs, dxdt);
    };

    auto accept = [&](long step, const cvec& xnew, const cvec& k4) {
        history.end_segment(step - 1, k4);
        if (!all_finite(xnew)) throw NonFiniteState("integration diverged", step);
        for (std::size_t i = 0; i < d; ++i) out[i].push_back(xnew[i]);
    };

    rk4_march(d, x, 0, n_total, dt, rhs, accept);

    std::vector<ComplexTrajectory> result;
    result.reserve(d);
    for (std::size_t i = 0; i < d; ++i)
        result.emplace_back(0.0, dt, std::move(out[i]));
    return result;
}

}  // namespace

bool step_size_warning(const LinearDdeSystem& system, const TimeGrid& grid) {
    double max_row = 0.0;
    for (std::size_t r = 0; r < system.dim; ++r) {
        double row = 0.0;
        for (std::size_t c = 0; c < system.dim; ++c) row += std::abs(system.a(r, c));
        max_row = std::max(max_row, row);
    }
    return max_row * grid.dt() >= 0.1;
}

std::vector<ComplexTrajectory> integrate(const LinearDdeSystem& system, const TimeGrid& grid) {
    return run(system, nullptr, grid);
}

std::vector<ComplexTrajectory> integrate_with_drive(const LinearDdeSystem& system,
                                                    const std::vector<ComplexTrajectory>& drive,
                                                    const TimeGrid& grid) {
    if (drive.size() != system.dim)
        throw DriveLengthMismatch("need one drive trajectory per state channel");
    const auto want = static_cast<std::size_t>(grid.total_steps()) + 1;
    for (const auto& tr : drive) {
        if (tr.size() != want)
            throw DriveLengthMismatch("drive has " + std::to_string(tr.size()) +
                                      " samples, grid expects " + std::to_string(want));
        if (tr.dt() != grid.dt() || tr.start_time() != 0.0)
            throw GridMismatch("drive must be sampled on the integration grid");
    }
    return run(system, &drive, grid);
}

}  // namespace qfb::dde
