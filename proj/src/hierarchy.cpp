#include "qfb/hierarchy.hpp"

#include <cmath>

#include "qfb/dde.hpp"

namespace qfb::hierarchy {

namespace {

constexpr cplx kI(0.0, 1.0);

bool all_finite(const std::vector<cplx>& x) {
    for (const auto& v : x)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

}  // namespace

cplx MemoryReader::at(Family fam, long jm, long idx) const {
    if (idx < n_delta_) {
        const auto& arr = fam == Family::cc ? store_.cc(jm) : store_.cP(jm);
        return arr[static_cast<std::size_t>(idx)];
    }
    return seed_[channel_index(jm, fam)];
}

cplx MemoryReader::half(Family fam, long jm, long m) const {
    long a = m - 1;
    const double* w = dde::detail::kHalfWeightsMid;
    if (a < 0) {
        a = 0;
        w = dde::detail::kHalfWeightsLeft;
    } else if (a + 3 > n_delta_) {
        a = n_delta_ - 3;
        w = dde::detail::kHalfWeightsRight;
    }
    return w[0] * at(fam, jm, a) + w[1] * at(fam, jm, a + 1) + w[2] * at(fam, jm, a + 2) +
           w[3] * at(fam, jm, a + 3);
}

void block_rhs(const ModelParams& params, long interval, const std::vector<cplx>& state,
               const std::vector<cplx>& mem_cc, const std::vector<cplx>& mem_cP,
               RhsVariant variant, bool feedback, std::vector<cplx>& out) {
    const long i = interval;
    const std::size_t dim = static_cast<std::size_t>(4 * (i + 1));
    if (state.size() != dim) throw Error("block state must hold 4*(interval+1) channels");
    const bool has_mem = i >= 1;
    if (has_mem && (static_cast<long>(mem_cc.size()) < i || static_cast<long>(mem_cP.size()) < i))
        throw MissingMemory("need one-delay-shifted drives for every j >= 1");
    out.resize(dim);

    const double G = params.gamma;
    const cplx iM = kI * params.coupling;
    const cplx gt = feedback ? params.gamma_tau() : cplx(0.0, 0.0);
    const cplx gtc = std::conj(gt);

    for (long j = 0; j <= i; ++j) {
        const cplx xcc = state[channel_index(j, Family::cc)];
        const cplx xPc = state[channel_index(j, Family::Pc)];
        const cplx xcP = state[channel_index(j, Family::cP)];
        const cplx xPP = state[channel_index(j, Family::PP)];

        // Drives with the dagger leg shifted one delay back. For j = 0 they
        // are hermitian partners of the j = 1 channels of this same block;
        // deeper j read the previous interval.
        cplx cc_shift(0.0, 0.0), cP_shift(0.0, 0.0);
        if (has_mem) {
            if (j == 0) {
                cc_shift = std::conj(state[channel_index(1, Family::cc)]);
                cP_shift = std::conj(state[channel_index(1, Family::Pc)]);
            } else {
                cc_shift = mem_cc[static_cast<std::size_t>(j - 1)];
                cP_shift = mem_cP[static_cast<std::size_t>(j - 1)];
            }
            if (variant == RhsVariant::printed) cc_shift = xcc;
        }

        const bool theta_next = j < i;  // Theta_{j+1} within this interval
        const cplx cc_next = theta_next ? state[channel_index(j + 1, Family::cc)] : cplx(0, 0);
        const cplx Pc_next = theta_next ? state[channel_index(j + 1, Family::Pc)] : cplx(0, 0);

        out[channel_index(j, Family::cc)] =
            -2.0 * G * xcc + gtc * cc_shift + gt * cc_next + iM * xPc - iM * xcP;
        out[channel_index(j, Family::Pc)] = -G * xPc + gt * Pc_next + iM * xcc - iM * xPP;
        out[channel_index(j, Family::cP)] = -G * xcP + gtc * cP_shift + iM * xPP - iM * xcc;
        out[channel_index(j, Family::PP)] = iM * xcP - iM * xPc;
    }
}

OriginCorrelators evolve_origin_correlators(const ModelParams& params, const TimeGrid& grid,
                                            const InitialState& initial, const Options& options) {
    dde::LinearDdeSystem sys;
    sys.dim = 2;
    const cplx iM = kI * params.coupling;
    sys.instantaneous = {cplx(-params.gamma, 0.0), iM, iM, cplx(0.0, 0.0)};
    const cplx fb = options.feedback ? std::conj(params.gamma_tau()) : cplx(0.0, 0.0);
    sys.delayed = {fb, cplx(0, 0), cplx(0, 0), cplx(0, 0)};
    sys.tau = params.tau;

    // Frozen-c family seeds from the photon number, frozen-P from the
    // emitter population; each pair is (dagger-c leg, dagger-P leg).
    sys.initial_state = {cplx(initial.cavity_photons, 0.0), cplx(0.0, 0.0)};
    auto y = dde::integrate(sys, grid);
    sys.initial_state = {cplx(0.0, 0.0), cplx(initial.emitter_population, 0.0)};
    auto z = dde::integrate(sys, grid);

    OriginCorrelators origin;
    origin.cc = std::move(y[0]);
    origin.Pc = std::move(y[1]);
    origin.cP = std::move(z[0]);
    origin.PP = std::move(z[1]);
    return origin;
}

IntervalResult advance_interval(const ModelParams& params, const TimeGrid& grid, long interval,
                                const std::vector<cplx>& seed, const MemoryStore& memory,
                                const Options& options) {
    const long i = interval;
    const long n_delta = grid.steps_per_tau();
    if (n_delta < 3)
        throw GridMisaligned("interval marching needs at least 3 steps per delay");
    const std::size_t dim = static_cast<std::size_t>(4 * (i + 1));
    if (seed.size() != dim) throw Error("seed must hold 4*(interval+1) corner values");
    if (i >= 1 && memory.channels() < i)
        throw MissingMemory("previous interval must provide " + std::to_string(i) + " channels");

    MemoryReader reader(memory, seed, n_delta);

    IntervalResult result;
    result.block.interval = i;
    result.block.start_time = grid.time_of(i * n_delta);
    result.block.dt = grid.dt();
    if (options.keep_blocks) result.block.channels.assign(dim, {});

    std::vector<std::vector<cplx>> store_cc(static_cast<std::size_t>(i + 1));
    std::vector<std::vector<cplx>> store_cP(static_cast<std::size_t>(i + 1));
    for (auto& v : store_cc) v.reserve(static_cast<std::size_t>(n_delta));
    for (auto& v : store_cP) v.reserve(static_cast<std::size_t>(n_delta));

    // Stage-offset caches of the memory drives, refreshed once per step.
    const std::size_t n_mem = static_cast<std::size_t>(i);
    std::vector<cplx> mcc_base(n_mem), mcP_base(n_mem);
    std::vector<cplx> mcc_half(n_mem), mcP_half(n_mem);
    std::vector<cplx> mcc_full(n_mem), mcP_full(n_mem);
    long cached_step = -1;

    std::vector<cplx> x = seed;

    auto rhs = [&](long m, dde::StageOffset off, const std::vector<cplx>& xs,
                   std::vector<cplx>& dxdt) {
        if (i >= 1 && cached_step != m) {
            for (long jm = 0; jm < i; ++jm) {
                const auto u = static_cast<std::size_t>(jm);
                mcc_base[u] = reader.at(Family::cc, jm, m);
                mcP_base[u] = reader.at(Family::cP, jm, m);
                mcc_half[u] = reader.half(Family::cc, jm, m);
                mcP_half[u] = reader.half(Family::cP, jm, m);
                mcc_full[u] = reader.at(Family::cc, jm, m + 1);
                mcP_full[u] = reader.at(Family::cP, jm, m + 1);
            }
            cached_step = m;
        }
        switch (off) {
            case dde::StageOffset::base:
                block_rhs(params, i, xs, mcc_base, mcP_base, options.variant, options.feedback,
                          dxdt);
                break;
            case dde::StageOffset::half:
                block_rhs(params, i, xs, mcc_half, mcP_half, options.variant, options.feedback,
                          dxdt);
                break;
            case dde::StageOffset::full:
                block_rhs(params, i, xs, mcc_full, mcP_full, options.variant, options.feedback,
                          dxdt);
                break;
        }
        if (off == dde::StageOffset::base) {
            for (long j = 0; j <= i; ++j) {
                store_cc[static_cast<std::size_t>(j)].push_back(xs[channel_index(j, Family::cc)]);
                store_cP[static_cast<std::size_t>(j)].push_back(xs[channel_index(j, Family::cP)]);
            }
            result.emitter_samples.push_back(xs[channel_index(0, Family::PP)]);
            if (options.keep_blocks)
                for (std::size_t ch = 0; ch < dim; ++ch)
                    result.block.channels[ch].push_back(xs[ch]);
        }
    };

    auto accept = [&](long m_new, const std::vector<cplx>& xn, const std::vector<cplx>&) {
        if (!all_finite(xn))
            throw NonFiniteState("correlator block diverged", i * n_delta + m_new);
        if (options.keep_blocks && m_new == n_delta)
            for (std::size_t ch = 0; ch < dim; ++ch) result.block.channels[ch].push_back(xn[ch]);
    };

    dde::rk4_march(dim, x, 0, n_delta, grid.dt(), rhs, accept);

    result.next_memory = MemoryStore(std::move(store_cc), std::move(store_cP));
    result.end_state = std::move(x);
    return result;
}

RunResult run(const ModelParams& params, const TimeGrid& grid, const InitialState& initial,
              const Options& options) {
    validate_or_throw(params, grid);
    const long n_delta = grid.steps_per_tau();
    const long n_intervals = grid.n_intervals();

    RunResult result;
    result.origin = evolve_origin_correlators(params, grid, initial, options);

    std::vector<cplx> photon, emitter;
    photon.reserve(static_cast<std::size_t>(grid.total_steps()) + 1);
    emitter.reserve(static_cast<std::size_t>(grid.total_steps()) + 1);

    MemoryStore memory;
    std::vector<cplx> carry;  // end state of the previous interval

    for (long i = 0; i < n_intervals; ++i) {
        std::vector<cplx> seed(static_cast<std::size_t>(4 * (i + 1)));
        for (std::size_t ch = 0; ch < carry.size(); ++ch) seed[ch] = carry[ch];
        const auto corner = static_cast<std::size_t>(i * n_delta);
        seed[channel_index(i, Family::cc)] = result.origin.cc.at(corner);
        seed[channel_index(i, Family::Pc)] = result.origin.Pc.at(corner);
        seed[channel_index(i, Family::cP)] = result.origin.cP.at(corner);
        seed[channel_index(i, Family::PP)] = result.origin.PP.at(corner);

        result.budget_at_entry.push_back(memory.retained_count() + photon.size());

        auto step = advance_interval(params, grid, i, seed, memory, options);

        const auto& cc0 = step.next_memory.cc(0);
        photon.insert(photon.end(), cc0.begin(), cc0.end());
        emitter.insert(emitter.end(), step.emitter_samples.begin(), step.emitter_samples.end());

        memory = std::move(step.next_memory);
        carry = std::move(step.end_state);
        if (options.keep_blocks) result.blocks.push_back(std::move(step.block));
    }

    photon.push_back(carry[channel_index(0, Family::cc)]);
    emitter.push_back(carry[channel_index(0, Family::PP)]);

    result.photon_number = ComplexTrajectory(0.0, grid.dt(), std::move(photon));
    result.emitter_population = ComplexTrajectory(0.0, grid.dt(), std::move(emitter));
    return result;
}

}  // namespace qfb::hierarchy
