#include "qfb/factorized.hpp"

#include <cmath>

#include "qfb/dde.hpp"

namespace qfb::factorized {

namespace {

constexpr cplx kI(0.0, 1.0);

bool all_finite(const std::vector<cplx>& x) {
    for (const auto& v : x)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

// Reads of a growing whole-run record at a delayed global index.
class RecordReader {
public:
    explicit RecordReader(const std::vector<cplx>& rec) : rec_(rec) {}

    [[nodiscard]] cplx at(long idx) const {
        if (idx < 0) return cplx(0.0, 0.0);
        return rec_[static_cast<std::size_t>(idx)];
    }

    [[nodiscard]] cplx half(long m) const {
        const long last = static_cast<long>(rec_.size()) - 1;
        long a = m - 1;
        const double* w = dde::detail::kHalfWeightsMid;
        if (a < 0) {
            a = 0;
            w = dde::detail::kHalfWeightsLeft;
        } else if (a + 3 > last) {
            a = last - 3;
            w = dde::detail::kHalfWeightsRight;
        }
        return w[0] * at(a) + w[1] * at(a + 1) + w[2] * at(a + 2) + w[3] * at(a + 3);
    }

private:
    const std::vector<cplx>& rec_;
};

cplx record_read(const RecordReader& reader, long delayed_base, dde::StageOffset off) {
    switch (off) {
        case dde::StageOffset::base: return reader.at(delayed_base);
        case dde::StageOffset::half: return reader.half(delayed_base);
        case dde::StageOffset::full: return reader.at(delayed_base + 1);
    }
    return cplx(0.0, 0.0);
}

}  // namespace

void factorized_rhs(const ModelParams& params, long interval, const std::vector<cplx>& state,
                    const std::vector<cplx>& mem_cc, const std::vector<cplx>& mem_cP,
                    const std::vector<cplx>& delayed_density, cplx delayed_origin_cc,
                    cplx delayed_origin_cP, bool origin_gate, bool feedback,
                    std::vector<cplx>& out) {
    const long i = interval;
    const std::size_t block_dim = static_cast<std::size_t>(4 * (i + 1));
    if (state.size() != block_dim + 4)
        throw Error("factorized state must hold 4*(interval+1) + 4 channels");
    const bool has_mem = i >= 1;
    if (has_mem && (static_cast<long>(mem_cc.size()) < i || static_cast<long>(mem_cP.size()) < i ||
                    static_cast<long>(delayed_density.size()) < i))
        throw MissingMemory("need shifted drives and delayed densities for every j >= 1");
    out.resize(block_dim + 4);

    const double G = params.gamma;
    const cplx iM = kI * params.coupling;
    const cplx i2M = 2.0 * iM;
    const cplx gt = feedback ? params.gamma_tau() : cplx(0.0, 0.0);
    const cplx gtc = std::conj(gt);

    const cplx density_now = state[channel_index(0, Family::PP)];

    for (long j = 0; j <= i; ++j) {
        const cplx xcc = state[channel_index(j, Family::cc)];
        const cplx xPc = state[channel_index(j, Family::Pc)];
        const cplx xcP = state[channel_index(j, Family::cP)];
        const cplx xPP = state[channel_index(j, Family::PP)];

        cplx cc_shift(0.0, 0.0), cP_shift(0.0, 0.0);
        if (has_mem) {
            if (j == 0) {
                cc_shift = std::conj(state[channel_index(1, Family::cc)]);
                cP_shift = std::conj(state[channel_index(1, Family::Pc)]);
            } else {
                cc_shift = mem_cc[static_cast<std::size_t>(j - 1)];
                cP_shift = mem_cP[static_cast<std::size_t>(j - 1)];
            }
        }

        const bool theta_next = j < i;
        const cplx cc_next = theta_next ? state[channel_index(j + 1, Family::cc)] : cplx(0, 0);
        const cplx Pc_next = theta_next ? state[channel_index(j + 1, Family::Pc)] : cplx(0, 0);

        // Saturation factors: the running density corrects the t leg, the
        // delayed density the t - j tau leg.
        const cplx density_j =
            j == 0 ? density_now : delayed_density[static_cast<std::size_t>(j - 1)];

        out[channel_index(j, Family::cc)] =
            -2.0 * G * xcc + gtc * cc_shift + gt * cc_next + iM * xPc - iM * xcP;
        out[channel_index(j, Family::Pc)] =
            -G * xPc + gt * Pc_next + iM * xcc - iM * xPP - i2M * density_now * xcc;
        out[channel_index(j, Family::cP)] =
            -G * xcP + gtc * cP_shift + iM * xPP - iM * xcc + i2M * density_j * xcc;
        // At j = 0 both cubic corrections of the density equation vanish
        // identically on a two-level emitter, which keeps the lossless total
        // excitation exactly conserved.
        if (j == 0)
            out[channel_index(j, Family::PP)] = iM * xcP - iM * xPc;
        else
            out[channel_index(j, Family::PP)] =
                iM * xcP - iM * xPc - i2M * density_now * xcP + i2M * density_j * xPc;
    }

    // Origin channels: same leg rules with the second operator frozen at 0.
    const cplx ycc = state[block_dim + 0];
    const cplx yPc = state[block_dim + 1];
    const cplx zcP = state[block_dim + 2];
    const cplx zPP = state[block_dim + 3];
    const cplx ret_cc = origin_gate ? delayed_origin_cc : cplx(0.0, 0.0);
    const cplx ret_cP = origin_gate ? delayed_origin_cP : cplx(0.0, 0.0);
    out[block_dim + 0] = -G * ycc + gtc * ret_cc + iM * yPc;
    out[block_dim + 1] = iM * ycc - i2M * density_now * ycc;
    out[block_dim + 2] = -G * zcP + gtc * ret_cP + iM * zPP;
    out[block_dim + 3] = iM * zcP - i2M * density_now * zcP;
}

RunResult run(const ModelParams& params, const TimeGrid& grid, const InitialState& initial,
              const Options& options) {
    validate_or_throw(params, grid);
    const long n_delta = grid.steps_per_tau();
    if (n_delta < 3)
        throw GridMisaligned("interval marching needs at least 3 steps per delay");
    const long n_intervals = grid.n_intervals();
    const std::size_t total = static_cast<std::size_t>(grid.total_steps());

    RunResult result;
    std::vector<cplx> photon, emitter, polarization;
    photon.reserve(total + 1);
    emitter.reserve(total + 1);
    polarization.reserve(total + 1);

    // Whole-run records read back by the delayed saturation factors and the
    // origin channels' own return terms.
    std::vector<cplx> density_rec, origin_cc_rec, origin_cP_rec;
    density_rec.reserve(total + 1);
    origin_cc_rec.reserve(total + 1);
    origin_cP_rec.reserve(total + 1);
    RecordReader density_reader(density_rec);
    RecordReader origin_cc_reader(origin_cc_rec);
    RecordReader origin_cP_reader(origin_cP_rec);

    MemoryStore memory;
    std::vector<cplx> carry;

    for (long i = 0; i < n_intervals; ++i) {
        const std::size_t block_dim = static_cast<std::size_t>(4 * (i + 1));
        std::vector<cplx> x(block_dim + 4, cplx(0.0, 0.0));
        if (i == 0) {
            x[channel_index(0, Family::cc)] = cplx(initial.cavity_photons, 0.0);
            x[channel_index(0, Family::PP)] = cplx(initial.emitter_population, 0.0);
            x[block_dim + 0] = cplx(initial.cavity_photons, 0.0);
            x[block_dim + 3] = cplx(initial.emitter_population, 0.0);
        } else {
            // continuation channels, the newborn corner copied from the live
            // origin channels, then the origin channels themselves
            for (std::size_t ch = 0; ch < block_dim - 4; ++ch) x[ch] = carry[ch];
            for (std::size_t f = 0; f < 4; ++f) {
                x[block_dim - 4 + f] = carry[carry.size() - 4 + f];
                x[block_dim + f] = carry[carry.size() - 4 + f];
            }
        }

        const std::vector<cplx> seed(x.begin(), x.begin() + static_cast<long>(block_dim));
        hierarchy::MemoryReader mem_reader(memory, seed, n_delta);

        std::vector<std::vector<cplx>> store_cc(static_cast<std::size_t>(i + 1));
        std::vector<std::vector<cplx>> store_cP(static_cast<std::size_t>(i + 1));
        for (auto& v : store_cc) v.reserve(static_cast<std::size_t>(n_delta));
        for (auto& v : store_cP) v.reserve(static_cast<std::size_t>(n_delta));

        const std::size_t n_mem = static_cast<std::size_t>(i);
        std::vector<cplx> mcc[3], mcp[3], dens[3];
        for (auto& v : mcc) v.resize(n_mem);
        for (auto& v : mcp) v.resize(n_mem);
        for (auto& v : dens) v.resize(n_mem);
        cplx ret_cc[3], ret_cp[3];
        long cached_step = -1;
        const bool origin_gate = options.feedback && i >= 1;

        hierarchy::CorrelatorBlock block;
        if (options.keep_blocks) {
            block.interval = i;
            block.start_time = grid.time_of(i * n_delta);
            block.dt = grid.dt();
            block.channels.assign(block_dim, {});
        }

        auto rhs = [&](long m, dde::StageOffset off, const std::vector<cplx>& xs,
                       std::vector<cplx>& dxdt) {
            if (cached_step != m) {
                const long g = i * n_delta + m;
                for (int o = 0; o < 3; ++o) {
                    const auto so = static_cast<dde::StageOffset>(o);
                    for (long jm = 0; jm < i; ++jm) {
                        const auto u = static_cast<std::size_t>(jm);
                        switch (so) {
                            case dde::StageOffset::base:
                                mcc[o][u] = mem_reader.at(Family::cc, jm, m);
                                mcp[o][u] = mem_reader.at(Family::cP, jm, m);
                                break;
                            case dde::StageOffset::half:
                                mcc[o][u] = mem_reader.half(Family::cc, jm, m);
                                mcp[o][u] = mem_reader.half(Family::cP, jm, m);
                                break;
                            case dde::StageOffset::full:
                                mcc[o][u] = mem_reader.at(Family::cc, jm, m + 1);
                                mcp[o][u] = mem_reader.at(Family::cP, jm, m + 1);
                                break;
                        }
                        dens[o][u] = record_read(density_reader, g - (jm + 1) * n_delta, so);
                    }
                    if (origin_gate) {
                        ret_cc[o] = record_read(origin_cc_reader, g - n_delta, so);
                        ret_cp[o] = record_read(origin_cP_reader, g - n_delta, so);
                    } else {
                        ret_cc[o] = ret_cp[o] = cplx(0.0, 0.0);
                    }
                }
                cached_step = m;
            }
            const int o = static_cast<int>(off);
            factorized_rhs(params, i, xs, mcc[o], mcp[o], dens[o], ret_cc[o], ret_cp[o],
                           origin_gate, options.feedback, dxdt);
            if (off == dde::StageOffset::base) {
                for (long j = 0; j <= i; ++j) {
                    store_cc[static_cast<std::size_t>(j)].push_back(
                        xs[channel_index(j, Family::cc)]);
                    store_cP[static_cast<std::size_t>(j)].push_back(
                        xs[channel_index(j, Family::cP)]);
                }
                photon.push_back(xs[channel_index(0, Family::cc)]);
                emitter.push_back(xs[channel_index(0, Family::PP)]);
                polarization.push_back(xs[channel_index(0, Family::Pc)]);
                density_rec.push_back(xs[channel_index(0, Family::PP)]);
                origin_cc_rec.push_back(xs[block_dim + 0]);
                origin_cP_rec.push_back(xs[block_dim + 2]);
                if (options.keep_blocks)
                    for (std::size_t ch = 0; ch < block_dim; ++ch)
                        block.channels[ch].push_back(xs[ch]);
            }
        };

        auto accept = [&](long m_new, const std::vector<cplx>& xn, const std::vector<cplx>&) {
            if (!all_finite(xn))
                throw NonFiniteState("factorized set diverged", i * n_delta + m_new);
            if (options.keep_blocks && m_new == n_delta)
                for (std::size_t ch = 0; ch < block_dim; ++ch)
                    block.channels[ch].push_back(xn[ch]);
        };

        dde::rk4_march(block_dim + 4, x, 0, n_delta, grid.dt(), rhs, accept);

        memory = MemoryStore(std::move(store_cc), std::move(store_cP));
        carry = std::move(x);
        if (options.keep_blocks) result.blocks.push_back(std::move(block));
    }

    photon.push_back(carry[channel_index(0, Family::cc)]);
    emitter.push_back(carry[channel_index(0, Family::PP)]);
    polarization.push_back(carry[channel_index(0, Family::Pc)]);

    result.photon_number = ComplexTrajectory(0.0, grid.dt(), std::move(photon));
    result.emitter_population = ComplexTrajectory(0.0, grid.dt(), std::move(emitter));
    result.polarization = ComplexTrajectory(0.0, grid.dt(), std::move(polarization));
    return result;
}

RunResult run_with_photons(const ModelParams& params, const TimeGrid& grid, double n0,
                           const Options& options) {
    if (n0 < 0.0) throw Error("initial photon number must be >= 0");
    return run(params, grid, InitialState::cavity_fock(n0), options);
}

}  // namespace qfb::factorized
