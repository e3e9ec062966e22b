#pragma once

#include <cstddef>
#include <vector>

#include "qfb/types.hpp"

namespace qfb::hierarchy {

/// The four correlator families tracked per delay index j. The first leg is
/// always taken at the running time t, the second at t - j*tau; cc pairs two
/// cavity operators, Pc the emitter dagger with a cavity operator, and so on.
enum class Family : int { cc = 0, Pc = 1, cP = 2, PP = 3 };

constexpr std::size_t channel_index(long j, Family f) {
    return static_cast<std::size_t>(4 * j + static_cast<int>(f));
}

/// Right-hand-side flavor: `derived` is the product rule applied to the
/// operator equations of motion (the form that passes the wave-function
/// oracle); `printed` reproduces a transcription whose photon-family memory
/// term reads the current correlator instead of the one-delay-shifted one,
/// kept for documentation comparisons.
enum class RhsVariant { derived, printed };

/// Initial expectation values. The linear closure is exact for a single
/// excitation (excited emitter, empty cavity) and, at coupling = 0, for any
/// photon seed; other combinations integrate the same linearized set.
struct InitialState {
    double emitter_population = 1.0;  ///< <P+P>(0)
    double cavity_photons = 0.0;      ///< <c+c>(0)

    static InitialState excited_emitter() { return {1.0, 0.0}; }
    static InitialState cavity_fock(double n0) { return {0.0, n0}; }
};

struct Options {
    RhsVariant variant = RhsVariant::derived;
    bool feedback = true;      ///< false: delayed return switched off, decay kept
    bool keep_blocks = false;  ///< retain every interval block for dumping
};

// ---------------------------------------------------------------------------
// Interval-local data
// ---------------------------------------------------------------------------

/// All correlator channels of one delay interval [i tau, (i+1) tau], sampled
/// on the interval grid (steps_per_tau + 1 points including both corners).
struct CorrelatorBlock {
    long interval = 0;
    double start_time = 0.0;
    double dt = 0.0;
    std::vector<std::vector<cplx>> channels;  ///< index channel_index(j, fam)

    [[nodiscard]] long max_delay_index() const {
        return static_cast<long>(channels.size()) / 4 - 1;
    }
};

/// Previous-interval trajectories that drive the current one: the photon
/// two-time family and the photon-polarization family, base samples only
/// (steps_per_tau values per channel; the right corner lives on in the next
/// interval's initial conditions and is supplied by the caller on reads).
class MemoryStore {
public:
    MemoryStore() = default;
    MemoryStore(std::vector<std::vector<cplx>> cc, std::vector<std::vector<cplx>> cP)
        : cc_(std::move(cc)), cP_(std::move(cP)) {}

    [[nodiscard]] long channels() const { return static_cast<long>(cc_.size()); }
    [[nodiscard]] bool empty() const { return cc_.empty(); }
    [[nodiscard]] const std::vector<cplx>& cc(long j) const { return cc_.at(j); }
    [[nodiscard]] const std::vector<cplx>& cP(long j) const { return cP_.at(j); }

    /// Complex samples currently retained (the instrumented budget counter).
    [[nodiscard]] std::size_t retained_count() const {
        std::size_t n = 0;
        for (const auto& v : cc_) n += v.size();
        for (const auto& v : cP_) n += v.size();
        return n;
    }

private:
    std::vector<std::vector<cplx>> cc_, cP_;
};

/// Stage-resolved reads of the previous-interval trajectories. Base samples
/// come from the store; the right-corner value (local index steps_per_tau)
/// is the current interval's initial condition for the same channel and is
/// taken from the seed. Midpoints use clamped cubic interpolation.
class MemoryReader {
public:
    MemoryReader(const MemoryStore& store, const std::vector<cplx>& seed, long n_delta)
        : store_(store), seed_(seed), n_delta_(n_delta) {}

    [[nodiscard]] cplx at(Family fam, long jm, long idx) const;
    [[nodiscard]] cplx half(Family fam, long jm, long m) const;

private:
    const MemoryStore& store_;
    const std::vector<cplx>& seed_;
    long n_delta_;
};

/// Correlators against the fixed t = 0 operators, full horizon. Field names
/// follow the leg convention of Family: first the evolving dagger leg, then
/// the frozen operator.
struct OriginCorrelators {
    ComplexTrajectory cc;  ///< <c+(t) c(0)>
    ComplexTrajectory Pc;  ///< <P+(t) c(0)>
    ComplexTrajectory cP;  ///< <c+(t) P(0)>
    ComplexTrajectory PP;  ///< <P+(t) P(0)>
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Time derivatives of the full interval block. `state` holds the 4*(i+1)
/// channels; `mem_cc` / `mem_cP` supply the one-delay-shifted drive values
/// <c1+ c_j> and <c1+ P_j> for j = 1..i (index j-1). The j = 0 drives use
/// hermiticity of the j = 1 channels and need no external values.
void block_rhs(const ModelParams& params, long interval, const std::vector<cplx>& state,
               const std::vector<cplx>& mem_cc, const std::vector<cplx>& mem_cP,
               RhsVariant variant, bool feedback, std::vector<cplx>& out);

/// Integrate the origin correlators over the whole grid horizon with the
/// delayed self-drive of the dagger leg.
[[nodiscard]] OriginCorrelators evolve_origin_correlators(const ModelParams& params,
                                                          const TimeGrid& grid,
                                                          const InitialState& initial,
                                                          const Options& options = {});

struct IntervalResult {
    CorrelatorBlock block;
    MemoryStore next_memory;
    std::vector<cplx> end_state;         ///< continuity limits at the right corner
    std::vector<cplx> emitter_samples;   ///< <P+ P>(t) base samples of this interval
};

/// March one interval: seed holds the corner values of all 4*(i+1) channels
/// at t = i*tau (continuation channels first, the newborn j = i channel
/// seeded from the origin correlators by the caller).
[[nodiscard]] IntervalResult advance_interval(const ModelParams& params, const TimeGrid& grid,
                                              long interval, const std::vector<cplx>& seed,
                                              const MemoryStore& memory,
                                              const Options& options = {});

struct RunResult {
    ComplexTrajectory photon_number;       ///< <c+ c>(t), imaginary residue ~0
    ComplexTrajectory emitter_population;  ///< <P+ P>(t)
    std::vector<std::size_t> budget_at_entry;  ///< retained samples entering interval i
    OriginCorrelators origin;
    std::vector<CorrelatorBlock> blocks;  ///< filled when options.keep_blocks
};

/// Full interval-marching run over the grid horizon.
[[nodiscard]] RunResult run(const ModelParams& params, const TimeGrid& grid,
                            const InitialState& initial, const Options& options = {});

}  // namespace qfb::hierarchy
