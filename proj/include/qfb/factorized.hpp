#pragma once

#include <vector>

#include "qfb/hierarchy.hpp"
#include "qfb/types.hpp"

namespace qfb::factorized {

using hierarchy::Family;
using hierarchy::InitialState;
using hierarchy::MemoryStore;
using hierarchy::channel_index;

struct Options {
    bool feedback = true;
    bool keep_blocks = false;
};

/// Derivatives of the factorized two-time set for one interval. The state
/// appends four origin channels (<c+(t)c(0)>, <P+(t)c(0)>, <c+(t)P(0)>,
/// <P+(t)P(0)>) after the 4*(i+1) block channels; nonlinear saturation terms
/// couple every emitter leg to the running or delayed excited-state density.
/// `delayed_density[j-1]` holds <P+P>(t - j tau) for j = 1..i; the two
/// delayed origin values feed the origin channels' own return terms (ignored
/// while the global time is still inside the first interval).
void factorized_rhs(const ModelParams& params, long interval, const std::vector<cplx>& state,
                    const std::vector<cplx>& mem_cc, const std::vector<cplx>& mem_cP,
                    const std::vector<cplx>& delayed_density, cplx delayed_origin_cc,
                    cplx delayed_origin_cP, bool origin_gate, bool feedback,
                    std::vector<cplx>& out);

struct RunResult {
    ComplexTrajectory photon_number;
    ComplexTrajectory emitter_population;
    ComplexTrajectory polarization;  ///< <P+(t) c(t)>
    std::vector<hierarchy::CorrelatorBlock> blocks;
};

/// Interval-marching run of the factorized set, structured exactly like the
/// exact hierarchy (same previous-interval stores) plus the growing records
/// the nonlinear terms read: the emitter density for the delayed saturation
/// factors and the origin channels for their own delayed return.
[[nodiscard]] RunResult run(const ModelParams& params, const TimeGrid& grid,
                            const InitialState& initial, const Options& options = {});

/// Convenience wrapper for the many-photon scenario: cavity seeded with n0
/// photons, emitter in the ground state.
[[nodiscard]] RunResult run_with_photons(const ModelParams& params, const TimeGrid& grid,
                                         double n0, const Options& options = {});

}  // namespace qfb::factorized
