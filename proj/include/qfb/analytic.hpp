#pragma once

#include <limits>

#include "qfb/types.hpp"

namespace qfb::analytic {

/// Controls for the delay-order sums. Terms with n*tau > t vanish by their
/// Heaviside support, so n_max = floor(t/tau) always suffices; a positive
/// tolerance additionally stops once terms fall below it while shrinking.
struct SeriesTruncation {
    long n_max = std::numeric_limits<long>::max();
    double tolerance = 0.0;
};

/// Excited-state amplitude of the decaying emitter facing its own mirror
/// image: sum over delay orders n of gamma_tau^n (t-n tau)^n
/// exp(-gamma (t-n tau)) / n!, each gated by t >= n tau. Solves
/// x' = -gamma x + gamma_tau x(t-tau) Theta(t-tau) with x(0) = 1.
[[nodiscard]] cplx mirror_emitter_amplitude(const ModelParams& params, double t,
                                            const SeriesTruncation& trunc = {});

/// One-photon ground-state amplitude of the emitter-cavity system with
/// feedback, closed form valid only at coupling = gamma/2. Double sum over
/// delay order n and binomial index k; the inner alternating sum is
/// accumulated by exact ratio recurrences (log-gamma seeded for n > 20).
[[nodiscard]] cplx jcm_ground_amplitude(const ModelParams& params, double t,
                                        const SeriesTruncation& trunc = {});

/// Cavity photon number for the decoupled (coupling = 0) cavity seeded with
/// initial_photons, valid on the first two delay intervals 0 <= t < 2 tau.
[[nodiscard]] double empty_cavity_photon_number(const ModelParams& params,
                                                double initial_photons, double t);

}  // namespace qfb::analytic
