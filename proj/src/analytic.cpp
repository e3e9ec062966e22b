#include "qfb/analytic.hpp"

#include <cmath>

namespace qfb::analytic {

namespace {

constexpr cplx kI(0.0, 1.0);

// gamma_tau^n * x^n * exp(-gamma*x) / n!, switching to log-gamma evaluation
// where the running product would overflow.
cplx delay_term(const ModelParams& p, long n, double x) {
    if (n == 0) return std::exp(-p.gamma * x);
    if (x == 0.0 || p.gamma == 0.0) return cplx(0.0, 0.0);
    const double gx = p.gamma * x;
    if (n > 150 || gx > 600.0) {
        const double log_mag =
            static_cast<double>(n) * std::log(gx) - gx - std::lgamma(static_cast<double>(n) + 1.0);
        return std::polar(std::exp(log_mag), static_cast<double>(n) * p.phase);
    }
    const cplx factor = p.gamma_tau() * x;
    cplx prod(1.0, 0.0);
    for (long k = 1; k <= n; ++k) prod *= factor / static_cast<double>(k);
    return prod * std::exp(-p.gamma * x);
}

}  // namespace

cplx mirror_emitter_amplitude(const ModelParams& params, double t, const SeriesTruncation& trunc) {
    if (t < 0.0) throw NegativeTime("amplitude requested at t < 0");
    cplx sum(0.0, 0.0);
    for (long n = 0;; ++n) {
        const double x = t - static_cast<double>(n) * params.tau;
        if (x < 0.0 || n > trunc.n_max) break;
        const cplx term = delay_term(params, n, x);
        sum += term;
        if (trunc.tolerance > 0.0 && n > 0 && std::abs(term) < trunc.tolerance &&
            params.gamma * x < static_cast<double>(n + 1))
            break;
    }
    return sum;
}

cplx jcm_ground_amplitude(const ModelParams& params, double t, const SeriesTruncation& trunc) {
    if (t < 0.0) throw NegativeTime("amplitude requested at t < 0");
    const double half_gamma = 0.5 * params.gamma;
    if (std::abs(params.coupling - half_gamma) > 1e-12 * std::max(1.0, params.gamma))
        throw UnsupportedCoupling("closed form holds only at coupling = gamma/2");

    cplx sum(0.0, 0.0);
    for (long n = 0;; ++n) {
        const double x = t - static_cast<double>(n) * params.tau;
        if (x < 0.0 || n > trunc.n_max) break;
        if (x == 0.0) continue;  // every inner term carries x^(n+1+k)

        // Inner sum over k of C(n,k) (-gamma/2)^k x^(n+1+k) / (n+1+k)!,
        // relative to the k = 0 term; the ratio recurrence keeps the
        // alternating cancellation exact in structure.
        cplx inner(1.0, 0.0);
        {
            double term = 1.0;
            for (long k = 0; k < n; ++k) {
                term *= -half_gamma * x * static_cast<double>(n - k) /
                        (static_cast<double>(k + 1) * static_cast<double>(n + 2 + k));
                inner += term;
            }
        }

        // Leading factor gamma_tau^n exp(-gamma x / 2) x^(n+1) / (n+1)!.
        cplx lead;
        if (n > 20) {
            const double log_mag = static_cast<double>(n) * std::log(params.gamma) +
                                   static_cast<double>(n + 1) * std::log(x) - half_gamma * x -
                                   std::lgamma(static_cast<double>(n) + 2.0);
            lead = std::polar(std::exp(log_mag), static_cast<double>(n) * params.phase);
        } else {
            cplx prod(1.0, 0.0);
            const cplx gt = params.gamma_tau();
            for (long k = 1; k <= n; ++k) prod *= gt;
            for (long k = 1; k <= n + 1; ++k) prod *= x / static_cast<double>(k);
            lead = prod * std::exp(-half_gamma * x);
        }
        sum += lead * inner;
    }
    return -kI * params.coupling * sum;
}

double empty_cavity_photon_number(const ModelParams& params, double initial_photons, double t) {
    if (t < 0.0) throw NegativeTime("photon number requested at t < 0");
    if (initial_photons < 0.0) throw Error("initial photon number must be >= 0");
    if (t >= 2.0 * params.tau)
        throw OutOfRangeTime("closed forms cover only the first two delay intervals");

    const double n0 = initial_photons;
    const double g = params.gamma;
    if (t < params.tau) return n0 * std::exp(-2.0 * g * t);

    const double u = t - params.tau;
    const cplx gt = params.gamma_tau();
    const double mag2 = std::norm(gt);
    return n0 * mag2 * std::exp(-2.0 * g * u) * u * u +
           2.0 * n0 * gt.real() * std::exp(-g * (2.0 * t - params.tau)) * u +
           n0 * std::exp(-2.0 * g * t);
}

}  // namespace qfb::analytic
