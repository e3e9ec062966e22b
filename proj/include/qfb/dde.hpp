#pragma once

#include <cstddef>
#include <vector>

#include "qfb/types.hpp"

namespace qfb::dde {

using cvec = std::vector<cplx>;

// ---------------------------------------------------------------------------
// Linear delay system  x'(t) = A x(t) + B x(t - tau) Theta(t - tau)
// ---------------------------------------------------------------------------

/// Dense complex system matrices, row-major. History on [-tau, 0) is
/// implicitly zero; the Theta gate means it never enters before t = tau.
struct LinearDdeSystem {
    std::size_t dim = 1;
    std::vector<cplx> instantaneous;  ///< A, dim x dim row-major
    std::vector<cplx> delayed;        ///< B, dim x dim row-major
    double tau = 1.0;
    cvec initial_state;

    [[nodiscard]] const cplx& a(std::size_t r, std::size_t c) const {
        return instantaneous[r * dim + c];
    }
    [[nodiscard]] const cplx& b(std::size_t r, std::size_t c) const {
        return delayed[r * dim + c];
    }
};

/// Soft stiffness check: max row sum of |A| times dt should stay below 0.1.
[[nodiscard]] bool step_size_warning(const LinearDdeSystem& system, const TimeGrid& grid);

// ---------------------------------------------------------------------------
// Stage bookkeeping for the fixed-step RK4 march
// ---------------------------------------------------------------------------

/// Stage abscissa within one step: offsets 0, dt/2 and dt from the base index.
enum class StageOffset : int { base = 0, half = 1, full = 2 };

/// Classical RK4 over n_steps of size dt. The right-hand side is invoked as
///   rhs(step, StageOffset, x_stage, dxdt)
/// in the order k1 (base), k2 (half), k3 (half), k4 (full); the base call
/// always comes first so callbacks may record the exact derivative at the
/// accepted point. After each step, accept(step + 1, x, k4) is called with
/// the newly accepted state.
template <typename Rhs, typename Accept>
void rk4_march(std::size_t dim, cvec& x, long first_step, long n_steps, double dt,
               Rhs&& rhs, Accept&& accept) {
    cvec k1(dim), k2(dim), k3(dim), k4(dim), xs(dim);
    const double h2 = 0.5 * dt;
    const double h6 = dt / 6.0;
    for (long s = first_step; s < first_step + n_steps; ++s) {
        rhs(s, StageOffset::base, x, k1);
        for (std::size_t i = 0; i < dim; ++i) xs[i] = x[i] + h2 * k1[i];
        rhs(s, StageOffset::half, xs, k2);
        for (std::size_t i = 0; i < dim; ++i) xs[i] = x[i] + h2 * k2[i];
        rhs(s, StageOffset::half, xs, k3);
        for (std::size_t i = 0; i < dim; ++i) xs[i] = x[i] + dt * k3[i];
        rhs(s, StageOffset::full, xs, k4);
        for (std::size_t i = 0; i < dim; ++i)
            x[i] += h6 * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
        accept(s + 1, x, k4);
    }
}

// ---------------------------------------------------------------------------
// History ring with dense segment reads
// ---------------------------------------------------------------------------

/// Ring buffer over the last delay_steps + 2 accepted points. Each segment
/// [m, m+1] keeps the accepted value, the exact derivative at its left end
/// and the k4 stage derivative at its right end, so delayed values at grid
/// points are exact lookups and half-step values come from cubic Hermite
/// interpolation consistent with the step that produced the segment.
class HistoryBuffer {
public:
    HistoryBuffer(std::size_t dim, long delay_steps)
        : dim_(dim), capacity_(static_cast<std::size_t>(delay_steps) + 2),
          value_(capacity_ * dim), f_left_(capacity_ * dim), f_right_(capacity_ * dim) {}

    /// Record the base value and its derivative when a step starts (the k1 call).
    void begin_segment(long step, const cvec& value, const cvec& deriv) {
        const std::size_t at = slot(step) * dim_;
        for (std::size_t i = 0; i < dim_; ++i) {
            value_[at + i] = value[i];
            f_left_[at + i] = deriv[i];
        }
    }

    /// Record the k4 stage derivative when the step is accepted.
    void end_segment(long step, const cvec& k4) {
        const std::size_t at = slot(step) * dim_;
        for (std::size_t i = 0; i < dim_; ++i) f_right_[at + i] = k4[i];
    }

    /// Exact value at a grid index; indices before step 0 read as zero.
    void read(long step, cvec& out) const {
        if (step < 0) {
            for (std::size_t i = 0; i < dim_; ++i) out[i] = cplx(0.0, 0.0);
            return;
        }
        const std::size_t at = slot(step) * dim_;
        for (std::size_t i = 0; i < dim_; ++i) out[i] = value_[at + i];
    }

    /// Hermite value at the midpoint of segment [m, m+1].
    void read_half(long m, double dt, cvec& out) const {
        if (m < 0) {
            for (std::size_t i = 0; i < dim_; ++i) out[i] = cplx(0.0, 0.0);
            return;
        }
        const std::size_t a = slot(m) * dim_;
        const std::size_t b = slot(m + 1) * dim_;
        const double w = dt / 8.0;
        for (std::size_t i = 0; i < dim_; ++i)
            out[i] = 0.5 * (value_[a + i] + value_[b + i]) + w * (f_left_[a + i] - f_right_[a + i]);
    }

private:
    [[nodiscard]] std::size_t slot(long step) const {
        return static_cast<std::size_t>(step % static_cast<long>(capacity_));
    }

    std::size_t dim_;
    std::size_t capacity_;
    std::vector<cplx> value_, f_left_, f_right_;
};

// ---------------------------------------------------------------------------
// Grid-sample interpolation (shared with the correlator memory reads)
// ---------------------------------------------------------------------------

namespace detail {
// Cubic Lagrange weights for the midpoint of segment m inside a 4-point
// stencil clamped to [0, last]; ordered left-edge, interior, right-edge.
inline constexpr double kHalfWeightsLeft[4] = {5.0 / 16, 15.0 / 16, -5.0 / 16, 1.0 / 16};
inline constexpr double kHalfWeightsMid[4] = {-1.0 / 16, 9.0 / 16, 9.0 / 16, -1.0 / 16};
inline constexpr double kHalfWeightsRight[4] = {1.0 / 16, -5.0 / 16, 15.0 / 16, 5.0 / 16};

/// Midpoint of segment [m, m+1] from samples y[0..last] by cubic Lagrange.
/// Requires last >= 3.
inline cplx sample_half(const cplx* y, long last, long m) {
    long a = m - 1;
    const double* w = kHalfWeightsMid;
    if (a < 0) {
        a = 0;
        w = kHalfWeightsLeft;
    } else if (a + 3 > last) {
        a = last - 3;
        w = kHalfWeightsRight;
    }
    return w[0] * y[a] + w[1] * y[a + 1] + w[2] * y[a + 2] + w[3] * y[a + 3];
}
}  // namespace detail

// ---------------------------------------------------------------------------
// Integration entry points
// ---------------------------------------------------------------------------

/// Integrate the homogeneous system over the full grid horizon. Returns one
/// trajectory per state channel, total_steps + 1 samples each, start at t=0.
/// Deterministic: identical inputs give bitwise identical outputs.
[[nodiscard]] std::vector<ComplexTrajectory> integrate(const LinearDdeSystem& system,
                                                       const TimeGrid& grid);

/// Same with an inhomogeneous drive d(t), one sampled trajectory per channel
/// on the same grid (total_steps + 1 samples). Midpoint stage values of the
/// drive come from clamped cubic interpolation of the samples.
[[nodiscard]] std::vector<ComplexTrajectory> integrate_with_drive(
    const LinearDdeSystem& system, const std::vector<ComplexTrajectory>& drive,
    const TimeGrid& grid);

}  // namespace qfb::dde
