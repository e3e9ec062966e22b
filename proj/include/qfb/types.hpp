#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qfb {

using cplx = std::complex<double>;

// ---------------------------------------------------------------------------
// Error types
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct NonPositiveTau : Error {
    explicit NonPositiveTau(const std::string& msg) : Error(msg) {}
};
struct NegativeRate : Error {
    explicit NegativeRate(const std::string& msg) : Error(msg) {}
};
struct GridMisaligned : Error {
    explicit GridMisaligned(const std::string& msg) : Error(msg) {}
};
struct NegativeTime : Error {
    explicit NegativeTime(const std::string& msg) : Error(msg) {}
};
struct OutOfRangeTime : Error {
    explicit OutOfRangeTime(const std::string& msg) : Error(msg) {}
};
struct UnsupportedCoupling : Error {
    explicit UnsupportedCoupling(const std::string& msg) : Error(msg) {}
};
struct DriveLengthMismatch : Error {
    explicit DriveLengthMismatch(const std::string& msg) : Error(msg) {}
};
struct WindowTooNarrow : Error {
    explicit WindowTooNarrow(const std::string& msg) : Error(msg) {}
};
struct TooFewModes : Error {
    explicit TooFewModes(const std::string& msg) : Error(msg) {}
};
struct MissingMemory : Error {
    explicit MissingMemory(const std::string& msg) : Error(msg) {}
};
struct GridMismatch : Error {
    explicit GridMismatch(const std::string& msg) : Error(msg) {}
};
struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

/// Divergence detected during integration; carries the offending step.
struct NonFiniteState : Error {
    long step;
    NonFiniteState(const std::string& msg, long step_index)
        : Error(msg + " at step " + std::to_string(step_index)), step(step_index) {}
};

// ---------------------------------------------------------------------------
// Physical parameters
// ---------------------------------------------------------------------------

/// Physical rates and delay of the feedback model, in the frame rotating at
/// the system frequency. Bare optical frequencies never appear; the only
/// trace of them is the roundtrip phase folded into the complex feedback
/// rate gamma_tau() = gamma * exp(i*phase).
struct ModelParams {
    double gamma = 1.0;     ///< decay / feedback strength (1/time), >= 0
    double tau = 1.0;       ///< roundtrip delay (time), > 0
    double coupling = 0.0;  ///< emitter-cavity exchange strength M (1/time), >= 0
    double phase = 0.0;     ///< feedback phase, radians

    [[nodiscard]] cplx gamma_tau() const {
        return cplx(gamma * std::cos(phase), gamma * std::sin(phase));
    }
};

// ---------------------------------------------------------------------------
// Delay-aligned time grid
// ---------------------------------------------------------------------------

/// Uniform grid with the delay an exact integer number of steps.
/// Time is always derived from the integer step index (t = s*dt), never by
/// summation, so corner detection at t = i*tau is a pure integer test.
class TimeGrid {
public:
    TimeGrid(double tau, long steps_per_tau, long n_intervals)
        : tau_(tau), steps_per_tau_(steps_per_tau), n_intervals_(n_intervals) {
        if (!(tau > 0.0)) throw NonPositiveTau("tau must be positive");
        if (steps_per_tau < 1) throw GridMisaligned("steps_per_tau must be >= 1");
        if (n_intervals < 1) throw GridMisaligned("n_intervals must be >= 1");
        dt_ = tau_ / static_cast<double>(steps_per_tau_);
    }

    /// Build from an explicit step size; fails unless tau/dt is an integer
    /// (to within 1e-9 relative, then snapped exactly).
    static TimeGrid from_dt(double tau, double dt, long n_intervals) {
        if (!(tau > 0.0)) throw NonPositiveTau("tau must be positive");
        if (!(dt > 0.0)) throw GridMisaligned("dt must be positive");
        const double ratio = tau / dt;
        const double snapped = std::round(ratio);
        if (snapped < 1.0 || std::abs(ratio - snapped) > 1e-9 * snapped) {
            throw GridMisaligned("tau/dt = " + std::to_string(ratio) +
                                 " is not an integer: delay-aligned grid required");
        }
        return TimeGrid(tau, static_cast<long>(snapped), n_intervals);
    }

    [[nodiscard]] double tau() const { return tau_; }
    [[nodiscard]] double dt() const { return dt_; }
    [[nodiscard]] long steps_per_tau() const { return steps_per_tau_; }
    [[nodiscard]] long n_intervals() const { return n_intervals_; }
    [[nodiscard]] long total_steps() const { return steps_per_tau_ * n_intervals_; }
    [[nodiscard]] double horizon() const { return time_of(total_steps()); }

    [[nodiscard]] double time_of(long step) const { return static_cast<double>(step) * dt_; }
    [[nodiscard]] long index_of(double t) const { return std::lround(t / dt_); }

    [[nodiscard]] long interval_of(long step) const { return step / steps_per_tau_; }
    [[nodiscard]] bool is_corner(long step) const { return step % steps_per_tau_ == 0; }

private:
    double tau_;
    long steps_per_tau_;
    long n_intervals_;
    double dt_;
};

// ---------------------------------------------------------------------------
// Sampled complex time series
// ---------------------------------------------------------------------------

/// Contiguous complex samples at spacing dt starting at start_time.
class ComplexTrajectory {
public:
    ComplexTrajectory() = default;
    ComplexTrajectory(double start_time, double dt, std::vector<cplx> values)
        : start_time_(start_time), dt_(dt), values_(std::move(values)) {}

    [[nodiscard]] double start_time() const { return start_time_; }
    [[nodiscard]] double dt() const { return dt_; }
    [[nodiscard]] std::size_t size() const { return values_.size(); }
    [[nodiscard]] bool empty() const { return values_.empty(); }

    [[nodiscard]] const cplx& at(std::size_t i) const {
        if (i >= values_.size())
            throw OutOfRangeTime("trajectory index " + std::to_string(i) +
                                 " outside span of " + std::to_string(values_.size()));
        return values_[i];
    }
    [[nodiscard]] const cplx& operator[](std::size_t i) const { return values_[i]; }
    [[nodiscard]] double time_of(std::size_t i) const {
        return start_time_ + static_cast<double>(i) * dt_;
    }
    [[nodiscard]] const std::vector<cplx>& values() const { return values_; }
    [[nodiscard]] std::vector<cplx>& values() { return values_; }

private:
    double start_time_ = 0.0;
    double dt_ = 0.0;
    std::vector<cplx> values_;
};

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

/// Check a (params, grid) pair; returns human-readable violations, empty when
/// the configuration is usable. Throwing variant below.
[[nodiscard]] std::vector<std::string> validate(const ModelParams& params, const TimeGrid& grid);

/// Same checks as validate(), throwing the first violation.
void validate_or_throw(const ModelParams& params, const TimeGrid& grid);

}  // namespace qfb
