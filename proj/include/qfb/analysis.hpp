#pragma once

#include <cstddef>
#include <vector>

#include "qfb/types.hpp"

namespace qfb::analysis {

/// Real parts of a complex trajectory.
[[nodiscard]] std::vector<double> real_part(const ComplexTrajectory& tr);

/// Largest |imaginary part| over the trajectory (hermiticity residue).
[[nodiscard]] double max_imag(const ComplexTrajectory& tr);

struct Peak {
    long index;
    double time;
    double value;  ///< parabola-refined height
};

/// Strict local maxima of y over sample indices (first, last), refined by a
/// three-point parabola.
[[nodiscard]] std::vector<Peak> local_maxima(const std::vector<double>& y, double start_time,
                                             double dt, long first, long last);

/// Standard deviation over mean of the peak heights; 0 for fewer than two peaks.
[[nodiscard]] double coefficient_of_variation(const std::vector<Peak>& peaks);

/// Mean spacing between successive peaks; 0 for fewer than two peaks.
[[nodiscard]] double mean_peak_spacing(const std::vector<Peak>& peaks);

/// Least-squares slope of log(y) over sample indices [first, last]; y must be
/// positive there. Returns the decay rate r for y ~ exp(-r t).
[[nodiscard]] double fit_decay_rate(const std::vector<double>& y, double dt, long first,
                                    long last);

struct Deviation {
    double max = 0.0;
    double mean = 0.0;
    long argmax = 0;
};

/// Pointwise |a - b| statistics; lengths must match.
[[nodiscard]] Deviation deviation_stats(const std::vector<double>& a,
                                        const std::vector<double>& b);

/// Largest second difference of y, located by sample index: a first-derivative
/// discontinuity shows up as a spike there.
[[nodiscard]] long second_difference_spike(const std::vector<double>& y);

}  // namespace qfb::analysis
