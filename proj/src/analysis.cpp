#include "qfb/analysis.hpp"

#include <cmath>

namespace qfb::analysis {

std::vector<double> real_part(const ComplexTrajectory& tr) {
    std::vector<double> out;
    out.reserve(tr.size());
    for (const auto& v : tr.values()) out.push_back(v.real());
    return out;
}

double max_imag(const ComplexTrajectory& tr) {
    double worst = 0.0;
    for (const auto& v : tr.values()) worst = std::max(worst, std::abs(v.imag()));
    return worst;
}

std::vector<Peak> local_maxima(const std::vector<double>& y, double start_time, double dt,
                               long first, long last) {
    std::vector<Peak> peaks;
    const long lo = std::max(first, 1L);
    const long hi = std::min(last, static_cast<long>(y.size()) - 2);
    for (long s = lo; s <= hi; ++s) {
        const double a = y[s - 1], b = y[s], c = y[s + 1];
        if (b > a && b >= c) {
            double value = b;
            double shift = 0.0;
            const double den = a - 2.0 * b + c;
            if (den < 0.0) {
                shift = 0.5 * (a - c) / den;
                value = b - 0.25 * (a - c) * shift;
            }
            peaks.push_back({s, start_time + (static_cast<double>(s) + shift) * dt, value});
        }
    }
    return peaks;
}

double coefficient_of_variation(const std::vector<Peak>& peaks) {
    if (peaks.size() < 2) return 0.0;
    double mean = 0.0;
    for (const auto& p : peaks) mean += p.value;
    mean /= static_cast<double>(peaks.size());
    double var = 0.0;
    for (const auto& p : peaks) var += (p.value - mean) * (p.value - mean);
    var /= static_cast<double>(peaks.size());
    return std::sqrt(var) / mean;
}

double mean_peak_spacing(const std::vector<Peak>& peaks) {
    if (peaks.size() < 2) return 0.0;
    return (peaks.back().time - peaks.front().time) / static_cast<double>(peaks.size() - 1);
}

double fit_decay_rate(const std::vector<double>& y, double dt, long first, long last) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    long n = 0;
    for (long s = first; s <= last; ++s) {
        if (y[s] <= 0.0) throw Error("decay fit needs positive samples");
        const double t = static_cast<double>(s) * dt;
        const double ly = std::log(y[s]);
        sx += t;
        sy += ly;
        sxx += t * t;
        sxy += t * ly;
        ++n;
    }
    if (n < 2) throw Error("decay fit needs at least two samples");
    const double dn = static_cast<double>(n);
    return -(dn * sxy - sx * sy) / (dn * sxx - sx * sx);
}

Deviation deviation_stats(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw GridMismatch("deviation needs equal-length samples");
    Deviation d;
    double acc = 0.0;
    for (std::size_t s = 0; s < a.size(); ++s) {
        const double dev = std::abs(a[s] - b[s]);
        acc += dev;
        if (dev > d.max) {
            d.max = dev;
            d.argmax = static_cast<long>(s);
        }
    }
    d.mean = a.empty() ? 0.0 : acc / static_cast<double>(a.size());
    return d;
}

long second_difference_spike(const std::vector<double>& y) {
    long best = 1;
    double best_mag = -1.0;
    for (std::size_t s = 1; s + 1 < y.size(); ++s) {
        const double mag = std::abs(y[s - 1] - 2.0 * y[s] + y[s + 1]);
        if (mag > best_mag) {
            best_mag = mag;
            best = static_cast<long>(s);
        }
    }
    return best;
}

}  // namespace qfb::analysis
