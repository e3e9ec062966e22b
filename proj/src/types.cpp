#include "qfb/types.hpp"

namespace qfb {

std::vector<std::string> validate(const ModelParams& params, const TimeGrid& grid) {
    std::vector<std::string> violations;
    if (!(params.tau > 0.0)) violations.push_back("NonPositiveTau: tau must be > 0");
    if (params.gamma < 0.0) violations.push_back("NegativeRate: gamma must be >= 0");
    if (params.coupling < 0.0) violations.push_back("NegativeRate: coupling must be >= 0");
    if (!std::isfinite(params.gamma) || !std::isfinite(params.tau) ||
        !std::isfinite(params.coupling) || !std::isfinite(params.phase))
        violations.push_back("NonFinite: all model parameters must be finite");
    // The grid carries its own tau; the pair is aligned only if they agree.
    if (params.tau > 0.0 && grid.tau() != params.tau)
        violations.push_back("GridMisaligned: grid tau " + std::to_string(grid.tau()) +
                             " differs from model tau " + std::to_string(params.tau));
    return violations;
}

void validate_or_throw(const ModelParams& params, const TimeGrid& grid) {
    if (!(params.tau > 0.0)) throw NonPositiveTau("tau must be > 0");
    if (params.gamma < 0.0) throw NegativeRate("gamma must be >= 0");
    if (params.coupling < 0.0) throw NegativeRate("coupling must be >= 0");
    const auto violations = validate(params, grid);
    if (!violations.empty()) throw GridMisaligned(violations.front());
}

}  // namespace qfb
