#include "blocksplit/harness/fit.hpp"

#include "blocksplit/common.hpp"

#include <cmath>

namespace blocksplit::harness {

double fit_rate(std::span<const double> xs, std::span<const double> ys, FitMode mode) {
    if (xs.size() != ys.size()) {
        throw InvalidInput("fit_rate: xs and ys differ in length");
    }
    if (xs.size() < 4) {
        throw InvalidInput("fit_rate: need at least 4 points");
    }
    const std::size_t n = xs.size();
    double sx = 0.0;
    double sy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!(ys[i] > 0.0) || !std::isfinite(ys[i]) || !std::isfinite(xs[i])) {
            throw InvalidInput("fit_rate: ys must be positive and finite");
        }
        if (mode == FitMode::LogLog && !(xs[i] > 0.0)) {
            throw InvalidInput("fit_rate: xs must be positive in log-log mode");
        }
        sx += mode == FitMode::LogLog ? std::log(xs[i]) : xs[i];
        sy += std::log(ys[i]);
    }
    const double mx = sx / static_cast<double>(n);
    const double my = sy / static_cast<double>(n);
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double u = (mode == FitMode::LogLog ? std::log(xs[i]) : xs[i]) - mx;
        sxx += u * u;
        sxy += u * (std::log(ys[i]) - my);
    }
    if (!(sxx > 0.0)) {
        throw InvalidInput("fit_rate: all abscissae coincide");
    }
    return sxy / sxx;
}

} // namespace blocksplit::harness
