#pragma once

#include <span>

namespace blocksplit::harness {

enum class FitMode {
    LogLog,  // slope of log y against log x
    Linear,  // slope of log y against x
};

/// Least-squares slope. Needs at least 4 points, positive ys (and positive
/// xs in LogLog mode) and at least two distinct abscissae.
double fit_rate(std::span<const double> xs, std::span<const double> ys, FitMode mode);

} // namespace blocksplit::harness
