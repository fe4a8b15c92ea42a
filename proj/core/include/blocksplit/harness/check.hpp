#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace blocksplit::harness {

struct CheckOptions {
    /// Random quadratics per suite.
    int problems = 20;
    std::uint64_t seed = 1;
    /// Multiplies mu_x before BAM parameters are derived. Values above 1
    /// violate the assumptions and must make the contraction suite fail.
    double mu_x_scale = 1.0;
};

struct SuiteResult {
    std::string name;
    int cases = 0;
    int failures = 0;
    double max_residual = 0.0;
    std::string detail;

    bool passed() const { return failures == 0 && cases > 0; }
};

struct CheckReport {
    std::vector<SuiteResult> suites;

    bool passed() const;
    std::string to_json() const;
};

/// lyapunov, descent, thetas, finite_diff, counters.
const std::vector<std::string>& check_suites();

/// Runs the named suites (all when empty); unknown names throw InvalidInput.
CheckReport run_checks(const std::vector<std::string>& suites, const CheckOptions& options = {});

} // namespace blocksplit::harness
