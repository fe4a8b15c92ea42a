#pragma once

#include "blocksplit/logistic.hpp"
#include "blocksplit/trace.hpp"

#include <cstdint>
#include <filesystem>

namespace blocksplit::harness {

struct ReferenceOptions {
    /// Stop once |grad f|^2 / (2 min(mu_x, mu_y)), an upper bound on the gap, is below this.
    double gap_tolerance = 1e-12;
    std::int64_t max_iterations = 5'000'000;
    /// Empty: data_dir() / "reference".
    std::filesystem::path cache_dir;
    bool use_cache = true;
};

struct ReferenceResult {
    Reference reference;
    double gap_bound = 0.0;
    std::int64_t iterations = 0;
    bool from_cache = false;
};

/// Long NAG run on the uncounted channel of a strongly convex problem.
ReferenceResult compute_reference(const BlockObjective& problem, const ReferenceOptions& options = {});

/// compute_reference with a cache keyed by the problem fingerprint.
ReferenceResult logistic_reference(const LogisticProblem& problem,
                                   const ReferenceOptions& options = {});

} // namespace blocksplit::harness
