#pragma once

#include "blocksplit/harness/config.hpp"
#include "blocksplit/trace.hpp"

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace blocksplit::harness {

/// A problem built from a config together with its reference solution.
struct PreparedProblem {
    std::unique_ptr<BlockObjective> problem;
    Reference reference;
    /// Content hash of external inputs (dataset file), empty for generated problems.
    std::string input_hash;
};

PreparedProblem prepare_problem(const ProblemConfig& config);

struct RunRecord {
    std::string method;
    std::uint64_t seed = 0;
    std::string csv;  // file name within the output directory
    bool ok = false;
    std::string error;
    Trace trace;
};

struct ExperimentResult {
    std::filesystem::path output_dir;
    std::string config_hash;
    std::vector<RunRecord> runs;

    bool all_ok() const;
};

/// Runs every (method, seed) on its own clone of the problem, writes one
/// CSV per run and metadata.json. A failing run is recorded and the others
/// still execute; I/O errors propagate.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Hash over the canonical config, the library version and external inputs.
std::string config_hash(const ExperimentConfig& config, const std::string& input_hash);

std::string csv_name(const std::string& method, std::uint64_t seed, bool randomized);

/// Runs one method; `seed` only matters for the randomized ones.
Trace run_method(const MethodConfig& method, std::uint64_t seed, const BlockObjective& problem,
                 const Reference& reference, const ExperimentConfig& config);

const char* library_version();

} // namespace blocksplit::harness
