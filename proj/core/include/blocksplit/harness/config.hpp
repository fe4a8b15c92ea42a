#pragma once

#include "blocksplit/inner.hpp"
#include "blocksplit/quadratic.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace blocksplit::harness {

/// Raised for any config that fails validation; nothing has been written.
class ConfigError : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

struct ProblemConfig {
    std::string type = "quadratic";  // "quadratic", "logistic" or "archive"
    QuadraticSpec quadratic;
    // logistic
    std::string dataset;
    Index dim_x = 100;
    Index dim_y = 19;
    double mu_x = 0.01;
    double mu_y = 0.002;
    std::optional<double> L_data;
    // archive
    std::string archive;
};

inline const std::vector<std::string>& known_methods() {
    static const std::vector<std::string> names{"bam", "nag", "acdm", "lincoupling"};
    return names;
}

bool is_randomized(const std::string& method);

struct MethodConfig {
    std::string name;
    /// Randomized methods default to seeds 1..5; deterministic ones run once.
    std::vector<std::uint64_t> seeds;
    /// 0 keeps the top-level stride.
    std::int64_t stride = 0;
    /// BAM only.
    bool diagnostics = false;
    InnerBudget inner;
};

struct StoppingConfig {
    std::optional<double> eps;
    std::optional<double> psi_ratio;
    std::optional<std::int64_t> max_iterations;
    std::optional<std::uint64_t> max_grad_x_calls;
    std::optional<std::uint64_t> max_grad_y_calls;
};

struct ExperimentConfig {
    std::string name = "experiment";
    ProblemConfig problem;
    std::vector<MethodConfig> methods;
    StoppingConfig stopping;
    std::string output_dir = "out";
    /// 0 picks the method default: every iteration for BAM and NAG, one
    /// epoch (dim_x + dim_y draws) for the randomized methods.
    std::int64_t stride = 0;
    /// Off by default so that reruns give byte-identical CSVs.
    bool record_wall_time = false;

    /// Throws ConfigError on inconsistent settings.
    void validate() const;
    /// Normalized JSON with all defaults filled in (keys sorted).
    std::string canonical_json() const;
};

/// Strict parse: unknown keys anywhere are rejected. Relative archive paths
/// are resolved against `base_dir`.
ExperimentConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

/// Parses a generator spec (the "problem" object of a quadratic config
/// without the "type" key, or with type "quadratic").
QuadraticSpec parse_quadratic_spec(std::string_view json_text);

/// Command-line overrides, applied after parsing and re-validated.
struct Overrides {
    std::optional<std::uint64_t> seed;  // quadratic generator seed
    std::optional<std::string> out;
    std::optional<double> eps;
    std::optional<std::vector<std::string>> methods;  // keeps matching entries, adds missing ones
    std::optional<std::int64_t> stride;
};

void apply_overrides(ExperimentConfig& config, const Overrides& overrides);

/// Splits "bam,nag" into names and checks each one.
std::vector<std::string> parse_method_list(std::string_view list);

} // namespace blocksplit::harness
