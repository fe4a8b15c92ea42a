#pragma once

#include "blocksplit/logistic.hpp"
#include "blocksplit/quadratic.hpp"
#include "blocksplit/trace.hpp"

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

namespace blocksplit {

inline constexpr int kArchiveFormatVersion = 1;

/// A logistic instance is archived by reference to its dataset file.
struct LogisticArchive {
    std::string dataset;        // path; relative paths resolve against the archive, then BLOCKSPLIT_DATA_DIR
    std::string dataset_fnv1a;  // optional content hash, checked on load when non-empty
    Index dim_x = 100;
    Index dim_y = 19;
    double lambda_x = 0.005;
    double lambda_y = 0.001;
    std::optional<double> L_data;
};

struct LoadedProblem {
    std::string type;  // "quadratic" or "logistic"
    std::unique_ptr<BlockObjective> problem;
    /// Closed-form reference, quadratics only.
    std::optional<Reference> reference;
    std::optional<QuadraticSpec> spec;
    std::optional<LogisticArchive> logistic;
};

std::string archive_json(const QuadraticProblem& problem);
std::string archive_json(const LogisticArchive& archive);

/// Rejects unknown keys, a wrong format tag, or a newer format_version.
/// `base_dir` anchors relative dataset paths.
LoadedProblem load_archive_json(std::string_view text,
                                const std::filesystem::path& base_dir = {});

void save_archive(const QuadraticProblem& problem, const std::filesystem::path& path);
void save_archive(const LogisticArchive& archive, const std::filesystem::path& path);
LoadedProblem load_archive(const std::filesystem::path& path);

/// $BLOCKSPLIT_DATA_DIR, or "./data" when unset.
std::filesystem::path data_dir();

/// Resolves a dataset path: absolute as is, then relative to `base_dir`,
/// then relative to data_dir(). Returns the first existing candidate, or
/// the data_dir() candidate when none exists.
std::filesystem::path resolve_dataset(const std::string& name,
                                      const std::filesystem::path& base_dir = {});

} // namespace blocksplit
