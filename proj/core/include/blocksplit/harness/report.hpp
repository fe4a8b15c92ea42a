#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace blocksplit::harness {

struct MethodSummary {
    std::string method;
    std::size_t runs = 0;
    std::size_t failed = 0;
    /// Medians over seeds of the first row reaching eps (absent when no run got there).
    std::optional<double> grad_x_to_eps;
    std::optional<double> grad_y_to_eps;
    double final_gap = 0.0;
    double final_grad_x = 0.0;
    double final_grad_y = 0.0;
};

struct ExperimentSummary {
    std::string name;
    std::optional<double> eps;
    std::vector<MethodSummary> methods;
};

/// Reads metadata.json and the traces it lists.
ExperimentSummary summarize(const std::filesystem::path& dir);

/// Fixed-width comparison table.
std::string format_table(const ExperimentSummary& summary);

} // namespace blocksplit::harness
