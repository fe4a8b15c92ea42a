#pragma once

#include "blocksplit/common.hpp"

#include <Eigen/SparseCore>

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace blocksplit {

struct SparseEntry {
    Index index = 0;  // 0-based
    double value = 0.0;

    friend bool operator==(const SparseEntry&, const SparseEntry&) = default;
};

struct LibsvmRow {
    double label = 1.0;  // -1 or +1
    std::vector<SparseEntry> features;

    friend bool operator==(const LibsvmRow&, const LibsvmRow&) = default;
};

struct LibsvmDataset {
    std::vector<LibsvmRow> rows;
    Index n_features = 0;

    std::size_t size() const { return rows.size(); }
    bool empty() const { return rows.empty(); }
};

class LibsvmParseError : public InvalidInput {
public:
    LibsvmParseError(std::size_t line, const std::string& message);
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Labels +1/1 map to +1, -1/0 to -1; blank lines are skipped. Indices must
/// be 1-based and strictly increasing within a line.
LibsvmDataset parse_libsvm(std::istream& in);
LibsvmDataset parse_libsvm(std::string_view text);
LibsvmDataset load_libsvm(const std::filesystem::path& path);

/// Values and labels are written with 17 significant digits, so a parse of
/// the output reproduces the dataset exactly.
void write_libsvm(const LibsvmDataset& data, std::ostream& out);

using SparseRowMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Rows x columns [first_col, first_col + n_cols) of the feature matrix.
SparseRowMatrix feature_matrix(const LibsvmDataset& data, Index first_col, Index n_cols);

} // namespace blocksplit
