#include "blocksplit/libsvm.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace blocksplit {

LibsvmParseError::LibsvmParseError(std::size_t line, const std::string& message)
    : InvalidInput("libsvm line " + std::to_string(line) + ": " + message), line_(line) {}

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

template <class T>
bool parse_number(std::string_view s, T& out) {
    if (!s.empty() && s.front() == '+') {
        s.remove_prefix(1);
    }
    if (s.empty()) {
        return false;
    }
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

void parse_line(std::string_view line, std::size_t line_no, LibsvmDataset& data) {
    std::size_t pos = 0;
    auto next_token = [&]() -> std::string_view {
        while (pos < line.size() && is_space(line[pos])) {
            ++pos;
        }
        const std::size_t start = pos;
        while (pos < line.size() && !is_space(line[pos])) {
            ++pos;
        }
        return line.substr(start, pos - start);
    };

    std::string_view token = next_token();
    if (token.empty()) {
        return;
    }
    double label = 0.0;
    if (!parse_number(token, label)) {
        throw LibsvmParseError(line_no, "bad label '" + std::string(token) + "'");
    }
    LibsvmRow row;
    if (label == 1.0) {
        row.label = 1.0;
    } else if (label == -1.0 || label == 0.0) {
        row.label = -1.0;
    } else {
        throw LibsvmParseError(line_no, "label must be +1, -1 or 0, got '" + std::string(token) +
                                            "'");
    }

    long long last = 0;
    while (!(token = next_token()).empty()) {
        const auto colon = token.find(':');
        if (colon == std::string_view::npos) {
            throw LibsvmParseError(line_no, "expected idx:val, got '" + std::string(token) + "'");
        }
        long long idx = 0;
        double value = 0.0;
        if (!parse_number(token.substr(0, colon), idx)) {
            throw LibsvmParseError(line_no, "bad index in '" + std::string(token) + "'");
        }
        if (!parse_number(token.substr(colon + 1), value) || !std::isfinite(value)) {
            throw LibsvmParseError(line_no, "bad value in '" + std::string(token) + "'");
        }
        if (idx < 1) {
            throw LibsvmParseError(line_no, "indices are 1-based, got " + std::to_string(idx));
        }
        if (idx <= last) {
            throw LibsvmParseError(line_no, "indices must be strictly increasing (" +
                                                std::to_string(idx) + " after " +
                                                std::to_string(last) + ")");
        }
        last = idx;
        row.features.push_back({static_cast<Index>(idx - 1), value});
    }
    if (last > data.n_features) {
        data.n_features = static_cast<Index>(last);
    }
    data.rows.push_back(std::move(row));
}

} // namespace

LibsvmDataset parse_libsvm(std::istream& in) {
    LibsvmDataset data;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        parse_line(line, line_no, data);
    }
    if (in.bad()) {
        throw InvalidInput("libsvm: read error");
    }
    return data;
}

LibsvmDataset parse_libsvm(std::string_view text) {
    LibsvmDataset data;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        parse_line(text.substr(0, nl), line_no, data);
        if (nl == std::string_view::npos) {
            break;
        }
        text.remove_prefix(nl + 1);
    }
    return data;
}

LibsvmDataset load_libsvm(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidInput("libsvm: cannot open " + path.string());
    }
    return parse_libsvm(in);
}

void write_libsvm(const LibsvmDataset& data, std::ostream& out) {
    std::ostringstream buf;
    buf.imbue(std::locale::classic());
    buf.precision(17);
    for (const auto& row : data.rows) {
        buf << (row.label > 0.0 ? "+1" : "-1");
        for (const auto& e : row.features) {
            buf << ' ' << (e.index + 1) << ':' << e.value;
        }
        buf << '\n';
    }
    out << buf.str();
}

SparseRowMatrix feature_matrix(const LibsvmDataset& data, Index first_col, Index n_cols) {
    if (first_col < 0 || n_cols < 0) {
        throw InvalidInput("feature_matrix: negative column range");
    }
    std::vector<Eigen::Triplet<double>> triplets;
    for (std::size_t r = 0; r < data.rows.size(); ++r) {
        for (const auto& e : data.rows[r].features) {
            if (e.index >= first_col && e.index < first_col + n_cols) {
                triplets.emplace_back(static_cast<Index>(r), e.index - first_col, e.value);
            }
        }
    }
    SparseRowMatrix M(static_cast<Index>(data.rows.size()), n_cols);
    M.setFromTriplets(triplets.begin(), triplets.end());
    M.makeCompressed();
    return M;
}

} // namespace blocksplit
