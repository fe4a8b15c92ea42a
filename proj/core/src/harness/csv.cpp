#include "blocksplit/harness/csv.hpp"

#include <fmt/format.h>

#include <charconv>
#include <fstream>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace blocksplit::harness {

namespace {

void put(std::string& line, const std::optional<double>& v) {
    line += ',';
    if (v) {
        line += fmt::format("{:.17g}", *v);
    }
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        cells.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                           : comma - start));
        if (comma == std::string_view::npos) {
            return cells;
        }
        start = comma + 1;
    }
}

template <class T>
T number(std::string_view s, std::size_t line) {
    T v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw InvalidInput("trace csv line " + std::to_string(line) + ": bad number '" +
                           std::string(s) + "'");
    }
    return v;
}

std::optional<double> optional_number(std::string_view s, std::size_t line) {
    if (s.empty()) {
        return std::nullopt;
    }
    if (s == "nan" || s == "-nan") {
        return std::numeric_limits<double>::quiet_NaN();
    }
    if (s == "inf" || s == "-inf") {
        const double inf = std::numeric_limits<double>::infinity();
        return s.front() == '-' ? -inf : inf;
    }
    return number<double>(s, line);
}

} // namespace

void write_trace_csv(const Trace& trace, std::ostream& out, bool wall_time) {
    std::string text = kTraceHeader;
    if (trace.diagnostics) {
        text += kDiagnosticsHeader;
    }
    text += '\n';
    for (const auto& r : trace.rows) {
        text += fmt::format("{},{},{},{:.17g},", r.outer_iter, r.grad_x_calls, r.grad_y_calls,
                            r.f_gap);
        if (wall_time) {
            text += fmt::format("{:.6f}", r.wall_time_s);
        }
        if (trace.diagnostics) {
            put(text, r.psi);
            put(text, r.lemma1_residual);
            put(text, r.contraction_ratio);
        }
        text += '\n';
    }
    out << text;
}

void write_trace_csv(const Trace& trace, const std::filesystem::path& path, bool wall_time) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    write_trace_csv(trace, out, wall_time);
    if (!out) {
        throw std::runtime_error("write failed for " + path.string());
    }
}

Trace read_trace_csv(std::istream& in) {
    Trace trace;
    std::string line;
    if (!std::getline(in, line)) {
        throw InvalidInput("trace csv: empty file");
    }
    if (line == std::string(kTraceHeader) + kDiagnosticsHeader) {
        trace.diagnostics = true;
    } else if (line != kTraceHeader) {
        throw InvalidInput("trace csv: unexpected header '" + line + "'");
    }
    const std::size_t width = trace.diagnostics ? 8 : 5;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        const auto cells = split(line);
        if (cells.size() != width) {
            throw InvalidInput("trace csv line " + std::to_string(line_no) + ": expected " +
                               std::to_string(width) + " cells");
        }
        TraceRow r;
        r.outer_iter = number<std::int64_t>(cells[0], line_no);
        r.grad_x_calls = number<std::uint64_t>(cells[1], line_no);
        r.grad_y_calls = number<std::uint64_t>(cells[2], line_no);
        r.f_gap = optional_number(cells[3], line_no).value_or(0.0);
        r.wall_time_s = optional_number(cells[4], line_no).value_or(0.0);
        if (trace.diagnostics) {
            r.psi = optional_number(cells[5], line_no);
            r.lemma1_residual = optional_number(cells[6], line_no);
            r.contraction_ratio = optional_number(cells[7], line_no);
        }
        trace.rows.push_back(r);
    }
    return trace;
}

Trace read_trace_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InvalidInput("cannot open " + path.string());
    }
    return read_trace_csv(in);
}

} // namespace blocksplit::harness
