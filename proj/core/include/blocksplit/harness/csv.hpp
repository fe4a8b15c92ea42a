#pragma once

#include "blocksplit/trace.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace blocksplit::harness {

inline constexpr const char* kTraceHeader = "outer_iter,grad_x_calls,grad_y_calls,f_gap,wall_time_s";
inline constexpr const char* kDiagnosticsHeader = ",psi,lemma1_residual,contraction_ratio";

/// One row per trace row; doubles with 17 significant digits. The
/// wall_time_s cell is left empty unless `wall_time` is set, and missing
/// diagnostics are empty cells.
void write_trace_csv(const Trace& trace, std::ostream& out, bool wall_time);
void write_trace_csv(const Trace& trace, const std::filesystem::path& path, bool wall_time);

/// Inverse of write_trace_csv (method and stop reason are not stored).
Trace read_trace_csv(std::istream& in);
Trace read_trace_csv(const std::filesystem::path& path);

} // namespace blocksplit::harness
