#pragma once

#include "blocksplit/oracle.hpp"

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace blocksplit {

/// Known solution used for f-gap and Lyapunov diagnostics.
struct Reference {
    std::optional<BlockVector> optimum;
    double f_star = 0.0;
};

/// When to stop a run. Every solver honours the same policy so traces are
/// directly comparable. At least one of target_gap / target_psi_ratio /
/// max_iterations must be set; max_iterations is always enforced when set.
struct StoppingPolicy {
    std::optional<double> target_gap;        // f(iterate) - f* <= target_gap (needs Reference)
    std::optional<double> target_psi_ratio;  // Psi^k / Psi^0 <= ratio (BAM only, needs optimum)
    std::optional<std::int64_t> max_iterations;
    std::optional<std::uint64_t> max_grad_x_calls;
    std::optional<std::uint64_t> max_grad_y_calls;

    static StoppingPolicy gap(double eps) { return {eps, {}, {}, {}, {}}; }
    static StoppingPolicy iterations(std::int64_t k) { return {{}, {}, k, {}, {}}; }
};

/// Safety cap on BAM outer iterations for a target gap: ceil(10 sqrt(kappa_x) ln(1/eps)).
std::int64_t default_outer_cap(double kappa_x, double eps);

enum class StopReason { TargetReached, IterationCap, OracleBudget, NotStarted };

std::string to_string(StopReason reason);

struct TraceRow {
    std::int64_t outer_iter = 0;
    std::uint64_t grad_x_calls = 0;
    std::uint64_t grad_y_calls = 0;
    double f_gap = 0.0;
    double wall_time_s = 0.0;
    std::optional<double> psi;
    std::optional<double> lemma1_residual;
    std::optional<double> contraction_ratio;
};

/// Convergence history keyed by per-block oracle counts.
struct Trace {
    std::string method;
    std::vector<TraceRow> rows;
    bool diagnostics = false;
    StopReason stop = StopReason::NotStarted;

    const TraceRow& last() const { return rows.back(); }
    /// First row whose f_gap <= eps, if any.
    const TraceRow* first_below(double eps) const;
};

/// Monotonic stopwatch started at construction.
class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

namespace detail {

/// Shared bookkeeping for iterative solvers: stride sampling, the stopping
/// policy, and row construction from a counter snapshot.
class TraceRecorder {
public:
    TraceRecorder(std::string method, const BlockObjective& problem, const StoppingPolicy& stop,
                  const Reference* reference, std::int64_t stride);

    /// Records a row when `iter` is on the stride (or `force`), and returns
    /// true when the run should stop after this iteration.
    bool observe(std::int64_t iter, const Vector& x, const Vector& y, bool force = false,
                 std::optional<double> psi = {}, std::optional<double> lemma1 = {},
                 std::optional<double> contraction = {}, std::optional<double> psi_ratio = {});

    Trace finish();
    const Reference* reference() const { return reference_; }
    double gap(const Vector& x, const Vector& y) const;

private:
    Trace trace_;
    const BlockObjective& problem_;
    StoppingPolicy stop_;
    const Reference* reference_;
    std::int64_t stride_;
    Stopwatch clock_;
    std::uint64_t base_x_ = 0;
    std::uint64_t base_y_ = 0;
    std::int64_t last_recorded_ = -1;
};

} // namespace detail

} // namespace blocksplit
