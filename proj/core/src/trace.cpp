#include "blocksplit/trace.hpp"

#include <cmath>
#include <limits>

namespace blocksplit {

std::int64_t default_outer_cap(double kappa_x, double eps) {
    if (!(kappa_x >= 1.0) || !(eps > 0.0) || !(eps < 1.0)) {
        throw InvalidInput("default_outer_cap needs kappa_x >= 1 and 0 < eps < 1");
    }
    return static_cast<std::int64_t>(std::ceil(10.0 * std::sqrt(kappa_x) * std::log(1.0 / eps)));
}

std::string to_string(StopReason reason) {
    switch (reason) {
    case StopReason::TargetReached:
        return "target_reached";
    case StopReason::IterationCap:
        return "iteration_cap";
    case StopReason::OracleBudget:
        return "oracle_budget";
    case StopReason::NotStarted:
        return "not_started";
    }
    return "unknown";
}

const TraceRow* Trace::first_below(double eps) const {
    for (const auto& row : rows) {
        if (row.f_gap <= eps) {
            return &row;
        }
    }
    return nullptr;
}

namespace detail {

TraceRecorder::TraceRecorder(std::string method, const BlockObjective& problem,
                             const StoppingPolicy& stop, const Reference* reference,
                             std::int64_t stride)
    : problem_(problem), stop_(stop), reference_(reference), stride_(stride) {
    if (stride < 1) {
        throw InvalidInput("trace stride must be >= 1");
    }
    if (!stop.target_gap && !stop.target_psi_ratio && !stop.max_iterations &&
        !stop.max_grad_x_calls && !stop.max_grad_y_calls) {
        throw InvalidInput("stopping policy sets no criterion");
    }
    if (stop.target_gap && reference == nullptr) {
        throw InvalidInput("a target gap needs a reference optimum value");
    }
    trace_.method = std::move(method);
    const auto c = problem.counters();
    base_x_ = c.grad_x_calls;
    base_y_ = c.grad_y_calls;
}

double TraceRecorder::gap(const Vector& x, const Vector& y) const {
    if (reference_ == nullptr) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    const BlockVector* opt = reference_->optimum ? &*reference_->optimum : nullptr;
    return problem_.suboptimality(x, y, opt, reference_->f_star);
}

bool TraceRecorder::observe(std::int64_t iter, const Vector& x, const Vector& y, bool force,
                            std::optional<double> psi, std::optional<double> lemma1,
                            std::optional<double> contraction, std::optional<double> psi_ratio) {
    const auto c = problem_.counters();
    const std::uint64_t gx = c.grad_x_calls - base_x_;
    const std::uint64_t gy = c.grad_y_calls - base_y_;

    StopReason reason = StopReason::NotStarted;
    if (stop_.target_psi_ratio && psi_ratio && *psi_ratio <= *stop_.target_psi_ratio) {
        reason = StopReason::TargetReached;
    } else if (stop_.max_iterations && iter >= *stop_.max_iterations) {
        reason = StopReason::IterationCap;
    } else if ((stop_.max_grad_x_calls && gx >= *stop_.max_grad_x_calls) ||
               (stop_.max_grad_y_calls && gy >= *stop_.max_grad_y_calls)) {
        reason = StopReason::OracleBudget;
    }

    const bool on_stride = force || iter % stride_ == 0;
    if (!on_stride && reason == StopReason::NotStarted) {
        return false;
    }

    TraceRow row;
    row.outer_iter = iter;
    row.grad_x_calls = gx;
    row.grad_y_calls = gy;
    row.f_gap = gap(x, y);
    row.wall_time_s = clock_.seconds();
    row.psi = psi;
    row.lemma1_residual = lemma1;
    row.contraction_ratio = contraction;
    if (psi || lemma1 || contraction) {
        trace_.diagnostics = true;
    }
    if (stop_.target_gap && row.f_gap <= *stop_.target_gap) {
        reason = StopReason::TargetReached;
    }
    if (iter != last_recorded_) {
        trace_.rows.push_back(row);
        last_recorded_ = iter;
    }
    if (reason != StopReason::NotStarted) {
        trace_.stop = reason;
        return true;
    }
    return false;
}

Trace TraceRecorder::finish() { return std::move(trace_); }

} // namespace detail

} // namespace blocksplit
