#pragma once

#include "blocksplit/common.hpp"

#include <atomic>
#include <cstdint>
#include <memory>
#include <string>

namespace blocksplit {

/// A point (x, y) of a two-block problem.
struct BlockVector {
    Vector x;
    Vector y;

    BlockVector() = default;
    BlockVector(Vector x_block, Vector y_block) : x(std::move(x_block)), y(std::move(y_block)) {}

    static BlockVector zeros(Index dim_x, Index dim_y) {
        return {Vector::Zero(dim_x), Vector::Zero(dim_y)};
    }
    /// Splits a concatenated vector z = (x, y) after the first dim_x entries.
    static BlockVector split(const Vector& z, Index dim_x);

    Vector joined() const;
    bool finite() const { return x.allFinite() && y.allFinite(); }
};

/// Certified block constants of the joint smoothness / strong convexity bounds:
///
///   f(p2) <= f(p1) + <grad f(p1), p2 - p1> + L_x/2 |dx|^2 + L_y/2 |dy|^2
///   f(p2) >= f(p1) + <grad f(p1), p2 - p1> + mu_x/2 |dx|^2 + mu_y/2 |dy|^2
///
/// A zero mu marks a block that is convex but not strongly convex; such
/// constants are storable but rejected by every solver.
struct BlockConstants {
    double L_x = 1.0;
    double L_y = 1.0;
    double mu_x = 1.0;
    double mu_y = 1.0;

    double kappa_x() const { return L_x / mu_x; }
    double kappa_y() const { return L_y / mu_y; }
    bool strongly_convex() const { return mu_x > 0.0 && mu_y > 0.0; }

    /// Throws InvalidInput unless 0 <= mu <= L and L > 0 for both blocks.
    void validate() const;
    /// As validate(), additionally requiring mu > 0 for both blocks.
    void require_strongly_convex() const;

    friend bool operator==(const BlockConstants&, const BlockConstants&) = default;
};

/// Immutable snapshot of the per-block oracle counters.
struct OracleCounters {
    std::uint64_t grad_x_calls = 0;
    std::uint64_t grad_y_calls = 0;
    std::uint64_t eval_calls = 0;

    friend bool operator==(const OracleCounters&, const OracleCounters&) = default;
};

/// Block-structured objective f(x, y).
///
/// The counted channel (eval, grad_x, grad_y) is what solvers use and what
/// complexity is measured in. The uncounted channel (value, partial_x,
/// partial_y, suboptimality, value_difference) exists for traces and
/// diagnostics and never touches the counters.
///
/// Instances are immutable after construction except for the counters,
/// which are atomic. Use clone() to get an independent instance with fresh
/// counters for a concurrent run.
class BlockObjective {
public:
    BlockObjective(Index dim_x, Index dim_y, BlockConstants constants);
    virtual ~BlockObjective() = default;

    BlockObjective(const BlockObjective&) = delete;
    BlockObjective& operator=(const BlockObjective&) = delete;

    Index dim_x() const { return dim_x_; }
    Index dim_y() const { return dim_y_; }
    const BlockConstants& constants() const { return constants_; }

    double eval(const Vector& x, const Vector& y) const;
    double eval(const BlockVector& p) const { return eval(p.x, p.y); }
    Vector grad_x(const Vector& x, const Vector& y) const;
    Vector grad_x(const BlockVector& p) const { return grad_x(p.x, p.y); }
    Vector grad_y(const Vector& x, const Vector& y) const;
    Vector grad_y(const BlockVector& p) const { return grad_y(p.x, p.y); }

    double value(const Vector& x, const Vector& y) const;
    double value(const BlockVector& p) const { return value(p.x, p.y); }
    Vector partial_x(const Vector& x, const Vector& y) const;
    Vector partial_y(const Vector& x, const Vector& y) const;

    /// f(x2, y2) - f(x1, y1), uncounted. Subclasses with structure override
    /// this to avoid cancellation.
    virtual double value_difference(const Vector& x2, const Vector& y2, const Vector& x1,
                                    const Vector& y1) const;

    /// f(x, y) - f_star, uncounted. `optimum` may be null.
    virtual double suboptimality(const Vector& x, const Vector& y, const BlockVector* optimum,
                                 double f_star) const;

    OracleCounters counters() const;
    void reset_counters() const;

    virtual std::unique_ptr<BlockObjective> clone() const = 0;
    virtual std::string kind() const = 0;

    void check_dims(const Vector& x, const Vector& y) const;

protected:
    virtual double compute_value(const Vector& x, const Vector& y) const = 0;
    virtual Vector compute_grad_x(const Vector& x, const Vector& y) const = 0;
    virtual Vector compute_grad_y(const Vector& x, const Vector& y) const = 0;

private:
    Index dim_x_;
    Index dim_y_;
    BlockConstants constants_;
    mutable std::atomic<std::uint64_t> grad_x_calls_{0};
    mutable std::atomic<std::uint64_t> grad_y_calls_{0};
    mutable std::atomic<std::uint64_t> eval_calls_{0};
};

} // namespace blocksplit
