#include "blocksplit/oracle.hpp"

#include <cmath>
#include <string>

namespace blocksplit {

void require_finite(const Vector& v, const char* what) {
    if (!v.allFinite()) {
        throw NonFiniteError(std::string("non-finite values in ") + what);
    }
}

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) {
        throw NonFiniteError(std::string("non-finite value in ") + what);
    }
}

BlockVector BlockVector::split(const Vector& z, Index dim_x) {
    if (dim_x < 0 || dim_x > z.size()) {
        throw InvalidInput("split point outside vector");
    }
    return {z.head(dim_x), z.tail(z.size() - dim_x)};
}

Vector BlockVector::joined() const {
    Vector z(x.size() + y.size());
    z << x, y;
    return z;
}

void BlockConstants::validate() const {
    auto ok = [](double mu, double L) {
        return std::isfinite(mu) && std::isfinite(L) && L > 0.0 && mu >= 0.0 && mu <= L;
    };
    if (!ok(mu_x, L_x)) {
        throw InvalidInput("invalid x-block constants: need 0 <= mu_x <= L_x, L_x > 0");
    }
    if (!ok(mu_y, L_y)) {
        throw InvalidInput("invalid y-block constants: need 0 <= mu_y <= L_y, L_y > 0");
    }
}

void BlockConstants::require_strongly_convex() const {
    validate();
    if (!(mu_x > 0.0) || !(mu_y > 0.0)) {
        throw InvalidInput("problem is not strongly convex in every block (regularize it first)");
    }
}

BlockObjective::BlockObjective(Index dim_x, Index dim_y, BlockConstants constants)
    : dim_x_(dim_x), dim_y_(dim_y), constants_(constants) {
    if (dim_x < 1 || dim_y < 1) {
        throw InvalidInput("block dimensions must be at least 1");
    }
    constants_.validate();
}

void BlockObjective::check_dims(const Vector& x, const Vector& y) const {
    if (x.size() != dim_x_ || y.size() != dim_y_) {
        throw InvalidInput("point dimensions (" + std::to_string(x.size()) + ", " +
                           std::to_string(y.size()) + ") do not match problem (" +
                           std::to_string(dim_x_) + ", " + std::to_string(dim_y_) + ")");
    }
}

double BlockObjective::eval(const Vector& x, const Vector& y) const {
    eval_calls_.fetch_add(1, std::memory_order_relaxed);
    return value(x, y);
}

Vector BlockObjective::grad_x(const Vector& x, const Vector& y) const {
    grad_x_calls_.fetch_add(1, std::memory_order_relaxed);
    return partial_x(x, y);
}

Vector BlockObjective::grad_y(const Vector& x, const Vector& y) const {
    grad_y_calls_.fetch_add(1, std::memory_order_relaxed);
    return partial_y(x, y);
}

double BlockObjective::value(const Vector& x, const Vector& y) const {
    check_dims(x, y);
    const double v = compute_value(x, y);
    require_finite(v, "objective value");
    return v;
}

Vector BlockObjective::partial_x(const Vector& x, const Vector& y) const {
    check_dims(x, y);
    Vector g = compute_grad_x(x, y);
    require_finite(g, "x-gradient");
    return g;
}

Vector BlockObjective::partial_y(const Vector& x, const Vector& y) const {
    check_dims(x, y);
    Vector g = compute_grad_y(x, y);
    require_finite(g, "y-gradient");
    return g;
}

double BlockObjective::value_difference(const Vector& x2, const Vector& y2, const Vector& x1,
                                        const Vector& y1) const {
    return value(x2, y2) - value(x1, y1);
}

double BlockObjective::suboptimality(const Vector& x, const Vector& y, const BlockVector*,
                                     double f_star) const {
    return value(x, y) - f_star;
}

OracleCounters BlockObjective::counters() const {
    return {grad_x_calls_.load(std::memory_order_relaxed),
            grad_y_calls_.load(std::memory_order_relaxed),
            eval_calls_.load(std::memory_order_relaxed)};
}

void BlockObjective::reset_counters() const {
    grad_x_calls_.store(0, std::memory_order_relaxed);
    grad_y_calls_.store(0, std::memory_order_relaxed);
    eval_calls_.store(0, std::memory_order_relaxed);
}

} // namespace blocksplit
