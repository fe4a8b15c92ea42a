#include "blocksplit/inner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace blocksplit {

AuxProblem::AuxProblem(const BlockObjective& base, Vector x_under, Vector y_center, double rho)
    : base_(&base), x_under_(std::move(x_under)), y_center_(std::move(y_center)), rho_(rho) {
    base.check_dims(x_under_, y_center_);
    if (!(rho > 0.0) || !std::isfinite(rho)) {
        throw InvalidInput("proximal weight must be positive and finite");
    }
    require_finite(x_under_, "inner x_under");
    require_finite(y_center_, "inner y_center");
}

double AuxProblem::value(const Vector& y) const {
    return base_->eval(x_under_, y) + 0.5 * rho_ * (y - y_center_).squaredNorm();
}

Vector AuxProblem::gradient(const Vector& y) const {
    Vector unused;
    return gradient(y, unused);
}

Vector AuxProblem::gradient(const Vector& y, Vector& base_grad) const {
    base_grad = base_->grad_y(x_under_, y);
    return base_grad + rho_ * (y - y_center_);
}

double default_abs_floor(const AuxProblem& aux) {
    return 1e-13 * (1.0 + aux.y_center().norm());
}

bool check_criterion(const Vector& g, const Vector& y, const AuxProblem& aux, double abs_floor) {
    return g.norm() <= aux.rho() * ((y - aux.y_center()).norm() + abs_floor);
}

bool check_criterion(const Vector& g, const Vector& y, const AuxProblem& aux) {
    return check_criterion(g, y, aux, default_abs_floor(aux));
}

double criterion_ratio(const Vector& g, const Vector& y, const AuxProblem& aux) {
    const double rhs = aux.rho() * (y - aux.y_center()).norm();
    if (rhs == 0.0) {
        return g.norm() == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    return g.norm() / rhs;
}

std::vector<double> ogmg_thetas(int steps) {
    if (steps < 1) {
        throw InvalidInput("OGM-G needs at least one step");
    }
    std::vector<double> theta(static_cast<std::size_t>(steps) + 1);
    theta[steps] = 1.0;
    for (int i = steps - 1; i >= 1; --i) {
        theta[i] = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * theta[i + 1] * theta[i + 1]));
    }
    theta[0] = 0.5 * (1.0 + std::sqrt(1.0 + 8.0 * theta[1] * theta[1]));
    return theta;
}

Vector ogmg_run(const AuxProblem& aux, const Vector& start, int steps) {
    return ogmg_run(aux, start, steps, 1.0 / aux.smoothness());
}

Vector ogmg_run(const AuxProblem& aux, const Vector& start, int steps, double step) {
    if (!(step > 0.0)) {
        throw InvalidInput("OGM-G stepsize must be positive");
    }
    const auto theta = ogmg_thetas(steps);
    Vector x = start;
    Vector y_prev = start;
    for (int i = 0; i < steps; ++i) {
        const Vector y_next = x - step * aux.gradient(x);
        const double ti = theta[i];
        const double tn = theta[i + 1];
        const double momentum = (ti - 1.0) * (2.0 * tn - 1.0) / (ti * (2.0 * ti - 1.0));
        const double correction = (2.0 * tn - 1.0) / (2.0 * ti - 1.0);
        x = y_next + momentum * (y_next - y_prev) + correction * (y_next - x);
        y_prev = y_next;
        require_finite(x, "OGM-G iterate");
    }
    return x;
}

Vector nag_run(const AuxProblem& aux, const Vector& start, int steps, const Vector* start_grad) {
    if (steps < 1) {
        throw InvalidInput("NAG needs at least one step");
    }
    const double step = 1.0 / aux.smoothness();
    Vector y = start;
    Vector z = start;
    double t = 1.0;
    for (int i = 0; i < steps; ++i) {
        const Vector g = (i == 0 && start_grad != nullptr) ? *start_grad : aux.gradient(z);
        Vector y_next = z - step * g;
        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        z = y_next + ((t - 1.0) / t_next) * (y_next - y);
        y = std::move(y_next);
        t = t_next;
        require_finite(z, "NAG iterate");
    }
    return y;
}

void InnerBudget::validate() const {
    if (initial_N < 0 || initial_N % 2 != 0 || (initial_N == 0 && !(seed_factor > 0.0))) {
        throw InvalidInput("inner budget: initial_N must be even (0 derives it) and seed_factor > 0");
    }
    if (!(growth > 1.0)) {
        throw InvalidInput("inner budget: growth must exceed 1");
    }
    if (max_increases < 0) {
        throw InvalidInput("inner budget: max_increases must be >= 0");
    }
    if (!(abs_floor_scale >= 0.0)) {
        throw InvalidInput("inner budget: abs_floor_scale must be >= 0");
    }
}

int inner_budget_seed(double eta_y_alpha, double L_y, double factor) {
    const double t = std::max(1.0, std::sqrt(eta_y_alpha * L_y));
    return 2 * static_cast<int>(std::ceil(factor * t));
}

int next_budget(int N, double growth) {
    const int grown = 2 * static_cast<int>(std::ceil(growth * N / 2.0));
    return std::max(N + 2, grown);
}

InnerResult solve_inner(const AuxProblem& aux, const InnerBudget& budget, int first_N) {
    budget.validate();
    if (first_N < 2 || first_N % 2 != 0) {
        throw InvalidInput("inner attempt size must be even and >= 2");
    }
    const double floor = budget.abs_floor_scale * (1.0 + aux.y_center().norm());
    const auto before = aux.base().counters().grad_y_calls;

    InnerResult result;
    Vector base_grad;
    const Vector center_grad = aux.gradient(aux.y_center(), base_grad);
    if (check_criterion(center_grad, aux.y_center(), aux, floor)) {
        result.y = aux.y_center();
        result.grad_y = std::move(base_grad);
        result.grad_calls = aux.base().counters().grad_y_calls - before;
        return result;
    }

    Vector best = aux.y_center();
    double best_ratio = std::numeric_limits<double>::infinity();
    int N = first_N;
    for (int attempt = 0; attempt <= budget.max_increases; ++attempt) {
        const int half = N / 2;
        Vector y = nag_run(aux, aux.y_center(), half, &center_grad);
        y = ogmg_run(aux, y, half);
        const Vector g = aux.gradient(y, base_grad);
        if (check_criterion(g, y, aux, floor)) {
            result.y = std::move(y);
            result.grad_y = std::move(base_grad);
            result.attempts = attempt + 1;
            result.final_N = N;
            result.grad_calls = aux.base().counters().grad_y_calls - before;
            return result;
        }
        const double ratio = criterion_ratio(g, y, aux);
        if (ratio < best_ratio) {
            best_ratio = ratio;
            best = y;
        }
        N = next_budget(N, budget.growth);
    }
    throw InnerSolveError("inner solver exhausted its budget (best criterion ratio " +
                              std::to_string(best_ratio) + ")",
                          std::move(best), best_ratio);
}

CompositeInnerSolver::CompositeInnerSolver(InnerBudget budget) : budget_(budget) {
    budget_.validate();
}

InnerResult CompositeInnerSolver::solve(const AuxProblem& aux) {
    int first = budget_.initial_N;
    if (first == 0) {
        first = inner_budget_seed(1.0 / aux.rho(), aux.base().constants().L_y, budget_.seed_factor);
    }
    if (budget_.carry_over && carried_N_ > 0) {
        first = carried_N_;
    }
    InnerResult r = solve_inner(aux, budget_, first);
    total_attempts_ += static_cast<std::uint64_t>(r.attempts);
    if (budget_.carry_over && r.final_N > 0) {
        carried_N_ = r.final_N;
    }
    return r;
}

} // namespace blocksplit
