#pragma once

#include "blocksplit/oracle.hpp"

#include <cstdint>
#include <vector>

namespace blocksplit {

/// Proximal inner objective of one outer step
///
///   A(y) = f(x_under, y) + (rho / 2) |y - y_center|^2,
///
/// with rho = 1 / (eta_y alpha). A is (mu_y + rho)-strongly convex and
/// (L_y + rho)-smooth. Holds a read-only reference to the base objective;
/// every gradient costs exactly one counted grad_y call on it.
class AuxProblem {
public:
    AuxProblem(const BlockObjective& base, Vector x_under, Vector y_center, double rho);

    const BlockObjective& base() const { return *base_; }
    const Vector& x_under() const { return x_under_; }
    const Vector& y_center() const { return y_center_; }
    double rho() const { return rho_; }
    Index dim() const { return y_center_.size(); }

    double smoothness() const { return base_->constants().L_y + rho_; }
    double strong_convexity() const { return base_->constants().mu_y + rho_; }

    /// Counted through base.eval.
    double value(const Vector& y) const;
    /// Counted: one grad_y call.
    Vector gradient(const Vector& y) const;
    /// Counted: one grad_y call; also hands back grad_y f(x_under, y).
    Vector gradient(const Vector& y, Vector& base_grad) const;

private:
    const BlockObjective* base_;
    Vector x_under_;
    Vector y_center_;
    double rho_;
};

/// Default absolute slack of the acceptance test: 1e-13 (1 + |y_center|).
double default_abs_floor(const AuxProblem& aux);

/// Relative gradient-norm acceptance test for the inner iterate:
/// |g| <= rho (|y - y_center| + abs_floor). `g` must be grad A(y).
bool check_criterion(const Vector& g, const Vector& y, const AuxProblem& aux, double abs_floor);
bool check_criterion(const Vector& g, const Vector& y, const AuxProblem& aux);

/// |g| / (rho |y - y_center|); <= 1 means the test passes without the floor.
double criterion_ratio(const Vector& g, const Vector& y, const AuxProblem& aux);

/// OGM-G coefficients theta_0 .. theta_N (size N + 1):
/// theta_N = 1, theta_i = (1 + sqrt(1 + 4 theta_{i+1}^2)) / 2 for 1 <= i < N,
/// theta_0 = (1 + sqrt(1 + 8 theta_1^2)) / 2.
std::vector<double> ogmg_thetas(int steps);

/// N steps of OGM-G with stepsize `step` (1 / smoothness when omitted).
/// Returns the last x iterate; makes exactly N gradient calls.
Vector ogmg_run(const AuxProblem& aux, const Vector& start, int steps);
Vector ogmg_run(const AuxProblem& aux, const Vector& start, int steps, double step);

/// N steps of convex Nesterov accelerated gradient (t-sequence momentum,
/// step 1 / smoothness). Makes exactly N gradient calls, or N - 1 when the
/// gradient at `start` is supplied.
Vector nag_run(const AuxProblem& aux, const Vector& start, int steps,
               const Vector* start_grad = nullptr);

/// Inner iteration budget. The universal constant in the O(1/T^2) bound is
/// unknown, so the budget adapts: each attempt runs N/2 NAG steps then N/2
/// OGM-G steps from y_center; on failure N grows by `growth` and the attempt
/// restarts from y_center.
struct InnerBudget {
    /// First attempt size; 0 derives it as inner_budget_seed(..., seed_factor).
    int initial_N = 0;
    double seed_factor = 1.0;
    double growth = 1.25;
    int max_increases = 60;
    /// Start the next outer step at the last successful N.
    bool carry_over = true;
    /// Multiplier of (1 + |y_center|) in the acceptance floor.
    double abs_floor_scale = 1e-13;

    void validate() const;
};

/// 2 ceil(factor max{1, sqrt(eta_y alpha L_y)}): the iteration count
/// T ~ max{1, sqrt(eta_y alpha L_y)} rounded to an even size.
int inner_budget_seed(double eta_y_alpha, double L_y, double factor);

/// Next attempt size after a failure at N (even, strictly larger).
int next_budget(int N, double growth);

struct InnerResult {
    Vector y;             // accepted iterate
    Vector grad_y;        // grad_y f(x_under, y), computed by the final check
    std::uint64_t grad_calls = 0;
    int attempts = 0;     // 0 when y_center was accepted
    int final_N = 0;
};

/// The budget ran out. Carries the best candidate seen.
class InnerSolveError : public std::runtime_error {
public:
    InnerSolveError(const std::string& what, Vector best, double best_ratio)
        : std::runtime_error(what), best_(std::move(best)), best_ratio_(best_ratio) {}
    const Vector& best() const { return best_; }
    double best_ratio() const { return best_ratio_; }

private:
    Vector best_;
    double best_ratio_;
};

/// Finds y with |grad A(y)| <= rho |y - y_center|. Checks y_center first
/// (one gradient call) and returns it when it already passes. The result
/// is re-checked before returning.
InnerResult solve_inner(const AuxProblem& aux, const InnerBudget& budget, int first_N);

/// Interface the outer loop uses to obtain ybar^{k+1}.
class InnerSolver {
public:
    virtual ~InnerSolver() = default;
    virtual InnerResult solve(const AuxProblem& aux) = 0;
};

/// NAG-then-OGM-G solver with adaptive budget. Stateful when carry_over is
/// set: remembers the last successful N across calls.
class CompositeInnerSolver : public InnerSolver {
public:
    explicit CompositeInnerSolver(InnerBudget budget = {});

    InnerResult solve(const AuxProblem& aux) override;

    const InnerBudget& budget() const { return budget_; }
    int carried_N() const { return carried_N_; }
    std::uint64_t total_attempts() const { return total_attempts_; }

private:
    InnerBudget budget_;
    int carried_N_ = 0;
    std::uint64_t total_attempts_ = 0;
};

} // namespace blocksplit
