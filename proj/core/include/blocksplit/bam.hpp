#pragma once

#include "blocksplit/inner.hpp"
#include "blocksplit/oracle.hpp"
#include "blocksplit/trace.hpp"

#include <cstdint>
#include <optional>

namespace blocksplit {

/// Extrapolation weight and block step sizes of the block accelerated method.
struct BamParams {
    double alpha = 1.0;
    double eta_x = 1.0;
    double eta_y = 1.0;

    /// Weight of the proximal term in the inner objective, 1 / (eta_y alpha).
    double prox_weight() const { return 1.0 / (eta_y * alpha); }
};

/// alpha = sqrt(mu_x / L_x), eta_x = 1 / sqrt(mu_x L_x), eta_y = sqrt(mu_x / L_x) / mu_y.
/// With this choice alpha eta_x L_x = 1, which is what the descent step needs.
BamParams compute_parameters(const BlockConstants& c);

/// Iterates of the outer loop. (x, y) are the momentum iterates,
/// (x_bar, y_bar) the anchor iterates; the last extrapolated point and the
/// gradients at (x_under, y_bar) are kept for diagnostics.
struct BamState {
    std::int64_t k = 0;
    Vector x;
    Vector y;
    Vector x_bar;
    Vector y_bar;
    Vector x_under;
    Vector y_under;
    Vector last_grad_x;
    Vector last_grad_y;

    static BamState start(const Vector& x0, const Vector& y0);
    static BamState start(const BlockVector& p) { return start(p.x, p.y); }
};

struct Extrapolation {
    Vector x_under;
    Vector y_under;
};

/// (alpha x + (1 - alpha) x_bar, alpha y + (1 - alpha) y_bar).
Extrapolation extrapolate(const BamState& state, const BamParams& params);

/// One outer iteration. Costs exactly one grad_x call plus whatever the
/// inner solver spends on grad_y; the y-gradient of the final inner check is
/// reused for the momentum update of y.
///
/// The momentum lines are implicit in x^{k+1} / y^{k+1}; they are solved in
/// closed form:
///   x^{k+1} = (x^k + alpha x_under - eta_x g_x) / (1 + alpha)
///   y^{k+1} = (y^k + alpha ybar^{k+1} - eta_y g_y) / (1 + alpha)
BamState bam_step(const BamState& state, const BlockObjective& problem, const BamParams& params,
                  InnerSolver& inner);

struct LyapunovReport {
    double psi = 0.0;
    double r_x = 0.0;
    double r_y = 0.0;
    double f_gap = 0.0;
};

/// Psi = (1 + alpha)(|x - x*|^2 / eta_x + |y - y*|^2 / eta_y) + (2 / alpha)(f(x_bar, y_bar) - f*).
/// Uses the uncounted channel.
LyapunovReport lyapunov(const BamState& state, const BamParams& params, const BlockVector& optimum,
                        double f_star, const BlockObjective& problem);

/// f(x_bar_next, y_bar_next) + (eta_x alpha / 2)|g_x|^2 - f(x_under, y_bar_next), where
/// x_bar_next = x_under - eta_x alpha g_x. Nonpositive whenever eta_x alpha L_x <= 1.
double lemma1_residual(const Vector& x_under, const Vector& y_bar_next, const Vector& g_x,
                       const BamParams& params, const BlockObjective& problem);

/// |x^{k+1} - x^k - alpha(x_under - x^{k+1}) + eta_x g_x| for the x block and the
/// analogous y residual; both should sit at rounding level.
struct ImplicitResidual {
    double x = 0.0;
    double y = 0.0;
};
ImplicitResidual implicit_residual(const BamState& before, const BamState& after,
                                   const BamParams& params);

struct BamOptions {
    InnerBudget budget;
    bool diagnostics = false;
    std::int64_t stride = 1;
    /// Overrides compute_parameters(problem.constants()) when set.
    std::optional<BamParams> params;
};

/// Runs the outer loop until the stopping policy fires. With diagnostics on
/// and an optimum in `reference`, each row carries Psi^k, the descent
/// residual and (1 + alpha) Psi^{k+1} / Psi^k.
Trace run_bam(const BlockObjective& problem, const BlockVector& start, const StoppingPolicy& stop,
              const BamOptions& options = {}, const Reference* reference = nullptr);

/// Same, with a caller-provided inner solver.
Trace run_bam(const BlockObjective& problem, const BlockVector& start, const StoppingPolicy& stop,
              const BamOptions& options, const Reference* reference, InnerSolver& inner);

} // namespace blocksplit
