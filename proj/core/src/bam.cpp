#include "blocksplit/bam.hpp"

#include <cmath>
#include <limits>

namespace blocksplit {

BamParams compute_parameters(const BlockConstants& c) {
    c.require_strongly_convex();
    BamParams p;
    p.alpha = std::sqrt(c.mu_x / c.L_x);
    p.eta_x = 1.0 / std::sqrt(c.mu_x * c.L_x);
    p.eta_y = p.alpha / c.mu_y;
    return p;
}

BamState BamState::start(const Vector& x0, const Vector& y0) {
    require_finite(x0, "BAM start x");
    require_finite(y0, "BAM start y");
    BamState s;
    s.x = x0;
    s.y = y0;
    s.x_bar = x0;
    s.y_bar = y0;
    s.x_under = x0;
    s.y_under = y0;
    return s;
}

Extrapolation extrapolate(const BamState& state, const BamParams& params) {
    const double a = params.alpha;
    Extrapolation e;
    if (a == 1.0) {
        e.x_under = state.x;
        e.y_under = state.y;
    } else {
        e.x_under = a * state.x + (1.0 - a) * state.x_bar;
        e.y_under = a * state.y + (1.0 - a) * state.y_bar;
    }
    require_finite(e.x_under, "extrapolated x");
    require_finite(e.y_under, "extrapolated y");
    return e;
}

namespace {

void require_inner_acceptance(const InnerResult& r, const AuxProblem& aux) {
    const Vector g = r.grad_y + aux.rho() * (r.y - aux.y_center());
    const double lhs = g.norm();
    const double dist = (r.y - aux.y_center()).norm();
    const double rhs = aux.rho() * (dist * (1.0 + 1e-12) + 1e-12 * (1.0 + aux.y_center().norm()));
    if (!(lhs <= rhs)) {
        throw InnerSolveError("inner solver returned a point that fails the acceptance test", r.y,
                              criterion_ratio(g, r.y, aux));
    }
}

} // namespace

BamState bam_step(const BamState& state, const BlockObjective& problem, const BamParams& params,
                  InnerSolver& inner) {
    const double a = params.alpha;
    auto [x_under, y_under] = extrapolate(state, params);

    const AuxProblem aux(problem, x_under, y_under, params.prox_weight());
    InnerResult r = inner.solve(aux);
    require_finite(r.y, "inner solution");
    require_inner_acceptance(r, aux);

    const Vector g_x = problem.grad_x(x_under, r.y);

    BamState next;
    next.k = state.k + 1;
    next.x_bar = x_under - (params.eta_x * a) * g_x;
    next.y_bar = std::move(r.y);
    next.x = (state.x + a * x_under - params.eta_x * g_x) / (1.0 + a);
    next.y = (state.y + a * next.y_bar - params.eta_y * r.grad_y) / (1.0 + a);
    next.x_under = std::move(x_under);
    next.y_under = std::move(y_under);
    next.last_grad_x = g_x;
    next.last_grad_y = std::move(r.grad_y);

    require_finite(next.x, "BAM x iterate");
    require_finite(next.y, "BAM y iterate");
    require_finite(next.x_bar, "BAM x_bar iterate");
    return next;
}

LyapunovReport lyapunov(const BamState& state, const BamParams& params, const BlockVector& optimum,
                        double f_star, const BlockObjective& problem) {
    LyapunovReport rep;
    rep.r_x = (state.x - optimum.x).squaredNorm();
    rep.r_y = (state.y - optimum.y).squaredNorm();
    rep.f_gap = problem.suboptimality(state.x_bar, state.y_bar, &optimum, f_star);
    rep.psi = (1.0 + params.alpha) * (rep.r_x / params.eta_x + rep.r_y / params.eta_y) +
              (2.0 / params.alpha) * rep.f_gap;
    return rep;
}

double lemma1_residual(const Vector& x_under, const Vector& y_bar_next, const Vector& g_x,
                       const BamParams& params, const BlockObjective& problem) {
    const double step = params.eta_x * params.alpha;
    const Vector x_bar_next = x_under - step * g_x;
    return problem.value_difference(x_bar_next, y_bar_next, x_under, y_bar_next) +
           0.5 * step * g_x.squaredNorm();
}

ImplicitResidual implicit_residual(const BamState& before, const BamState& after,
                                   const BamParams& params) {
    const double a = params.alpha;
    ImplicitResidual r;
    r.x = (after.x - before.x - a * (after.x_under - after.x) + params.eta_x * after.last_grad_x)
              .norm();
    r.y = (after.y - before.y - a * (after.y_bar - after.y) + params.eta_y * after.last_grad_y)
              .norm();
    return r;
}

Trace run_bam(const BlockObjective& problem, const BlockVector& start, const StoppingPolicy& stop,
              const BamOptions& options, const Reference* reference) {
    CompositeInnerSolver inner(options.budget);
    return run_bam(problem, start, stop, options, reference, inner);
}

Trace run_bam(const BlockObjective& problem, const BlockVector& start, const StoppingPolicy& stop,
              const BamOptions& options, const Reference* reference, InnerSolver& inner) {
    problem.check_dims(start.x, start.y);
    const BamParams params = options.params.value_or(compute_parameters(problem.constants()));

    StoppingPolicy policy = stop;
    if (policy.target_gap && !policy.max_iterations) {
        policy.max_iterations =
            default_outer_cap(problem.constants().kappa_x(), std::min(*policy.target_gap, 0.5));
    }
    const bool diag = options.diagnostics && reference != nullptr && reference->optimum;
    if (policy.target_psi_ratio && !diag) {
        throw InvalidInput("a Psi-ratio target needs diagnostics and a reference optimum");
    }

    detail::TraceRecorder rec("bam", problem, policy, reference, options.stride);
    BamState state = BamState::start(start);

    double psi0 = 0.0;
    double psi_prev = 0.0;
    bool done = false;
    if (diag) {
        psi0 = lyapunov(state, params, *reference->optimum, reference->f_star, problem).psi;
        psi_prev = psi0;
        done = rec.observe(0, state.x_bar, state.y_bar, true, psi0, {}, {},
                           psi0 == 0.0 ? 0.0 : 1.0);
    } else {
        done = rec.observe(0, state.x_bar, state.y_bar, true);
    }

    while (!done) {
        BamState next = bam_step(state, problem, params, inner);
        if (diag) {
            const double psi =
                lyapunov(next, params, *reference->optimum, reference->f_star, problem).psi;
            const double lemma =
                lemma1_residual(next.x_under, next.y_bar, next.last_grad_x, params, problem);
            double contraction = 0.0;
            if (psi_prev > 0.0) {
                contraction = (1.0 + params.alpha) * psi / psi_prev;
            } else if (psi > 0.0) {
                contraction = std::numeric_limits<double>::infinity();
            }
            const double ratio = psi0 > 0.0 ? psi / psi0 : 0.0;
            done = rec.observe(next.k, next.x_bar, next.y_bar, false, psi, lemma, contraction,
                               ratio);
            psi_prev = psi;
        } else {
            done = rec.observe(next.k, next.x_bar, next.y_bar);
        }
        state = std::move(next);
    }
    return rec.finish();
}

} // namespace blocksplit
