#pragma once

#include "blocksplit/oracle.hpp"
#include "blocksplit/trace.hpp"

#include <cstdint>

namespace blocksplit {

/// The problem seen as a single function of z = (x, y):
/// max(L_x, L_y)-smooth and min(mu_x, mu_y)-strongly convex.
struct JointView {
    double L_joint = 1.0;
    double mu_joint = 1.0;

    static JointView of(const BlockConstants& c);
    double kappa() const { return L_joint / mu_joint; }
    /// (sqrt(kappa) - 1) / (sqrt(kappa) + 1).
    double momentum() const;
};

/// y' = scale * y with scale = sqrt(mu_y / mu_x). In y' the strong convexity
/// constant of the y block equals mu_x and its smoothness becomes
/// L_y mu_x / mu_y.
struct Rescaling {
    double scale = 1.0;

    static Rescaling equalizing(const BlockConstants& c);
    Vector to_scaled(const Vector& y) const { return scale * y; }
    Vector from_scaled(const Vector& y_scaled) const { return y_scaled / scale; }
    /// Gradient in y' from a gradient in y.
    Vector scaled_gradient(const Vector& grad_y) const { return grad_y / scale; }
    BlockConstants scaled_constants(const BlockConstants& c) const;
};

/// Probability of drawing the x block when sampling proportional to sqrt(L).
double block_probability_x(double L_x, double L_y);

struct BaselineOptions {
    /// Rows are recorded every `stride` iterations; 0 picks 1 for NAG and
    /// one epoch (dim_x + dim_y block draws) for the randomized methods.
    std::int64_t stride = 0;
    std::uint64_t seed = 0;
};

/// Ten times the theoretical iteration count sqrt(kappa_joint) ln(1/eps)
/// of NAG, used as a safety cap when only a gap target is given.
std::int64_t nag_iteration_cap(const BlockConstants& c, double eps);

/// Ten times (sqrt(L_x) + sqrt(L_y')) / sqrt(mu) ln(1/eps) block draws in
/// the rescaled coordinates, the accelerated coordinate descent count.
std::int64_t randomized_iteration_cap(const BlockConstants& c, double eps);

/// Strongly convex Nesterov accelerated gradient on the joint variable,
/// step 1 / L_joint. Each iteration evaluates the full gradient at the
/// extrapolated point: one grad_x and one grad_y call.
Trace run_nag(const BlockObjective& problem, const BlockVector& start, const StoppingPolicy& stop,
              const BaselineOptions& options = {}, const Reference* reference = nullptr);

/// Accelerated randomized block-coordinate descent (estimate-sequence form
/// with A_k / B_k weights) on the rescaled problem, blocks drawn with
/// probability proportional to sqrt(L). One block gradient per iteration.
Trace run_acdm(const BlockObjective& problem, const BlockVector& start, const StoppingPolicy& stop,
               const BaselineOptions& options = {}, const Reference* reference = nullptr);

/// Non-uniform accelerated coordinate descent in linear-coupling form
/// (fixed coupling tau and mirror step eta) on the rescaled problem, same
/// sampling and per-iteration cost as run_acdm.
Trace run_lincoupling(const BlockObjective& problem, const BlockVector& start,
                      const StoppingPolicy& stop, const BaselineOptions& options = {},
                      const Reference* reference = nullptr);

} // namespace blocksplit
