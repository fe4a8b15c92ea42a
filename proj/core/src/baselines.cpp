#include "blocksplit/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace blocksplit {

JointView JointView::of(const BlockConstants& c) {
    c.require_strongly_convex();
    return {std::max(c.L_x, c.L_y), std::min(c.mu_x, c.mu_y)};
}

double JointView::momentum() const {
    const double q = std::sqrt(kappa());
    return (q - 1.0) / (q + 1.0);
}

Rescaling Rescaling::equalizing(const BlockConstants& c) {
    c.require_strongly_convex();
    return {std::sqrt(c.mu_y / c.mu_x)};
}

BlockConstants Rescaling::scaled_constants(const BlockConstants& c) const {
    const double s2 = scale * scale;
    return {c.L_x, c.L_y / s2, c.mu_x, c.mu_y / s2};
}

double block_probability_x(double L_x, double L_y) {
    if (!(L_x > 0.0) || !(L_y > 0.0)) {
        throw InvalidInput("block probabilities need positive smoothness constants");
    }
    const double sx = std::sqrt(L_x);
    return sx / (sx + std::sqrt(L_y));
}

namespace {

double log_inv(double eps) {
    if (!(eps > 0.0)) {
        throw InvalidInput("iteration cap needs eps > 0");
    }
    return std::max(1.0, std::log(1.0 / eps));
}

} // namespace

std::int64_t nag_iteration_cap(const BlockConstants& c, double eps) {
    return static_cast<std::int64_t>(
        std::ceil(10.0 * std::sqrt(JointView::of(c).kappa()) * log_inv(eps)));
}

std::int64_t randomized_iteration_cap(const BlockConstants& c, double eps) {
    const BlockConstants sc = Rescaling::equalizing(c).scaled_constants(c);
    const double s = std::sqrt(sc.L_x) + std::sqrt(sc.L_y);
    return static_cast<std::int64_t>(std::ceil(10.0 * s / std::sqrt(sc.mu_x) * log_inv(eps)));
}

Trace run_nag(const BlockObjective& problem, const BlockVector& start, const StoppingPolicy& stop,
              const BaselineOptions& options, const Reference* reference) {
    problem.check_dims(start.x, start.y);
    require_finite(start.x, "NAG start x");
    require_finite(start.y, "NAG start y");
    const JointView joint = JointView::of(problem.constants());
    const double step = 1.0 / joint.L_joint;
    const double beta = joint.momentum();

    detail::TraceRecorder rec("nag", problem, stop, reference,
                              options.stride > 0 ? options.stride : 1);
    BlockVector y = start;  // gradient-step iterate, the one reported
    BlockVector z = start;  // extrapolated point
    bool done = rec.observe(0, y.x, y.y, true);
    for (std::int64_t k = 1; !done; ++k) {
        const Vector gx = problem.grad_x(z.x, z.y);
        const Vector gy = problem.grad_y(z.x, z.y);
        BlockVector y_next{z.x - step * gx, z.y - step * gy};
        z.x = y_next.x + beta * (y_next.x - y.x);
        z.y = y_next.y + beta * (y_next.y - y.y);
        y = std::move(y_next);
        require_finite(z.x, "NAG iterate");
        require_finite(z.y, "NAG iterate");
        done = rec.observe(k, y.x, y.y);
    }
    return rec.finish();
}

namespace {

/// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Shared setup of the two randomized block methods: the rescaled constants
/// and the per-block gradient in scaled coordinates.
struct ScaledBlocks {
    const BlockObjective& problem;
    Rescaling rescale;
    double L[2];
    double mu;
    double prob_x;

    explicit ScaledBlocks(const BlockObjective& p)
        : problem(p), rescale(Rescaling::equalizing(p.constants())) {
        const BlockConstants sc = rescale.scaled_constants(p.constants());
        L[0] = sc.L_x;
        L[1] = sc.L_y;
        mu = sc.mu_x;
        prob_x = block_probability_x(L[0], L[1]);
    }

    double sqrt_sum() const { return std::sqrt(L[0]) + std::sqrt(L[1]); }
    int draw(std::mt19937_64& rng) const { return uniform01(rng) < prob_x ? 0 : 1; }
    double prob(int block) const { return block == 0 ? prob_x : 1.0 - prob_x; }

    /// Gradient of block `block` of g(x, y') = f(x, y' / scale).
    Vector gradient(const BlockVector& w, int block) const {
        const Vector y = rescale.from_scaled(w.y);
        if (block == 0) {
            return problem.grad_x(w.x, y);
        }
        return rescale.scaled_gradient(problem.grad_y(w.x, y));
    }

    static Vector& part(BlockVector& w, int block) { return block == 0 ? w.x : w.y; }
};

std::int64_t epoch_stride(const BlockObjective& problem, const BaselineOptions& options) {
    return options.stride > 0 ? options.stride : problem.dim_x() + problem.dim_y();
}

} // namespace

Trace run_acdm(const BlockObjective& problem, const BlockVector& start, const StoppingPolicy& stop,
               const BaselineOptions& options, const Reference* reference) {
    problem.check_dims(start.x, start.y);
    const ScaledBlocks blocks(problem);
    std::mt19937_64 rng(options.seed);
    const double S2 = blocks.sqrt_sum() * blocks.sqrt_sum();
    const double mu = blocks.mu;

    detail::TraceRecorder rec("acdm", problem, stop, reference, epoch_stride(problem, options));
    BlockVector x{start.x, blocks.rescale.to_scaled(start.y)};
    BlockVector v = x;
    double A = 0.0;
    double B = 1.0;

    bool done = rec.observe(0, x.x, blocks.rescale.from_scaled(x.y), true);
    for (std::int64_t k = 1; !done; ++k) {
        const int i = blocks.draw(rng);
        // a^2 S^2 = (A + a)(B + mu a)
        const double lin = A * mu + B;
        const double a = (lin + std::sqrt(lin * lin + 4.0 * (S2 - mu) * A * B)) / (2.0 * (S2 - mu));
        const double A_next = A + a;
        const double B_next = B + mu * a;
        const double alpha = a / A_next;
        const double beta = mu * a / B_next;

        const double denom = 1.0 - alpha * beta;
        BlockVector y{((1.0 - alpha) * x.x + alpha * (1.0 - beta) * v.x) / denom,
                      ((1.0 - alpha) * x.y + alpha * (1.0 - beta) * v.y) / denom};
        const Vector g = blocks.gradient(y, i);

        x = y;
        ScaledBlocks::part(x, i) -= g / blocks.L[i];
        v.x = (1.0 - beta) * v.x + beta * y.x;
        v.y = (1.0 - beta) * v.y + beta * y.y;
        ScaledBlocks::part(v, i) -= (a / (B_next * blocks.prob(i))) * g;
        A = A_next;
        B = B_next;

        require_finite(x.x, "ACDM iterate");
        require_finite(x.y, "ACDM iterate");
        done = rec.observe(k, x.x, blocks.rescale.from_scaled(x.y));
    }
    return rec.finish();
}

Trace run_lincoupling(const BlockObjective& problem, const BlockVector& start,
                      const StoppingPolicy& stop, const BaselineOptions& options,
                      const Reference* reference) {
    problem.check_dims(start.x, start.y);
    const ScaledBlocks blocks(problem);
    std::mt19937_64 rng(options.seed);
    const double S2 = blocks.sqrt_sum() * blocks.sqrt_sum();
    const double mu = blocks.mu;
    const double tau = 2.0 / (1.0 + std::sqrt(4.0 * S2 / mu + 1.0));
    const double eta = 1.0 / (tau * S2);

    detail::TraceRecorder rec("lincoupling", problem, stop, reference,
                              epoch_stride(problem, options));
    BlockVector y{start.x, blocks.rescale.to_scaled(start.y)};  // gradient-step iterate
    BlockVector z = y;                                          // mirror iterate

    bool done = rec.observe(0, y.x, blocks.rescale.from_scaled(y.y), true);
    for (std::int64_t k = 1; !done; ++k) {
        const int i = blocks.draw(rng);
        const BlockVector coupled{tau * z.x + (1.0 - tau) * y.x, tau * z.y + (1.0 - tau) * y.y};
        const Vector g = blocks.gradient(coupled, i);

        y = coupled;
        ScaledBlocks::part(y, i) -= g / blocks.L[i];
        z.x += (eta * mu) * coupled.x;
        z.y += (eta * mu) * coupled.y;
        ScaledBlocks::part(z, i) -= (eta / blocks.prob(i)) * g;
        z.x /= 1.0 + eta * mu;
        z.y /= 1.0 + eta * mu;

        require_finite(y.x, "LinCoupling iterate");
        require_finite(y.y, "LinCoupling iterate");
        done = rec.observe(k, y.x, blocks.rescale.from_scaled(y.y));
    }
    return rec.finish();
}

} // namespace blocksplit
