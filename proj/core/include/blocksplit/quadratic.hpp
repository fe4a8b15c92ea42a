#pragma once

#include "blocksplit/oracle.hpp"
#include "blocksplit/trace.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <utility>

namespace blocksplit {

/// Generator parameters. Spectra of the diagonal blocks of A are placed in
/// [mu/2, L/2] so that f = z^T A z + b^T z has block constants (mu, L).
struct QuadraticSpec {
    Index dim_x = 100;
    Index dim_y = 10;
    double mu_x = 0.1;
    double L_x = 50.0;
    double mu_y = 0.1;
    double L_y = 500.0;
    /// Off-diagonal block norm as a fraction of sqrt(mu_x mu_y) / 2, in [0, 1).
    double coupling_rho = 0.0;
    std::uint64_t seed = 0;

    void validate() const;
};

/// f(z) = z^T A z + b^T z with z = (x, y). Data, optimum and f* are computed
/// once and shared (read-only) between clones.
class QuadraticProblem final : public BlockObjective {
public:
    /// Verifies symmetry and certifies `constants` against the exact
    /// eigenvalues of 2A - diag(mu) and diag(L) - 2A; throws InvalidInput if
    /// either has an eigenvalue below -1e-9 max(L).
    QuadraticProblem(Matrix A, Vector b, Index dim_x, BlockConstants constants,
                     std::optional<QuadraticSpec> spec = {});

    const Matrix& A() const { return data_->A; }
    const Vector& b() const { return data_->b; }
    const BlockVector& optimum() const { return data_->optimum; }
    double f_star() const { return data_->f_star; }
    Reference reference() const { return {data_->optimum, data_->f_star}; }
    /// Generator parameters when the instance came from gen_quadratic.
    const std::optional<QuadraticSpec>& spec() const { return data_->spec; }

    /// Smallest eigenvalues of 2A - diag(mu I) and diag(L I) - 2A.
    std::pair<double, double> certification_margins() const;

    /// delta^T A delta + (2 A z1 + b)^T delta with delta = z2 - z1.
    double value_difference(const Vector& x2, const Vector& y2, const Vector& x1,
                            const Vector& y1) const override;
    /// With an optimum: d^T A d + grad f(opt)^T d, d = z - opt (f_star is taken
    /// to be f(opt)); no cancellation against f*.
    double suboptimality(const Vector& x, const Vector& y, const BlockVector* optimum,
                         double f_star) const override;

    std::unique_ptr<BlockObjective> clone() const override;
    std::string kind() const override { return "quadratic"; }

protected:
    double compute_value(const Vector& x, const Vector& y) const override;
    Vector compute_grad_x(const Vector& x, const Vector& y) const override;
    Vector compute_grad_y(const Vector& x, const Vector& y) const override;

private:
    struct Data {
        Matrix A;
        Vector b;
        BlockVector optimum;
        double f_star = 0.0;
        std::optional<QuadraticSpec> spec;
    };
    QuadraticProblem(std::shared_ptr<const Data> data, Index dim_x, BlockConstants constants);

    Vector joint_gradient(const Vector& x, const Vector& y) const;

    std::shared_ptr<const Data> data_;
};

/// Random instance: A_x = Q_x diag(ev_x) Q_x^T with Q_x Haar-orthogonal and
/// ev_x uniform on [mu_x/2, L_x/2] (both endpoints pinned when dim >= 2),
/// likewise A_y; optional coupling block B with |B|_2 = coupling_rho
/// sqrt(mu_x mu_y) / 2, constants widened by 2|B|_2; b standard normal.
/// Bit-reproducible for a given seed.
std::unique_ptr<QuadraticProblem> gen_quadratic(const QuadraticSpec& spec);

/// Solves 2 A z = -b (Cholesky plus one refinement step) and returns (z*, f(z*)).
std::pair<BlockVector, double> quadratic_optimum(const Matrix& A, const Vector& b, Index dim_x);

} // namespace blocksplit
