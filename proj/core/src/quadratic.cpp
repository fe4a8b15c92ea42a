#include "blocksplit/quadratic.hpp"

#include "blocksplit/random.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <string>

namespace blocksplit {

void QuadraticSpec::validate() const {
    if (dim_x < 1 || dim_y < 1) {
        throw InvalidInput("quadratic: block dimensions must be >= 1");
    }
    BlockConstants{L_x, L_y, mu_x, mu_y}.require_strongly_convex();
    if (!(coupling_rho >= 0.0) || !(coupling_rho < 1.0)) {
        throw InvalidInput("quadratic: coupling_rho must lie in [0, 1)");
    }
}

namespace {

Matrix block_diag_constants(Index dim_x, Index dim_y, double cx, double cy) {
    Vector d(dim_x + dim_y);
    d.head(dim_x).setConstant(cx);
    d.tail(dim_y).setConstant(cy);
    return d.asDiagonal();
}

double min_eigenvalue(const Matrix& M) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(M, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
        throw InvalidInput("quadratic: eigensolver failed during certification");
    }
    return es.eigenvalues().minCoeff();
}

Matrix gaussian_matrix(Rng& rng, Index rows, Index cols) {
    Matrix G(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        for (Index j = 0; j < cols; ++j) {
            G(i, j) = rng.normal();
        }
    }
    return G;
}

Matrix haar_orthogonal(Rng& rng, Index d) {
    const Matrix G = gaussian_matrix(rng, d, d);
    Eigen::HouseholderQR<Matrix> qr(G);
    Matrix Q = qr.householderQ() * Matrix::Identity(d, d);
    const Matrix& R = qr.matrixQR();
    for (Index j = 0; j < d; ++j) {
        if (R(j, j) < 0.0) {
            Q.col(j) = -Q.col(j);
        }
    }
    return Q;
}

Matrix random_block(Rng& rng, Index d, double mu, double L) {
    Vector ev(d);
    for (Index i = 0; i < d; ++i) {
        ev(i) = rng.uniform(0.5 * mu, 0.5 * L);
    }
    if (d >= 2) {
        ev(0) = 0.5 * mu;
        ev(1) = 0.5 * L;
    }
    const Matrix Q = haar_orthogonal(rng, d);
    Matrix A = Q * ev.asDiagonal() * Q.transpose();
    return 0.5 * (A + A.transpose());
}

double spectral_norm(const Matrix& M) {
    Eigen::JacobiSVD<Matrix> svd(M);
    return svd.singularValues()(0);
}

} // namespace

QuadraticProblem::QuadraticProblem(Matrix A, Vector b, Index dim_x, BlockConstants constants,
                                   std::optional<QuadraticSpec> spec)
    : BlockObjective(dim_x, A.rows() - dim_x, constants) {
    constants.validate();
    if (A.rows() != A.cols() || A.rows() != b.size() || dim_x >= A.rows()) {
        throw InvalidInput("quadratic: A must be square, match b, and leave a nonempty y block");
    }
    if (!A.allFinite() || !b.allFinite()) {
        throw InvalidInput("quadratic: A and b must be finite");
    }
    const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
    if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw InvalidInput("quadratic: A must be symmetric");
    }
    const Index dy = A.rows() - dim_x;
    const Matrix twoA = 2.0 * A;
    const double lower = min_eigenvalue(twoA - block_diag_constants(dim_x, dy, constants.mu_x,
                                                                     constants.mu_y));
    const double upper = min_eigenvalue(block_diag_constants(dim_x, dy, constants.L_x,
                                                             constants.L_y) - twoA);
    const double tol = -1e-9 * std::max(constants.L_x, constants.L_y);
    if (lower < tol || upper < tol) {
        throw InvalidInput("quadratic: stored constants are not certified (margins " +
                           std::to_string(lower) + ", " + std::to_string(upper) + ")");
    }
    if (min_eigenvalue(A) <= 0.0) {
        throw InvalidInput("quadratic: A must be positive definite");
    }
    auto data = std::make_shared<Data>();
    auto [opt, f_star] = quadratic_optimum(A, b, dim_x);
    data->A = std::move(A);
    data->b = std::move(b);
    data->optimum = std::move(opt);
    data->f_star = f_star;
    data->spec = std::move(spec);
    data_ = std::move(data);
}

QuadraticProblem::QuadraticProblem(std::shared_ptr<const Data> data, Index dim_x,
                                   BlockConstants constants)
    : BlockObjective(dim_x, data->A.rows() - dim_x, constants), data_(std::move(data)) {}

std::unique_ptr<BlockObjective> QuadraticProblem::clone() const {
    return std::unique_ptr<BlockObjective>(new QuadraticProblem(data_, dim_x(), constants()));
}

std::pair<double, double> QuadraticProblem::certification_margins() const {
    const auto& c = constants();
    const Matrix twoA = 2.0 * A();
    return {min_eigenvalue(twoA - block_diag_constants(dim_x(), dim_y(), c.mu_x, c.mu_y)),
            min_eigenvalue(block_diag_constants(dim_x(), dim_y(), c.L_x, c.L_y) - twoA)};
}

Vector QuadraticProblem::joint_gradient(const Vector& x, const Vector& y) const {
    Vector z(x.size() + y.size());
    z << x, y;
    return 2.0 * (A() * z) + b();
}

double QuadraticProblem::compute_value(const Vector& x, const Vector& y) const {
    Vector z(x.size() + y.size());
    z << x, y;
    return z.dot(A() * z) + b().dot(z);
}

Vector QuadraticProblem::compute_grad_x(const Vector& x, const Vector& y) const {
    const Index dx = dim_x();
    const Index dy = dim_y();
    return 2.0 * (A().topLeftCorner(dx, dx) * x + A().topRightCorner(dx, dy) * y) + b().head(dx);
}

Vector QuadraticProblem::compute_grad_y(const Vector& x, const Vector& y) const {
    const Index dx = dim_x();
    const Index dy = dim_y();
    return 2.0 * (A().bottomLeftCorner(dy, dx) * x + A().bottomRightCorner(dy, dy) * y) +
           b().tail(dy);
}

double QuadraticProblem::value_difference(const Vector& x2, const Vector& y2, const Vector& x1,
                                          const Vector& y1) const {
    check_dims(x2, y2);
    check_dims(x1, y1);
    Vector d(x2.size() + y2.size());
    d << x2 - x1, y2 - y1;
    const double r = d.dot(A() * d) + joint_gradient(x1, y1).dot(d);
    require_finite(r, "quadratic value difference");
    return r;
}

double QuadraticProblem::suboptimality(const Vector& x, const Vector& y,
                                       const BlockVector* optimum, double f_star) const {
    if (optimum == nullptr) {
        return BlockObjective::suboptimality(x, y, optimum, f_star);
    }
    return value_difference(x, y, optimum->x, optimum->y);
}

std::pair<BlockVector, double> quadratic_optimum(const Matrix& A, const Vector& b, Index dim_x) {
    const Matrix twoA = 2.0 * A;
    Eigen::LLT<Matrix> llt(twoA);
    if (llt.info() != Eigen::Success) {
        throw InvalidInput("quadratic: A is not positive definite");
    }
    Vector z = llt.solve(-b);
    z += llt.solve(-b - twoA * z);
    require_finite(z, "quadratic optimum");
    const double f_star = z.dot(A * z) + b.dot(z);
    return {BlockVector::split(z, dim_x), f_star};
}

std::unique_ptr<QuadraticProblem> gen_quadratic(const QuadraticSpec& spec) {
    spec.validate();
    Rng rng(spec.seed);
    const Index dx = spec.dim_x;
    const Index dy = spec.dim_y;
    Matrix A = Matrix::Zero(dx + dy, dx + dy);
    A.topLeftCorner(dx, dx) = random_block(rng, dx, spec.mu_x, spec.L_x);
    A.bottomRightCorner(dy, dy) = random_block(rng, dy, spec.mu_y, spec.L_y);

    BlockConstants c{spec.L_x, spec.L_y, spec.mu_x, spec.mu_y};
    if (spec.coupling_rho > 0.0) {
        const double target = spec.coupling_rho * std::sqrt(spec.mu_x * spec.mu_y) / 2.0;
        Matrix B = gaussian_matrix(rng, dx, dy);
        B *= target / spectral_norm(B);
        const double norm = spectral_norm(B);
        c.L_x += 2.0 * norm;
        c.L_y += 2.0 * norm;
        c.mu_x -= 2.0 * norm;
        c.mu_y -= 2.0 * norm;
        if (!(c.mu_x > 0.0) || !(c.mu_y > 0.0)) {
            throw InvalidInput("quadratic: coupling too strong, widened mu would be <= 0");
        }
        A.topRightCorner(dx, dy) = B;
        A.bottomLeftCorner(dy, dx) = B.transpose();
    }
    Vector b(dx + dy);
    for (Index i = 0; i < b.size(); ++i) {
        b(i) = rng.normal();
    }
    return std::make_unique<QuadraticProblem>(std::move(A), std::move(b), dx, c, spec);
}

} // namespace blocksplit
