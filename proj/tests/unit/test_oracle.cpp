#include "blocksplit/logistic.hpp"
#include "blocksplit/quadratic.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <thread>

namespace bs = blocksplit;
using bs::Matrix;
using bs::Vector;

namespace {

bs::QuadraticProblem diag12() {
    Matrix A(2, 2);
    A << 1, 0, 0, 2;
    Vector b(2);
    b << 2, -4;
    return bs::QuadraticProblem(A, b, 1, {2.0, 4.0, 2.0, 4.0});
}

Vector v1(double a) { return Vector::Constant(1, a); }

} // namespace

TEST(Oracle, IdentityQuadraticValue) {
    bs::QuadraticProblem p(Matrix::Identity(2, 2), Vector::Zero(2), 1, {2.0, 2.0, 2.0, 2.0});
    EXPECT_DOUBLE_EQ(p.eval(v1(1.0), v1(1.0)), 2.0);
    EXPECT_EQ(p.grad_x(v1(0.0), v1(0.0))(0), 0.0);
    EXPECT_EQ(p.grad_y(v1(0.0), v1(0.0))(0), 0.0);
}

TEST(Oracle, DiagonalQuadraticValuesAndGradients) {
    auto p = diag12();
    EXPECT_NEAR(p.eval(v1(-1.0), v1(1.0)), -3.0, 1e-15);
    EXPECT_DOUBLE_EQ(p.grad_x(v1(0.0), v1(0.0))(0), 2.0);
    EXPECT_DOUBLE_EQ(p.grad_y(v1(0.0), v1(0.0))(0), -4.0);
}

TEST(Oracle, ZeroWeightLogisticIsLog2) {
    bs::LibsvmDataset d = bs::parse_libsvm(std::string_view("+1 1:1 2:3\n-1 2:1 3:2\n+1 3:5\n"));
    const auto p = bs::make_logistic(d, 2, 1, 0.0, 0.0);
    EXPECT_NEAR(p->eval(Vector::Zero(2), Vector::Zero(1)), std::log(2.0), 1e-15);
    EXPECT_FALSE(p->constants().strongly_convex());
}

TEST(Oracle, CountersIncrementExactlyOnePerCall) {
    auto p = diag12();
    const Vector x = v1(0.3);
    const Vector y = v1(-0.2);
    p.eval(x, y);
    p.grad_x(x, y);
    p.grad_x(x, y);
    p.grad_y(x, y);
    const auto c = p.counters();
    EXPECT_EQ(c.eval_calls, 1u);
    EXPECT_EQ(c.grad_x_calls, 2u);
    EXPECT_EQ(c.grad_y_calls, 1u);
    p.value(x, y);
    p.partial_x(x, y);
    p.partial_y(x, y);
    p.suboptimality(x, y, nullptr, 0.0);
    EXPECT_EQ(p.counters(), c);
    p.reset_counters();
    EXPECT_EQ(p.counters(), bs::OracleCounters{});
}

TEST(Oracle, CountersAreThreadSafe) {
    auto p = bs::gen_quadratic({4, 3, 1.0, 10.0, 1.0, 10.0, 0.0, 1});
    const Vector x = Vector::Zero(4);
    const Vector y = Vector::Zero(3);
    std::vector<std::thread> workers;
    for (int t = 0; t < 4; ++t) {
        workers.emplace_back([&] {
            for (int i = 0; i < 250; ++i) {
                p->grad_x(x, y);
            }
        });
    }
    for (auto& w : workers) {
        w.join();
    }
    EXPECT_EQ(p->counters().grad_x_calls, 1000u);
}

TEST(Oracle, CloneHasFreshCounters) {
    auto p = bs::gen_quadratic({4, 3, 1.0, 10.0, 1.0, 10.0, 0.0, 1});
    p->grad_x(Vector::Zero(4), Vector::Zero(3));
    const auto q = p->clone();
    EXPECT_EQ(q->counters().grad_x_calls, 0u);
    EXPECT_EQ(p->counters().grad_x_calls, 1u);
    EXPECT_DOUBLE_EQ(q->value(Vector::Ones(4), Vector::Ones(3)),
                     p->value(Vector::Ones(4), Vector::Ones(3)));
}

TEST(Oracle, DimensionMismatchRejected) {
    auto p = diag12();
    EXPECT_THROW(p.eval(Vector::Zero(2), v1(0.0)), bs::InvalidInput);
    EXPECT_THROW(p.grad_x(v1(0.0), Vector::Zero(3)), bs::InvalidInput);
    EXPECT_THROW(p.grad_y(Vector::Zero(0), v1(0.0)), bs::InvalidInput);
}

TEST(Oracle, NonFiniteInputsAreHardErrors) {
    auto p = diag12();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(p.eval(v1(nan), v1(0.0)), bs::NonFiniteError);
    EXPECT_THROW(p.grad_y(v1(0.0), v1(std::numeric_limits<double>::infinity())),
                 bs::NonFiniteError);
}

TEST(Oracle, ConstantsValidation) {
    EXPECT_NO_THROW((bs::BlockConstants{1.0, 1.0, 0.0, 1.0}.validate()));
    EXPECT_THROW((bs::BlockConstants{1.0, 1.0, 0.0, 1.0}.require_strongly_convex()),
                 bs::InvalidInput);
    EXPECT_THROW((bs::BlockConstants{1.0, 1.0, 2.0, 1.0}.validate()), bs::InvalidInput);
    EXPECT_THROW((bs::BlockConstants{0.0, 1.0, 0.0, 0.0}.validate()), bs::InvalidInput);
    const bs::BlockConstants c{50.0, 500.0, 0.1, 0.1};
    EXPECT_DOUBLE_EQ(c.kappa_x(), 500.0);
    EXPECT_DOUBLE_EQ(c.kappa_y(), 5000.0);
}

TEST(Oracle, BlockVectorSplitJoin) {
    Vector z(5);
    z << 1, 2, 3, 4, 5;
    const auto p = bs::BlockVector::split(z, 2);
    EXPECT_EQ(p.x.size(), 2);
    EXPECT_EQ(p.y.size(), 3);
    EXPECT_EQ(p.joined(), z);
    EXPECT_THROW(bs::BlockVector::split(z, 6), bs::InvalidInput);
}

TEST(Oracle, GradientsMatchFiniteDifferencesOnEveryProblemType) {
    auto q = bs::gen_quadratic({6, 4, 1.0, 30.0, 1.0, 80.0, 0.4, 3});
    const auto d = bs::parse_libsvm(std::string_view(
        "+1 1:1 3:0.5 6:1\n-1 2:1 4:1 5:-1\n+1 1:0.25 2:1 7:1\n-1 3:1 5:1 7:0.5\n+1 6:2\n"));
    auto l = bs::make_logistic(d, 4, 3, 0.01, 0.02);
    for (unsigned s = 0; s < 100; ++s) {
        const Vector zq = bs::testing::random_vector(10, s);
        EXPECT_LE(bs::testing::fd_relative_error(*q, zq.head(6), zq.tail(4)), 1e-5);
        const Vector zl = bs::testing::random_vector(7, s + 1000);
        EXPECT_LE(bs::testing::fd_relative_error(*l, zl.head(4), zl.tail(3)), 1e-5);
    }
}
