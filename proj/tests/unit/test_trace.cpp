#include "blocksplit/quadratic.hpp"
#include "blocksplit/trace.hpp"

#include <gtest/gtest.h>

namespace bs = blocksplit;
using bs::Vector;

namespace {

std::unique_ptr<bs::QuadraticProblem> small() {
    return bs::gen_quadratic({3, 2, 1.0, 5.0, 1.0, 5.0, 0.0, 1});
}

} // namespace

TEST(Trace, StrideAndForcedRows) {
    auto p = small();
    const auto ref = p->reference();
    bs::detail::TraceRecorder rec("t", *p, bs::StoppingPolicy::iterations(10), &ref, 4);
    const Vector x = Vector::Ones(3), y = Vector::Ones(2);
    bool done = rec.observe(0, x, y, true);
    for (std::int64_t k = 1; !done; ++k) {
        done = rec.observe(k, x, y);
    }
    const auto t = rec.finish();
    std::vector<std::int64_t> iters;
    for (const auto& r : t.rows) {
        iters.push_back(r.outer_iter);
    }
    EXPECT_EQ(iters, (std::vector<std::int64_t>{0, 4, 8, 10}));
    EXPECT_EQ(t.stop, bs::StopReason::IterationCap);
}

TEST(Trace, GapCheckedOnlyOnRecordedRows) {
    auto p = small();
    const auto ref = p->reference();
    bs::detail::TraceRecorder rec("t", *p, bs::StoppingPolicy::gap(1e-6), &ref, 5);
    rec.observe(0, Vector::Ones(3), Vector::Ones(2), true);
    EXPECT_FALSE(rec.observe(1, p->optimum().x, p->optimum().y));
    EXPECT_TRUE(rec.observe(5, p->optimum().x, p->optimum().y));
}

TEST(Trace, GapTargetStops) {
    auto p = small();
    const auto ref = p->reference();
    bs::detail::TraceRecorder rec("t", *p, bs::StoppingPolicy::gap(1e-6), &ref, 1);
    EXPECT_FALSE(rec.observe(0, Vector::Ones(3), Vector::Ones(2), true));
    EXPECT_TRUE(rec.observe(1, p->optimum().x, p->optimum().y));
    const auto t = rec.finish();
    EXPECT_EQ(t.stop, bs::StopReason::TargetReached);
    EXPECT_EQ(t.rows.size(), 2u);
    ASSERT_NE(t.first_below(1e-6), nullptr);
    EXPECT_EQ(t.first_below(1e-6)->outer_iter, 1);
    EXPECT_EQ(t.first_below(-1.0), nullptr);
}

TEST(Trace, CountersAreRelativeToRunStart) {
    auto p = small();
    p->grad_x(Vector::Zero(3), Vector::Zero(2));
    bs::StoppingPolicy stop;
    stop.max_grad_x_calls = 2;
    bs::detail::TraceRecorder rec("t", *p, stop, nullptr, 1);
    rec.observe(0, Vector::Zero(3), Vector::Zero(2), true);
    p->grad_x(Vector::Zero(3), Vector::Zero(2));
    EXPECT_FALSE(rec.observe(1, Vector::Zero(3), Vector::Zero(2)));
    p->grad_x(Vector::Zero(3), Vector::Zero(2));
    EXPECT_TRUE(rec.observe(2, Vector::Zero(3), Vector::Zero(2)));
    const auto t = rec.finish();
    EXPECT_EQ(t.rows.front().grad_x_calls, 0u);
    EXPECT_EQ(t.last().grad_x_calls, 2u);
    EXPECT_EQ(t.stop, bs::StopReason::OracleBudget);
}

TEST(Trace, PolicyNeedsSomeCriterion) {
    auto p = small();
    EXPECT_THROW(bs::detail::TraceRecorder("t", *p, bs::StoppingPolicy{}, nullptr, 1),
                 bs::InvalidInput);
    EXPECT_THROW(bs::detail::TraceRecorder("t", *p, bs::StoppingPolicy::gap(1e-3), nullptr, 1),
                 bs::InvalidInput);
}

TEST(Trace, OuterCap) {
    EXPECT_EQ(bs::default_outer_cap(100.0, 0.01), 461);
    EXPECT_EQ(bs::default_outer_cap(1.0, 0.9), 2);
    EXPECT_THROW(bs::default_outer_cap(100.0, 0.0), bs::InvalidInput);
    EXPECT_EQ(bs::to_string(bs::StopReason::TargetReached), "target_reached");
}
