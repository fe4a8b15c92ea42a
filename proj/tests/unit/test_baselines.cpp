#include "blocksplit/baselines.hpp"
#include "blocksplit/quadratic.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace bs = blocksplit;
using bs::Matrix;
using bs::Vector;

TEST(Baselines, BlockProbabilities) {
    EXPECT_DOUBLE_EQ(bs::block_probability_x(3.0, 3.0), 0.5);
    EXPECT_DOUBLE_EQ(bs::block_probability_x(4.0, 16.0), 1.0 / 3.0);
    EXPECT_THROW(bs::block_probability_x(0.0, 1.0), bs::InvalidInput);
}

TEST(Baselines, JointView) {
    const auto j = bs::JointView::of({50.0, 500.0, 0.1, 0.2});
    EXPECT_EQ(j.L_joint, 500.0);
    EXPECT_EQ(j.mu_joint, 0.1);
    EXPECT_EQ(bs::JointView::of({2.0, 2.0, 2.0, 2.0}).momentum(), 0.0);
}

TEST(Baselines, RescalingRoundTrip) {
    const auto r = bs::Rescaling::equalizing({10.0, 100.0, 0.01, 0.0003});
    const auto sc = r.scaled_constants({10.0, 100.0, 0.01, 0.0003});
    EXPECT_NEAR(sc.mu_y, 0.01, 1e-17);
    EXPECT_NEAR(sc.L_y, 100.0 * 0.01 / 0.0003, 1e-9);
    for (unsigned s = 0; s < 50; ++s) {
        const Vector y = bs::testing::random_vector(7, s);
        EXPECT_LE((r.from_scaled(r.to_scaled(y)) - y).norm(), 1e-15 * y.norm());
    }
}

TEST(Nag, UnitConditionConvergesInOneStep) {
    const bs::QuadraticProblem p(Matrix::Identity(2, 2), Vector::Ones(2), 1, {2.0, 2.0, 2.0, 2.0});
    const auto ref = p.reference();
    const auto t = bs::run_nag(p, bs::BlockVector::zeros(1, 1), bs::StoppingPolicy::iterations(1),
                               {}, &ref);
    EXPECT_NEAR(t.last().f_gap, 0.0, 1e-15);
}

TEST(Baselines, StartAtOptimumIsStationary) {
    const auto p = bs::gen_quadratic({5, 5, 1.0, 10.0, 1.0, 20.0, 0.0, 3});
    const auto ref = p->reference();
    const auto stop = bs::StoppingPolicy::iterations(100);
    for (const auto& t : {bs::run_nag(*p, p->optimum(), stop, {}, &ref),
                          bs::run_acdm(*p, p->optimum(), stop, {0, 1}, &ref),
                          bs::run_lincoupling(*p, p->optimum(), stop, {0, 1}, &ref)}) {
        for (const auto& row : t.rows) {
            EXPECT_LE(row.f_gap, 1e-12) << t.method;
        }
    }
}

TEST(Baselines, CounterDiscipline) {
    const auto p = bs::gen_quadratic({6, 4, 1.0, 10.0, 1.0, 40.0, 0.2, 5});
    const auto nag = bs::run_nag(*p, bs::BlockVector::zeros(6, 4), bs::StoppingPolicy::iterations(37));
    EXPECT_EQ(nag.last().grad_x_calls, 37u);
    EXPECT_EQ(nag.last().grad_y_calls, 37u);
    for (auto run : {&bs::run_acdm, &bs::run_lincoupling}) {
        p->reset_counters();
        const auto t = (*run)(*p, bs::BlockVector::zeros(6, 4), bs::StoppingPolicy::iterations(200),
                              {1, 7}, nullptr);
        EXPECT_EQ(t.last().grad_x_calls + t.last().grad_y_calls, 200u);
        EXPECT_EQ(p->counters().grad_x_calls + p->counters().grad_y_calls, 200u);
        EXPECT_EQ(p->counters().eval_calls, 0u);
    }
}

TEST(Baselines, SeededRunsAreDeterministic) {
    const auto p = bs::gen_quadratic({8, 4, 1.0, 30.0, 0.5, 90.0, 0.1, 2});
    const auto ref = p->reference();
    const auto stop = bs::StoppingPolicy::iterations(600);
    for (auto run : {&bs::run_acdm, &bs::run_lincoupling}) {
        const auto a = (*run)(*p, bs::BlockVector::zeros(8, 4), stop, {0, 42}, &ref);
        const auto b = (*run)(*p, bs::BlockVector::zeros(8, 4), stop, {0, 42}, &ref);
        const auto c = (*run)(*p, bs::BlockVector::zeros(8, 4), stop, {0, 43}, &ref);
        ASSERT_EQ(a.rows.size(), b.rows.size());
        bool differs = false;
        for (std::size_t i = 0; i < a.rows.size(); ++i) {
            EXPECT_EQ(a.rows[i].f_gap, b.rows[i].f_gap);
            EXPECT_EQ(a.rows[i].grad_x_calls, b.rows[i].grad_x_calls);
            differs |= a.rows[i].grad_x_calls != c.rows[i].grad_x_calls;
        }
        EXPECT_TRUE(differs);
    }
}

TEST(Baselines, AllReachTightGapWithinCaps) {
    for (unsigned seed = 0; seed < 4; ++seed) {
        const auto p = bs::gen_quadratic({10, 6, 0.5, 50.0, 0.2, 200.0, 0.3, seed});
        const auto ref = p->reference();
        const bs::BlockVector z0 = bs::BlockVector::zeros(10, 6);
        bs::StoppingPolicy nag_stop = bs::StoppingPolicy::gap(1e-8);
        nag_stop.max_iterations = bs::nag_iteration_cap(p->constants(), 1e-8);
        EXPECT_EQ(bs::run_nag(*p, z0, nag_stop, {}, &ref).stop, bs::StopReason::TargetReached);
        bs::StoppingPolicy rnd_stop = bs::StoppingPolicy::gap(1e-8);
        rnd_stop.max_iterations = bs::randomized_iteration_cap(p->constants(), 1e-8);
        for (unsigned s = 1; s <= 3; ++s) {
            EXPECT_EQ(bs::run_acdm(*p, z0, rnd_stop, {0, s}, &ref).stop,
                      bs::StopReason::TargetReached);
            EXPECT_EQ(bs::run_lincoupling(*p, z0, rnd_stop, {0, s}, &ref).stop,
                      bs::StopReason::TargetReached);
        }
    }
}

TEST(Baselines, RandomizedMethodsContractPerEpoch) {
    const auto p = bs::gen_quadratic({6, 6, 1.0, 20.0, 1.0, 20.0, 0.0, 8});
    const auto ref = p->reference();
    for (auto run : {&bs::run_acdm, &bs::run_lincoupling}) {
        for (unsigned s = 1; s <= 5; ++s) {
            const auto t = (*run)(*p, bs::BlockVector::zeros(6, 6),
                                  bs::StoppingPolicy::iterations(12 * 40), {0, s}, &ref);
            EXPECT_LT(t.last().f_gap, t.rows.front().f_gap * 1e-3);
            for (std::size_t i = 1; i < t.rows.size(); ++i) {
                if (t.rows[i - 1].f_gap > 1e-13) {
                    EXPECT_LT(t.rows[i].f_gap, t.rows[i - 1].f_gap);
                }
            }
        }
    }
}

TEST(Baselines, SymmetricProblemBalancesBlockCounts) {
    const auto p = bs::gen_quadratic({5, 5, 1.0, 10.0, 1.0, 10.0, 0.0, 4});
    std::uint64_t x = 0, y = 0;
    for (unsigned s = 1; s <= 10; ++s) {
        const auto t = bs::run_lincoupling(*p, bs::BlockVector::zeros(5, 5),
                                           bs::StoppingPolicy::iterations(1000), {0, s}, nullptr);
        x += t.last().grad_x_calls;
        y += t.last().grad_y_calls;
    }
    EXPECT_NEAR(static_cast<double>(x) / (x + y), 0.5, 0.03);
}

TEST(Nag, IterationsScaleWithSqrtKappa) {
    std::vector<double> lk, li;
    for (const double kappa : {1e2, 1e3, 1e4}) {
        const auto p = bs::gen_quadratic({20, 20, 1.0, kappa, 1.0, kappa, 0.0, 3});
        const auto ref = p->reference();
        const auto t = bs::run_nag(*p, bs::BlockVector::zeros(20, 20),
                                   bs::StoppingPolicy::gap(1e-8), {}, &ref);
        lk.push_back(std::log(kappa));
        li.push_back(std::log(static_cast<double>(t.last().outer_iter)));
    }
    const double slope = (li.back() - li.front()) / (lk.back() - lk.front());
    EXPECT_NEAR(slope, 0.5, 0.1);
}
