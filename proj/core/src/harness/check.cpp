#include "blocksplit/harness/check.hpp"

#include "blocksplit/bam.hpp"
#include "blocksplit/baselines.hpp"
#include "blocksplit/logistic.hpp"
#include "blocksplit/quadratic.hpp"
#include "blocksplit/random.hpp"
#include "blocksplit/regularize.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

namespace blocksplit::harness {

namespace {

QuadraticSpec random_spec(const CheckOptions& o, int i) {
    Rng rng(o.seed * 7919 + static_cast<std::uint64_t>(i));
    QuadraticSpec s;
    s.dim_x = 20;
    s.dim_y = 5;
    s.mu_x = 1.0;
    s.mu_y = 1.0;
    s.L_x = std::pow(10.0, rng.uniform(1.0, 4.0));
    s.L_y = std::pow(10.0, rng.uniform(1.0, 4.0));
    s.coupling_rho = i % 2 == 1 ? 0.2 : 0.0;
    s.seed = o.seed * 1000003 + static_cast<std::uint64_t>(i);
    return s;
}

BamParams checked_parameters(const BlockConstants& c, double mu_x_scale) {
    BlockConstants corrupted = c;
    corrupted.mu_x = std::min(c.mu_x * mu_x_scale, c.L_x);
    return compute_parameters(corrupted);
}

/// Steps BAM until Psi / Psi^0 <= 1e-9 (or the default cap) and hands every
/// step to `visit`.
void drive_bam(const QuadraticProblem& p, const BamParams& params,
               const std::function<void(const BamState&, const BamState&, double, double)>& visit) {
    CompositeInnerSolver inner;
    const Reference ref = p.reference();
    BamState state = BamState::start(BlockVector::zeros(p.dim_x(), p.dim_y()));
    const double psi0 = lyapunov(state, params, *ref.optimum, ref.f_star, p).psi;
    double psi = psi0;
    const std::int64_t cap = default_outer_cap(p.constants().kappa_x(), 1e-9);
    for (std::int64_t k = 0; k < cap && psi > 1e-9 * psi0; ++k) {
        BamState next = bam_step(state, p, params, inner);
        const double psi_next = lyapunov(next, params, *ref.optimum, ref.f_star, p).psi;
        visit(state, next, psi, psi_next);
        psi = psi_next;
        state = std::move(next);
    }
}

SuiteResult suite_lyapunov(const CheckOptions& o) {
    SuiteResult r{"lyapunov", 0, 0, -std::numeric_limits<double>::infinity(), ""};
    for (int i = 0; i < o.problems; ++i) {
        const auto p = gen_quadratic(random_spec(o, i));
        const BamParams params = checked_parameters(p->constants(), o.mu_x_scale);
        bool ok = true;
        drive_bam(*p, params, [&](const BamState&, const BamState&, double before, double after) {
            const double ratio = (1.0 + params.alpha) * after / before;
            r.max_residual = std::max(r.max_residual, ratio - 1.0);
            if (!(ratio <= 1.0 + 1e-8)) {
                ok = false;
            }
        });
        ++r.cases;
        r.failures += ok ? 0 : 1;
    }
    r.detail = "max over steps of (1 + alpha) Psi^{k+1} / Psi^k - 1";
    return r;
}

SuiteResult suite_descent(const CheckOptions& o) {
    SuiteResult r{"descent", 0, 0, -std::numeric_limits<double>::infinity(), ""};
    for (int i = 0; i < o.problems; ++i) {
        const auto p = gen_quadratic(random_spec(o, i));
        const BamParams params = checked_parameters(p->constants(), o.mu_x_scale);
        const double step = params.eta_x * params.alpha;
        bool ok = true;
        drive_bam(*p, params, [&](const BamState&, const BamState& next, double, double) {
            const double res =
                lemma1_residual(next.x_under, next.y_bar, next.last_grad_x, params, *p);
            const double scale = 0.5 * step * next.last_grad_x.squaredNorm();
            const double rel = scale > 0.0 ? res / scale : (res > 0.0 ? res : 0.0);
            r.max_residual = std::max(r.max_residual, rel);
            if (!(rel <= 1e-9)) {
                ok = false;
            }
        });
        ++r.cases;
        r.failures += ok ? 0 : 1;
    }
    r.detail = "max of the descent residual relative to (eta_x alpha / 2)|g_x|^2";
    return r;
}

SuiteResult suite_thetas(const CheckOptions&) {
    SuiteResult r{"thetas", 0, 0, 0.0, ""};
    for (const int n : {1, 2, 3, 5, 10, 100, 1000, 10000}) {
        const auto t = ogmg_thetas(n);
        double worst = std::abs(t[static_cast<std::size_t>(n)] - 1.0);
        for (int i = 1; i < n; ++i) {
            const double a = t[static_cast<std::size_t>(i)];
            const double b = t[static_cast<std::size_t>(i) + 1];
            worst = std::max(worst, std::abs(a * a - a - b * b) / (a * a));
        }
        worst = std::max(worst, std::abs(t[0] * t[0] - t[0] - 2.0 * t[1] * t[1]) / (t[0] * t[0]));
        ++r.cases;
        r.failures += worst <= 1e-12 ? 0 : 1;
        r.max_residual = std::max(r.max_residual, worst);
    }
    const double spot1 = std::abs(ogmg_thetas(1)[0] - 2.0);
    const double spot2 = std::abs(ogmg_thetas(2)[1] - (1.0 + std::sqrt(5.0)) / 2.0);
    r.cases += 2;
    r.failures += (spot1 <= 1e-15 ? 0 : 1) + (spot2 <= 1e-15 ? 0 : 1);
    r.max_residual = std::max({r.max_residual, spot1, spot2});
    r.detail = "relative residual of the theta recursion for N up to 1e4, plus spot values";
    return r;
}

LibsvmDataset synthetic_dataset(std::uint64_t seed, int rows, int features) {
    Rng rng(seed);
    LibsvmDataset d;
    d.n_features = features;
    for (int k = 0; k < rows; ++k) {
        LibsvmRow row;
        row.label = rng.uniform() < 0.5 ? -1.0 : 1.0;
        for (int j = 0; j < features; ++j) {
            if (rng.uniform() < 0.25) {
                row.features.push_back({j, rng.uniform() < 0.5 ? 1.0 : rng.normal()});
            }
        }
        d.rows.push_back(std::move(row));
    }
    return d;
}

/// max_i |fd_i - g_i| / max(|g|, 1e-8) with central differences.
double fd_error(const BlockObjective& p, Vector x, Vector y) {
    const Vector gx = p.partial_x(x, y);
    const Vector gy = p.partial_y(x, y);
    const double scale = std::max(std::sqrt(gx.squaredNorm() + gy.squaredNorm()), 1e-8);
    double worst = 0.0;
    auto probe = [&](Vector& v, Index i, double exact) {
        const double h = 1e-6 * std::max(1.0, std::abs(v(i)));
        const double keep = v(i);
        v(i) = keep + h;
        const double up = p.value(x, y);
        v(i) = keep - h;
        const double down = p.value(x, y);
        v(i) = keep;
        worst = std::max(worst, std::abs((up - down) / (2.0 * h) - exact) / scale);
    };
    for (Index i = 0; i < x.size(); ++i) {
        probe(x, i, gx(i));
    }
    for (Index i = 0; i < y.size(); ++i) {
        probe(y, i, gy(i));
    }
    return worst;
}

SuiteResult suite_finite_diff(const CheckOptions& o) {
    SuiteResult r{"finite_diff", 0, 0, 0.0, ""};
    std::vector<std::shared_ptr<const BlockObjective>> problems;
    QuadraticSpec s;
    s.dim_x = 8;
    s.dim_y = 4;
    s.L_x = 20.0;
    s.L_y = 40.0;
    s.mu_x = 1.0;
    s.mu_y = 1.0;
    s.seed = o.seed;
    problems.push_back(gen_quadratic(s));
    s.coupling_rho = 0.5;
    problems.push_back(gen_quadratic(s));
    const LibsvmDataset data = synthetic_dataset(o.seed, 60, 14);
    problems.push_back(make_logistic(data, 8, 4, 0.01, 0.002));
    std::shared_ptr<const BlockObjective> flat = make_logistic(data, 8, 4, 0.0, 0.0);
    problems.push_back(regularize(flat, 0.1, 1.0, BlockVector::zeros(8, 4)));

    Rng rng(o.seed + 17);
    for (const auto& p : problems) {
        for (int t = 0; t < 25; ++t) {
            Vector x(p->dim_x());
            Vector y(p->dim_y());
            for (Index i = 0; i < x.size(); ++i) x(i) = rng.normal();
            for (Index i = 0; i < y.size(); ++i) y(i) = rng.normal();
            const double e = fd_error(*p, x, y);
            ++r.cases;
            r.failures += e <= 1e-5 ? 0 : 1;
            r.max_residual = std::max(r.max_residual, e);
        }
    }
    r.detail = "central-difference gradient error relative to |grad f| (quadratic, coupled "
               "quadratic, logistic, regularized logistic)";
    return r;
}

class RecordingInner : public InnerSolver {
public:
    InnerResult solve(const AuxProblem& aux) override {
        last = inner.solve(aux);
        return last;
    }
    CompositeInnerSolver inner;
    InnerResult last;
};

SuiteResult suite_counters(const CheckOptions& o) {
    SuiteResult r{"counters", 0, 0, 0.0, ""};
    auto expect = [&](bool ok) {
        ++r.cases;
        if (!ok) {
            ++r.failures;
        }
    };
    QuadraticSpec s;
    s.dim_x = 10;
    s.dim_y = 6;
    s.L_x = 100.0;
    s.L_y = 400.0;
    s.mu_x = 1.0;
    s.mu_y = 1.0;
    s.coupling_rho = 0.3;
    s.seed = o.seed;
    const auto p = gen_quadratic(s);
    const BamParams params = compute_parameters(p->constants());

    RecordingInner inner;
    BamState state = BamState::start(BlockVector::zeros(p->dim_x(), p->dim_y()));
    for (int k = 0; k < 30; ++k) {
        const OracleCounters before = p->counters();
        state = bam_step(state, *p, params, inner);
        const OracleCounters after = p->counters();
        expect(after.grad_x_calls - before.grad_x_calls == 1);
        expect(after.grad_y_calls - before.grad_y_calls == inner.last.grad_calls);
        expect(after.eval_calls == before.eval_calls);
    }

    const OracleCounters before = p->counters();
    (void)p->value(state.x, state.y);
    (void)p->partial_x(state.x, state.y);
    (void)p->partial_y(state.x, state.y);
    (void)p->suboptimality(state.x, state.y, &p->optimum(), p->f_star());
    expect(p->counters() == before);

    const auto start = BlockVector::zeros(p->dim_x(), p->dim_y());
    const auto ref = p->reference();
    for (const std::int64_t K : {1, 7, 50}) {
        const auto q = p->clone();
        const Trace t = run_nag(*q, start, StoppingPolicy::iterations(K), {}, &ref);
        expect(t.last().grad_x_calls == static_cast<std::uint64_t>(K) &&
               t.last().grad_y_calls == static_cast<std::uint64_t>(K));
        for (const auto& run : {run_acdm, run_lincoupling}) {
            const auto c = p->clone();
            BaselineOptions bo;
            bo.seed = o.seed;
            const Trace tr = run(*c, start, StoppingPolicy::iterations(K), bo, &ref);
            expect(tr.last().grad_x_calls + tr.last().grad_y_calls ==
                   static_cast<std::uint64_t>(K));
            expect(c->counters().eval_calls == 0);
        }
    }
    r.detail = "per-step oracle accounting of BAM, NAG, ACDM, LinCoupling and the uncounted channel";
    return r;
}

using SuiteFn = SuiteResult (*)(const CheckOptions&);

const std::map<std::string, SuiteFn>& registry() {
    static const std::map<std::string, SuiteFn> r{{"lyapunov", suite_lyapunov},
                                                  {"descent", suite_descent},
                                                  {"thetas", suite_thetas},
                                                  {"finite_diff", suite_finite_diff},
                                                  {"counters", suite_counters}};
    return r;
}

} // namespace

const std::vector<std::string>& check_suites() {
    static const std::vector<std::string> names{"lyapunov", "descent", "thetas", "finite_diff",
                                                "counters"};
    return names;
}

bool CheckReport::passed() const {
    return !suites.empty() &&
           std::all_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.passed(); });
}

std::string CheckReport::to_json() const {
    nlohmann::json j;
    j["passed"] = passed();
    j["suites"] = nlohmann::json::array();
    for (const auto& s : suites) {
        j["suites"].push_back({{"name", s.name},
                               {"cases", s.cases},
                               {"failures", s.failures},
                               {"max_residual", s.max_residual},
                               {"passed", s.passed()},
                               {"detail", s.detail}});
    }
    return j.dump(2);
}

CheckReport run_checks(const std::vector<std::string>& suites, const CheckOptions& options) {
    if (options.problems < 1) {
        throw InvalidInput("check: problems must be >= 1");
    }
    if (!(options.mu_x_scale > 0.0)) {
        throw InvalidInput("check: mu_x_scale must be > 0");
    }
    const auto& names = suites.empty() ? check_suites() : suites;
    CheckReport report;
    for (const auto& name : names) {
        const auto it = registry().find(name);
        if (it == registry().end()) {
            throw InvalidInput("unknown check suite '" + name + "'");
        }
        try {
            report.suites.push_back(it->second(options));
        } catch (const std::exception& e) {
            SuiteResult failed{name, 1, 1, std::numeric_limits<double>::infinity(),
                               std::string("aborted: ") + e.what()};
            report.suites.push_back(std::move(failed));
        }
    }
    return report;
}

} // namespace blocksplit::harness
