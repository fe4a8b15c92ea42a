// Acceptance runner. Prints one PASS/FAIL line per criterion; exit status is
// nonzero when any selected criterion fails.
//
//   blocksplit_acceptance [--criterion N]

#include "blocksplit/archive.hpp"
#include "blocksplit/bam.hpp"
#include "blocksplit/baselines.hpp"
#include "blocksplit/harness/experiment.hpp"
#include "blocksplit/harness/reference.hpp"
#include "blocksplit/inner.hpp"
#include "blocksplit/libsvm.hpp"
#include "blocksplit/logistic.hpp"
#include "blocksplit/quadratic.hpp"
#include "blocksplit/regularize.hpp"
#include "support/oracles.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace bs = blocksplit;
namespace h = blocksplit::harness;
namespace fs = std::filesystem;
using bs::Vector;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int id;
    const char* label;
    double time_limit_s;  // 0: no limit stated
    std::function<Outcome()> run;
};

/// f(z) - f(z*) for a quadratic, written out from A and b.
double quad_gap(const bs::QuadraticProblem& p, const Vector& x, const Vector& y) {
    const Vector z = (Vector(x.size() + y.size()) << x, y).finished();
    const Vector zs = p.optimum().joined();
    const Vector d = z - zs;
    return d.dot(p.A() * d) + (2.0 * p.A() * zs + p.b()).dot(d);
}

double psi_of(const bs::QuadraticProblem& p, const bs::BamState& s, double alpha, double eta_x,
              double eta_y) {
    const double rx = (s.x - p.optimum().x).squaredNorm();
    const double ry = (s.y - p.optimum().y).squaredNorm();
    return (1.0 + alpha) * (rx / eta_x + ry / eta_y) + (2.0 / alpha) * quad_gap(p, s.x_bar, s.y_bar);
}

/// Least-squares slope of log(ys) against log(xs).
double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double u = std::log(xs[i]);
        const double v = std::log(ys[i]);
        sx += u;
        sy += v;
        sxx += u * u;
        sxy += u * v;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

struct ContractionRun {
    std::int64_t steps = 0;
    double worst_contraction = 0.0;  // max (1 + alpha) Psi^{k+1} / Psi^k
    double worst_lemma = -1e300;     // max residual / ((eta_x alpha / 2)|g_x|^2)
    bool reached = false;
};

/// Steps BAM until Psi / Psi^0 <= ratio, checking both inequalities with
/// quantities recomputed here from A and b.
ContractionRun contraction_run(const bs::QuadraticProblem& p, double ratio) {
    const auto& c = p.constants();
    const double alpha = std::sqrt(c.mu_x / c.L_x);
    const double eta_x = 1.0 / std::sqrt(c.mu_x * c.L_x);
    const double eta_y = alpha / c.mu_y;
    const bs::BamParams params{alpha, eta_x, eta_y};
    bs::CompositeInnerSolver inner;
    auto s = bs::BamState::start(bs::BlockVector::zeros(p.dim_x(), p.dim_y()));
    const double psi0 = psi_of(p, s, alpha, eta_x, eta_y);
    double psi = psi0;
    ContractionRun r;
    const std::int64_t cap = bs::default_outer_cap(c.kappa_x(), 1e-9);
    while (psi > ratio * psi0 && r.steps < cap) {
        auto next = bs::bam_step(s, p, params, inner);
        const double psi_next = psi_of(p, next, alpha, eta_x, eta_y);
        r.worst_contraction = std::max(r.worst_contraction, (1.0 + alpha) * psi_next / psi);

        const Vector& g = next.last_grad_x;
        const Vector xb = next.x_under - eta_x * alpha * g;
        const double descent = eta_x * alpha / 2.0 * g.squaredNorm();
        const double drop = quad_gap(p, xb, next.y_bar) - quad_gap(p, next.x_under, next.y_bar);
        if (descent > 0.0) {
            r.worst_lemma = std::max(r.worst_lemma, (drop + descent) / descent);
        }
        psi = psi_next;
        s = std::move(next);
        ++r.steps;
    }
    r.reached = psi <= ratio * psi0;
    return r;
}

/// The 100 problems shared by criteria 1 and 2: kappa_x, kappa_y log-uniform
/// in [10, 1e4], every other instance coupled.
std::vector<ContractionRun> random_suite() {
    static std::vector<ContractionRun> cached;
    if (!cached.empty()) {
        return cached;
    }
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> expo(1.0, 4.0);
    for (unsigned i = 0; i < 100; ++i) {
        bs::QuadraticSpec s;
        s.dim_x = 20;
        s.dim_y = 5;
        s.mu_x = 1.0;
        s.mu_y = 1.0;
        s.L_x = std::pow(10.0, expo(rng));
        s.L_y = std::pow(10.0, expo(rng));
        s.coupling_rho = i % 2 == 1 ? 0.2 : 0.0;
        s.seed = 1000 + i;
        cached.push_back(contraction_run(*bs::gen_quadratic(s), 1e-8));
    }
    return cached;
}

Outcome lyapunov_contraction() {
    const auto runs = random_suite();
    double worst = 0.0;
    int unfinished = 0;
    for (const auto& r : runs) {
        worst = std::max(worst, r.worst_contraction);
        unfinished += r.reached ? 0 : 1;
    }
    return {worst <= 1.0 + 1e-8 && unfinished == 0,
            fmt::format("max (1+alpha)Psi+/Psi = {:.12f} over {} problems, {} unfinished", worst,
                        runs.size(), unfinished)};
}

Outcome descent_residual() {
    const auto runs = random_suite();
    double worst = -1e300;
    for (const auto& r : runs) {
        worst = std::max(worst, r.worst_lemma);
    }
    return {worst <= 1e-9, fmt::format("max relative residual = {:.3e}", worst)};
}

std::int64_t outer_to_psi_ratio(const bs::QuadraticSpec& spec, double ratio,
                                std::uint64_t* grad_y = nullptr) {
    const auto p = bs::gen_quadratic(spec);
    const auto ref = p->reference();
    bs::BamOptions o;
    o.diagnostics = true;
    bs::StoppingPolicy stop;
    stop.target_psi_ratio = ratio;
    const auto t =
        bs::run_bam(*p, bs::BlockVector::zeros(spec.dim_x, spec.dim_y), stop, o, &ref);
    if (t.stop != bs::StopReason::TargetReached) {
        return -1;
    }
    if (grad_y != nullptr) {
        *grad_y = t.last().grad_y_calls;
    }
    return t.last().outer_iter;
}

Outcome outer_slope() {
    std::vector<double> kappas{1e2, 1e3, 1e4};
    std::vector<double> iters;
    std::string detail;
    for (const double kx : kappas) {
        const auto k = outer_to_psi_ratio({20, 5, 1.0, kx, 1.0, 500.0, 0.0, 7}, 1e-8);
        if (k < 0) {
            return {false, fmt::format("kappa_x = {:g} did not reach the target", kx)};
        }
        iters.push_back(static_cast<double>(k));
        detail += fmt::format("K({:g}) = {}, ", kx, k);
    }
    const double slope = loglog_slope(kappas, iters);
    return {std::abs(slope - 0.5) <= 0.1, detail + fmt::format("slope = {:.4f}", slope)};
}

Outcome grad_y_split() {
    const double eps = 1e-8;
    double lo = 1e300;
    double hi = 0.0;
    for (const double kx : {1e2, 1e3, 1e4}) {
        for (const double ky : {1e2, 1e3, 1e4}) {
            std::uint64_t gy = 0;
            if (outer_to_psi_ratio({20, 5, 1.0, kx, 1.0, ky, 0.0, 11}, eps, &gy) < 0) {
                return {false, fmt::format("({:g}, {:g}) did not reach the target", kx, ky)};
            }
            const double v = static_cast<double>(gy) /
                             (std::max(std::sqrt(kx), std::sqrt(ky)) * std::log(1.0 / eps));
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    return {hi / lo <= 5.0,
            fmt::format("normalized grad_y calls in [{:.3f}, {:.3f}], spread {:.3f}", lo, hi,
                        hi / lo)};
}

Outcome ogmg_rate() {
    const std::vector<double> Ns{8, 16, 32, 64, 128};
    double worst = -1e300;
    for (const double kappa : {1e2, 1e4, 1e6}) {
        for (unsigned seed = 0; seed < 4; ++seed) {
            // Aux spectrum [1/kappa, 1]: base y block [1/(2 kappa), 1 - 1/(2 kappa)] plus rho.
            const double rho = 0.5 / kappa;
            // b = 0 keeps the start O(1) away from the minimizer.
            const auto g0 = bs::gen_quadratic({1, 30, 1.0, 1.0, rho, 1.0 - rho, 0.0, seed});
            const bs::QuadraticProblem p(g0->A(), Vector::Zero(31), 1, g0->constants());
            const bs::AuxProblem aux(p, Vector::Zero(1), bs::testing::random_vector(30, seed), rho);
            std::vector<double> g;
            for (const double N : Ns) {
                const int half = static_cast<int>(N) / 2;
                const Vector y = bs::ogmg_run(aux, bs::nag_run(aux, aux.y_center(), half), half);
                g.push_back(aux.gradient(y).norm());
            }
            worst = std::max(worst, loglog_slope(Ns, g));
        }
    }
    return {worst <= -1.9, fmt::format("largest fitted slope over 12 problems = {:.4f}", worst)};
}

Outcome theta_recursion() {
    double worst = 0.0;
    for (const int N : {1, 2, 5, 10, 100, 1000, 10000}) {
        const auto t = bs::ogmg_thetas(N);
        if (t[N] != 1.0) {
            return {false, fmt::format("theta_N != 1 at N = {}", N)};
        }
        for (int i = 1; i < N; ++i) {
            worst = std::max(worst, std::abs(t[i] * t[i] - t[i] - t[i + 1] * t[i + 1]) /
                                        (t[i] * t[i]));
        }
        worst = std::max(worst,
                         std::abs(t[0] * t[0] - t[0] - 2 * t[1] * t[1]) / (t[0] * t[0]));
    }
    const double t01 = bs::ogmg_thetas(1)[0];
    const double t12 = bs::ogmg_thetas(2)[1];
    const bool spots =
        std::abs(t01 - 2.0) <= 1e-15 && std::abs(t12 - (1.0 + std::sqrt(5.0)) / 2.0) <= 1e-15;
    return {worst <= 1e-12 && spots,
            fmt::format("max relative residual {:.2e}, theta_0(1) = {:.17g}, theta_1(2) = {:.17g}",
                        worst, t01, t12)};
}

struct CallsToEps {
    bool reached = false;
    std::uint64_t x = 0;
    std::uint64_t y = 0;
};

CallsToEps calls_to(const bs::Trace& t, double eps) {
    const auto* row = t.first_below(eps);
    if (row == nullptr) {
        return {};
    }
    return {true, row->grad_x_calls, row->grad_y_calls};
}

Outcome quadratic_vs_nag() {
    const double eps = 1e-6;
    std::string detail;
    bool ok = true;
    double prev_advantage = 0.0;
    for (const double Ly : {500.0, 5000.0, 50000.0}) {
        const auto p = bs::gen_quadratic({100, 10, 0.1, 50.0, 0.1, Ly, 0.0, 1});
        const auto ref = p->reference();
        const auto z0 = bs::BlockVector::zeros(100, 10);
        const auto bam = calls_to(bs::run_bam(*p, z0, bs::StoppingPolicy::gap(eps), {}, &ref), eps);
        auto stop = bs::StoppingPolicy::gap(eps);
        stop.max_iterations = bs::nag_iteration_cap(p->constants(), eps);
        const auto nag = calls_to(bs::run_nag(*p, z0, stop, {}, &ref), eps);
        if (!bam.reached || !nag.reached) {
            return {false, fmt::format("L_y = {:g}: a method missed the target", Ly)};
        }
        const double advantage = static_cast<double>(nag.x) / static_cast<double>(bam.x);
        const double y_ratio = static_cast<double>(bam.y) / static_cast<double>(nag.y);
        ok = ok && bam.x < nag.x && advantage > prev_advantage && y_ratio <= 3.0;
        prev_advantage = advantage;
        detail += fmt::format("L_y={:g}: grad_x {} vs {} ({:.1f}x), grad_y ratio {:.2f}; ", Ly,
                              bam.x, nag.x, advantage, y_ratio);
    }
    return {ok, detail};
}

fs::path a1a_path() { return bs::resolve_dataset("a1a"); }

Outcome missing_a1a() {
    return {false, fmt::format("dataset not found at {} (set BLOCKSPLIT_DATA_DIR to a directory "
                               "containing the LIBSVM file a1a)",
                               a1a_path().string())};
}

Outcome a1a_vs_nag() {
    if (!fs::exists(a1a_path())) {
        return missing_a1a();
    }
    const auto data = bs::load_libsvm(a1a_path());
    const double eps = 1e-6;
    std::string detail;
    bool ok = true;
    for (const double mu_y : {0.002, 0.0001, 0.00005}) {
        const auto p = bs::make_logistic(data, 100, 19, 0.01 / 2.0, mu_y / 2.0);
        const auto ref = h::logistic_reference(*p).reference;
        const auto z0 = bs::BlockVector::zeros(100, 19);
        auto bam_stop = bs::StoppingPolicy::gap(eps);
        const auto bam = calls_to(bs::run_bam(*p, z0, bam_stop, {}, &ref), eps);
        auto stop = bs::StoppingPolicy::gap(eps);
        stop.max_iterations = bs::nag_iteration_cap(p->constants(), eps);
        const auto nag = calls_to(bs::run_nag(*p, z0, stop, {}, &ref), eps);
        ok = ok && bam.reached && nag.reached && bam.x < nag.x;
        detail += fmt::format("mu_y={:g}: grad_x {} vs {}; ", mu_y, bam.x, nag.x);
    }
    return {ok, detail};
}

bs::LibsvmDataset synthetic_dataset() {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    bs::LibsvmDataset d;
    d.n_features = 30;
    for (int r = 0; r < 200; ++r) {
        bs::LibsvmRow row;
        row.label = u(rng) > 0 ? 1.0 : -1.0;
        for (bs::Index j = 0; j < 30; ++j) {
            if (u(rng) > 0.6) {
                row.features.push_back({j, 2.0 * u(rng)});
            }
        }
        d.rows.push_back(std::move(row));
    }
    return d;
}

Outcome oracle_fd() {
    std::vector<std::pair<std::string, std::shared_ptr<const bs::BlockObjective>>> problems;
    problems.emplace_back("quadratic",
                          bs::gen_quadratic({20, 5, 0.1, 50.0, 0.1, 500.0, 0.0, 1}));
    problems.emplace_back("coupled-quadratic",
                          bs::gen_quadratic({20, 5, 1.0, 100.0, 1.0, 1000.0, 0.2, 2}));
    const auto data = synthetic_dataset();
    std::shared_ptr<const bs::BlockObjective> logit = bs::make_logistic(data, 20, 10, 0.005, 0.001);
    problems.emplace_back("logistic", logit);
    problems.emplace_back(
        "regularized-logistic",
        bs::regularize(bs::make_logistic(data, 20, 10, 0.0, 0.0), 1e-3, 5.0,
                       bs::BlockVector::zeros(20, 10)));
    std::string detail;
    bool ok = true;
    for (const auto& [name, p] : problems) {
        double worst = 0.0;
        for (unsigned s = 0; s < 100; ++s) {
            const Vector z = bs::testing::random_vector(p->dim_x() + p->dim_y(), 7919 * s + 1);
            worst = std::max(worst,
                             bs::testing::fd_relative_error(*p, z.head(p->dim_x()), z.tail(p->dim_y())));
        }
        ok = ok && worst <= 1e-5;
        detail += fmt::format("{} {:.2e}; ", name, worst);
    }
    return {ok, detail};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome determinism() {
    const std::string text = R"({
      "name": "determinism",
      "problem": {"type": "quadratic", "dim_x": 30, "dim_y": 8, "mu_x": 0.1, "L_x": 50,
                  "mu_y": 0.1, "L_y": 2000, "coupling_rho": 0.2, "seed": 5},
      "methods": [{"name": "bam", "diagnostics": true}, "nag", "acdm", "lincoupling"],
      "stopping": {"eps": 1e-8}
    })";
    const fs::path root = fs::temp_directory_path() / "blocksplit_acceptance_determinism";
    fs::remove_all(root);
    std::vector<std::vector<std::string>> files(2);
    for (int pass = 0; pass < 2; ++pass) {
        auto cfg = h::parse_config(text);
        cfg.output_dir = (root / std::to_string(pass)).string();
        const auto r = h::run_experiment(cfg);
        if (!r.all_ok()) {
            return {false, "a run failed"};
        }
        for (const auto& run : r.runs) {
            files[pass].push_back(slurp(r.output_dir / run.csv));
        }
    }
    const bool same = files[0] == files[1] && !files[0].empty();
    fs::remove_all(root);
    return {same, fmt::format("{} CSV traces compared byte for byte", files[0].size())};
}

Outcome a1a_ingestion() {
    if (!fs::exists(a1a_path())) {
        return missing_a1a();
    }
    const auto data = bs::load_libsvm(a1a_path());
    const double L = bs::estimate_smoothness(data);
    const bool ok = data.size() == 1605 && data.n_features == 123 &&
                    std::abs(L - 1.567) <= 0.25 * 1.567;
    return {ok, fmt::format("{} samples, {} features, L_data = {:.4f}", data.size(),
                            data.n_features, L)};
}

} // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
            only = std::atoi(argv[++i]);
        } else {
            fmt::print(stderr, "usage: {} [--criterion N]\n", argv[0]);
            return 2;
        }
    }
    const std::vector<Criterion> criteria{
        {1, "lyapunov_contraction", 60, lyapunov_contraction},
        {2, "descent_residual", 60, descent_residual},
        {3, "outer_slope", 120, outer_slope},
        {4, "grad_y_split", 300, grad_y_split},
        {5, "ogmg_rate", 0, ogmg_rate},
        {6, "theta_recursion", 0, theta_recursion},
        {7, "quadratic_vs_nag", 120, quadratic_vs_nag},
        {8, "a1a_vs_nag", 300, a1a_vs_nag},
        {9, "oracle_fd", 0, oracle_fd},
        {10, "determinism", 0, determinism},
        {11, "a1a_ingestion", 0, a1a_ingestion},
    };
    if (only != 0 && (only < 1 || only > static_cast<int>(criteria.size()))) {
        fmt::print(stderr, "unknown criterion {}\n", only);
        return 2;
    }
    int failures = 0;
    for (const auto& c : criteria) {
        if (only != 0 && c.id != only) {
            continue;
        }
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.time_limit_s > 0 && secs > c.time_limit_s) {
            o.pass = false;
            o.detail += fmt::format(" [over the {:g} s limit]", c.time_limit_s);
        }
        fmt::print("{} {:>2} {}: {} ({:.1f} s)\n", o.pass ? "PASS" : "FAIL", c.id, c.label, o.detail,
                   secs);
        std::fflush(stdout);
        failures += o.pass ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
