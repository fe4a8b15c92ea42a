#include "blocksplit/harness/experiment.hpp"

#include "blocksplit/archive.hpp"
#include "blocksplit/bam.hpp"
#include "blocksplit/baselines.hpp"
#include "blocksplit/harness/csv.hpp"
#include "blocksplit/harness/reference.hpp"
#include "blocksplit/hash.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <chrono>
#include <ctime>
#include <fstream>

namespace blocksplit::harness {

using nlohmann::json;

namespace {

std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

Reference reference_for(const BlockObjective& problem) {
    if (const auto* q = dynamic_cast<const QuadraticProblem*>(&problem)) {
        return q->reference();
    }
    if (const auto* l = dynamic_cast<const LogisticProblem*>(&problem)) {
        return logistic_reference(*l).reference;
    }
    return compute_reference(problem).reference;
}

json constants_json(const BlockConstants& c) {
    return {{"L_x", c.L_x}, {"L_y", c.L_y}, {"mu_x", c.mu_x}, {"mu_y", c.mu_y}};
}

} // namespace

const char* library_version() {
#ifdef BLOCKSPLIT_VERSION
    return BLOCKSPLIT_VERSION;
#else
    return "unknown";
#endif
}

bool ExperimentResult::all_ok() const {
    for (const auto& r : runs) {
        if (!r.ok) {
            return false;
        }
    }
    return !runs.empty();
}

PreparedProblem prepare_problem(const ProblemConfig& config) {
    PreparedProblem out;
    if (config.type == "quadratic") {
        auto q = gen_quadratic(config.quadratic);
        out.reference = q->reference();
        out.problem = std::move(q);
    } else if (config.type == "logistic") {
        const auto path = resolve_dataset(config.dataset);
        if (!std::filesystem::exists(path)) {
            throw InvalidInput("dataset not found: " + path.string() +
                               " (set BLOCKSPLIT_DATA_DIR or give a path)");
        }
        out.input_hash = hex64(fnv1a64_file(path));
        auto l = make_logistic(load_libsvm(path), config.dim_x, config.dim_y, config.mu_x / 2.0,
                               config.mu_y / 2.0, config.L_data);
        out.reference = logistic_reference(*l).reference;
        out.problem = std::move(l);
    } else if (config.type == "archive") {
        const std::filesystem::path path(config.archive);
        out.input_hash = hex64(fnv1a64_file(path));
        LoadedProblem loaded = load_archive(path);
        if (loaded.logistic) {
            const auto data = resolve_dataset(loaded.logistic->dataset, path.parent_path());
            out.input_hash = hex64(fnv1a64(hex64(fnv1a64_file(data)), fnv1a64(out.input_hash)));
        }
        out.reference = loaded.reference ? *loaded.reference : reference_for(*loaded.problem);
        out.problem = std::move(loaded.problem);
    } else {
        throw InvalidInput("unknown problem type '" + config.type + "'");
    }
    return out;
}

std::string config_hash(const ExperimentConfig& config, const std::string& input_hash) {
    ExperimentConfig c = config;
    c.output_dir = "-";
    std::uint64_t h = fnv1a64(c.canonical_json());
    h = fnv1a64(library_version(), h);
    h = fnv1a64(input_hash, h);
    return hex64(h);
}

std::string csv_name(const std::string& method, std::uint64_t seed, bool randomized) {
    return randomized ? fmt::format("{}_seed{}.csv", method, seed) : method + ".csv";
}

Trace run_method(const MethodConfig& method, std::uint64_t seed, const BlockObjective& problem,
                 const Reference& reference, const ExperimentConfig& config) {
    const StoppingConfig& s = config.stopping;
    StoppingPolicy stop;
    stop.target_gap = s.eps;
    stop.max_iterations = s.max_iterations;
    stop.max_grad_x_calls = s.max_grad_x_calls;
    stop.max_grad_y_calls = s.max_grad_y_calls;
    const std::int64_t stride = method.stride > 0 ? method.stride : config.stride;

    if (method.name == "bam") {
        if (method.diagnostics) {
            stop.target_psi_ratio = s.psi_ratio;
        }
        BamOptions options;
        options.budget = method.inner;
        options.diagnostics = method.diagnostics;
        options.stride = stride > 0 ? stride : 1;
        return run_bam(problem, BlockVector::zeros(problem.dim_x(), problem.dim_y()), stop,
                       options, &reference);
    }
    BaselineOptions options;
    options.stride = stride;
    options.seed = seed;
    const auto start = BlockVector::zeros(problem.dim_x(), problem.dim_y());
    if (method.name == "nag") {
        if (!stop.max_iterations && s.eps) {
            stop.max_iterations = nag_iteration_cap(problem.constants(), *s.eps);
        }
        return run_nag(problem, start, stop, options, &reference);
    }
    if (!stop.max_iterations && s.eps) {
        stop.max_iterations = randomized_iteration_cap(problem.constants(), *s.eps);
    }
    if (method.name == "acdm") {
        return run_acdm(problem, start, stop, options, &reference);
    }
    if (method.name == "lincoupling") {
        return run_lincoupling(problem, start, stop, options, &reference);
    }
    throw InvalidInput("unknown method '" + method.name + "'");
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    config.validate();
    const std::string started = utc_now();
    PreparedProblem prepared = prepare_problem(config.problem);
    const BlockObjective& problem = *prepared.problem;

    ExperimentResult result;
    result.output_dir = config.output_dir;
    result.config_hash = config_hash(config, prepared.input_hash);
    std::filesystem::create_directories(result.output_dir);

    json runs = json::array();
    for (const auto& method : config.methods) {
        const bool randomized = is_randomized(method.name);
        for (const std::uint64_t seed : method.seeds) {
            RunRecord rec;
            rec.method = method.name;
            rec.seed = seed;
            rec.csv = csv_name(method.name, seed, randomized);
            const auto clone = problem.clone();
            try {
                rec.trace = run_method(method, seed, *clone, prepared.reference, config);
                rec.ok = true;
            } catch (const std::exception& e) {
                rec.error = e.what();
            }
            json rj = {{"method", rec.method}, {"seed", rec.seed}, {"ok", rec.ok}};
            if (rec.ok) {
                write_trace_csv(rec.trace, result.output_dir / rec.csv, config.record_wall_time);
                const TraceRow& last = rec.trace.last();
                rj["csv"] = rec.csv;
                rj["stop_reason"] = to_string(rec.trace.stop);
                rj["rows"] = rec.trace.rows.size();
                rj["final"] = {{"outer_iter", last.outer_iter},
                               {"grad_x_calls", last.grad_x_calls},
                               {"grad_y_calls", last.grad_y_calls},
                               {"f_gap", last.f_gap}};
            } else {
                rj["error"] = rec.error;
            }
            runs.push_back(std::move(rj));
            result.runs.push_back(std::move(rec));
        }
    }

    json meta = {{"name", config.name},
                 {"config", json::parse(config.canonical_json())},
                 {"config_hash", result.config_hash},
                 {"input_hash", prepared.input_hash},
                 {"library_version", library_version()},
                 {"problem",
                  {{"kind", problem.kind()},
                   {"dim_x", problem.dim_x()},
                   {"dim_y", problem.dim_y()},
                   {"constants", constants_json(problem.constants())},
                   {"f_star", prepared.reference.f_star}}},
                 {"runs", std::move(runs)},
                 {"started_at", started},
                 {"finished_at", utc_now()}};
    if (problem.constants().strongly_convex()) {
        const BamParams p = compute_parameters(problem.constants());
        meta["bam_parameters"] = {{"alpha", p.alpha}, {"eta_x", p.eta_x}, {"eta_y", p.eta_y}};
    }
    std::ofstream out(result.output_dir / "metadata.json", std::ios::binary);
    out << meta.dump(2) << "\n";
    if (!out) {
        throw std::runtime_error("cannot write metadata.json in " + result.output_dir.string());
    }
    return result;
}

} // namespace blocksplit::harness
