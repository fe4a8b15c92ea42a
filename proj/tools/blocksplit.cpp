#include "blocksplit/archive.hpp"
#include "blocksplit/harness/check.hpp"
#include "blocksplit/harness/config.hpp"
#include "blocksplit/harness/experiment.hpp"
#include "blocksplit/harness/report.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace bs = blocksplit;
namespace bh = blocksplit::harness;

namespace {

constexpr int kExitRunFailed = 1;
constexpr int kExitBadInput = 2;

std::string read_text(const std::string& path_or_json) {
    if (!path_or_json.empty() && path_or_json.front() == '{') {
        return path_or_json;
    }
    std::ifstream in(path_or_json, std::ios::binary);
    if (!in) {
        throw bs::InvalidInput("cannot open " + path_or_json);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Block accelerated method experiments: run, generate, check, report"};
    app.set_version_flag("--version", bh::library_version());
    app.require_subcommand(1);

    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<double> eps;
    std::optional<std::string> methods;
    std::optional<std::int64_t> stride;

    auto* run = app.add_subcommand("run", "Run an experiment config");
    std::string config_path;
    run->add_option("config", config_path, "JSON experiment config")->required();
    run->add_option("--seed", seed, "Override the quadratic generator seed");
    run->add_option("--out", out, "Override the output directory");
    run->add_option("--eps", eps, "Override the target f-gap");
    run->add_option("--methods", methods, "Comma-separated subset, e.g. bam,nag");
    run->add_option("--stride", stride, "Override the trace stride (0 = method default)");

    auto* gen = app.add_subcommand("generate", "Write a random quadratic as a problem archive");
    std::string spec_arg;
    std::string gen_out;
    gen->add_option("quadratic-spec", spec_arg, "Generator spec: JSON file or inline JSON")
        ->required();
    gen->add_option("-o,--out", gen_out, "Archive file to write")->required();
    gen->add_option("--seed", seed, "Override the generator seed");

    auto* check = app.add_subcommand("check", "Run invariant suites");
    std::vector<std::string> suites;
    bh::CheckOptions check_options;
    std::string report_path;
    check->add_option("suite", suites, "lyapunov, descent, thetas, finite_diff, counters (default all)");
    check->add_option("--seed", check_options.seed, "Seed of the random problems");
    check->add_option("--problems", check_options.problems, "Random quadratics per suite");
    check->add_option("--mu-x-scale", check_options.mu_x_scale,
                      "Multiply mu_x before deriving BAM parameters (fault injection)");
    check->add_option("--out", report_path, "Also write the JSON report to this file");

    auto* report = app.add_subcommand("report", "Summarize an output directory");
    std::string report_dir;
    report->add_option("dir", report_dir, "Directory written by run")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            bh::ExperimentConfig config = bh::load_config(config_path);
            bh::Overrides o;
            o.seed = seed;
            o.out = out;
            o.eps = eps;
            o.stride = stride;
            if (methods) {
                o.methods = bh::parse_method_list(*methods);
            }
            bh::apply_overrides(config, o);
            const bh::ExperimentResult result = bh::run_experiment(config);
            for (const auto& r : result.runs) {
                if (!r.ok) {
                    std::cerr << "run " << r.method << " seed " << r.seed << " failed: " << r.error
                              << "\n";
                }
            }
            std::cout << bh::format_table(bh::summarize(result.output_dir));
            std::cout << "wrote " << result.output_dir.string() << " (config hash "
                      << result.config_hash << ")\n";
            return result.all_ok() ? 0 : kExitRunFailed;
        }
        if (*gen) {
            bs::QuadraticSpec spec = bh::parse_quadratic_spec(read_text(spec_arg));
            if (seed) {
                spec.seed = *seed;
            }
            const auto problem = bs::gen_quadratic(spec);
            bs::save_archive(*problem, gen_out);
            std::cout << "wrote " << gen_out << " (f* = " << problem->f_star() << ")\n";
            return 0;
        }
        if (*check) {
            const bh::CheckReport rep = bh::run_checks(suites, check_options);
            const std::string json = rep.to_json();
            std::cout << json << "\n";
            if (!report_path.empty()) {
                std::ofstream f(report_path, std::ios::binary);
                f << json << "\n";
            }
            return rep.passed() ? 0 : kExitRunFailed;
        }
        if (*report) {
            std::cout << bh::format_table(bh::summarize(report_dir));
            return 0;
        }
    } catch (const bs::InvalidInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRunFailed;
    }
    return 0;
}
