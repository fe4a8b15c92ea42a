#include "blocksplit/harness/report.hpp"

#include "blocksplit/common.hpp"
#include "blocksplit/harness/csv.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace blocksplit::harness {

namespace {

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string cell(const std::optional<double>& v) {
    return v ? fmt::format("{:.0f}", *v) : std::string("-");
}

} // namespace

ExperimentSummary summarize(const std::filesystem::path& dir) {
    std::ifstream in(dir / "metadata.json", std::ios::binary);
    if (!in) {
        throw InvalidInput("no metadata.json in " + dir.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    nlohmann::json meta;
    try {
        meta = nlohmann::json::parse(ss.str());
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("metadata.json: ") + e.what());
    }

    ExperimentSummary out;
    out.name = meta.value("name", std::string());
    const auto& eps = meta.at("config").at("stopping").at("eps");
    if (!eps.is_null()) {
        out.eps = eps.get<double>();
    }

    struct Acc {
        std::size_t runs = 0;
        std::size_t failed = 0;
        std::vector<double> gx, gy, gap, fx, fy;
    };
    std::vector<std::string> order;
    std::map<std::string, Acc> acc;
    for (const auto& run : meta.at("runs")) {
        const std::string method = run.at("method").get<std::string>();
        if (!acc.count(method)) {
            order.push_back(method);
        }
        Acc& a = acc[method];
        ++a.runs;
        if (!run.at("ok").get<bool>()) {
            ++a.failed;
            continue;
        }
        const Trace t = read_trace_csv(dir / run.at("csv").get<std::string>());
        if (t.rows.empty()) {
            ++a.failed;
            continue;
        }
        if (out.eps) {
            if (const TraceRow* r = t.first_below(*out.eps)) {
                a.gx.push_back(static_cast<double>(r->grad_x_calls));
                a.gy.push_back(static_cast<double>(r->grad_y_calls));
            }
        }
        a.gap.push_back(t.last().f_gap);
        a.fx.push_back(static_cast<double>(t.last().grad_x_calls));
        a.fy.push_back(static_cast<double>(t.last().grad_y_calls));
    }
    for (const auto& name : order) {
        const Acc& a = acc[name];
        MethodSummary m;
        m.method = name;
        m.runs = a.runs;
        m.failed = a.failed;
        if (!a.gx.empty()) {
            m.grad_x_to_eps = median(a.gx);
            m.grad_y_to_eps = median(a.gy);
        }
        if (!a.gap.empty()) {
            m.final_gap = median(a.gap);
            m.final_grad_x = median(a.fx);
            m.final_grad_y = median(a.fy);
        }
        out.methods.push_back(std::move(m));
    }
    return out;
}

std::string format_table(const ExperimentSummary& s) {
    std::string out;
    out += fmt::format("experiment: {}", s.name.empty() ? "-" : s.name);
    if (s.eps) {
        out += fmt::format("  (eps = {:g})", *s.eps);
    }
    out += "\nmedians over seeds; to-eps columns count oracle calls at the first row with f_gap <= eps\n\n";
    out += fmt::format("{:<12} {:>5} {:>6} {:>14} {:>14} {:>12} {:>12} {:>12}\n", "method", "runs",
                       "failed", "grad_x_to_eps", "grad_y_to_eps", "final_gap", "final_gx",
                       "final_gy");
    for (const auto& m : s.methods) {
        out += fmt::format("{:<12} {:>5} {:>6} {:>14} {:>14} {:>12.3e} {:>12.0f} {:>12.0f}\n",
                           m.method, m.runs, m.failed, cell(m.grad_x_to_eps),
                           cell(m.grad_y_to_eps), m.final_gap, m.final_grad_x, m.final_grad_y);
    }
    return out;
}

} // namespace blocksplit::harness
