#include "blocksplit/harness/config.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace blocksplit::harness {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, std::initializer_list<const char*> allowed,
                    const std::string& where) {
    if (!j.is_object()) {
        throw ConfigError(where + " must be an object");
    }
    const std::set<std::string> keys(allowed.begin(), allowed.end());
    for (const auto& item : j.items()) {
        if (!keys.count(item.key())) {
            throw ConfigError("unknown key '" + item.key() + "' in " + where);
        }
    }
}

template <class T>
void read(const json& j, const char* key, T& out) {
    if (j.contains(key)) {
        out = j.at(key).get<T>();
    }
}

template <class T>
void read(const json& j, const char* key, std::optional<T>& out) {
    if (j.contains(key) && !j.at(key).is_null()) {
        out = j.at(key).get<T>();
    }
}

void read_spec_fields(const json& j, QuadraticSpec& s) {
    read(j, "dim_x", s.dim_x);
    read(j, "dim_y", s.dim_y);
    read(j, "mu_x", s.mu_x);
    read(j, "L_x", s.L_x);
    read(j, "mu_y", s.mu_y);
    read(j, "L_y", s.L_y);
    read(j, "coupling_rho", s.coupling_rho);
    read(j, "seed", s.seed);
}

ProblemConfig parse_problem(const json& j, const std::filesystem::path& base_dir) {
    if (!j.is_object()) {
        throw ConfigError("'problem' must be an object");
    }
    ProblemConfig p;
    read(j, "type", p.type);
    if (p.type == "quadratic") {
        reject_unknown(j, {"type", "dim_x", "dim_y", "mu_x", "L_x", "mu_y", "L_y", "coupling_rho",
                           "seed"},
                       "problem");
        read_spec_fields(j, p.quadratic);
    } else if (p.type == "logistic") {
        reject_unknown(j, {"type", "dataset", "dim_x", "dim_y", "mu_x", "mu_y", "L_data"},
                       "problem");
        read(j, "dataset", p.dataset);
        read(j, "dim_x", p.dim_x);
        read(j, "dim_y", p.dim_y);
        read(j, "mu_x", p.mu_x);
        read(j, "mu_y", p.mu_y);
        read(j, "L_data", p.L_data);
    } else if (p.type == "archive") {
        reject_unknown(j, {"type", "path"}, "problem");
        read(j, "path", p.archive);
        if (!p.archive.empty() && std::filesystem::path(p.archive).is_relative() &&
            !base_dir.empty()) {
            p.archive = (base_dir / p.archive).lexically_normal().string();
        }
    } else {
        throw ConfigError("unknown problem type '" + p.type + "'");
    }
    return p;
}

InnerBudget parse_inner(const json& j) {
    reject_unknown(j, {"initial_N", "seed_factor", "growth", "max_increases", "carry_over",
                       "abs_floor_scale"},
                   "inner");
    InnerBudget b;
    read(j, "initial_N", b.initial_N);
    read(j, "seed_factor", b.seed_factor);
    read(j, "growth", b.growth);
    read(j, "max_increases", b.max_increases);
    read(j, "carry_over", b.carry_over);
    read(j, "abs_floor_scale", b.abs_floor_scale);
    return b;
}

MethodConfig default_method(const std::string& name) {
    MethodConfig m;
    m.name = name;
    if (is_randomized(name)) {
        m.seeds = {1, 2, 3, 4, 5};
    } else {
        m.seeds = {0};
    }
    return m;
}

MethodConfig parse_method(const json& j) {
    if (j.is_string()) {
        return default_method(j.get<std::string>());
    }
    reject_unknown(j, {"name", "seeds", "stride", "diagnostics", "inner"}, "method");
    if (!j.contains("name")) {
        throw ConfigError("method entry needs a 'name'");
    }
    MethodConfig m = default_method(j.at("name").get<std::string>());
    if (j.contains("seeds")) {
        if (!is_randomized(m.name)) {
            throw ConfigError("method '" + m.name + "' is deterministic and takes no seeds");
        }
        m.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    }
    read(j, "stride", m.stride);
    read(j, "diagnostics", m.diagnostics);
    if (j.contains("inner")) {
        if (m.name != "bam") {
            throw ConfigError("'inner' applies to bam only");
        }
        m.inner = parse_inner(j.at("inner"));
    }
    if (m.diagnostics && m.name != "bam") {
        throw ConfigError("'diagnostics' applies to bam only");
    }
    return m;
}

StoppingConfig parse_stopping(const json& j) {
    reject_unknown(j, {"eps", "psi_ratio", "max_iterations", "max_grad_x_calls",
                       "max_grad_y_calls"},
                   "stopping");
    StoppingConfig s;
    read(j, "eps", s.eps);
    read(j, "psi_ratio", s.psi_ratio);
    read(j, "max_iterations", s.max_iterations);
    read(j, "max_grad_x_calls", s.max_grad_x_calls);
    read(j, "max_grad_y_calls", s.max_grad_y_calls);
    return s;
}

template <class T>
json opt(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

} // namespace

bool is_randomized(const std::string& method) {
    return method == "acdm" || method == "lincoupling";
}

void ExperimentConfig::validate() const {
    const ProblemConfig& p = problem;
    try {
        if (p.type == "quadratic") {
            p.quadratic.validate();
        } else if (p.type == "logistic") {
            if (p.dataset.empty()) {
                throw ConfigError("logistic problem needs 'dataset'");
            }
            if (p.dim_x < 1 || p.dim_y < 1) {
                throw ConfigError("logistic block dimensions must be >= 1");
            }
            if (!(p.mu_x > 0.0) || !(p.mu_y > 0.0)) {
                throw ConfigError("logistic mu_x and mu_y must be > 0");
            }
            if (p.L_data && !(*p.L_data >= 0.0)) {
                throw ConfigError("L_data must be >= 0");
            }
        } else if (p.type == "archive") {
            if (p.archive.empty()) {
                throw ConfigError("archive problem needs 'path'");
            }
        } else {
            throw ConfigError("unknown problem type '" + p.type + "'");
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const InvalidInput& e) {
        throw ConfigError(e.what());
    }

    if (methods.empty()) {
        throw ConfigError("no methods selected");
    }
    std::set<std::string> seen;
    for (const auto& m : methods) {
        const auto& names = known_methods();
        if (std::find(names.begin(), names.end(), m.name) == names.end()) {
            throw ConfigError("unknown method '" + m.name + "'");
        }
        if (!seen.insert(m.name).second) {
            throw ConfigError("method '" + m.name + "' listed twice");
        }
        if (m.seeds.empty()) {
            throw ConfigError("method '" + m.name + "' has an empty seed list");
        }
        if (std::set<std::uint64_t>(m.seeds.begin(), m.seeds.end()).size() != m.seeds.size()) {
            throw ConfigError("method '" + m.name + "' repeats a seed");
        }
        if (m.stride < 0) {
            throw ConfigError("stride must be >= 0");
        }
        try {
            m.inner.validate();
        } catch (const InvalidInput& e) {
            throw ConfigError(e.what());
        }
    }

    const StoppingConfig& s = stopping;
    if (s.eps && !(*s.eps > 0.0)) {
        throw ConfigError("stopping.eps must be > 0");
    }
    if (s.psi_ratio && !(*s.psi_ratio > 0.0)) {
        throw ConfigError("stopping.psi_ratio must be > 0");
    }
    if (s.max_iterations && *s.max_iterations < 1) {
        throw ConfigError("stopping.max_iterations must be >= 1");
    }
    if (!s.eps && !s.max_iterations && !s.max_grad_x_calls && !s.max_grad_y_calls) {
        throw ConfigError("stopping needs eps, max_iterations or an oracle budget");
    }
    if (s.psi_ratio) {
        for (const auto& m : methods) {
            if (m.name == "bam" && !m.diagnostics) {
                throw ConfigError("stopping.psi_ratio needs bam diagnostics enabled");
            }
        }
    }
    if (stride < 0) {
        throw ConfigError("stride must be >= 0");
    }
    if (output_dir.empty()) {
        throw ConfigError("output_dir must not be empty");
    }
}

std::string ExperimentConfig::canonical_json() const {
    json p;
    p["type"] = problem.type;
    if (problem.type == "quadratic") {
        const auto& q = problem.quadratic;
        p["dim_x"] = q.dim_x;
        p["dim_y"] = q.dim_y;
        p["mu_x"] = q.mu_x;
        p["L_x"] = q.L_x;
        p["mu_y"] = q.mu_y;
        p["L_y"] = q.L_y;
        p["coupling_rho"] = q.coupling_rho;
        p["seed"] = q.seed;
    } else if (problem.type == "logistic") {
        p["dataset"] = problem.dataset;
        p["dim_x"] = problem.dim_x;
        p["dim_y"] = problem.dim_y;
        p["mu_x"] = problem.mu_x;
        p["mu_y"] = problem.mu_y;
        p["L_data"] = opt(problem.L_data);
    } else {
        p["path"] = problem.archive;
    }
    json ms = json::array();
    for (const auto& m : methods) {
        json mj = {{"name", m.name}, {"stride", m.stride}, {"diagnostics", m.diagnostics}};
        if (is_randomized(m.name)) {
            mj["seeds"] = m.seeds;
        }
        if (m.name == "bam") {
            mj["inner"] = {{"initial_N", m.inner.initial_N},
                           {"seed_factor", m.inner.seed_factor},
                           {"growth", m.inner.growth},
                           {"max_increases", m.inner.max_increases},
                           {"carry_over", m.inner.carry_over},
                           {"abs_floor_scale", m.inner.abs_floor_scale}};
        }
        ms.push_back(std::move(mj));
    }
    json j = {{"name", name},
              {"problem", std::move(p)},
              {"methods", std::move(ms)},
              {"stopping",
               {{"eps", opt(stopping.eps)},
                {"psi_ratio", opt(stopping.psi_ratio)},
                {"max_iterations", opt(stopping.max_iterations)},
                {"max_grad_x_calls", opt(stopping.max_grad_x_calls)},
                {"max_grad_y_calls", opt(stopping.max_grad_y_calls)}}},
              {"output_dir", output_dir},
              {"stride", stride},
              {"record_wall_time", record_wall_time}};
    return j.dump(2);
}

ExperimentConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
    ExperimentConfig c;
    try {
        reject_unknown(j, {"name", "problem", "methods", "stopping", "output_dir", "stride",
                           "record_wall_time"},
                       "config");
        read(j, "name", c.name);
        if (!j.contains("problem")) {
            throw ConfigError("config needs a 'problem'");
        }
        c.problem = parse_problem(j.at("problem"), base_dir);
        if (j.contains("methods")) {
            const auto& ms = j.at("methods");
            if (!ms.is_array()) {
                throw ConfigError("'methods' must be an array");
            }
            for (const auto& m : ms) {
                c.methods.push_back(parse_method(m));
            }
        } else {
            for (const auto& name : known_methods()) {
                c.methods.push_back(default_method(name));
            }
        }
        if (j.contains("stopping")) {
            c.stopping = parse_stopping(j.at("stopping"));
        }
        read(j, "output_dir", c.output_dir);
        read(j, "stride", c.stride);
        read(j, "record_wall_time", c.record_wall_time);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open config " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.parent_path());
}

QuadraticSpec parse_quadratic_spec(std::string_view json_text) {
    QuadraticSpec s;
    try {
        const json j = json::parse(json_text);
        reject_unknown(j, {"type", "dim_x", "dim_y", "mu_x", "L_x", "mu_y", "L_y", "coupling_rho",
                           "seed"},
                       "quadratic spec");
        if (j.contains("type") && j.at("type").get<std::string>() != "quadratic") {
            throw ConfigError("quadratic spec has type '" + j.at("type").get<std::string>() + "'");
        }
        read_spec_fields(j, s);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("quadratic spec: ") + e.what());
    }
    try {
        s.validate();
    } catch (const InvalidInput& e) {
        throw ConfigError(e.what());
    }
    return s;
}

std::vector<std::string> parse_method_list(std::string_view list) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= list.size()) {
        const auto comma = list.find(',', start);
        std::string name(list.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                            : comma - start));
        name.erase(0, name.find_first_not_of(" \t"));
        name.erase(name.find_last_not_of(" \t") + 1);
        const auto& names = known_methods();
        if (std::find(names.begin(), names.end(), name) == names.end()) {
            throw ConfigError("unknown method '" + name + "'");
        }
        out.push_back(name);
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

void apply_overrides(ExperimentConfig& config, const Overrides& o) {
    if (o.seed) {
        if (config.problem.type != "quadratic") {
            throw ConfigError("--seed applies to generated quadratic problems only");
        }
        config.problem.quadratic.seed = *o.seed;
    }
    if (o.out) {
        config.output_dir = *o.out;
    }
    if (o.eps) {
        config.stopping.eps = *o.eps;
    }
    if (o.stride) {
        config.stride = *o.stride;
    }
    if (o.methods) {
        std::vector<MethodConfig> picked;
        for (const auto& name : *o.methods) {
            auto it = std::find_if(config.methods.begin(), config.methods.end(),
                                   [&](const MethodConfig& m) { return m.name == name; });
            picked.push_back(it != config.methods.end() ? *it : default_method(name));
        }
        config.methods = std::move(picked);
    }
    config.validate();
}

} // namespace blocksplit::harness
