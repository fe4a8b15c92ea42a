#include "blocksplit/archive.hpp"

#include "blocksplit/hash.hpp"

#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace blocksplit {

using nlohmann::json;

namespace {

constexpr const char* kFormatTag = "blocksplit-problem";

void reject_unknown(const json& j, std::initializer_list<const char*> allowed, const char* where) {
    const std::set<std::string> keys(allowed.begin(), allowed.end());
    for (const auto& item : j.items()) {
        if (!keys.count(item.key())) {
            throw InvalidInput(std::string("archive: unknown key '") + item.key() + "' in " + where);
        }
    }
}

const json& field(const json& j, const char* key) {
    if (!j.contains(key)) {
        throw InvalidInput(std::string("archive: missing key '") + key + "'");
    }
    return j.at(key);
}

json constants_json(const BlockConstants& c) {
    return {{"L_x", c.L_x}, {"L_y", c.L_y}, {"mu_x", c.mu_x}, {"mu_y", c.mu_y}};
}

BlockConstants constants_from(const json& j) {
    reject_unknown(j, {"L_x", "L_y", "mu_x", "mu_y"}, "constants");
    return {field(j, "L_x").get<double>(), field(j, "L_y").get<double>(),
            field(j, "mu_x").get<double>(), field(j, "mu_y").get<double>()};
}

json spec_json(const QuadraticSpec& s) {
    return {{"dim_x", s.dim_x}, {"dim_y", s.dim_y}, {"mu_x", s.mu_x},
            {"L_x", s.L_x},     {"mu_y", s.mu_y},   {"L_y", s.L_y},
            {"coupling_rho", s.coupling_rho},       {"seed", s.seed}};
}

QuadraticSpec spec_from(const json& j) {
    reject_unknown(j, {"dim_x", "dim_y", "mu_x", "L_x", "mu_y", "L_y", "coupling_rho", "seed"},
                   "generator");
    QuadraticSpec s;
    s.dim_x = field(j, "dim_x").get<Index>();
    s.dim_y = field(j, "dim_y").get<Index>();
    s.mu_x = field(j, "mu_x").get<double>();
    s.L_x = field(j, "L_x").get<double>();
    s.mu_y = field(j, "mu_y").get<double>();
    s.L_y = field(j, "L_y").get<double>();
    s.coupling_rho = j.value("coupling_rho", 0.0);
    s.seed = j.value("seed", std::uint64_t{0});
    return s;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << text;
    if (!out) {
        throw std::runtime_error("write failed for " + path.string());
    }
}

} // namespace

std::string archive_json(const QuadraticProblem& problem) {
    const Matrix& A = problem.A();
    json rows = json::array();
    for (Index i = 0; i < A.rows(); ++i) {
        json row = json::array();
        for (Index j = 0; j < A.cols(); ++j) {
            row.push_back(A(i, j));
        }
        rows.push_back(std::move(row));
    }
    json b = json::array();
    for (Index i = 0; i < problem.b().size(); ++i) {
        b.push_back(problem.b()(i));
    }
    json j = {{"format", kFormatTag},
              {"format_version", kArchiveFormatVersion},
              {"type", "quadratic"},
              {"dim_x", problem.dim_x()},
              {"dim_y", problem.dim_y()},
              {"constants", constants_json(problem.constants())},
              {"A", std::move(rows)},
              {"b", std::move(b)}};
    if (problem.spec()) {
        j["generator"] = spec_json(*problem.spec());
    }
    return dump(j);
}

std::string archive_json(const LogisticArchive& a) {
    json j = {{"format", kFormatTag},     {"format_version", kArchiveFormatVersion},
              {"type", "logistic"},       {"dataset", a.dataset},
              {"dim_x", a.dim_x},         {"dim_y", a.dim_y},
              {"lambda_x", a.lambda_x},   {"lambda_y", a.lambda_y}};
    if (!a.dataset_fnv1a.empty()) {
        j["dataset_fnv1a"] = a.dataset_fnv1a;
    }
    if (a.L_data) {
        j["L_data"] = *a.L_data;
    }
    return dump(j);
}

LoadedProblem load_archive_json(std::string_view text, const std::filesystem::path& base_dir) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InvalidInput(std::string("archive: malformed JSON: ") + e.what());
    }
    if (!j.is_object()) {
        throw InvalidInput("archive: top level must be an object");
    }
    try {
        if (field(j, "format").get<std::string>() != kFormatTag) {
            throw InvalidInput("archive: not a blocksplit problem file");
        }
        const int version = field(j, "format_version").get<int>();
        if (version < 1 || version > kArchiveFormatVersion) {
            throw InvalidInput("archive: unsupported format_version " + std::to_string(version));
        }
        const std::string type = field(j, "type").get<std::string>();
        LoadedProblem out;
        out.type = type;
        if (type == "quadratic") {
            reject_unknown(j, {"format", "format_version", "type", "dim_x", "dim_y", "constants",
                               "A", "b", "generator"},
                           "quadratic archive");
            const auto dx = field(j, "dim_x").get<Index>();
            const auto dy = field(j, "dim_y").get<Index>();
            const Index n = dx + dy;
            const auto& rows = field(j, "A");
            const auto& bj = field(j, "b");
            if (!rows.is_array() || static_cast<Index>(rows.size()) != n || !bj.is_array() ||
                static_cast<Index>(bj.size()) != n) {
                throw InvalidInput("archive: A and b must have dim_x + dim_y rows");
            }
            Matrix A(n, n);
            Vector b(n);
            for (Index i = 0; i < n; ++i) {
                const auto& row = rows.at(static_cast<std::size_t>(i));
                if (!row.is_array() || static_cast<Index>(row.size()) != n) {
                    throw InvalidInput("archive: A must be square");
                }
                for (Index k = 0; k < n; ++k) {
                    A(i, k) = row.at(static_cast<std::size_t>(k)).get<double>();
                }
                b(i) = bj.at(static_cast<std::size_t>(i)).get<double>();
            }
            std::optional<QuadraticSpec> spec;
            if (j.contains("generator")) {
                spec = spec_from(j.at("generator"));
            }
            auto p = std::make_unique<QuadraticProblem>(std::move(A), std::move(b), dx,
                                                        constants_from(field(j, "constants")),
                                                        spec);
            out.reference = p->reference();
            out.spec = spec;
            out.problem = std::move(p);
        } else if (type == "logistic") {
            reject_unknown(j, {"format", "format_version", "type", "dataset", "dataset_fnv1a",
                               "dim_x", "dim_y", "lambda_x", "lambda_y", "L_data"},
                           "logistic archive");
            LogisticArchive a;
            a.dataset = field(j, "dataset").get<std::string>();
            a.dataset_fnv1a = j.value("dataset_fnv1a", std::string());
            a.dim_x = field(j, "dim_x").get<Index>();
            a.dim_y = field(j, "dim_y").get<Index>();
            a.lambda_x = field(j, "lambda_x").get<double>();
            a.lambda_y = field(j, "lambda_y").get<double>();
            if (j.contains("L_data")) {
                a.L_data = j.at("L_data").get<double>();
            }
            const auto path = resolve_dataset(a.dataset, base_dir);
            if (!a.dataset_fnv1a.empty() && hex64(fnv1a64_file(path)) != a.dataset_fnv1a) {
                throw InvalidInput("archive: dataset " + path.string() +
                                   " does not match the recorded hash");
            }
            out.problem = make_logistic(load_libsvm(path), a.dim_x, a.dim_y, a.lambda_x,
                                        a.lambda_y, a.L_data);
            out.logistic = std::move(a);
        } else {
            throw InvalidInput("archive: unknown problem type '" + type + "'");
        }
        return out;
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("archive: ") + e.what());
    }
}

void save_archive(const QuadraticProblem& problem, const std::filesystem::path& path) {
    write_file(path, archive_json(problem));
}

void save_archive(const LogisticArchive& archive, const std::filesystem::path& path) {
    write_file(path, archive_json(archive));
}

LoadedProblem load_archive(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InvalidInput("archive: cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_archive_json(ss.str(), path.parent_path());
}

std::filesystem::path data_dir() {
    const char* env = std::getenv("BLOCKSPLIT_DATA_DIR");
    if (env != nullptr && *env != '\0') {
        return env;
    }
    return "data";
}

std::filesystem::path resolve_dataset(const std::string& name,
                                      const std::filesystem::path& base_dir) {
    const std::filesystem::path p(name);
    if (p.is_absolute()) {
        return p;
    }
    if (!base_dir.empty() && std::filesystem::exists(base_dir / p)) {
        return base_dir / p;
    }
    if (std::filesystem::exists(p)) {
        return p;
    }
    return data_dir() / p;
}

} // namespace blocksplit
