#include "blocksplit/harness/config.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

namespace bs = blocksplit;
namespace h = blocksplit::harness;

namespace {

const char* kMinimal = R"({
  "problem": {"type": "quadratic", "dim_x": 4, "dim_y": 3, "seed": 2},
  "stopping": {"eps": 1e-6}
})";

} // namespace

TEST(Config, DefaultsFilledIn) {
    const auto c = h::parse_config(kMinimal);
    EXPECT_EQ(c.problem.quadratic.dim_x, 4);
    EXPECT_EQ(c.problem.quadratic.L_y, 500.0);
    ASSERT_EQ(c.methods.size(), 4u);
    for (const auto& m : c.methods) {
        if (h::is_randomized(m.name)) {
            EXPECT_EQ(m.seeds, (std::vector<std::uint64_t>{1, 2, 3, 4, 5}));
        } else {
            EXPECT_EQ(m.seeds.size(), 1u);
        }
    }
    EXPECT_FALSE(c.record_wall_time);
}

TEST(Config, UnknownKeysRejectedEverywhere) {
    auto j = nlohmann::json::parse(kMinimal);
    for (const char* where : {"", "problem", "stopping"}) {
        auto bad = j;
        auto& target = std::string(where).empty() ? bad : bad[where];
        target["learning_rate"] = 0.1;
        EXPECT_THROW(h::parse_config(bad.dump()), h::ConfigError) << where;
    }
    auto bad_method = j;
    bad_method["methods"] = nlohmann::json::array({{{"name", "bam"}, {"momentum", 0.9}}});
    EXPECT_THROW(h::parse_config(bad_method.dump()), h::ConfigError);
    auto bad_inner = j;
    bad_inner["methods"] =
        nlohmann::json::array({{{"name", "bam"}, {"inner", {{"doublings", 3}}}}});
    EXPECT_THROW(h::parse_config(bad_inner.dump()), h::ConfigError);
}

TEST(Config, SemanticValidation) {
    auto j = nlohmann::json::parse(kMinimal);
    auto no_stop = j;
    no_stop["stopping"] = nlohmann::json::object();
    EXPECT_THROW(h::parse_config(no_stop.dump()), h::ConfigError);
    auto dup = j;
    dup["methods"] = {"bam", "bam"};
    EXPECT_THROW(h::parse_config(dup.dump()), h::ConfigError);
    auto unknown = j;
    unknown["methods"] = {"sgd"};
    EXPECT_THROW(h::parse_config(unknown.dump()), h::ConfigError);
    auto seeds_on_nag = j;
    seeds_on_nag["methods"] = nlohmann::json::array({{{"name", "nag"}, {"seeds", {1, 2}}}});
    EXPECT_THROW(h::parse_config(seeds_on_nag.dump()), h::ConfigError);
    auto repeated_seed = j;
    repeated_seed["methods"] = nlohmann::json::array({{{"name", "acdm"}, {"seeds", {1, 1}}}});
    EXPECT_THROW(h::parse_config(repeated_seed.dump()), h::ConfigError);
    auto psi_no_diag = j;
    psi_no_diag["stopping"]["psi_ratio"] = 1e-8;
    EXPECT_THROW(h::parse_config(psi_no_diag.dump()), h::ConfigError);
    auto bad_constants = j;
    bad_constants["problem"]["mu_x"] = 100.0;
    EXPECT_THROW(h::parse_config(bad_constants.dump()), h::ConfigError);
    EXPECT_THROW(h::parse_config("[1, 2]"), h::ConfigError);
    EXPECT_THROW(h::parse_config("{"), h::ConfigError);
}

TEST(Config, Overrides) {
    auto c = h::parse_config(kMinimal);
    h::Overrides o;
    o.seed = 99;
    o.out = "elsewhere";
    o.eps = 1e-9;
    o.methods = h::parse_method_list("bam,acdm");
    o.stride = 3;
    h::apply_overrides(c, o);
    EXPECT_EQ(c.problem.quadratic.seed, 99u);
    EXPECT_EQ(c.output_dir, "elsewhere");
    EXPECT_EQ(*c.stopping.eps, 1e-9);
    ASSERT_EQ(c.methods.size(), 2u);
    EXPECT_EQ(c.methods[0].name, "bam");
    EXPECT_EQ(c.methods[1].seeds.size(), 5u);
    EXPECT_EQ(c.stride, 3);
    EXPECT_THROW(h::parse_method_list("bam,,nag"), bs::InvalidInput);
    EXPECT_THROW(h::parse_method_list("adam"), bs::InvalidInput);
}

TEST(Config, CanonicalJsonIsStableAndComplete) {
    const auto a = h::parse_config(kMinimal);
    const auto b = h::parse_config(h::parse_config(kMinimal).canonical_json());
    EXPECT_EQ(a.canonical_json(), b.canonical_json());
    const auto j = nlohmann::json::parse(a.canonical_json());
    EXPECT_TRUE(j.contains("record_wall_time"));
    EXPECT_EQ(j["problem"]["L_x"].get<double>(), 50.0);
}

TEST(Config, GeneratorSpec) {
    const auto s = h::parse_quadratic_spec(R"({"dim_x": 5, "L_y": 5000, "seed": 3})");
    EXPECT_EQ(s.dim_x, 5);
    EXPECT_EQ(s.L_y, 5000.0);
    EXPECT_EQ(s.seed, 3u);
    EXPECT_THROW(h::parse_quadratic_spec(R"({"dims": 5})"), h::ConfigError);
}
