#include "fixtures.hpp"
#include "qdm/commands.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>

using namespace qdm;
using qdm::cli::RunConfig;
using qdm::test::fan_path;

namespace {

RunConfig config(const std::string& command, const std::string& fan) {
    RunConfig cfg;
    cfg.command = command;
    cfg.fan_path = fan_path(fan);
    return cfg;
}

std::vector<IntVec> series_degrees(const nlohmann::json& series) {
    std::vector<IntVec> out;
    for (const auto& e : series) out.push_back(e.at("degree").get<IntVec>());
    return out;
}

int run_tool(const std::string& args) {
    const std::string cmd = std::string(QDM_CLI) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("qdm_cli_test_" + name)).string();
}

} // namespace

TEST(Cli, CohomologyDims) {
    auto rep = cli::run(config("cohomology", "p2"));
    EXPECT_TRUE(rep.ok);
    EXPECT_EQ(rep.data.at("dims"), nlohmann::json({1, 1, 1}));
    rep = cli::run(config("cohomology", "p1"));
    EXPECT_EQ(rep.data.at("dims"), nlohmann::json({1, 1}));
    EXPECT_EQ(rep.data.at("charge_matrix"), nlohmann::json({{1, 1}}));
    rep = cli::run(config("cohomology", "dp7"));
    EXPECT_EQ(rep.data.at("total_dim"), 5);
    EXPECT_EQ(rep.data.at("mori_generators").size(), 3u);
}

TEST(Cli, IfunctionDegrees) {
    auto cfg = config("ifunction", "p2");
    auto rep = cli::run(cfg);
    EXPECT_EQ(series_degrees(rep.data.at("series")), (std::vector<IntVec>{{0}, {1}, {2}}));
    EXPECT_EQ(rep.data.at("homogeneity_violations"), 0);

    cfg.max_degree = 0;
    rep = cli::run(cfg);
    EXPECT_EQ(series_degrees(rep.data.at("series")), (std::vector<IntVec>{{0}}));

    cfg = config("ifunction", "f1");
    cfg.max_degree = 4;
    for (const auto& d : series_degrees(cli::run(cfg).data.at("series"))) EXPECT_EQ(d.size(), 2u);

    cfg = config("ifunction", "p1");
    cfg.components = true;
    cfg.max_degree = 2;
    rep = cli::run(cfg);
    EXPECT_EQ(rep.data.at("components").size(), 2u);
}

TEST(Cli, OperatorsRelations) {
    auto cfg = config("operators", "p2");
    cfg.max_degree = 9;
    auto rep = cli::run(cfg);
    EXPECT_TRUE(rep.ok);
    ASSERT_EQ(rep.data.at("gkz").size(), 1u);
    EXPECT_EQ(rep.data.at("gkz")[0].at("relation"), "p1^3 - q1");
    EXPECT_TRUE(rep.data.at("gkz")[0].at("annihilates").get<bool>());
    bool found = false;
    for (const auto& a : rep.data.at("annihilators")) found = found || a.at("relation") == "p1^3 - q1";
    EXPECT_TRUE(found);

    cfg = config("operators", "p1xp1");
    cfg.theta_order = 2;
    cfg.hbar_order = 0;
    cfg.max_degree = 8;
    rep = cli::run(cfg);
    std::set<std::string> rels;
    for (const auto& g : rep.data.at("gkz")) rels.insert(g.at("relation").get<std::string>());
    EXPECT_EQ(rels, (std::set<std::string>{"p1^2 - q1", "p2^2 - q2"}));

    cfg = config("operators", "p1");
    cfg.theta_order = 0;
    cfg.q_degree = 0;
    cfg.hbar_order = 0;
    EXPECT_TRUE(cli::run(cfg).data.at("annihilators").empty());
}

TEST(Cli, LoopModel) {
    auto cfg = config("loop-model", "p2");
    cfg.degrees = {{2}};
    cfg.modes = std::pair<long, long>{2, 4};
    auto rep = cli::run(cfg);
    EXPECT_TRUE(rep.ok);
    const auto& r = rep.data.at("reports")[0];
    EXPECT_EQ(r.at("N_min"), 2);
    EXPECT_TRUE(r.at("stable").get<bool>());
    EXPECT_EQ(r.at("critical_value"), "2");

    cfg.degrees = {{1, 2}};
    EXPECT_THROW(cli::run(cfg), Error);
}

TEST(Cli, ConfigErrors) {
    auto cfg = config("nope", "p1");
    EXPECT_THROW(cli::run(cfg), Error);
    cfg = config("cohomology", "missing");
    EXPECT_THROW(cli::run(cfg), FanError);
    cfg = config("loop-model", "p1");
    cfg.modes = std::pair<long, long>{3, 1};
    EXPECT_THROW(cli::run(cfg), Error);
}

TEST(Cli, RenderFormats) {
    const auto rep = cli::run(config("cohomology", "p1"));
    EXPECT_EQ(nlohmann::json::parse(cli::render(rep, cli::Format::json)), rep.data);
    const std::string text = cli::render(rep, cli::Format::text);
    EXPECT_NE(text.find("dims: [1,1]"), std::string::npos);
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run_tool("cohomology " + fan_path("p1")), 0);
    EXPECT_EQ(run_tool("cohomology /nonexistent.json"), 2);
    const std::string bad = temp_path("bad.json");
    {
        std::ofstream out(bad);
        out << R"({"rays": [[2, 0], [0, 1], [-1, -1]], "max_cones": [[0, 1], [1, 2], [2, 0]]})";
    }
    EXPECT_EQ(run_tool("cohomology " + bad), 2);
    EXPECT_EQ(run_tool("frobnicate " + fan_path("p1")), 2);
    EXPECT_EQ(run_tool("loop-model " + fan_path("p2") + " --modes 2..1"), 2);
    std::filesystem::remove(bad);
}

TEST(Cli, DeterministicOutput) {
    for (const std::string cmd : {"cohomology", "ifunction", "operators", "loop-model"}) {
        const std::string a = temp_path("a.json"), b = temp_path("b.json");
        const std::string args = cmd + " " + fan_path("p1xp1") + " --max-degree 4";
        ASSERT_EQ(run_tool(args + " --out " + a), 0) << cmd;
        ASSERT_EQ(run_tool(args + " --out " + b), 0) << cmd;
        const std::string sa = qdm::test::read_file(a);
        EXPECT_FALSE(sa.empty());
        EXPECT_EQ(sa, qdm::test::read_file(b)) << cmd;
        std::filesystem::remove(a);
        std::filesystem::remove(b);
    }
}
