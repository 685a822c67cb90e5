#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

namespace {

struct Run {
    int status{-1};
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(ACB_CLI) + " " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    const int st = pclose(p);
    r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::size_t lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST(Cli, Table3Passes) {
    const auto r = run("table3 --json");
    ASSERT_EQ(r.status, 0);
    EXPECT_TRUE(nlohmann::json::parse(r.out)["pass"].get<bool>());
}

TEST(Cli, GraspCsvListsTaxonomy) {
    const auto r = run("grasp --all --format csv");
    EXPECT_EQ(r.status, 0);
    EXPECT_EQ(lines(r.out), 34u);  // header plus 33 rows
}

TEST(Cli, SynergyCsv) {
    const auto r = run("synergy claw --csv");
    EXPECT_EQ(r.status, 0);
    EXPECT_NE(r.out.find("index.MCP.flex"), std::string::npos);
}

TEST(Cli, UsageErrorsExitTwo) {
    EXPECT_EQ(run("frobnicate").status, 2);
    EXPECT_EQ(run("synergy fist2").status, 2);
    EXPECT_EQ(run("grasp \"no such grasp\"").status, 2);
    EXPECT_EQ(run("--jobs 0 table3").status, 2);
}

TEST(Cli, InvalidModelExitsThree) {
    const auto path = std::filesystem::temp_directory_path() / "acb_cli_bad_model.json";
    {
        std::ifstream in(ACB_DEFAULT_MODEL_JSON);
        auto doc = nlohmann::json::parse(in);
        doc["bones"][1]["length_mm"] = -4.0;
        std::ofstream(path) << doc.dump();
    }
    EXPECT_EQ(run("--model " + path.string() + " table3").status, 3);
    const auto v = run("validate " + path.string() + " --json");
    EXPECT_EQ(v.status, 3);
    std::filesystem::remove(path);
    EXPECT_EQ(run(std::string("validate ") + ACB_DEFAULT_MODEL_JSON).status, 0);
}

TEST(Cli, OutputFile) {
    const auto path = std::filesystem::temp_directory_path() / "acb_cli_table3.json";
    ASSERT_EQ(run("table3 --json -o " + path.string()).status, 0);
    std::ifstream in(path);
    EXPECT_EQ(nlohmann::json::parse(in)["rows"].size(), 3u);
    std::filesystem::remove(path);
}
