#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {
int run(const std::string& args) {
    const std::string cmd = std::string(SPHX_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / ("sphx_test_" + name);
    fs::remove_all(d);
    return d;
}
}  // namespace

TEST_CASE("weight check exit codes") {
    CHECK(run("check-weight --n 2 --p 2 --alpha 1") == 0);
    CHECK(run("check-weight --n 2 --p 2 --alpha 3") == 2);
    CHECK(run("check-weight --n 2 --p 2 --weight nonsense") == 1);
}

TEST_CASE("solve writes field and report, reproducibly") {
    const fs::path a = scratch("a");
    const std::string args = "solve --out " + a.string() + " --domain half-plane --p 3 --data step --spacing 0.0625 --eval 0,1";
    REQUIRE(run(args) == 0);
    const std::string field = slurp(a / "field.csv"), report = slurp(a / "report.json");
    REQUIRE(run(args) == 0);
    CHECK(slurp(a / "field.csv") == field);
    CHECK(slurp(a / "report.json") == report);
    const auto j = nlohmann::json::parse(slurp(a / "report.json"));
    for (const char* k : {"energy", "iters", "grad_norm", "eps_schedule", "min", "max"}) CHECK(j["report"].contains(k));
    CHECK(j["config"]["grid.h"] == 0.0625);
    CHECK(j["infinity_node_active"] == false);
    const double u = j["values"][0]["u"];
    CHECK(u > 0.0);
    CHECK(u < 1.0);
    CHECK(slurp(a / "field.csv").rfind("# n h origin_0 origin_1 dims_0 dims_1\n", 0) == 0);
}

TEST_CASE("config file with flag overrides") {
    const fs::path d = scratch("cfg");
    fs::create_directories(d);
    std::ofstream(d / "run.ini") << "n = 2\np = 2\n[data]\nkind = constant\nvalue = 0.25\n[grid]\nh = 0.25\n";
    REQUIRE(run("solve --config " + (d / "run.ini").string() + " --value 0.75 --domain half-plane --out " +
                (d / "out").string()) == 0);
    const auto j = nlohmann::json::parse(slurp(d / "out" / "report.json"));
    CHECK(j["config"]["data.value"] == 0.75);
    CHECK(j["report"]["max"] == doctest::Approx(0.75));
}

TEST_CASE("invalid runs exit nonzero") {
    CHECK(run("solve --domain half-plane --p 1.5") == 1);
    CHECK(run("solve --domain half-plane --p 0.9") == 1);
    CHECK(run("solve --domain nowhere") == 1);
    CHECK(run("capacity --p 2 --inner-radius 3 --window-radius 2") == 1);
    CHECK(run("solve --domain half-plane --p 3 --max-iterations 2 --grad-tol 1e-30 --data step --spacing 0.0625") == 4);
}
