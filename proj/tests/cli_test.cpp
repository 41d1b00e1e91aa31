#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunResult run_cli(const std::string& args, const fs::path& dir) {
    fs::path out = dir / "stdout.txt";
    fs::path err = dir / "stderr.txt";
    std::string cmd = std::string(SNOE_CLI_PATH) + " " + args + " > " + out.string() + " 2> " + err.string();
    int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

fs::path fresh_dir(const std::string& tag) {
    fs::path p = fs::temp_directory_path() / ("snoe_cli_" + tag);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

// x -> y -> z chain in the on-disk graph schema
const char* kChainJson = R"({"nodes":["x","y","z"],"edges":[
  {"a":0,"b":1,"type":"directed"},{"a":1,"b":2,"type":"directed"}]})";

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) out.push_back(line);
    return out;
}

// benchmark rows minus the trailing wall-clock column
std::vector<std::string> strip_seconds(const std::string& csv) {
    std::vector<std::string> out;
    for (const std::string& line : lines_of(csv)) {
        auto comma = line.rfind(',');
        out.push_back(line.substr(0, comma));
    }
    return out;
}

}  // namespace

TEST_CASE("simulate writes a reproducible dataset and its structure") {
    fs::path dir = fresh_dir("simulate");
    write_file(dir / "truth.json", kChainJson);
    write_file(dir / "spec.ini",
               "structure = " + (dir / "truth.json").string() + "\n" +
                   "mechanism = piecewise\nseed = 5\n");

    auto r1 = run_cli("simulate --spec " + (dir / "spec.ini").string() + " -n 200 --out " + (dir / "a").string(), dir);
    REQUIRE(r1.exit_code == 0);
    REQUIRE(fs::exists(dir / "a" / "data.csv"));
    REQUIRE(fs::exists(dir / "a" / "truth.json"));

    auto data_lines = lines_of(slurp(dir / "a" / "data.csv"));
    REQUIRE(data_lines.size() == 201);  // header + 200 rows
    CHECK(data_lines[0] == "x,y,z");

    json truth = json::parse(slurp(dir / "a" / "truth.json"));
    CHECK(truth["nodes"] == json::parse(kChainJson)["nodes"]);

    auto r2 = run_cli("simulate --spec " + (dir / "spec.ini").string() + " -n 200 --out " + (dir / "b").string(), dir);
    REQUIRE(r2.exit_code == 0);
    CHECK(slurp(dir / "a" / "data.csv") == slurp(dir / "b" / "data.csv"));
}

TEST_CASE("learn and eval round trip on an identifiable chain") {
    fs::path dir = fresh_dir("learn");
    write_file(dir / "truth.json", kChainJson);
    write_file(dir / "spec.ini",
               "structure = " + (dir / "truth.json").string() + "\n" +
                   "mechanism = piecewise\nseed = 9\n");
    REQUIRE(run_cli("simulate --spec " + (dir / "spec.ini").string() + " -n 2000 --out " + dir.string(), dir).exit_code == 0);

    auto learn = run_cli("learn " + (dir / "data.csv").string() + " --out " + (dir / "graph.json").string() + " --report", dir);
    REQUIRE(learn.exit_code == 0);
    REQUIRE(fs::exists(dir / "graph.json"));
    REQUIRE(fs::exists(dir / "graph.json.report.json"));

    json graph = json::parse(slurp(dir / "graph.json"));
    CHECK(graph["nodes"] == json::parse(kChainJson)["nodes"]);

    json report = json::parse(slurp(dir / "graph.json.report.json"));
    std::vector<std::string> stage_names;
    for (const auto& s : report["stages"]) stage_names.push_back(s["name"]);
    CHECK(stage_names == std::vector<std::string>{"initial", "orient", "prune", "refine"});

    auto ev = run_cli("eval --pred " + (dir / "graph.json").string() + " --truth " + (dir / "truth.json").string() +
                          " --truth-kind dag",
                      dir);
    REQUIRE(ev.exit_code == 0);
    json metrics = json::parse(ev.out);
    CHECK(metrics["f1"].get<double>() >= 0.0);
    CHECK(metrics["f1"].get<double>() <= 1.0);
    // every true edge lands in exactly one of hit / missed / misdirected
    CHECK(metrics["tp"].get<int>() + metrics["fn"].get<int>() + metrics["wrong_dir"].get<int>() == 2);
    CHECK(metrics["truth_kind"] == "dag");
}

TEST_CASE("learn without --out prints an edge list") {
    fs::path dir = fresh_dir("learn_stdout");
    write_file(dir / "truth.json", kChainJson);
    write_file(dir / "spec.ini",
               "structure = " + (dir / "truth.json").string() + "\nmechanism = piecewise\nseed = 13\n");
    REQUIRE(run_cli("simulate --spec " + (dir / "spec.ini").string() + " -n 1500 --out " + dir.string(), dir).exit_code == 0);

    auto learn = run_cli("learn " + (dir / "data.csv").string(), dir);
    REQUIRE(learn.exit_code == 0);
    CHECK(learn.out.find("->") != std::string::npos);
}

TEST_CASE("orient-pair reports a decision for a clean causal pair") {
    fs::path dir = fresh_dir("pair");
    write_file(dir / "truth.json", kChainJson);
    write_file(dir / "spec.ini",
               "structure = " + (dir / "truth.json").string() + "\nmechanism = piecewise\nseed = 21\n");
    REQUIRE(run_cli("simulate --spec " + (dir / "spec.ini").string() + " -n 2000 --out " + dir.string(), dir).exit_code == 0);

    auto r = run_cli("orient-pair " + (dir / "data.csv").string() + " --cols x,y", dir);
    REQUIRE(r.exit_code == 0);
    auto ls = lines_of(r.out);
    REQUIRE(ls.size() >= 2);
    json detail = json::parse(r.out.substr(r.out.find('\n') + 1));
    CHECK(detail["decision"] == "forward");
    CHECK(detail["p_value"].get<double>() < 0.05);
    CHECK(detail.contains("fold_stats"));

    auto ss = run_cli("orient-pair " + (dir / "data.csv").string() + " --cols x,y --variant ss", dir);
    REQUIRE(ss.exit_code == 0);
    json ss_detail = json::parse(ss.out.substr(ss.out.find('\n') + 1));
    CHECK_FALSE(ss_detail.contains("fold_stats"));
}

TEST_CASE("bench runs a suite deterministically") {
    fs::path dir = fresh_dir("bench");
    write_file(dir / "truth.json", kChainJson);
    write_file(dir / "suite.ini",
               "[chain]\nstructure = " + (dir / "truth.json").string() +
                   "\nmechanism = piecewise\nreplicates = 2\nn = 300\nseed = 4\n"
                   "[rnd]\nstructure = random\nnodes = 5\ndegree = 1.5\nreplicates = 1\nn = 300\nseed = 6\n");

    auto r1 = run_cli("bench --suite " + (dir / "suite.ini").string() + " --out " + (dir / "r1.csv").string(), dir);
    REQUIRE(r1.exit_code == 0);
    auto rows = lines_of(slurp(dir / "r1.csv"));
    REQUIRE(rows.size() == 1 + 3 * 4);  // header + (2 + 1 replicates) x 4 stages
    CHECK(rows[0] == "case,replicate,stage,tp,fp,fn,wrong_dir,undirected_pred,f1,shd,seconds");
    CHECK(rows[1].rfind("chain,0,initial,", 0) == 0);
    CHECK(rows.back().rfind("rnd,0,refine,", 0) == 0);

    auto r2 = run_cli("bench --suite " + (dir / "suite.ini").string() + " --out " + (dir / "r2.csv").string(), dir);
    REQUIRE(r2.exit_code == 0);
    CHECK(strip_seconds(slurp(dir / "r1.csv")) == strip_seconds(slurp(dir / "r2.csv")));
}

TEST_CASE("bench with zero replicates emits only the header") {
    fs::path dir = fresh_dir("bench_empty");
    write_file(dir / "suite.ini", "[idle]\nstructure = random\nnodes = 4\nreplicates = 0\n");
    auto r = run_cli("bench --suite " + (dir / "suite.ini").string() + " --out " + (dir / "r.csv").string(), dir);
    REQUIRE(r.exit_code == 0);
    auto rows = lines_of(slurp(dir / "r.csv"));
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].rfind("case,replicate,stage", 0) == 0);
}

TEST_CASE("failures surface as nonzero exit codes with messages") {
    fs::path dir = fresh_dir("errors");

    auto missing = run_cli("learn " + (dir / "nope.csv").string(), dir);
    CHECK(missing.exit_code == 1);
    CHECK(missing.err.find("nope.csv") != std::string::npos);

    write_file(dir / "bad_mech.ini", "structure = random\nnodes = 3\nmechanism = warp\n");
    auto badmech = run_cli("simulate --spec " + (dir / "bad_mech.ini").string() + " -n 50 --out " + dir.string(), dir);
    CHECK(badmech.exit_code == 1);
    CHECK(badmech.err.find("warp") != std::string::npos);

    write_file(dir / "bad_kv.ini", "nodes = 3\njust words\n");
    auto badkv = run_cli("simulate --spec " + (dir / "bad_kv.ini").string() + " -n 50 --out " + dir.string(), dir);
    CHECK(badkv.exit_code == 1);
    CHECK(badkv.err.find(":2:") != std::string::npos);

    auto nosub = run_cli("", dir);
    CHECK(nosub.exit_code != 0);

    auto badflag = run_cli("learn data.csv --variant banana", dir);
    CHECK(badflag.exit_code != 0);
}
