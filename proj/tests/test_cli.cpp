#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const fs::path& p, const std::string& body) {
    std::ofstream out(p);
    out << body;
}

int run(const std::string& args, const fs::path& cwd) {
    const std::string cmd = "cd " + cwd.string() + " && " GINLAB_CLI_PATH " " +
                            args + " > cli_stdout.txt 2> cli_stderr.txt";
    int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("ginlab_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("validate: empty file yields a missing-command diagnostic") {
    TempDir d;
    spit(d.path / "empty.json", "{}");
    CHECK(run("validate --config empty.json", d.path) == 1);
    CHECK(slurp(d.path / "cli_stdout.txt").find("missing \\\"command\\\"") !=
          std::string::npos);
}

TEST_CASE("validate: bad Jordan block ordering is diagnosed") {
    TempDir d;
    spit(d.path / "bad.json",
         R"({"eigenvalues":[{"theta":[1.0,0.0],"blocks":[[3,1],[2,1]]}]})");
    spit(d.path / "cfg.json",
         R"({"command":"edge-stats","n":64,"seed":1,"jordan":"bad.json"})");
    CHECK(run("validate --config cfg.json", d.path) == 1);
}

TEST_CASE("validate: valid config echoes resolved defaults") {
    TempDir d;
    spit(d.path / "cfg.json", R"({"command":"edge-stats","n":64,"seed":1})");
    CHECK(run("validate --config cfg.json", d.path) == 0);
    const std::string out = slurp(d.path / "cli_stdout.txt");
    CHECK(out.find("\"window\": 5.0") != std::string::npos);
    CHECK(out.find("\"valid\": true") != std::string::npos);
}

TEST_CASE("unknown config keys are rejected") {
    TempDir d;
    spit(d.path / "cfg.json", R"({"n":64,"seed":1,"bogus":3})");
    CHECK(run("edge-stats --config cfg.json", d.path) == 1);
    CHECK(slurp(d.path / "cli_stderr.txt").find("bogus") != std::string::npos);
}

TEST_CASE("kernel-eval: deterministic CSV to stdout") {
    TempDir d;
    CHECK(run("kernel-eval --t 1 --grid -1:1:0.5 --out \"\"", d.path) == 0);
    const std::string first = slurp(d.path / "cli_stdout.txt");
    CHECK(first.rfind("x,density", 0) == 0);
    CHECK(run("kernel-eval --t 1 --grid -1:1:0.5 --out \"\"", d.path) == 0);
    CHECK(slurp(d.path / "cli_stdout.txt") == first);
}

TEST_CASE("duality-check: identical runs produce byte-identical reports") {
    TempDir d;
    spit(d.path / "case.json",
         R"({"n":1,"k1":1,"k2":1,"tau":1.0,"budget":5000})");
    CHECK(run("duality-check --beta 2 --case case.json --seed 7 --out r1",
              d.path) == 0);
    CHECK(run("duality-check --beta 2 --case case.json --seed 7 --out r2",
              d.path) == 0);
    const std::string r1 = slurp(d.path / "r1" / "report.json");
    CHECK(!r1.empty());
    CHECK(r1 == slurp(d.path / "r2" / "report.json"));
}

TEST_CASE("sample: writes spectra and a manifest") {
    TempDir d;
    CHECK(run("sample --beta 2 --n 32 --replicas 2 --seed 5 --out s", d.path) ==
          0);
    const std::string csv = slurp(d.path / "s" / "spectra.csv");
    CHECK(csv.rfind("replica,re,im", 0) == 0);
    // 2 replicas x 32 eigenvalues + header
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 65);
    const std::string manifest = slurp(d.path / "s" / "manifest.json");
    CHECK(manifest.find("\"complete\": true") != std::string::npos);
    CHECK(manifest.find("config_fingerprint") != std::string::npos);
}

TEST_CASE("flags override config file values") {
    TempDir d;
    spit(d.path / "cfg.json", R"({"n":16,"seed":5,"replicas":2,"out":"a"})");
    CHECK(run("sample --config cfg.json --out b", d.path) == 0);
    CHECK(fs::exists(d.path / "b" / "spectra.csv"));
    CHECK(!fs::exists(d.path / "a"));
}

TEST_CASE("stochastic commands require a seed") {
    TempDir d;
    CHECK(run("sample --beta 2 --n 16 --replicas 1 --out s", d.path) == 1);
    CHECK(slurp(d.path / "cli_stderr.txt").find("seed") != std::string::npos);
}
