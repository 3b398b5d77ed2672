#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "dicke4/io.hpp"

namespace fs = std::filesystem;
using namespace dicke4;

namespace {

const fs::path kWork = fs::temp_directory_path() / "dicke4_cli_tests";

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

RunResult run_cli(const std::string& args) {
    fs::create_directories(kWork);
    fs::path out = kWork / "stdout.txt", err = kWork / "stderr.txt";
    std::string cmd = std::string(DICKE4_CLI_PATH) + " " + args + " > " + out.string() + " 2> " +
                      err.string();
    int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

fs::path write_config(const std::string& name, const std::string& text) {
    fs::create_directories(kWork);
    fs::path p = kWork / name;
    std::ofstream(p) << text;
    return p;
}

const std::string kLambdaConfig =
    R"({"kind": "lambda", "Omega": [1.0, 0.25], "omega": [0.0, 0.0, 1.1, 1.3],
        "mu": {"13": 0.25, "23": 0.6, "34": 0.25}, "Na": 1})";
const std::string kNConfig =
    R"({"kind": "n", "Omega": [1.0, 0.25], "omega": [0.0, 0.8, 1.0, 1.9],
        "mu": {"13": 0.65, "23": 0.25, "24": 0.5}, "Na": 1})";

int line_count(const std::string& s) {
    int n = 0;
    for (char ch : s)
        if (ch == '\n') ++n;
    return n;
}

}  // namespace

TEST_CASE("config parsing is strict") {
    CHECK_NOTHROW(parse_config(kLambdaConfig));
    CHECK_THROWS_AS(parse_config("{"), Error);
    CHECK_THROWS_AS(parse_config(R"({"kind": "lambda"})"), Error);  // missing keys
    CHECK_THROWS_AS(
        parse_config(
            R"({"kind": "x", "Omega": [1,1], "omega": [0,0,0,0], "mu": {}, "Na": 1})"),
        Error);
    // unknown key
    try {
        parse_config(
            R"({"kind": "lambda", "Omega": [1, 0.25], "omega": [0, 0, 1.1, 1.3],
                "mu": {"13": 0, "23": 0, "34": 0}, "Na": 1, "typo": 3})");
        FAIL("expected BadConfigFile");
    } catch (const Error& e) {
        CHECK(e.code == Errc::BadConfigFile);
        CHECK(std::string(e.what()).find("typo") != std::string::npos);
    }
    // wrong mu key set is a validation error, named after the field
    try {
        parse_config(
            R"({"kind": "lambda", "Omega": [1, 0.25], "omega": [0, 0, 1.1, 1.3],
                "mu": {"13": 0, "23": 0, "24": 0}, "Na": 1})");
        FAIL("expected BadCouplingKeys");
    } catch (const Error& e) {
        CHECK(e.code == Errc::BadCouplingKeys);
    }
}

TEST_CASE("format_g9 renders 9 significant digits") {
    CHECK(format_g9(-0.05149408284023667) == "-0.0514940828");
    CHECK(format_g9(1.0) == "1");
    CHECK(format_g9(0.25) == "0.25");
}

TEST_CASE("variational command reports the S_Lambda region") {
    auto cfg = write_config("lambda.json", kLambdaConfig);
    auto r = run_cli("variational --config " + cfg.string());
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("\"label\": \"S_Lambda\"") != std::string::npos);
    CHECK(r.out.find("-0.0514940828") != std::string::npos);
    CHECK(r.out.find("\"region_energies\"") != std::string::npos);
    // manifest goes to stderr when printing to stdout
    CHECK(r.err.find("\"command\": \"variational\"") != std::string::npos);
}

TEST_CASE("quantum command converges and names the winning sector") {
    auto cfg = write_config("n.json", kNConfig);
    auto r = run_cli("quantum --config " + cfg.string());
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("\"converged\": true") != std::string::npos);
    CHECK(r.out.find("\"sector\": \"e\"") != std::string::npos);

    // fixed truncation path
    auto r2 = run_cli("quantum --config " + cfg.string() + " --mmax 8");
    CHECK(r2.exit_code == 0);
    CHECK(r2.out.find("\"M_max\": 8") != std::string::npos);
}

TEST_CASE("quantum command flags convergence failure with exit 3") {
    auto cfg = write_config("hard.json",
                            R"({"kind": "lambda", "Omega": [1.0, 0.25],
                                "omega": [0.0, 0.0, 1.1, 1.3],
                                "mu": {"13": 0.25, "23": 0.25, "34": 1.2}, "Na": 1})");
    auto r = run_cli("quantum --config " + cfg.string() + " --tol 1e-10 --mcap 20");
    CHECK(r.exit_code == 3);
    CHECK(r.out.find("\"converged\": false") != std::string::npos);
}

TEST_CASE("config errors exit with code 2") {
    auto r = run_cli("variational --config /nonexistent/cfg.json");
    CHECK(r.exit_code == 2);

    auto bad = write_config("bad.json", R"({"kind": "lambda"})");
    auto r2 = run_cli("variational --config " + bad.string());
    CHECK(r2.exit_code == 2);
    CHECK(r2.err.find("error:") != std::string::npos);

    auto unsorted = write_config("unsorted.json",
                                 R"({"kind": "lambda", "Omega": [1, 0.25],
                                     "omega": [0.5, 0.0, 1.1, 1.3],
                                     "mu": {"13": 0, "23": 0, "34": 0}, "Na": 1})");
    auto r3 = run_cli("variational --config " + unsorted.string());
    CHECK(r3.exit_code == 2);
    CHECK(r3.err.find("omega") != std::string::npos);
}

TEST_CASE("scan command writes the pinned CSV header and one row per step") {
    auto cfg = write_config("n.json", kNConfig);
    fs::path out = kWork / "scan.csv";
    auto r = run_cli("scan --config " + cfg.string() +
                     " --vary mu.24 --from 0.9 --to 1.4 --steps 11 --out " + out.string());
    CHECK(r.exit_code == 0);
    std::string csv = slurp(out);
    CHECK(csv.rfind("param,region,energy,nu1,nu2,A11,A22,A33,A44\n", 0) == 0);
    CHECK(line_count(csv) == 12);  // header + 11 rows
    CHECK(csv.find("S_13") != std::string::npos);
    CHECK(csv.find("S_24") != std::string::npos);

    std::string manifest = slurp(out.string() + ".manifest");
    CHECK(manifest.find("\"command\": \"scan\"") != std::string::npos);
    CHECK(manifest.find("\"vary\": \"mu.24\"") != std::string::npos);
}

TEST_CASE("scan outputs are byte-identical across reruns") {
    auto cfg = write_config("n.json", kNConfig);
    fs::path a = kWork / "scan_a.csv", b = kWork / "scan_b.csv";
    std::string args = "scan --config " + cfg.string() +
                       " --vary mu.24 --from 1.0 --to 1.3 --steps 4 --method quantum --tol 1e-7";
    CHECK(run_cli(args + " --out " + a.string()).exit_code == 0);
    CHECK(run_cli(args + " --out " + b.string()).exit_code == 0);
    std::string ca = slurp(a), cb = slurp(b);
    CHECK(ca == cb);
    CHECK(ca.find("S_") == std::string::npos);  // quantum rows leave the region blank
    CHECK(line_count(ca) == 5);
}

TEST_CASE("phase-diagram command emits a row-major grid") {
    auto zero = write_config("zero.json",
                             R"({"kind": "lambda", "Omega": [1.0, 0.25],
                                 "omega": [0.0, 0.0, 1.1, 1.3],
                                 "mu": {"13": 0.001, "23": 0.001, "34": 0.001}, "Na": 1})");
    fs::path out = kWork / "grid.csv";
    auto r = run_cli("phase-diagram --config " + zero.string() +
                     " --vary mu.13,mu.23 --grid 2x2 --from 0.0,0.0 --to 0.1,0.1 --out " +
                     out.string());
    CHECK(r.exit_code == 0);
    std::string csv = slurp(out);
    CHECK(csv.rfind("p,q,region,energy\n", 0) == 0);
    CHECK(line_count(csv) == 5);
    // the all-weak-coupling corner grid is uniformly normal
    CHECK(csv.find("S_norm") != std::string::npos);
    CHECK(csv.find("S_Lambda") == std::string::npos);
}
