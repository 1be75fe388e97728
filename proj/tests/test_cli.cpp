#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace {

namespace fs = std::filesystem;

struct CommandResult {
    int exit_code;
    std::string out;
    std::string err;
};

const fs::path& work_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "qiopa_cli_tests";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

CommandResult run_cli(const std::string& args) {
    const fs::path out = work_dir() / "stdout.txt";
    const fs::path err = work_dir() / "stderr.txt";
    const std::string cmd = "cd " + work_dir().string() + " && " + QIOPA_CLI_PATH + " " + args +
                            " > " + out.string() + " 2> " + err.string();
    const int status = std::system(cmd.c_str());
    CommandResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

} // namespace

TEST_CASE("evolve at zero gain writes the bare injected photon") {
    const auto r = run_cli("evolve --gain 0 --qubit H --out h0.json");
    INFO(r.err);
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.out.find("leakage = 0") != std::string::npos);

    const nlohmann::json doc = nlohmann::json::parse(slurp(work_dir() / "h0.json"));
    REQUIRE(doc["amplitudes"].size() == 1);
    REQUIRE(doc["amplitudes"][0]["ket"] == nlohmann::json({1, 0, 0, 0}));
    REQUIRE(doc["amplitudes"][0]["re"].get<double>() == 1.0);
    REQUIRE(doc.contains("manifest"));
}

TEST_CASE("evolve at the working gain reports a tiny leakage") {
    const auto r = run_cli("evolve --gain 0.11 --qubit H --cutoff 12 --out h11.json");
    REQUIRE(r.exit_code == 0);
    const nlohmann::json doc = nlohmann::json::parse(slurp(work_dir() / "h11.json"));
    REQUIRE(doc["leakage"].get<double>() < 1e-10);
}

TEST_CASE("an unnormalized qubit is a usage error") {
    const auto r = run_cli("evolve --gain 0.11 --qubit 2,0,0,0");
    REQUIRE(r.exit_code == 2);
}

TEST_CASE("fidelity command prints the optimal values") {
    const auto r = run_cli("fidelity --gain 0.11 --qubit H");
    INFO(r.err);
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.out.find("F = 0.833333333333") != std::string::npos);
    REQUIRE(r.out.find("F* = 0.666666666667") != std::string::npos);
}

TEST_CASE("fidelity without amplification exits with the domain code") {
    const auto r = run_cli("fidelity --gain 0 --qubit H");
    REQUIRE(r.exit_code == 3);
}

TEST_CASE("fidelity scans are deterministic CSV") {
    const auto r1 = run_cli("fidelity --gain 0.11 --scan 20 --seed 7 --out scan1.csv");
    const auto r2 = run_cli("fidelity --gain 0.11 --scan 20 --seed 7 --out scan2.csv");
    REQUIRE(r1.exit_code == 0);
    REQUIRE(r2.exit_code == 0);
    const std::string a = slurp(work_dir() / "scan1.csv");
    REQUIRE(a == slurp(work_dir() / "scan2.csv"));
    // 3 presets + 20 samples + manifest comment + column header
    REQUIRE(std::count(a.begin(), a.end(), '\n') == 25);

    const auto missing_seed = run_cli("fidelity --gain 0.11 --scan 5");
    REQUIRE(missing_seed.exit_code == 2);
}

TEST_CASE("wigner scans emit summaries and identical bytes across runs") {
    const std::string flags = "wigner --gain 0.11 --coord1 a1 --coord2 b1 --min -1 --max 1 --step 0.5";
    const auto r1 = run_cli(flags + " --out w1.csv");
    const auto r2 = run_cli(flags + " --out w2.csv");
    INFO(r1.err);
    REQUIRE(r1.exit_code == 0);
    REQUIRE(r1.out.find("min_W = ") != std::string::npos);
    REQUIRE(r1.out.find("negative_fraction = ") != std::string::npos);
    REQUIRE(slurp(work_dir() / "w1.csv") == slurp(work_dir() / "w2.csv"));

    const auto huge = run_cli("wigner --gain 0.11 --min -10 --max 10 --step 0.001 --out huge.csv");
    REQUIRE(huge.exit_code == 4);
}

TEST_CASE("nm-state prints the optimal fidelity") {
    const auto r = run_cli("nm-state --n 1 --m 2 --out nm12.json");
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.out.find("F = 5/6") != std::string::npos);

    const auto r23 = run_cli("nm-state --n 2 --m 3 --out nm23.json");
    REQUIRE(r23.out.find("F = 11/12") != std::string::npos);

    const auto bad = run_cli("nm-state --n 3 --m 2");
    REQUIRE(bad.exit_code == 3);
}

TEST_CASE("experiment command runs the bundled config") {
    const std::string config = std::string(QIOPA_SOURCE_DIR) + "/configs/experiment_small.json";
    const auto clone = run_cli("experiment --config " + config + " --mode clone --out clone.json");
    INFO(clone.err);
    REQUIRE(clone.exit_code == 0);
    REQUIRE(clone.out.find("R_hat = ") != std::string::npos);
    const nlohmann::json doc = nlohmann::json::parse(slurp(work_dir() / "clone.json"));
    REQUIRE(doc["counts"]["signal"].get<long long>() > 0);

    const auto zscan = run_cli("experiment --config " + config + " --mode zscan --out z.csv");
    REQUIRE(zscan.exit_code == 0);
    const std::string csv = slurp(work_dir() / "z.csv");
    // manifest + header + 9 grid rows
    REQUIRE(std::count(csv.begin(), csv.end(), '\n') == 11);

    const auto missing = run_cli("experiment --config no_such_file.json --mode clone");
    REQUIRE(missing.exit_code == 3);
    REQUIRE(missing.err.find("no_such_file.json") != std::string::npos);
}

TEST_CASE("unknown flags are usage errors") {
    REQUIRE(run_cli("evolve --gain 0.1 --qubit H --bogus 3").exit_code == 2);
    REQUIRE(run_cli("wigner --gain 0.1 --coord1 zz").exit_code == 2);
}
