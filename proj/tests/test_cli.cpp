#include <catch2/catch_amalgamated.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#ifndef FSBP_CLI_PATH
#define FSBP_CLI_PATH "fsbp"
#endif

namespace {

namespace fs = std::filesystem;

struct TempDir {
    fs::path dir;
    TempDir() {
        dir = fs::temp_directory_path() / ("fsbp_cli_" + std::to_string(::getpid()));
        fs::create_directories(dir);
    }
    ~TempDir() { fs::remove_all(dir); }
    std::string path(const std::string& name) const { return (dir / name).string(); }
};

int run_cli(const std::string& args, const std::string& log) {
    const std::string cmd =
        std::string(FSBP_CLI_PATH) + " " + args + " > " + log + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
    std::ifstream is(path);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("construct then verify round-trips with exit 0", "[cli]") {
    TempDir tmp;
    const std::string op = tmp.path("op.txt");
    const std::string log = tmp.path("log.txt");
    REQUIRE(run_cli("construct --space rbf:alpha=1 --grid equi:5 --out " + op,
                    log) == 0);
    CHECK(run_cli("verify " + op, log) == 0);
    CHECK(slurp(log).find("consistent") != std::string::npos);
}

TEST_CASE("verify detects a tampered SBP identity", "[cli]") {
    TempDir tmp;
    const std::string op = tmp.path("op.txt");
    const std::string log = tmp.path("log.txt");
    REQUIRE(run_cli("construct --space poly:d=2 --grid lobatto:3 --out " + op,
                    log) == 0);
    // perturb Q(0,0) by 1e-3
    std::ifstream is(op);
    std::stringstream content;
    content << is.rdbuf();
    is.close();
    std::string text = content.str();
    const auto qpos = text.find("\nQ\n");
    REQUIRE(qpos != std::string::npos);
    const auto val_start = qpos + 3;
    const auto val_end = text.find(' ', val_start);
    const double q00 = std::stod(text.substr(val_start, val_end - val_start));
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", q00 + 1e-3);
    text = text.substr(0, val_start) + buf + text.substr(val_end);
    std::ofstream(op) << text;

    CHECK(run_cli("verify " + op, log) != 0);
    CHECK(slurp(log).find("FAIL") != std::string::npos);
}

TEST_CASE("exit codes follow the contract", "[cli]") {
    TempDir tmp;
    const std::string log = tmp.path("log.txt");
    SECTION("construction failure is exit 2") {
        CHECK(run_cli("construct --space poly:d=2 --grid lobatto:2 --out " +
                          tmp.path("x.txt"),
                      log) == 2);
    }
    SECTION("parse failure is exit 3") {
        std::ofstream(tmp.path("bad.op")) << "not an operator file\n";
        CHECK(run_cli("verify " + tmp.path("bad.op"), log) == 3);
        std::ofstream(tmp.path("bad.cfg")) << "no sections here\n";
        CHECK(run_cli("solve " + tmp.path("bad.cfg"), log) == 3);
    }
    SECTION("divergence is exit 4") {
        std::ofstream(tmp.path("div.cfg"))
            << "[experiment]\nname = advdiff-1d-multi\n[mesh]\nblocks = 6\n"
            << "[time]\ndt = 1e6\nt_end = 2e7\nsamples = 2\n";
        CHECK(run_cli("solve " + tmp.path("div.cfg"), log) == 4);
    }
}

TEST_CASE("solve writes the report and snapshot CSVs", "[cli]") {
    TempDir tmp;
    const std::string log = tmp.path("log.txt");
    std::ofstream(tmp.path("run.cfg"))
        << "[experiment]\nname = advdiff-1d-multi\n"
        << "[mesh]\nblocks = 6\n[time]\nt_end = 0.02\nsamples = 4\n"
        << "[output]\nreport = " << tmp.path("report.csv") << "\n"
        << "snapshot = " << tmp.path("snap.csv") << "\n";
    REQUIRE(run_cli("solve " + tmp.path("run.cfg"), log) == 0);
    const std::string report = slurp(tmp.path("report.csv"));
    CHECK(report.substr(0, 13) == "t,mass,energy");
    CHECK(slurp(tmp.path("snap.csv")).substr(0, 4) == "x,u\n");
    CHECK(slurp(log).find("final relative errors") != std::string::npos);

    // identical config and seed give byte-identical CSVs
    std::ofstream(tmp.path("run2.cfg")) << slurp(tmp.path("run.cfg"));
    const std::string r1 = slurp(tmp.path("report.csv"));
    REQUIRE(run_cli("solve " + tmp.path("run2.cfg"), log) == 0);
    CHECK(slurp(tmp.path("report.csv")) == r1);

    // a --set override changes the run
    REQUIRE(run_cli("solve " + tmp.path("run.cfg") + " --set mesh.blocks=8",
                    log) == 0);
    CHECK(slurp(tmp.path("report.csv")) != r1);
}

TEST_CASE("sweep produces long-format rows with orders", "[cli]") {
    TempDir tmp;
    const std::string log = tmp.path("log.txt");
    std::ofstream(tmp.path("sweep.cfg"))
        << "[experiment]\nname = boundary-layer\n[time]\nt_end = 0.3\n"
        << "[sweep]\naxis = I\nvalues = 4 8\n";
    REQUIRE(run_cli("sweep " + tmp.path("sweep.cfg") + " --out " +
                        tmp.path("sweep.csv"),
                    log) == 0);
    const std::string csv = slurp(tmp.path("sweep.csv"));
    CHECK(csv.substr(0, 28) == "axis,value,norm,error,order\n");
    // 2 values x 4 norms = 8 data rows
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 9);
    CHECK(csv.find("I,8,2,") != std::string::npos);
}
