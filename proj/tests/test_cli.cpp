#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Run {
    int exit_code;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(NME_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    std::array<char, 4096> buf{};
    size_t got = 0;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

fs::path scratch() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / ("nme_cli_test_" + std::to_string(::getpid()));
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

fs::path write(const std::string& name, const std::string& text) {
    const fs::path p = scratch() / name;
    std::ofstream(p) << text;
    return p;
}

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

// Scalar instance with no positive solution: x + 1/x + 1/x = 0.5.
const char* kNoSolution = R"({"n": 1, "s": 1, "t": 1, "p": 1, "A": [[1]], "B": [[1]], "Q": [[0.5]]})";

}  // namespace

TEST_CASE("solve the examples") {
    Run r = run("solve --example 1");
    CHECK(r.exit_code == 0);
    CHECK(contains(r.out, "scheme: fixed-point"));
    CHECK(contains(r.out, "extremality: maximal"));
    CHECK(contains(r.out, "converged: yes"));
    CHECK(contains(r.out, "1.25781947323771"));

    r = run("solve --example 2");
    CHECK(r.exit_code == 0);
    CHECK(contains(r.out, "scheme: coupled"));
    CHECK(contains(r.out, "extremality: minimal"));
}

TEST_CASE("outputs are byte-identical across runs") {
    const fs::path d = scratch();
    for (int run_id = 0; run_id < 2; ++run_id) {
        const std::string tag = std::to_string(run_id);
        Run r = run("solve --example 2 --history " + (d / ("h" + tag + ".csv")).string() + " --solution " +
                    (d / ("s" + tag + ".json")).string());
        REQUIRE(r.exit_code == 0);
    }
    const std::string h0 = slurp(d / "h0.csv");
    CHECK(contains(h0, "iteration,step_error_X,step_error_Y"));
    CHECK(h0 == slurp(d / "h1.csv"));
    CHECK(slurp(d / "s0.json") == slurp(d / "s1.json"));
}

TEST_CASE("check prints each condition") {
    Run r = run("check --example 1");
    CHECK(r.exit_code == 0);
    CHECK(contains(r.out, "necessary (lambda_max(Q) > 1): holds"));
    CHECK(contains(r.out, "beta"));

    r = run("check " + write("none.json", kNoSolution).string());
    CHECK(r.exit_code == 0);
    CHECK(contains(r.out, "necessary (lambda_max(Q) <= 1): fails"));
}

TEST_CASE("malformed input exits 2 with a location") {
    const fs::path bad = write("bad.json",
                               R"({"n": 2, "s": 1, "t": 1, "p": 1, "A": [[1, 0], [0]], "B": [[1,0],[0,1]],
                                   "Q": [[2,0],[0,2]]})");
    Run r = run("solve " + bad.string());
    CHECK(r.exit_code == 2);
    CHECK(contains(r.out, "A[row 1]"));
    CHECK(run("solve " + (scratch() / "missing.json").string()).exit_code == 2);
    CHECK(run("solve --example 7").exit_code == 2);
    const fs::path nonherm = write("nonherm.json",
                                   R"({"n": 2, "s": 1, "t": 1, "p": 1, "A": [[1, 0], [0, 1]], "B": [[1,0],[0,1]],
                                       "Q": [[2,1],[0,2]]})");
    CHECK(run("check " + nonherm.string()).exit_code == 2);
}

TEST_CASE("precondition failures exit 3 unless forced") {
    CHECK(run("solve --example 1 --scheme coupled").exit_code == 3);
    CHECK(run("solve --example 1 --scheme coupled --force").exit_code != 3);
    CHECK(run("bounds " + write("none2.json", kNoSolution).string()).exit_code == 3);
    CHECK(run("bounds --example 1").exit_code == 0);
}

TEST_CASE("non-convergence exits 4 and still writes history") {
    const fs::path h = scratch() / "short.csv";
    Run r = run("solve --example 1 --max-iter 2 --history " + h.string());
    CHECK(r.exit_code == 4);
    const std::string text = slurp(h);
    CHECK(std::count(text.begin(), text.end(), '\n') == 3);
}

TEST_CASE("verify and factorize") {
    const fs::path sol = scratch() / "ex1.json";
    REQUIRE(run("solve --example 1 --solution " + sol.string()).exit_code == 0);
    Run r = run("verify --example 1 --solution " + sol.string());
    CHECK(r.exit_code == 0);
    CHECK(contains(r.out, "in [cI, Q^(1/s)]: true"));
    CHECK(contains(r.out, "in [mI, N]: true"));

    r = run("factorize --example 1 --solution " + sol.string());
    CHECK(r.exit_code == 0);
    CHECK(contains(r.out, "factorization verified: true"));

    const fs::path perturbed =
        write("perturbed.json", R"({"n": 3, "X": [[1.27, 0, 0], [0, 1.25312467971387, 0], [0, 0, 1.2565]]})");
    r = run("verify --example 1 --solution " + perturbed.string());
    CHECK(r.exit_code == 5);
}
