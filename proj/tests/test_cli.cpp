#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const fs::path kTmp = NAMBU_TEST_TMP;

fs::path write_file(const std::string& name, const std::string& text) {
    fs::create_directories(kTmp);
    const fs::path p = kTmp / name;
    std::ofstream(p, std::ios::binary) << text;
    return p;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run_cli(const std::string& args, const std::string& tag) {
    fs::create_directories(kTmp);
    const fs::path out = kTmp / (tag + ".stdout"), err = kTmp / (tag + ".stderr");
    const std::string cmd =
        std::string("\"") + NAMBU_CLI_PATH + "\" " + args + " >\"" + out.string() + "\" 2>\"" + err.string() + "\"";
    const int status = std::system(cmd.c_str());
    const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return {code, read_file(out), read_file(err)};
}

const char* kRun = R"({
  "metric": {"signature": [1, -1]},
  "state": {"random": {"seed": 2}},
  "hamiltonian": {"linear": {"seed": 3}},
  "integrator": {"stepSize": 0.01, "steps": 20, "reportEvery": 10}
})";

}  // namespace

TEST_CASE("simulate writes the trajectory and summary") {
    const fs::path cfg = write_file("run.json", kRun);
    const fs::path csv = kTmp / "run.csv";
    fs::remove(csv);
    const Outcome r = run_cli("simulate --config \"" + cfg.string() + "\" --out \"" + csv.string() + "\"", "sim");
    CHECK(r.code == 0);
    const std::string text = read_file(csv);
    CHECK(text.rfind("s,C1_re,C1_im", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 4);
    CHECK(fs::exists(csv.string() + ".summary.json"));
}

TEST_CASE("usage and configuration errors exit with 2") {
    const fs::path missing = write_file("missing.json", R"({"state": {"random": {"seed": 1}},
                                                         "hamiltonian": {"linear": {"seed": 1}}})");
    Outcome r = run_cli("simulate --config \"" + missing.string() + "\" --out \"" + (kTmp / "x.csv").string() + "\"",
                        "missing");
    CHECK(r.code == 2);
    CHECK(r.err.find("metric") != std::string::npos);

    const fs::path bad = write_file("bad.json", "{\n  \"metric\": [\n");
    r = run_cli("simulate --config \"" + bad.string() + "\" --out \"" + (kTmp / "x.csv").string() + "\"", "bad");
    CHECK(r.code == 2);
    CHECK(r.err.find("line") != std::string::npos);

    CHECK(run_cli("verify nonsense --seed 7", "suite").code == 2);
    CHECK(run_cli("simulate --frobnicate", "flag").code == 2);
    CHECK(run_cli("verify casimir --dim 1", "dim").code == 2);
}

TEST_CASE("divergence exits with 3") {
    const fs::path cfg = write_file("diverge.json", R"({
      "metric": {"signature": [1, -1, 1]},
      "state": {"random": {"seed": 2}},
      "hamiltonian": {"linear": {"seed": 3, "scale": 1000}},
      "integrator": {"stepSize": 1.0, "steps": 50}
    })");
    const Outcome r = run_cli("simulate --config \"" + cfg.string() + "\" --out \"" + (kTmp / "d.csv").string() + "\"",
                              "diverge");
    CHECK(r.code == 3);
    CHECK(r.err.find("divergence at step") != std::string::npos);
}

TEST_CASE("verify suites pass and are reproducible") {
    for (const char* suite : {"casimir", "separation"}) {
        const Outcome r = run_cli(std::string("verify ") + suite + " --seed 7", suite);
        CHECK(r.code == 0);
        CHECK(r.out.find("FAIL") == std::string::npos);
        CHECK(r.out.find("PASS") != std::string::npos);
    }
    const Outcome a = run_cli("verify all --seed 7", "all_a");
    const Outcome b = run_cli("verify all --seed 7", "all_b");
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK_FALSE(a.out.empty());
}
