// nambu: batch front end.
//
//   nambu simulate --config run.json --out traj.csv
//   nambu verify <casimir|antisymmetry|separation|spectral|dirac|all> --seed 7 [--dim 4]
//
// Exit codes: 0 success, 1 failed checks or internal error, 2 usage or
// config error, 3 numerical divergence.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "nambu/config.hpp"
#include "nambu/errors.hpp"
#include "nambu/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitDivergence = 3;

int simulate(const std::string& config_path, std::string out_path) {
    try {
        const nambu::RunConfig cfg = nambu::load_config(config_path);
        if (out_path.empty()) out_path = cfg.output;
        if (out_path.empty()) throw nambu::ConfigError("missing required field \"output\" (or pass --out)");

        const nambu::RunResult result = nambu::run(cfg);

        std::ofstream csv(out_path, std::ios::binary);
        if (!csv) throw nambu::ConfigError("cannot write " + out_path);
        nambu::write_csv(csv, result.trajectory);
        std::ofstream summary(out_path + ".summary.json", std::ios::binary);
        if (!summary) throw nambu::ConfigError("cannot write " + out_path + ".summary.json");
        nambu::write_summary(summary, cfg, result);
        if (!csv || !summary) {
            std::cerr << "error: write failed\n";
            return kExitFailed;
        }
        std::cout << "wrote " << result.trajectory.samples.size() << " samples to " << out_path << '\n';
        return kExitOk;
    } catch (const nambu::DivergenceError& e) {
        std::cerr << "error: divergence at step " << e.step() << ": " << e.what() << '\n';
        return kExitDivergence;
    } catch (const nambu::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const nambu::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}

int verify(const std::string& suite, std::uint64_t seed, std::optional<std::size_t> dim) {
    if (!nambu::is_suite(suite)) {
        std::cerr << "error: unknown suite \"" << suite
                  << "\" (expected casimir, antisymmetry, separation, spectral, dirac or all)\n";
        return kExitUsage;
    }
    std::vector<nambu::CheckResult> results;
    try {
        results = nambu::run_verify(suite, {seed, dim});
    } catch (const nambu::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    nambu::print_table(std::cout, results);
    return nambu::all_passed(results) ? kExitOk : kExitFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Indefinite-metric Lie-Nambu dynamics engine"};
    app.require_subcommand(1);

    auto* sim = app.add_subcommand("simulate", "Integrate a configured trajectory and export diagnostics");
    std::string config_path, out_path;
    sim->add_option("--config", config_path, "JSON run configuration")->required();
    sim->add_option("--out", out_path, "CSV output path (summary goes to <out>.summary.json)");

    auto* ver = app.add_subcommand("verify", "Run seeded property suites and print a pass/fail table");
    std::string suite;
    std::uint64_t seed = 7;
    std::optional<std::size_t> dim;
    ver->add_option("suite", suite, "casimir, antisymmetry, separation, spectral, dirac or all")->required();
    ver->add_option("--seed", seed, "Seed for every random input");
    ver->add_option("--dim", dim, "One-particle dimension override");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (sim->parsed()) return simulate(config_path, out_path);
        return verify(suite, seed, dim);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailed;
    }
}
