#pragma once

// JSON run configuration for `nambu simulate`, plus the CSV and summary
// writers.
//
// Complex entries are written as [re, im] pairs (a bare number is read as a
// real entry). Top-level fields:
//
//   "metric"      {"signature": [...]} | {"matrix": [[...]]} |
//                 {"preset": "bispinor"} | {"preset": "dirac1p1", "nt": 2, "nz": 2, "spacing": 1.0}
//   "particles"   [metric spec, ...]           alternative to "metric"
//   "state"       {"matrix": [[...]]} | {"random": {"seed": 1, "scale": 1.0}} |
//                 {"pure": {"vector": [...]}} | {"pure": {"seed": 1, "scale": 1.0}}
//   "hamiltonian" observable spec | {"preset": "dirac1p1"}
//   "s"           {"casimirPoly": {"terms": [...]}}        default C2/2
//   "integrator"  {"stepSize": 1e-3, "steps": 1000, "scheme": "rk4", "reportEvery": 1}
//   "output"      CSV path, overridden by --out
//
// Observable specs: {"linear": {"matrix": [[...]]}}, {"linear": {"seed": 3}},
// {"casimirPoly": {"terms": [{"powers": {"C1": 2}, "coeff": 0.5}]}},
// {"sum": [spec, ...]}, {"subsystem": {"positions": [0], "observable": spec}}.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "nambu/dirac_lattice.hpp"
#include "nambu/dynamics.hpp"
#include "nambu/errors.hpp"
#include "nambu/metric.hpp"
#include "nambu/multiparticle.hpp"
#include "nambu/observables.hpp"

namespace nambu {

class ConfigError : public Error {
public:
    using Error::Error;
};

struct RunConfig {
    Metric metric;
    std::optional<MultiMetric> particles;
    std::optional<dirac::LatticeSpec> lattice;
    DensityState state;
    Observable hamiltonian;
    Observable s;
    IntegratorConfig integrator;
    std::string output;
};

/// Throws ConfigError; parse errors carry line and column, semantic errors
/// name the offending field by its JSON path.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

struct RunResult {
    Trajectory trajectory;
    DriftSummary summary;
};

/// Throws DivergenceError on blow-up.
RunResult run(const RunConfig& cfg);

/// Header `s,C1_re,C1_im,...,C4_im,herm_residual,eig_1_re,eig_1_im,...`.
void write_csv(std::ostream& out, const Trajectory& traj);
/// JSON object with the drift maxima.
void write_summary(std::ostream& out, const RunConfig& cfg, const RunResult& result);

/// Shortest round-trip decimal form, independent of the global locale.
std::string format_number(double x);

}  // namespace nambu
