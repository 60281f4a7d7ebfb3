#pragma once

// Seeded property suites behind `nambu verify`.
//
// Every random input of a suite is drawn from Rng (std::mt19937_64) seeded
// with  seed·1000003 + suite_tag·10007 + trial,  so a run is fixed by the
// CLI seed alone. Residuals of "= 0" checks are divided by the bracket scale
// max(1, ‖A_F‖‖A_H‖‖A_S‖) before comparison.
//
// Default sizes: casimir and antisymmetry at d = 2, 3, 4; spectral at d = 4;
// separation at N = 3, d = 2; dirac on 2×2 and 4×4 lattices. `dim`
// replaces the one-particle dimension (separation accepts 2..4 and uses N = 2
// above d = 2; dirac ignores it).

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace nambu {

struct CheckResult {
    std::string suite;
    std::string name;
    double residual;
    double tolerance;
    bool pass;
};

struct VerifyOptions {
    std::uint64_t seed = 7;
    std::optional<std::size_t> dim;
};

/// casimir, antisymmetry, separation, spectral, dirac.
const std::vector<std::string>& suite_names();
bool is_suite(const std::string& name);  ///< also accepts "all"

/// Throws ValidationError for an unknown suite or unsupported dim. "all"
/// runs the suites concurrently and returns them in suite_names() order.
std::vector<CheckResult> run_verify(const std::string& suite, const VerifyOptions& opts);

/// One line per check plus a closing count; no timings.
void print_table(std::ostream& out, const std::vector<CheckResult>& results);

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace nambu
