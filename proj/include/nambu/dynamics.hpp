#pragma once

// Proper-time integration of i ∂_s ρ = {ρ, H, S} with per-sample diagnostics.

#include <array>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "nambu/metric.hpp"
#include "nambu/observables.hpp"

namespace nambu {

enum class Scheme { rk4, midpoint };

struct IntegratorConfig {
    double step_size = 1e-3;
    std::size_t steps = 1000;
    Scheme scheme = Scheme::rk4;
    std::size_t report_every = 1;

    /// Throws ValidationError unless step_size > 0, steps >= 1, report_every >= 1.
    void validate() const;
};

inline constexpr int kTrackedCasimirs = 4;
/// Any state entry above this modulus aborts the run.
inline constexpr double kDivergenceBound = 1e12;

struct SampleDiagnostics {
    std::array<Complex, kTrackedCasimirs> casimirs{};
    double hermiticity_residual = 0.0;
    /// Eigenvalues of the raised state, sorted by (real, imag).
    std::vector<Complex> eigenvalues;
    bool diagonalizable = true;
};

struct Sample {
    double s;
    DensityState state;
    SampleDiagnostics diagnostics;
};

struct Trajectory {
    std::vector<Sample> samples;
};

SampleDiagnostics diagnose(const Metric& m, const DensityState& rho);

/// Fixed-step explicit integration of dρ/ds = -i·vector_field(h, s, m, ρ).
/// No projection or renormalization is applied. Samples are recorded at
/// s = 0 and after every `report_every` steps, so sample spacing is always
/// step_size × report_every; trailing steps past the last multiple are
/// integrated but not sampled.
Trajectory evolve(const DensityState& rho0, const Observable& h, const Observable& s, const Metric& m,
                  const IntegratorConfig& cfg);

/// One integration step of the same scheme `evolve` uses.
Matrix integrate_step(const Matrix& r, double ds, Scheme scheme, const Observable& h, const Observable& s,
                      const Metric& m);

struct SpectralPaths {
    /// paths[k][sample]; an empty optional marks a non-diagonalizable sample.
    std::vector<std::vector<std::optional<Complex>>> paths;
    /// (sample, path) pairs where the nearest-neighbour match was ambiguous.
    std::vector<std::pair<std::size_t, std::size_t>> ambiguities;
};

SpectralPaths spectral_track(const Trajectory& traj);

struct DriftSummary {
    std::array<double, kTrackedCasimirs> casimir_drift{};
    double max_casimir_drift = 0.0;
    double max_hermiticity_residual = 0.0;
    double max_eigenvalue_displacement = 0.0;
    std::size_t ambiguities = 0;
    std::size_t gaps = 0;
};

DriftSummary drift_report(const Trajectory& traj);

/// Closed-form linear (S = C_2/2) evolution: X(s) = e^{iYs} X_0 e^{-iYs},
/// Y = G h^T, X = R·Ginv. Test oracle.
DensityState linear_oracle(const DensityState& rho0, const Observable& h, const Metric& m, double s);

}  // namespace nambu
