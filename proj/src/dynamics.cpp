#include "nambu/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

#include "nambu/brackets.hpp"
#include "nambu/errors.hpp"

namespace nambu {

namespace {

constexpr double kTieTolerance = 1e-12;
constexpr double kEigenvectorCondition = 1e10;

bool lexicographic(const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

Matrix rhs(const Matrix& r, const Observable& h, const Observable& s, const Metric& m) {
    return Complex(0.0, -1.0) * vector_field(h, s, m, DensityState::unchecked(r));
}

}  // namespace

void IntegratorConfig::validate() const {
    if (!(step_size > 0.0) || !std::isfinite(step_size)) throw ValidationError("stepSize must be > 0");
    if (steps < 1) throw ValidationError("steps must be >= 1");
    if (report_every < 1) throw ValidationError("reportEvery must be >= 1");
}

SampleDiagnostics diagnose(const Metric& m, const DensityState& rho) {
    SampleDiagnostics d;
    const auto c = casimir_values(m, rho, kTrackedCasimirs);
    std::copy(c.begin(), c.end(), d.casimirs.begin());
    d.hermiticity_residual = rho.hermiticity_residual();

    const Matrix x = raised_state(m, rho);
    Eigen::ComplexEigenSolver<Matrix> es(x, true);
    if (es.info() != Eigen::Success) {
        d.diagonalizable = false;
        return d;
    }
    const auto& ev = es.eigenvalues();
    d.eigenvalues.assign(ev.data(), ev.data() + ev.size());
    std::sort(d.eigenvalues.begin(), d.eigenvalues.end(), lexicographic);

    Eigen::JacobiSVD<Matrix> svd(es.eigenvectors());
    const auto& sv = svd.singularValues();
    const double smin = sv(sv.size() - 1);
    d.diagonalizable = smin > 0.0 && sv(0) / smin < kEigenvectorCondition;
    return d;
}

Matrix integrate_step(const Matrix& r, double ds, Scheme scheme, const Observable& h, const Observable& s,
                      const Metric& m) {
    if (scheme == Scheme::midpoint) {
        const Matrix k1 = rhs(r, h, s, m);
        return r + ds * rhs(r + 0.5 * ds * k1, h, s, m);
    }
    const Matrix k1 = rhs(r, h, s, m);
    const Matrix k2 = rhs(r + 0.5 * ds * k1, h, s, m);
    const Matrix k3 = rhs(r + 0.5 * ds * k2, h, s, m);
    const Matrix k4 = rhs(r + ds * k3, h, s, m);
    return r + (ds / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Trajectory evolve(const DensityState& rho0, const Observable& h, const Observable& s, const Metric& m,
                  const IntegratorConfig& cfg) {
    cfg.validate();
    if (rho0.dim() != m.dim())
        throw DimensionError("state dimension " + std::to_string(rho0.dim()) + " does not match metric dimension " +
                             std::to_string(m.dim()));
    Trajectory traj;
    traj.samples.reserve(cfg.steps / cfg.report_every + 1);
    traj.samples.push_back({0.0, rho0, diagnose(m, rho0)});

    Matrix r = rho0.matrix();
    for (std::size_t step = 1; step <= cfg.steps; ++step) {
        r = integrate_step(r, cfg.step_size, cfg.scheme, h, s, m);
        if (!r.allFinite() || r.cwiseAbs().maxCoeff() > kDivergenceBound)
            throw DivergenceError(step, "state diverged at step " + std::to_string(step));
        if (step % cfg.report_every == 0) {
            DensityState state = DensityState::unchecked(r);
            auto diag = diagnose(m, state);
            traj.samples.push_back({static_cast<double>(step) * cfg.step_size, std::move(state), std::move(diag)});
        }
    }
    return traj;
}

SpectralPaths spectral_track(const Trajectory& traj) {
    SpectralPaths out;
    if (traj.samples.empty()) return out;
    const std::size_t n_samples = traj.samples.size();
    const auto& first = traj.samples.front().diagnostics.eigenvalues;
    const std::size_t n_paths = first.size();
    out.paths.assign(n_paths, std::vector<std::optional<Complex>>(n_samples));

    std::vector<Complex> last(first.begin(), first.end());
    for (std::size_t t = 0; t < n_samples; ++t) {
        const auto& diag = traj.samples[t].diagnostics;
        if (!diag.diagonalizable || diag.eigenvalues.size() != n_paths) continue;
        if (t == 0) {
            for (std::size_t k = 0; k < n_paths; ++k) out.paths[k][0] = first[k];
            continue;
        }
        std::vector<bool> used(n_paths, false);
        for (std::size_t k = 0; k < n_paths; ++k) {
            std::size_t best = n_paths, second = n_paths;
            double best_d = std::numeric_limits<double>::infinity();
            double second_d = best_d;
            for (std::size_t c = 0; c < n_paths; ++c) {
                if (used[c]) continue;
                const double dist = std::abs(diag.eigenvalues[c] - last[k]);
                if (dist < best_d) {
                    second = best;
                    second_d = best_d;
                    best = c;
                    best_d = dist;
                } else if (dist < second_d) {
                    second = c;
                    second_d = dist;
                }
            }
            if (second < n_paths && second_d - best_d < kTieTolerance &&
                std::abs(diag.eigenvalues[best] - diag.eigenvalues[second]) > kTieTolerance)
                out.ambiguities.emplace_back(t, k);
            used[best] = true;
            last[k] = diag.eigenvalues[best];
            out.paths[k][t] = last[k];
        }
    }
    return out;
}

DriftSummary drift_report(const Trajectory& traj) {
    if (traj.samples.empty()) throw ValidationError("drift_report needs a non-empty trajectory");
    DriftSummary d;
    const auto& c0 = traj.samples.front().diagnostics.casimirs;
    for (const auto& sample : traj.samples) {
        for (int n = 0; n < kTrackedCasimirs; ++n) {
            const auto k = static_cast<std::size_t>(n);
            d.casimir_drift[k] = std::max(d.casimir_drift[k], std::abs(sample.diagnostics.casimirs[k] - c0[k]));
        }
        d.max_hermiticity_residual = std::max(d.max_hermiticity_residual, sample.diagnostics.hermiticity_residual);
        if (!sample.diagnostics.diagonalizable) ++d.gaps;
    }
    d.max_casimir_drift = *std::max_element(d.casimir_drift.begin(), d.casimir_drift.end());

    const SpectralPaths paths = spectral_track(traj);
    d.ambiguities = paths.ambiguities.size();
    for (const auto& path : paths.paths) {
        std::optional<Complex> origin;
        for (const auto& v : path) {
            if (!v) continue;
            if (!origin) origin = v;
            d.max_eigenvalue_displacement = std::max(d.max_eigenvalue_displacement, std::abs(*v - *origin));
        }
    }
    return d;
}

DensityState linear_oracle(const DensityState& rho0, const Observable& h, const Metric& m, double s) {
    const Matrix& coeff = h.linear_coeff();
    if (static_cast<std::size_t>(coeff.rows()) != m.dim() || rho0.dim() != m.dim())
        throw DimensionError("linear_oracle dimensions do not match");
    const Matrix y = m.matrix() * coeff.transpose();
    const Complex i(0.0, 1.0);
    const Matrix forward = (i * s * y).exp();
    const Matrix backward = (-i * s * y).exp();
    const Matrix x = forward * raised_state(m, rho0) * backward;
    return DensityState::unchecked(x * m.matrix());
}

}  // namespace nambu
