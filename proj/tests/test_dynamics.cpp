#include <doctest.h>

#include <cmath>
#include <string>

#include "nambu/dynamics.hpp"
#include "nambu/errors.hpp"
#include "nambu/metric.hpp"
#include "nambu/observables.hpp"
#include "nambu/random.hpp"
#include "oracles.hpp"

using namespace nambu;

namespace {

Metric sample_metric(std::uint64_t seed, std::size_t d) { return random_metric(seed, d, d / 2); }

Metric identity_metric(std::size_t d) {
    std::vector<double> sig(d, 1.0);
    return Metric::from_signature(sig);
}

IntegratorConfig config(double ds, std::size_t steps, std::size_t every = 1, Scheme scheme = Scheme::rk4) {
    IntegratorConfig cfg;
    cfg.step_size = ds;
    cfg.steps = steps;
    cfg.report_every = every;
    cfg.scheme = scheme;
    return cfg;
}

// R(s) for S = C2/2 and linear H = Σ h∘R: X = R·Ginv evolves by conjugation
// with exp(i s G h^T).
Matrix linear_reference(const Matrix& r0, const Matrix& h, const Matrix& g, double s) {
    const Complex i(0.0, 1.0);
    const Matrix y = g * h.transpose();
    const Matrix x0 = r0 * oracle::gauss_inverse(g);
    return oracle::taylor_exp(i * s * y) * x0 * oracle::taylor_exp(-i * s * y) * g;
}

Observable nonlinear_s() { return Observable::casimir_poly({{{{2, 1}}, 0.5}, {{{3, 1}}, 0.1}, {{{1, 1}, {3, 1}}, 0.05}}); }

Sample manual_sample(double s, std::vector<Complex> eigenvalues, bool diagonalizable = true) {
    SampleDiagnostics d;
    d.eigenvalues = std::move(eigenvalues);
    d.diagonalizable = diagonalizable;
    return {s, DensityState::unchecked(Matrix::Zero(2, 2)), d};
}

}  // namespace

TEST_CASE("zero Hamiltonian leaves the state fixed") {
    const Metric m = sample_metric(1, 3);
    const DensityState rho = DensityState::hermitian(random_hermitian_matrix(2, 3));
    const Trajectory traj = evolve(rho, Observable::linear(Matrix::Zero(3, 3)), nonlinear_s(), m, config(1e-2, 50, 10));
    REQUIRE(traj.samples.size() == 6);
    for (const auto& sample : traj.samples) CHECK(oracle::max_abs(sample.state.matrix() - rho.matrix()) == 0.0);
    const DriftSummary d = drift_report(traj);
    CHECK(d.max_casimir_drift == 0.0);
    CHECK(d.max_eigenvalue_displacement == 0.0);
}

TEST_CASE("linear evolution matches the matrix exponential") {
    SUBCASE("g = I, s = 1") {
        for (std::uint64_t seed = 1; seed <= 3; ++seed) {
            const std::size_t d = 4;
            const Metric m = identity_metric(d);
            const Matrix r0 = random_hermitian_matrix(10 + seed, d);
            const Matrix h = random_hermitian_matrix(20 + seed, d);
            const Trajectory traj =
                evolve(DensityState::hermitian(r0), Observable::linear(h), Observable::casimir(2, 0.5), m,
                       config(1e-3, 1000, 1000));
            const Matrix ref = linear_reference(r0, h, m.matrix(), 1.0);
            CHECK(oracle::max_abs(traj.samples.back().state.matrix() - ref) <= 1e-8);
            CHECK(oracle::max_abs(ref - r0) > 1e-2);
        }
    }
    SUBCASE("indefinite metric") {
        for (std::uint64_t seed = 1; seed <= 3; ++seed) {
            const std::size_t d = 2 + seed % 3;
            const Metric m = sample_metric(seed, d);
            const Matrix r0 = random_hermitian_matrix(30 + seed, d);
            const Matrix h = random_hermitian_matrix(40 + seed, d);
            const Trajectory traj =
                evolve(DensityState::hermitian(r0), Observable::linear(h), Observable::casimir(2, 0.5), m,
                       config(1e-3, 500, 500));
            const Matrix ref = linear_reference(r0, h, m.matrix(), 0.5);
            CHECK(oracle::max_abs(traj.samples.back().state.matrix() - ref) <= 1e-8);
            CHECK(oracle::max_abs(linear_oracle(DensityState::hermitian(r0), Observable::linear(h), m, 0.5).matrix() -
                                  ref) <= 1e-10);
        }
    }
    SUBCASE("diag(1,-1) with fine steps") {
        const Metric m = Metric::from_signature(std::array<double, 2>{1.0, -1.0});
        const DensityState rho = DensityState::hermitian(random_hermitian_matrix(5, 2));
        const Observable h = Observable::linear(random_hermitian_matrix(6, 2));
        const Trajectory traj = evolve(rho, h, Observable::casimir(2, 0.5), m, config(1e-4, 1000, 1000));
        CHECK(oracle::max_abs(traj.samples.back().state.matrix() - linear_oracle(rho, h, m, 0.1).matrix()) <= 1e-10);
    }
}

TEST_CASE("linear oracle edge cases") {
    const Metric m = sample_metric(3, 3);
    const DensityState rho = DensityState::hermitian(random_hermitian_matrix(4, 3));
    const Observable h = Observable::linear(random_hermitian_matrix(5, 3));
    CHECK(oracle::max_abs(linear_oracle(rho, h, m, 0.0).matrix() - rho.matrix()) <= 1e-12);
    CHECK(oracle::max_abs(linear_oracle(rho, Observable::linear(Matrix::Zero(3, 3)), m, 2.0).matrix() - rho.matrix()) <=
          1e-12);
    CHECK_THROWS_AS(linear_oracle(rho, Observable::casimir(2), m, 1.0), ValidationError);
}

TEST_CASE("casimir drift under nonlinear S") {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const std::size_t d = 4;
        const Metric m = sample_metric(seed, d);
        const DensityState rho = DensityState::hermitian(0.5 * random_hermitian_matrix(50 + seed, d));
        const Observable h = Observable::linear(random_hermitian_matrix(60 + seed, d));
        for (const Observable& s : {Observable::casimir_poly({{{{1, 2}}, 1.0}, {{{2, 1}}, 0.5}}), nonlinear_s()}) {
            const Trajectory traj = evolve(rho, h, s, m, config(1e-3, 1000, 10));
            const DriftSummary d_sum = drift_report(traj);
            CHECK(d_sum.max_casimir_drift <= 1e-8);
            CHECK(d_sum.max_hermiticity_residual <= 1e-9);
            CHECK(oracle::max_abs(traj.samples.back().state.matrix() - rho.matrix()) > 1e-3);
        }
    }
}

TEST_CASE("convergence order under step halving") {
    const std::size_t d = 3;
    const Metric m = sample_metric(7, d);
    const Matrix r0 = random_hermitian_matrix(8, d);
    const Matrix h = random_hermitian_matrix(9, d);
    const Matrix ref = linear_reference(r0, h, m.matrix(), 1.0);
    auto error = [&](Scheme scheme, std::size_t steps) {
        const Trajectory traj = evolve(DensityState::hermitian(r0), Observable::linear(h), Observable::casimir(2, 0.5),
                                       m, config(1.0 / static_cast<double>(steps), steps, steps, scheme));
        return oracle::max_abs(traj.samples.back().state.matrix() - ref);
    };
    const double rk4_ratio = error(Scheme::rk4, 20) / error(Scheme::rk4, 40);
    CHECK(rk4_ratio >= 8.0);
    const double mid_ratio = error(Scheme::midpoint, 40) / error(Scheme::midpoint, 80);
    CHECK(mid_ratio >= 3.0);
    CHECK(mid_ratio <= 6.0);
}

TEST_CASE("sample spacing") {
    const Metric m = sample_metric(2, 2);
    const DensityState rho = DensityState::hermitian(random_hermitian_matrix(3, 2));
    const Observable h = Observable::linear(random_hermitian_matrix(4, 2));
    const Trajectory traj = evolve(rho, h, Observable::casimir(2, 0.5), m, config(0.01, 23, 5));
    REQUIRE(traj.samples.size() == 5);
    for (std::size_t k = 0; k < traj.samples.size(); ++k)
        CHECK(traj.samples[k].s == doctest::Approx(0.05 * static_cast<double>(k)).epsilon(1e-14));
}

TEST_CASE("divergence and configuration errors") {
    const Metric m = sample_metric(2, 3);
    const DensityState rho = DensityState::hermitian(random_hermitian_matrix(3, 3));
    const Observable h = Observable::linear(1e3 * random_hermitian_matrix(4, 3));
    try {
        evolve(rho, h, Observable::casimir(2, 0.5), m, config(1.0, 50));
        FAIL("expected divergence");
    } catch (const DivergenceError& e) {
        CHECK(e.step() >= 1);
        CHECK(e.step() <= 50);
        CHECK(std::string(e.what()).find(std::to_string(e.step())) != std::string::npos);
    }
    CHECK_THROWS_AS(config(0.0, 10).validate(), ValidationError);
    CHECK_THROWS_AS(config(-1.0, 10).validate(), ValidationError);
    CHECK_THROWS_AS(config(0.1, 0).validate(), ValidationError);
    CHECK_THROWS_AS(config(0.1, 10, 0).validate(), ValidationError);
    CHECK_THROWS_AS(evolve(DensityState::hermitian(random_hermitian_matrix(3, 2)), h, Observable::casimir(2), m,
                           config(0.1, 1)),
                    DimensionError);
    CHECK_THROWS_AS(drift_report(Trajectory{}), ValidationError);
}

TEST_CASE("spectral tracking") {
    SUBCASE("isospectral flow keeps every path fixed") {
        const std::size_t d = 3;
        const Metric m = identity_metric(d);
        const DensityState rho = DensityState::hermitian(random_hermitian_matrix(11, d));
        const Trajectory traj = evolve(rho, Observable::linear(random_hermitian_matrix(12, d)), nonlinear_s(), m,
                                       config(1e-3, 500, 50));
        const SpectralPaths sp = spectral_track(traj);
        REQUIRE(sp.paths.size() == d);
        for (const auto& path : sp.paths) {
            REQUIRE(path.front().has_value());
            for (const auto& v : path) {
                REQUIRE(v.has_value());
                CHECK(std::abs(*v - *path.front()) <= 1e-8);
            }
        }
        CHECK(sp.ambiguities.empty());
    }
    SUBCASE("equidistant candidates are flagged and gaps are skipped") {
        Trajectory traj;
        traj.samples.push_back(manual_sample(0.0, {Complex(0, 0), Complex(5, 0)}));
        traj.samples.push_back(manual_sample(0.1, {}, false));
        traj.samples.push_back(manual_sample(0.2, {Complex(-1, 0), Complex(1, 0)}));
        const SpectralPaths sp = spectral_track(traj);
        REQUIRE(sp.paths.size() == 2);
        CHECK_FALSE(sp.paths[0][1].has_value());
        REQUIRE(sp.ambiguities.size() == 1);
        CHECK(sp.ambiguities[0] == std::pair<std::size_t, std::size_t>{2, 0});
        const DriftSummary d = drift_report(traj);
        CHECK(d.gaps == 1);
        CHECK(d.ambiguities == 1);
    }
}
