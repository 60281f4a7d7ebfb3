#include <doctest.h>

#include <algorithm>
#include <array>

#include "nambu/brackets.hpp"
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

DensityState sample_state(std::uint64_t seed, std::size_t d) {
    return DensityState::hermitian(random_hermitian_matrix(seed, d));
}

Observable sample_linear(std::uint64_t seed, std::size_t d) { return Observable::linear(random_hermitian_matrix(seed, d)); }

Observable coordinate(std::size_t d, std::size_t i, std::size_t j) {
    Matrix e = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 1.0;
    return Observable::linear(e);
}

}  // namespace

TEST_CASE("Lie-Poisson examples") {
    const std::size_t d = 3;
    const Metric m = sample_metric(1, d);
    const DensityState rho = sample_state(2, d);
    const Observable f = sample_linear(3, d);
    CHECK(lie_poisson(f, f, m, rho).value == Complex(0.0, 0.0));
    const Observable h0 = sample_linear(4, d);
    const double scale = bracket_scale(h0, h0.scaled(2.5), h0, m, rho);
    CHECK(std::abs(lie_poisson(h0, h0.scaled(2.5), m, rho).value) <= 1e-12 * scale);
    CHECK(lie_poisson(f, h0, m, rho).path == BracketPath::chain);
    CHECK(lie_poisson(f, h0, m, rho, BracketPath::oracle).path == BracketPath::oracle);
}

TEST_CASE("Lie-Poisson oracle and chain paths agree with the test-side structure constants") {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        const std::size_t d = 2 + seed % 3;
        const Metric m = sample_metric(seed, d);
        const DensityState rho = sample_state(10 + seed, d);
        const Observable f = sample_linear(20 + seed, d);
        const Observable h = Observable::casimir_poly({{{{3, 1}}, 0.2}, {{{1, 1}, {2, 1}}, 0.1}});
        const auto omega = oracle::omega_lowered(m.matrix());
        const Complex ref = oracle::omega_bracket(omega, m.raise(rho.matrix()), gradient(f, m, rho), gradient(h, m, rho));
        const double scale = std::max(1.0, std::abs(ref));
        CHECK(std::abs(lie_poisson(f, h, m, rho).value - ref) <= 1e-10 * scale);
        CHECK(std::abs(lie_poisson(f, h, m, rho, BracketPath::oracle).value - ref) <= 1e-10 * scale);
        CHECK(std::abs(lie_poisson(f, h, m, rho).value + lie_poisson(h, f, m, rho).value) <= 1e-12 * scale);
    }
}

TEST_CASE("Lie-Nambu examples") {
    const std::size_t d = 3;
    const Metric m = sample_metric(5, d);
    const DensityState rho = sample_state(6, d);
    const Observable f = sample_linear(7, d), h = sample_linear(8, d);
    const Observable s = Observable::casimir_poly({{{{2, 1}}, 0.5}, {{{3, 1}}, 0.3}});
    CHECK(std::abs(lie_nambu(f, f, s, m, rho).value) <= 1e-14 * bracket_scale(f, f, s, m, rho));
    CHECK(std::abs(lie_nambu(f, h, h, m, rho).value) <= 1e-14 * bracket_scale(f, h, h, m, rho));

    const Observable c2 = Observable::casimir(2), c3 = Observable::casimir(3);
    CHECK(std::abs(lie_nambu(c2, c3, f, m, rho).value) <= 1e-9 * bracket_scale(c2, c3, f, m, rho));
}

TEST_CASE("S = C2/2 reduces the triple bracket to the Lie-Poisson bracket") {
    for (std::size_t d : {2u, 4u}) {
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            const Metric m = sample_metric(seed, d);
            const DensityState rho = sample_state(30 + seed, d);
            const Observable f = sample_linear(40 + seed, d), h = sample_linear(50 + seed, d);
            const Complex nambu = lie_nambu(f, h, Observable::casimir(2, 0.5), m, rho).value;
            const Complex poisson = lie_poisson(f, h, m, rho).value;
            CHECK(std::abs(nambu - poisson) <= 1e-10 * std::max(1.0, std::abs(poisson)));
        }
    }
}

TEST_CASE("triple bracket: oracle vs chain vs test-side structure constants, nonlinear arguments") {
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
        const std::size_t d = 1 + seed % 4;
        const Metric m = sample_metric(seed, d);
        const DensityState rho = sample_state(60 + seed, d);
        const Observable f = sample_linear(70 + seed, d);
        const Observable h = Observable::casimir_poly({{{{3, 1}}, 0.2}}) + sample_linear(80 + seed, d);
        const Observable s = Observable::casimir_poly({{{{2, 2}}, 0.1}, {{{4, 1}}, -0.05}});
        const auto omega = oracle::omega_lowered(m.matrix());
        const Complex ref =
            oracle::omega_bracket(omega, gradient(f, m, rho), gradient(h, m, rho), gradient(s, m, rho));
        const double scale = bracket_scale(f, h, s, m, rho);
        CHECK(std::abs(lie_nambu(f, h, s, m, rho).value - ref) <= 1e-10 * scale);
        CHECK(std::abs(lie_nambu(f, h, s, m, rho, BracketPath::oracle).value - ref) <= 1e-10 * scale);
    }
}

TEST_CASE("total antisymmetry and trilinearity") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const std::size_t d = 2 + seed % 3;
        const Metric m = sample_metric(seed, d);
        const DensityState rho = sample_state(90 + seed, d);
        const std::array<Observable, 3> o{sample_linear(100 + seed, d), sample_linear(110 + seed, d),
                                          sample_linear(120 + seed, d)};
        const Complex base = lie_nambu(o[0], o[1], o[2], m, rho).value;
        const double scale = bracket_scale(o[0], o[1], o[2], m, rho);
        std::array<std::size_t, 3> p{0, 1, 2};
        do {
            const int inversions = (p[0] > p[1]) + (p[0] > p[2]) + (p[1] > p[2]);
            const double sign = inversions % 2 == 0 ? 1.0 : -1.0;
            CHECK(std::abs(lie_nambu(o[p[0]], o[p[1]], o[p[2]], m, rho).value - sign * base) <= 1e-10 * scale);
        } while (std::next_permutation(p.begin(), p.end()));

        const Observable g = sample_linear(130 + seed, d);
        const double a = 0.7, b = -1.3;
        const Observable mix = o[0].scaled(a) + g.scaled(b);
        const Complex lhs = lie_nambu(mix, o[1], o[2], m, rho).value;
        const Complex rhs = a * base + b * lie_nambu(g, o[1], o[2], m, rho).value;
        CHECK(std::abs(lhs - rhs) <= 1e-10 * bracket_scale(mix, o[1], o[2], m, rho));
        const Complex mid = lie_nambu(o[0], o[1] + g, o[2], m, rho).value;
        CHECK(std::abs(mid - base - lie_nambu(o[0], g, o[2], m, rho).value) <= 1e-10 * scale * 2.0);
    }
}

TEST_CASE("vector field") {
    SUBCASE("zero Hamiltonian") {
        const Metric m = sample_metric(1, 3);
        const DensityState rho = sample_state(2, 3);
        const Matrix field = vector_field(Observable::linear(Matrix::Zero(3, 3)), Observable::casimir(3), m, rho);
        CHECK(oracle::max_abs(field) == 0.0);
    }
    SUBCASE("one pass equals coordinate-by-coordinate assembly") {
        for (std::uint64_t seed = 1; seed <= 4; ++seed) {
            const std::size_t d = 2 + seed % 2;
            const Metric m = sample_metric(seed, d);
            const DensityState rho = sample_state(140 + seed, d);
            const Observable h = sample_linear(150 + seed, d);
            const Observable s = Observable::casimir_poly({{{{2, 1}}, 0.5}, {{{3, 1}}, 0.2}});
            const Matrix field = vector_field(h, s, m, rho);
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j) {
                    const Complex coord = lie_nambu(coordinate(d, i, j), h, s, m, rho).value;
                    CHECK(std::abs(field(Eigen::Index(i), Eigen::Index(j)) - coord) <= 1e-12);
                }
        }
    }
    SUBCASE("g = I, S = C2/2 gives the commutator form") {
        const std::size_t d = 4;
        const Metric m = identity_metric(d);
        const DensityState rho = sample_state(3, d);
        const Matrix h = random_hermitian_matrix(4, d);
        const Matrix field = vector_field(Observable::linear(h), Observable::casimir(2, 0.5), m, rho);
        const Matrix ht = h.transpose();
        const Matrix commutator = rho.matrix() * ht - ht * rho.matrix();
        CHECK(oracle::max_abs(field - commutator) <= 1e-13);
    }
}

TEST_CASE("dimension mismatch") {
    const Metric m = sample_metric(1, 3);
    const DensityState rho = sample_state(2, 2);
    const Observable f = sample_linear(3, 2);
    CHECK_THROWS_AS(lie_poisson(f, f, m, rho), DimensionError);
    CHECK_THROWS_AS(lie_nambu(f, f, f, m, rho), DimensionError);
    CHECK_THROWS_AS(vector_field(f, f, m, rho), DimensionError);
    CHECK_THROWS_AS(lie_nambu(f, f, f, sample_metric(1, 9), sample_state(2, 9), BracketPath::oracle),
                    DimensionError);
}
