#pragma once

// Brute-force reference implementations used only by the tests. Nothing here
// calls into the engine beyond its value types, so agreement with the engine
// is an independent check.

#include <cmath>
#include <cstddef>
#include <vector>

#include "nambu/tensor.hpp"

namespace oracle {

using nambu::Complex;
using nambu::Matrix;
using nambu::Vector;

inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline Matrix identity(std::size_t d) {
    return Matrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
}

/// exp(A) by scaling and squaring of a truncated Taylor series.
inline Matrix taylor_exp(const Matrix& a) {
    const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
    int squarings = 0;
    double scaled = norm;
    while (scaled > 0.25) {
        scaled *= 0.5;
        ++squarings;
    }
    const Matrix b = a / std::pow(2.0, squarings);
    Matrix term = identity(static_cast<std::size_t>(a.rows()));
    Matrix sum = term;
    for (int k = 1; k <= 30; ++k) {
        term = term * b / static_cast<double>(k);
        sum += term;
    }
    for (int i = 0; i < squarings; ++i) sum = sum * sum;
    return sum;
}

/// Gauss-Jordan inverse with partial pivoting.
inline Matrix gauss_inverse(Matrix a) {
    const auto n = a.rows();
    Matrix inv = identity(static_cast<std::size_t>(n));
    for (Eigen::Index c = 0; c < n; ++c) {
        Eigen::Index piv = c;
        for (Eigen::Index r = c + 1; r < n; ++r)
            if (std::abs(a(r, c)) > std::abs(a(piv, c))) piv = r;
        a.row(c).swap(a.row(piv));
        inv.row(c).swap(inv.row(piv));
        const Complex p = a(c, c);
        a.row(c) /= p;
        inv.row(c) /= p;
        for (Eigen::Index r = 0; r < n; ++r) {
            if (r == c) continue;
            const Complex f = a(r, c);
            a.row(r) -= f * a.row(c);
            inv.row(r) -= f * inv.row(c);
        }
    }
    return inv;
}

/// Lowered structure constants Ω_{abc} of the composite algebra, looped
/// entry by entry from the lower metric l(α, β') = G(α, β'):
///
///   Ω_{abc} = l(α,γ') l(β,α') l(γ,β') − l(α,β') l(β,γ') l(γ,α')
///
/// Stored flat with a = α·d + α' as omega[(a·D + b)·D + c], D = d².
inline std::vector<Complex> omega_lowered(const Matrix& g) {
    const auto d = static_cast<std::size_t>(g.rows());
    const std::size_t dd = d * d;
    std::vector<Complex> out(dd * dd * dd);
    auto l = [&](std::size_t x, std::size_t y) { return g(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)); };
    for (std::size_t al = 0; al < d; ++al)
        for (std::size_t alp = 0; alp < d; ++alp)
            for (std::size_t be = 0; be < d; ++be)
                for (std::size_t bep = 0; bep < d; ++bep)
                    for (std::size_t ga = 0; ga < d; ++ga)
                        for (std::size_t gap = 0; gap < d; ++gap) {
                            const std::size_t a = al * d + alp, b = be * d + bep, c = ga * d + gap;
                            out[(a * dd + b) * dd + c] =
                                l(al, gap) * l(be, alp) * l(ga, bep) - l(al, bep) * l(be, gap) * l(ga, alp);
                        }
    return out;
}

/// Σ_{abc} Ω_{abc} f^a h^b s^c with raised gradients housed as d×d matrices.
inline Complex omega_bracket(const std::vector<Complex>& omega, const Matrix& f, const Matrix& h, const Matrix& s) {
    const auto d = static_cast<std::size_t>(f.rows());
    const std::size_t dd = d * d;
    auto at = [&](const Matrix& m, std::size_t a) {
        return m(static_cast<Eigen::Index>(a / d), static_cast<Eigen::Index>(a % d));
    };
    Complex sum = 0.0;
    for (std::size_t a = 0; a < dd; ++a)
        for (std::size_t b = 0; b < dd; ++b)
            for (std::size_t c = 0; c < dd; ++c) sum += omega[(a * dd + b) * dd + c] * at(f, a) * at(h, b) * at(s, c);
    return sum;
}

/// Kronecker product by explicit loops, first factor most significant.
inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            for (Eigen::Index k = 0; k < b.rows(); ++k)
                for (Eigen::Index l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    return out;
}

/// Tr((R Ginv)^n) by explicit index loops over the cyclic chain
/// g^{α1 α'n} g^{α2 α'1} ... ρ_{α1 α'1} ... with g^{αβ'} = Ginv(β', α).
inline Complex chain_casimir(const Matrix& r, const Matrix& ginv, int n) {
    const auto d = static_cast<std::size_t>(r.rows());
    std::vector<std::size_t> idx(static_cast<std::size_t>(2 * n), 0);
    Complex sum = 0.0;
    const std::size_t total = static_cast<std::size_t>(std::pow(static_cast<double>(d), 2 * n) + 0.5);
    for (std::size_t flat = 0; flat < total; ++flat) {
        std::size_t rem = flat;
        for (auto& v : idx) {
            v = rem % d;
            rem /= d;
        }
        Complex term = 1.0;
        for (int k = 0; k < n; ++k) {
            const std::size_t al = idx[static_cast<std::size_t>(2 * k)];
            const std::size_t alp = idx[static_cast<std::size_t>(2 * k + 1)];
            const std::size_t prev_p = idx[static_cast<std::size_t>(2 * ((k + n - 1) % n) + 1)];
            term *= ginv(static_cast<Eigen::Index>(prev_p), static_cast<Eigen::Index>(al)) *
                    r(static_cast<Eigen::Index>(al), static_cast<Eigen::Index>(alp));
        }
        sum += term;
    }
    return sum;
}

/// Hermitian matrix with entries from a simple LCG; independent of the engine RNG.
inline Matrix lcg_hermitian(unsigned seed, std::size_t d) {
    unsigned long long state = seed * 6364136223846793005ULL + 1442695040888963407ULL;
    auto next = [&] {
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        return static_cast<double>(state >> 11) * 0x1.0p-53 * 2.0 - 1.0;
    };
    Matrix m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        m(i, i) = next();
        for (Eigen::Index j = i + 1; j < m.cols(); ++j) {
            m(i, j) = Complex(next(), next()) * 0.5;
            m(j, i) = std::conj(m(i, j));
        }
    }
    return m;
}

}  // namespace oracle
