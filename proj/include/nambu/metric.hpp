#pragma once

// Indefinite one-particle metric and the objects derived from it.
//
// Index housing used project-wide (d = dim):
//
//   g_{αβ'}  = G(α, β')          lower metric, the user's Hermitian matrix
//   g^{αβ'}  = Ginv(β', α)       upper metric, Ginv = G^{-1}
//
// With this placement g^{αβ'} g_{γβ'} = δ^α_γ and g^{βα'} g_{βγ'} = δ^{α'}_{γ'},
// so the pair metrics of the composite index a = (α, α') are mutually
// inverse, and C_n[ρ] = Tr((R Ginv)^n) is real for Hermitian R and G.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "nambu/tensor.hpp"

namespace nambu {

class Metric {
public:
    /// Diagonal metric; every entry must be nonzero.
    static Metric from_signature(std::span<const double> signature);
    /// Explicit matrix; Hermitian within 1e-10, condition number below 1e8.
    static Metric from_matrix(const Matrix& g);

    std::size_t dim() const noexcept { return static_cast<std::size_t>(g_.rows()); }
    const IndexSpace& space() const noexcept { return space_; }

    const Matrix& matrix() const noexcept { return g_; }
    const Matrix& inverse() const noexcept { return ginv_; }
    double condition_number() const noexcept { return cond_; }

    Complex lower(std::size_t alpha, std::size_t beta_p) const { return g_(alpha, beta_p); }
    Complex upper(std::size_t alpha, std::size_t beta_p) const { return ginv_(beta_p, alpha); }

    /// Raising a lowered composite vector (row-vector convention of the pair metric).
    Matrix raise(const Matrix& lowered) const { return (ginv_ * lowered * ginv_).transpose(); }
    Matrix lower_index(const Matrix& raised) const { return g_ * raised.transpose() * g_; }

    static constexpr double kHermitianTolerance = 1e-10;
    static constexpr double kMaxCondition = 1e8;

private:
    Metric(Matrix g, Matrix ginv, double cond);

    Matrix g_;
    Matrix ginv_;
    double cond_;
    IndexSpace space_;
};

/// Random Hermitian invertible metric S^† J S with J = diag(±1) and S close to
/// the identity; `negatives` is the number of -1 entries in J.
Metric random_metric(std::uint64_t seed, std::size_t d, std::size_t negatives);

struct PairMetric {
    Tensor up;    ///< g^{ab}, slots (α, α', β, β')
    Tensor down;  ///< g_{ab}
};

PairMetric pair_metric(const Metric& m);

/// ε_c^a: slots (α, α') upper, (γ, γ') lower.
Tensor composite_identity(const IndexSpace& space);

struct HigherMetric {
    Tensor up;    ///< g^{a_1...a_n}, slots (α_1, α'_1, ..., α_n, α'_n)
    Tensor down;  ///< g_{a_1...a_n}
};

inline constexpr std::size_t kDefaultMaxMetricOrder = 4;

HigherMetric higher_metric(const Metric& m, std::size_t order,
                           std::size_t max_order = kDefaultMaxMetricOrder);

struct StructureConstants {
    Tensor mixed;    ///< Ω^a_{bc}
    Tensor lowered;  ///< Ω_{abc}
    Tensor raised;   ///< Ω^{abc}
};

inline constexpr std::size_t kDefaultMaxStructureDim = 8;

/// Materialized rank-6 structure constants. Test oracle only: memory is d^6.
StructureConstants structure_constants(const Metric& m, std::size_t max_dim = kDefaultMaxStructureDim);

}  // namespace nambu
