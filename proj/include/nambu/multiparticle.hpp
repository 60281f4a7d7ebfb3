#pragma once

// N-particle metrics, reduced density matrices and the N-particle bracket.
//
// An N-particle state ρ_{a_1...a_N} is held as a D×D matrix with
// D = d_1···d_N, rows indexed by (α_1, ..., α_N) and columns by
// (α'_1, ..., α'_N), particle 0 most significant. In this grouping
// g^N_{ab} = g_{a_1 b_1}···g_{a_N b_N} is the pair metric of the Kronecker
// metric G_1 ⊗ ... ⊗ G_N, so the N-particle structure constants are the
// one-particle ones for that metric.
//
// Reduction contracts each dropped particle j with its one-particle tensor
// g^{β_j β'_j}:
//
//   ρ^K_{b_1...b_K} = Σ ρ_{b_1...b_N} Π_{j dropped} g^{β_j β'_j}
//
// which is the form g^{ab} F_{a...} g_{a_{K+1}}...g_{a_N} ρ_b reduces to.

#include <cstddef>
#include <memory>
#include <vector>

#include "nambu/brackets.hpp"
#include "nambu/metric.hpp"
#include "nambu/observables.hpp"
#include "nambu/tensor.hpp"

namespace nambu {

/// Largest N-particle Greek dimension D = Π d_i accepted (N <= 3 at d = 2, or N = 2 at d = 4).
inline constexpr std::size_t kMaxMultiDim = 16;

class MultiMetric {
public:
    explicit MultiMetric(std::vector<Metric> particles, std::size_t max_dim = kMaxMultiDim);

    std::size_t particle_count() const noexcept { return particles_.size(); }
    const Metric& particle(std::size_t i) const { return particles_.at(i); }
    const std::vector<Metric>& particles() const noexcept { return particles_; }
    const std::vector<std::size_t>& dims() const noexcept { return dims_; }
    std::size_t total_dim() const noexcept { return combined_.dim(); }
    /// G_1 ⊗ ... ⊗ G_N.
    const Metric& combined() const noexcept { return combined_; }

private:
    std::vector<Metric> particles_;
    std::vector<std::size_t> dims_;
    Metric combined_;
};

class MultiState {
public:
    /// Validated (Hermitian within 1e-12) grouped matrix.
    MultiState(std::vector<std::size_t> dims, DensityState state);
    static MultiState product(const std::vector<DensityState>& factors);
    /// From a rank-2N tensor with slots (α_1, α'_1, ..., α_N, α'_N).
    static MultiState from_tensor(const Tensor& t);

    std::size_t particle_count() const noexcept { return dims_.size(); }
    const std::vector<std::size_t>& dims() const noexcept { return dims_; }
    const DensityState& state() const noexcept { return state_; }
    Tensor tensor() const;

private:
    std::vector<std::size_t> dims_;
    DensityState state_;
};

/// Linear map from N-particle states onto the kept particles, in `keep` order.
class Subsystem {
public:
    Subsystem(const MultiMetric& metrics, std::vector<std::size_t> keep);

    const std::vector<std::size_t>& keep() const noexcept { return keep_; }
    /// Kronecker metric of the kept particles, in `keep` order.
    const Metric& metric() const noexcept { return metric_; }
    std::size_t full_dim() const noexcept { return full_dim_; }

    DensityState reduce(const DensityState& full) const;
    /// Pull a reduced-space gradient back to the full space (adjoint of reduce).
    Matrix lift(const Matrix& reduced_gradient) const;

private:
    std::vector<std::size_t> keep_;
    Metric metric_;
    std::size_t full_dim_;
    std::vector<std::size_t> kept_index_;  // full Greek index -> kept Greek index
    Matrix weight_;                        // Π_{dropped} g^{β_j β'_j}, indexed by (row, col)
};

/// N-particle pair metric: slots (a_1, ..., a_N, b_1, ..., b_N), each a_i two slots.
PairMetric tensor_pair_metric(const MultiMetric& metrics);
Tensor multi_composite_identity(const MultiMetric& metrics);

MultiState reduce(const MultiState& rho, const std::vector<std::size_t>& keep, const MultiMetric& metrics);

/// Lift a K-particle observable onto the N-particle system at `positions`.
Observable embed_observable(const Observable& f, const std::vector<std::size_t>& positions,
                            const MultiMetric& metrics);

BracketResult lie_nambu_n(const Observable& f, const Observable& g, const Observable& s, const MultiMetric& metrics,
                          const MultiState& rho);

}  // namespace nambu
