#pragma once

// Bispinor conventions and a 1+1D (t, z) lattice form of the off-shell Dirac
// Hamiltonian.
//
// A Greek bispinor index α ∈ {0..3} lists the unprimed 2-spinor index first:
// α = A for A ∈ {0, 1}, α = 2 + A' for A' ∈ {0, 1}. A primed Greek index
// (α') lists the primed block first. Field components are flattened as
// site·4 + α with site = t·nz + z.
//
// The pure-state equation is ∂_s ψ = Aψ with A = Σ_μ C_μ ⊗ D_μ, D_μ the
// periodic central difference along μ and
//
//   C_t = [[0, -I], [I, 0]],   C_z = [[0, -σ3], [σ3, 0]]   (2×2 blocks).
//
// The Hamiltonian kernel is L = -i G A with G the sitewise bispinor metric;
// L is Hermitian, so H = ψ^† L ψ is real and i ∂_s ψ = -G L ψ.

#include <cstddef>
#include <vector>

#include "nambu/dynamics.hpp"
#include "nambu/metric.hpp"
#include "nambu/observables.hpp"

namespace nambu::dirac {

enum class Primedness { unprimed, primed };

struct SpinorIndex {
    Primedness primedness = Primedness::unprimed;
    int value = 0;  ///< 0 or 1

    friend bool operator==(const SpinorIndex&, const SpinorIndex&) = default;
};

int pack_index(SpinorIndex index);
SpinorIndex unpack_index(int alpha);

/// The ε and g block tensors at d = 4. Each matrix is laid out in its own
/// lexicographic listing: rows follow the first Greek index, columns the
/// second, and a primed Greek index lists its primed block first.
struct BispinorBlocks {
    Matrix epsilon_a_bp;  ///< ε_α^{β'}
    Matrix g_a_bp;        ///< g_α^{β'}
    Matrix g_ap_b;        ///< g_{α'}^β
    Matrix g_a_b;         ///< g_α^β
    Matrix g_ap_bp;       ///< g_{α'}^{β'}
};

BispinorBlocks bispinor_blocks();

/// Reorder a 4×4 block tensor from its own listing to the common (A, A')
/// listing on both axes.
Matrix to_common_ordering(const Matrix& m, bool row_primed, bool col_primed);

/// 2×2 block (row_block, col_block) of a 4×4 matrix.
Matrix block(const Matrix& m, int row_block, int col_block);

/// diag(-1, -1, +1, +1): g_α^β in the common listing.
Metric bispinor_metric();

struct LatticeSpec {
    int nt = 2;
    int nz = 2;
    double spacing = 1.0;

    void validate() const;
    std::size_t sites() const { return static_cast<std::size_t>(nt) * static_cast<std::size_t>(nz); }
    std::size_t dim() const { return 4 * sites(); }
    std::size_t site(int t, int z) const;
};

inline constexpr std::size_t kMaxDensityLatticeDim = 64;
inline constexpr std::size_t kMaxPureLatticeDim = 4096;

/// Sitewise bispinor metric, dim 4·nt·nz <= 64.
Metric lattice_metric(const LatticeSpec& lat);

/// Dense generator A (∂_s ψ = Aψ), dim <= 64.
Matrix generator_matrix(const LatticeSpec& lat);
/// Dense Hermitian kernel L = -i G A, dim <= 64.
Matrix hamiltonian_kernel(const LatticeSpec& lat);
/// Linear observable with H[ψψ^†] = ψ^† L ψ, i.e. coefficient L^T.
Observable dirac_hamiltonian(const LatticeSpec& lat);

/// Matrix-free Aψ.
Vector apply_generator(const LatticeSpec& lat, const Vector& psi);

struct BispinorField {
    LatticeSpec lattice;
    Vector values;  ///< length 4·nt·nz

    static BispinorField zero(const LatticeSpec& lat);
    /// u·exp(2πi (mt·t/nt + mz·z/nz)) at every site.
    static BispinorField plane_wave(const LatticeSpec& lat, int mt, int mz, const Vector& spinor);
    Vector conjugate() const { return values.conjugate(); }
};

/// ψ^† G ψ with the sitewise metric (equal to its inverse).
Complex indefinite_norm(const LatticeSpec& lat, const Vector& psi);
/// ψ^† L ψ, matrix-free.
Complex field_energy(const LatticeSpec& lat, const Vector& psi);

struct FieldSample {
    double s;
    Vector psi;
    Complex norm;
    Complex energy;
};

struct FieldTrajectory {
    std::vector<FieldSample> samples;
};

FieldTrajectory pure_state_evolve(const BispinorField& psi0, const IntegratorConfig& cfg);

}  // namespace nambu::dirac
