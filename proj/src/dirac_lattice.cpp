#include "nambu/dirac_lattice.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "nambu/errors.hpp"

namespace nambu::dirac {

namespace {

Matrix identity2() { return Matrix::Identity(2, 2); }

Matrix sigma3() {
    Matrix s = Matrix::Zero(2, 2);
    s(0, 0) = 1.0;
    s(1, 1) = -1.0;
    return s;
}

// Assemble a 4×4 matrix from the four 2×2 blocks listed in lexicographic
// order (first-first, first-second, second-first, second-second).
Matrix from_blocks(const Matrix& b00, const Matrix& b01, const Matrix& b10, const Matrix& b11) {
    Matrix m(4, 4);
    m.block(0, 0, 2, 2) = b00;
    m.block(0, 2, 2, 2) = b01;
    m.block(2, 0, 2, 2) = b10;
    m.block(2, 2, 2, 2) = b11;
    return m;
}

// Spin blocks C_t, C_z of the generator.
const Matrix& c_block(int mu) {
    static const Matrix ct = from_blocks(Matrix::Zero(2, 2), -identity2(), identity2(), Matrix::Zero(2, 2));
    static const Matrix cz = from_blocks(Matrix::Zero(2, 2), -sigma3(), sigma3(), Matrix::Zero(2, 2));
    return mu == 0 ? ct : cz;
}

// Sign of g on bispinor component α in the common listing.
double metric_sign(std::size_t alpha) { return alpha < 2 ? -1.0 : 1.0; }

void check_density_dim(const LatticeSpec& lat) {
    lat.validate();
    if (lat.dim() > kMaxDensityLatticeDim)
        throw CapacityError("lattice dimension " + std::to_string(lat.dim()) + " exceeds the density-matrix guard " +
                            std::to_string(kMaxDensityLatticeDim));
}

Vector sitewise_metric(const Vector& psi) {
    Vector out(psi.size());
    for (Eigen::Index i = 0; i < psi.size(); ++i) out(i) = metric_sign(static_cast<std::size_t>(i % 4)) * psi(i);
    return out;
}

}  // namespace

int pack_index(SpinorIndex index) {
    if (index.value < 0 || index.value > 1) throw ValidationError("2-spinor index must be 0 or 1");
    return index.primedness == Primedness::unprimed ? index.value : 2 + index.value;
}

SpinorIndex unpack_index(int alpha) {
    if (alpha < 0 || alpha > 3) throw ValidationError("bispinor index must be in 0..3");
    if (alpha < 2) return {Primedness::unprimed, alpha};
    return {Primedness::primed, alpha - 2};
}

BispinorBlocks bispinor_blocks() {
    const Matrix eps = identity2();  // ε_A^B = δ_A^B
    const Matrix zero = Matrix::Zero(2, 2);
    BispinorBlocks b;
    // ε_α^{β'}: listing (A,B'), (A,B), (A',B'), (A',B)
    b.epsilon_a_bp = from_blocks(zero, eps, eps, zero);
    b.g_a_bp = from_blocks(zero, -eps, eps, zero);
    // g_{α'}^β: listing (A',B), (A',B'), (A,B), (A,B')
    b.g_ap_b = from_blocks(zero, eps, -eps, zero);
    // g_α^β: listing (A,B), (A,B'), (A',B), (A',B')
    b.g_a_b = from_blocks(-eps, zero, zero, eps);
    // g_{α'}^{β'}: listing (A',B'), (A',B), (A,B'), (A,B)
    b.g_ap_bp = from_blocks(eps, zero, zero, -eps);
    return b;
}

Matrix to_common_ordering(const Matrix& m, bool row_primed, bool col_primed) {
    if (m.rows() != 4 || m.cols() != 4) throw ShapeError("bispinor block tensors are 4x4");
    Matrix out(4, 4);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
            const int rr = row_primed ? (r + 2) % 4 : r;
            const int cc = col_primed ? (c + 2) % 4 : c;
            out(rr, cc) = m(r, c);
        }
    return out;
}

Matrix block(const Matrix& m, int row_block, int col_block) { return m.block(2 * row_block, 2 * col_block, 2, 2); }

Metric bispinor_metric() {
    const double sig[] = {-1.0, -1.0, 1.0, 1.0};
    return Metric::from_signature(sig);
}

void LatticeSpec::validate() const {
    if (nt < 2 || nz < 2) throw ValidationError("lattice extents nt, nz must be >= 2");
    if (!(spacing > 0.0) || !std::isfinite(spacing)) throw ValidationError("lattice spacing must be > 0");
}

std::size_t LatticeSpec::site(int t, int z) const {
    const int tt = ((t % nt) + nt) % nt;
    const int zz = ((z % nz) + nz) % nz;
    return static_cast<std::size_t>(tt) * static_cast<std::size_t>(nz) + static_cast<std::size_t>(zz);
}

Metric lattice_metric(const LatticeSpec& lat) {
    check_density_dim(lat);
    std::vector<double> sig(lat.dim());
    for (std::size_t i = 0; i < sig.size(); ++i) sig[i] = metric_sign(i % 4);
    return Metric::from_signature(sig);
}

Vector apply_generator(const LatticeSpec& lat, const Vector& psi) {
    lat.validate();
    if (static_cast<std::size_t>(psi.size()) != lat.dim())
        throw DimensionError("field length " + std::to_string(psi.size()) + " does not match lattice dimension " +
                             std::to_string(lat.dim()));
    Vector out = Vector::Zero(psi.size());
    const double inv2a = 1.0 / (2.0 * lat.spacing);
    for (int t = 0; t < lat.nt; ++t)
        for (int z = 0; z < lat.nz; ++z) {
            const auto here = static_cast<Eigen::Index>(4 * lat.site(t, z));
            for (int mu = 0; mu < 2; ++mu) {
                const auto fwd = static_cast<Eigen::Index>(4 * (mu == 0 ? lat.site(t + 1, z) : lat.site(t, z + 1)));
                const auto bwd = static_cast<Eigen::Index>(4 * (mu == 0 ? lat.site(t - 1, z) : lat.site(t, z - 1)));
                const Vector diff = (psi.segment(fwd, 4) - psi.segment(bwd, 4)) * inv2a;
                out.segment(here, 4) += c_block(mu) * diff;
            }
        }
    return out;
}

Matrix generator_matrix(const LatticeSpec& lat) {
    check_density_dim(lat);
    const auto n = static_cast<Eigen::Index>(lat.dim());
    Matrix a(n, n);
    for (Eigen::Index j = 0; j < n; ++j) a.col(j) = apply_generator(lat, Vector::Unit(n, j));
    return a;
}

Matrix hamiltonian_kernel(const LatticeSpec& lat) {
    const Matrix a = generator_matrix(lat);
    Matrix l(a.rows(), a.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        l.row(i) = Complex(0.0, -metric_sign(static_cast<std::size_t>(i % 4))) * a.row(i);
    return l;
}

Observable dirac_hamiltonian(const LatticeSpec& lat) { return Observable::linear(hamiltonian_kernel(lat).transpose()); }

BispinorField BispinorField::zero(const LatticeSpec& lat) {
    lat.validate();
    return {lat, Vector::Zero(static_cast<Eigen::Index>(lat.dim()))};
}

BispinorField BispinorField::plane_wave(const LatticeSpec& lat, int mt, int mz, const Vector& spinor) {
    lat.validate();
    if (spinor.size() != 4) throw DimensionError("plane-wave spinor must have 4 components");
    BispinorField f = zero(lat);
    for (int t = 0; t < lat.nt; ++t)
        for (int z = 0; z < lat.nz; ++z) {
            const double phase = 2.0 * std::numbers::pi *
                                 (static_cast<double>(mt * t) / lat.nt + static_cast<double>(mz * z) / lat.nz);
            f.values.segment(static_cast<Eigen::Index>(4 * lat.site(t, z)), 4) = std::polar(1.0, phase) * spinor;
        }
    return f;
}

Complex indefinite_norm(const LatticeSpec& lat, const Vector& psi) {
    if (static_cast<std::size_t>(psi.size()) != lat.dim())
        throw DimensionError("field length does not match lattice dimension");
    return psi.dot(sitewise_metric(psi));
}

Complex field_energy(const LatticeSpec& lat, const Vector& psi) {
    const Vector lpsi = Complex(0.0, -1.0) * sitewise_metric(apply_generator(lat, psi));
    return psi.dot(lpsi);
}

FieldTrajectory pure_state_evolve(const BispinorField& psi0, const IntegratorConfig& cfg) {
    cfg.validate();
    const LatticeSpec& lat = psi0.lattice;
    lat.validate();
    if (lat.dim() > kMaxPureLatticeDim)
        throw CapacityError("lattice dimension " + std::to_string(lat.dim()) + " exceeds the pure-state guard " +
                            std::to_string(kMaxPureLatticeDim));
    if (static_cast<std::size_t>(psi0.values.size()) != lat.dim())
        throw DimensionError("field length does not match lattice dimension");

    FieldTrajectory traj;
    Vector psi = psi0.values;
    traj.samples.push_back({0.0, psi, indefinite_norm(lat, psi), field_energy(lat, psi)});
    const double ds = cfg.step_size;
    for (std::size_t step = 1; step <= cfg.steps; ++step) {
        if (cfg.scheme == Scheme::midpoint) {
            const Vector k1 = apply_generator(lat, psi);
            psi = psi + ds * apply_generator(lat, psi + 0.5 * ds * k1);
        } else {
            const Vector k1 = apply_generator(lat, psi);
            const Vector k2 = apply_generator(lat, psi + 0.5 * ds * k1);
            const Vector k3 = apply_generator(lat, psi + 0.5 * ds * k2);
            const Vector k4 = apply_generator(lat, psi + ds * k3);
            psi = psi + (ds / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        if (!psi.allFinite() || psi.cwiseAbs().maxCoeff() > kDivergenceBound)
            throw DivergenceError(step, "field diverged at step " + std::to_string(step));
        if (step % cfg.report_every == 0)
            traj.samples.push_back(
                {static_cast<double>(step) * ds, psi, indefinite_norm(lat, psi), field_energy(lat, psi)});
    }
    return traj;
}

}  // namespace nambu::dirac
