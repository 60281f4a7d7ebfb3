#pragma once

// Differentiable functionals F[ρ] of a density state.
//
// Gradient convention: gradient(F)(α, α') = ∂F/∂R(α, α'), the raised
// composite index a = (α, α') housed as a d×d matrix. Observables are
// holomorphic polynomials in the entries of R, so the derivative is the plain
// partial derivative with R and its conjugate treated as independent.

#include <cstddef>
#include <map>
#include <memory>
#include <variant>
#include <vector>

#include "nambu/metric.hpp"
#include "nambu/tensor.hpp"

namespace nambu {

class Subsystem;

class DensityState {
public:
    static constexpr double kHermitianTolerance = 1e-12;

    /// Validated constructor: max |R - R^†| must not exceed `tolerance`.
    static DensityState hermitian(Matrix r, double tolerance = kHermitianTolerance);
    /// No validation; used for states produced by integration.
    static DensityState unchecked(Matrix r);
    /// ψψ^†.
    static DensityState outer_product(const Vector& psi);

    const Matrix& matrix() const noexcept { return r_; }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(r_.rows()); }
    IndexSpace space() const { return {"alpha", dim()}; }
    Tensor tensor() const;
    double hermiticity_residual() const;

private:
    explicit DensityState(Matrix r) : r_(std::move(r)) {}
    Matrix r_;
};

/// One monomial coeff · Π C_k^{p_k}; `powers` maps order k to exponent p_k.
struct CasimirTerm {
    std::map<int, int> powers;
    double coeff = 1.0;
};

class Observable {
public:
    struct Linear {
        Matrix coeff;  ///< h^a, F = Σ_a h^a ρ_a
    };
    struct CasimirPoly {
        std::vector<CasimirTerm> terms;
    };
    struct Sum {
        std::vector<Observable> parts;
    };
    /// inner[ρ_reduced] with ρ_reduced = subsystem.reduce(ρ).
    struct Embedded {
        std::shared_ptr<const Observable> inner;
        std::shared_ptr<const Subsystem> subsystem;
    };
    using Kind = std::variant<Linear, CasimirPoly, Sum, Embedded>;

    static Observable linear(Matrix coeff);
    static Observable casimir_poly(std::vector<CasimirTerm> terms);
    /// coeff · C_n.
    static Observable casimir(int order, double coeff = 1.0);
    static Observable sum(std::vector<Observable> parts);
    static Observable embedded(Observable inner, std::shared_ptr<const Subsystem> subsystem);

    const Kind& kind() const noexcept { return kind_; }
    bool is_linear() const noexcept { return std::holds_alternative<Linear>(kind_); }
    /// Coefficient of a Linear observable; throws otherwise.
    const Matrix& linear_coeff() const;

    /// Largest Casimir order referenced (0 when none).
    int max_casimir_order() const;

    Observable scaled(double factor) const;
    Observable operator+(const Observable& other) const { return sum({*this, other}); }

private:
    explicit Observable(Kind k) : kind_(std::move(k)) {}
    Kind kind_;
};

/// Raised state X = R·Ginv; its powers give the Casimirs and its eigenvalues
/// are the conserved spectrum.
Matrix raised_state(const Metric& m, const DensityState& rho);

Complex casimir(const Metric& m, int order, const DensityState& rho);
/// C_1 ... C_{max_order}.
std::vector<Complex> casimir_values(const Metric& m, const DensityState& rho, int max_order);

Complex evaluate(const Observable& f, const Metric& m, const DensityState& rho);
Matrix gradient(const Observable& f, const Metric& m, const DensityState& rho);

/// Max relative deviation between the analytic gradient and central finite
/// differences along the Hermitian basis directions E_ii, E_ij + E_ji and
/// i(E_ij - E_ji). Relative step 1e-6 with absolute floor 1e-8.
double fd_gradient_check(const Observable& f, const Metric& m, const DensityState& rho);

}  // namespace nambu
