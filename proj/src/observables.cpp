#include "nambu/observables.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nambu/errors.hpp"
#include "nambu/multiparticle.hpp"

namespace nambu {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_dim(const Matrix& coeff, const DensityState& rho) {
    if (coeff.rows() != rho.matrix().rows() || coeff.cols() != rho.matrix().cols())
        throw DimensionError("observable dimension " + std::to_string(coeff.rows()) + " does not match state dimension " +
                             std::to_string(rho.dim()));
}

void check_dim(const Metric& m, const DensityState& rho) {
    if (m.dim() != rho.dim())
        throw DimensionError("metric dimension " + std::to_string(m.dim()) + " does not match state dimension " +
                             std::to_string(rho.dim()));
}

Complex ipow(Complex base, int exp) {
    Complex r(1.0, 0.0);
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

}  // namespace

DensityState DensityState::hermitian(Matrix r, double tolerance) {
    if (r.rows() == 0 || r.rows() != r.cols()) throw ValidationError("density state must be a non-empty square matrix");
    if (!r.allFinite()) throw ValidationError("density state has non-finite entries");
    const double resid = (r - r.adjoint()).cwiseAbs().maxCoeff();
    if (resid > tolerance)
        throw ValidationError("density state is not Hermitian (residual " + std::to_string(resid) + ")");
    return DensityState(std::move(r));
}

DensityState DensityState::unchecked(Matrix r) { return DensityState(std::move(r)); }

DensityState DensityState::outer_product(const Vector& psi) { return DensityState(psi * psi.adjoint()); }

Tensor DensityState::tensor() const { return Tensor::from_matrix(r_, lower(space()), lower(space(), true)); }

double DensityState::hermiticity_residual() const { return (r_ - r_.adjoint()).cwiseAbs().maxCoeff(); }

Observable Observable::linear(Matrix coeff) {
    if (coeff.rows() == 0 || coeff.rows() != coeff.cols())
        throw ValidationError("linear observable needs a non-empty square coefficient matrix");
    return Observable(Linear{std::move(coeff)});
}

Observable Observable::casimir_poly(std::vector<CasimirTerm> terms) {
    for (const auto& t : terms)
        for (const auto& [order, power] : t.powers)
            if (order < 1 || power < 0) throw ValidationError("Casimir term needs order >= 1 and power >= 0");
    return Observable(CasimirPoly{std::move(terms)});
}

Observable Observable::casimir(int order, double coeff) {
    return casimir_poly({CasimirTerm{{{order, 1}}, coeff}});
}

Observable Observable::sum(std::vector<Observable> parts) { return Observable(Sum{std::move(parts)}); }

Observable Observable::embedded(Observable inner, std::shared_ptr<const Subsystem> subsystem) {
    if (!subsystem) throw ValidationError("embedded observable needs a subsystem");
    return Observable(Embedded{std::make_shared<const Observable>(std::move(inner)), std::move(subsystem)});
}

const Matrix& Observable::linear_coeff() const {
    if (const auto* l = std::get_if<Linear>(&kind_)) return l->coeff;
    throw ValidationError("observable is not linear");
}

int Observable::max_casimir_order() const {
    return std::visit(overloaded{[](const Linear&) { return 0; },
                                 [](const CasimirPoly& p) {
                                     int k = 0;
                                     for (const auto& t : p.terms)
                                         for (const auto& entry : t.powers) k = std::max(k, entry.first);
                                     return k;
                                 },
                                 [](const Sum& s) {
                                     int k = 0;
                                     for (const auto& p : s.parts) k = std::max(k, p.max_casimir_order());
                                     return k;
                                 },
                                 [](const Embedded& e) { return e.inner->max_casimir_order(); }},
                      kind_);
}

Observable Observable::scaled(double factor) const {
    return std::visit(overloaded{[&](const Linear& l) { return Observable::linear(factor * l.coeff); },
                                 [&](const CasimirPoly& p) {
                                     auto terms = p.terms;
                                     for (auto& t : terms) t.coeff *= factor;
                                     return Observable::casimir_poly(std::move(terms));
                                 },
                                 [&](const Sum& s) {
                                     std::vector<Observable> parts;
                                     for (const auto& p : s.parts) parts.push_back(p.scaled(factor));
                                     return Observable::sum(std::move(parts));
                                 },
                                 [&](const Embedded& e) {
                                     return Observable::embedded(e.inner->scaled(factor), e.subsystem);
                                 }},
                      kind_);
}

Matrix raised_state(const Metric& m, const DensityState& rho) {
    check_dim(m, rho);
    return rho.matrix() * m.inverse();
}

std::vector<Complex> casimir_values(const Metric& m, const DensityState& rho, int max_order) {
    std::vector<Complex> out;
    if (max_order < 1) return out;
    const Matrix x = raised_state(m, rho);
    Matrix power = x;
    out.push_back(power.trace());
    for (int n = 2; n <= max_order; ++n) {
        power = power * x;
        out.push_back(power.trace());
    }
    return out;
}

Complex casimir(const Metric& m, int order, const DensityState& rho) {
    if (order < 1) throw ValidationError("Casimir order must be >= 1");
    return casimir_values(m, rho, order).back();
}

Complex evaluate(const Observable& f, const Metric& m, const DensityState& rho) {
    return std::visit(
        overloaded{[&](const Observable::Linear& l) {
                       check_dim(l.coeff, rho);
                       return l.coeff.cwiseProduct(rho.matrix()).sum();
                   },
                   [&](const Observable::CasimirPoly& p) {
                       const auto c = casimir_values(m, rho, f.max_casimir_order());
                       Complex total(0.0, 0.0);
                       for (const auto& t : p.terms) {
                           Complex term(t.coeff, 0.0);
                           for (const auto& [order, power] : t.powers)
                               term *= ipow(c[static_cast<std::size_t>(order - 1)], power);
                           total += term;
                       }
                       return total;
                   },
                   [&](const Observable::Sum& s) {
                       Complex total(0.0, 0.0);
                       for (const auto& p : s.parts) total += evaluate(p, m, rho);
                       return total;
                   },
                   [&](const Observable::Embedded& e) {
                       const DensityState reduced = e.subsystem->reduce(rho);
                       return evaluate(*e.inner, e.subsystem->metric(), reduced);
                   }},
        f.kind());
}

Matrix gradient(const Observable& f, const Metric& m, const DensityState& rho) {
    return std::visit(
        overloaded{[&](const Observable::Linear& l) -> Matrix {
                       check_dim(l.coeff, rho);
                       return l.coeff;
                   },
                   [&](const Observable::CasimirPoly& p) -> Matrix {
                       const int kmax = f.max_casimir_order();
                       const auto d = static_cast<Eigen::Index>(rho.dim());
                       Matrix grad = Matrix::Zero(d, d);
                       if (kmax == 0) return grad;
                       const auto c = casimir_values(m, rho, kmax);
                       // ∂C_k/∂R = k (Ginv X^{k-1})^T
                       const Matrix x = raised_state(m, rho);
                       std::vector<Matrix> dc;
                       Matrix xpow = Matrix::Identity(d, d);
                       for (int k = 1; k <= kmax; ++k) {
                           dc.push_back(static_cast<double>(k) * (m.inverse() * xpow).transpose());
                           xpow = xpow * x;
                       }
                       for (const auto& t : p.terms) {
                           for (const auto& [order, power] : t.powers) {
                               if (power == 0) continue;
                               Complex w(t.coeff * power, 0.0);
                               for (const auto& [o2, p2] : t.powers)
                                   w *= ipow(c[static_cast<std::size_t>(o2 - 1)], o2 == order ? p2 - 1 : p2);
                               grad += w * dc[static_cast<std::size_t>(order - 1)];
                           }
                       }
                       return grad;
                   },
                   [&](const Observable::Sum& s) -> Matrix {
                       const auto d = static_cast<Eigen::Index>(rho.dim());
                       Matrix grad = Matrix::Zero(d, d);
                       for (const auto& p : s.parts) grad += gradient(p, m, rho);
                       return grad;
                   },
                   [&](const Observable::Embedded& e) -> Matrix {
                       const DensityState reduced = e.subsystem->reduce(rho);
                       return e.subsystem->lift(gradient(*e.inner, e.subsystem->metric(), reduced));
                   }},
        f.kind());
}

double fd_gradient_check(const Observable& f, const Metric& m, const DensityState& rho) {
    const Matrix grad = gradient(f, m, rho);
    const Matrix& r = rho.matrix();
    const auto d = r.rows();
    const double step = std::max(1e-6 * r.cwiseAbs().maxCoeff(), 1e-8);

    double worst = 0.0;
    auto probe = [&](const Matrix& dir) {
        const Complex analytic = grad.cwiseProduct(dir).sum();
        const Complex plus = evaluate(f, m, DensityState::unchecked(r + step * dir));
        const Complex minus = evaluate(f, m, DensityState::unchecked(r - step * dir));
        const Complex numeric = (plus - minus) / (2.0 * step);
        const double denom = std::max({1.0, std::abs(analytic), std::abs(numeric)});
        worst = std::max(worst, std::abs(analytic - numeric) / denom);
    };
    for (Eigen::Index i = 0; i < d; ++i) {
        Matrix e = Matrix::Zero(d, d);
        e(i, i) = 1.0;
        probe(e);
        for (Eigen::Index j = i + 1; j < d; ++j) {
            Matrix sym = Matrix::Zero(d, d);
            sym(i, j) = 1.0;
            sym(j, i) = 1.0;
            probe(sym);
            Matrix anti = Matrix::Zero(d, d);
            anti(i, j) = Complex(0.0, 1.0);
            anti(j, i) = Complex(0.0, -1.0);
            probe(anti);
        }
    }
    return worst;
}

}  // namespace nambu
