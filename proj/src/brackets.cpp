#include "nambu/brackets.hpp"

#include <algorithm>
#include <string>

#include "nambu/errors.hpp"

namespace nambu {

namespace {

void check_dims(const Metric& m, const DensityState& rho) {
    if (m.dim() != rho.dim())
        throw DimensionError("metric dimension " + std::to_string(m.dim()) + " does not match state dimension " +
                             std::to_string(rho.dim()));
}

void check_gradient(const Metric& m, const Matrix& g) {
    if (static_cast<std::size_t>(g.rows()) != m.dim() || static_cast<std::size_t>(g.cols()) != m.dim())
        throw DimensionError("gradient dimension " + std::to_string(g.rows()) + " does not match metric dimension " +
                             std::to_string(m.dim()));
}

Matrix chain_factor(const Metric& m, const Matrix& grad) { return m.matrix() * grad.transpose(); }

Tensor gradient_tensor(const Metric& m, const Matrix& grad) {
    return Tensor::from_matrix(grad, upper(m.space()), upper(m.space(), true));
}

Complex scalar(const Tensor& t) { return t[0]; }

}  // namespace

Complex nambu_from_gradients(const Metric& m, const Matrix& grad_f, const Matrix& grad_h, const Matrix& grad_s) {
    check_gradient(m, grad_f);
    check_gradient(m, grad_h);
    check_gradient(m, grad_s);
    const Matrix af = chain_factor(m, grad_f);
    const Matrix ah = chain_factor(m, grad_h);
    const Matrix as = chain_factor(m, grad_s);
    return ((as * ah - ah * as) * af).trace();
}

double bracket_scale(const Metric& m, const Matrix& grad_f, const Matrix& grad_h, const Matrix& grad_s) {
    const double p = chain_factor(m, grad_f).norm() * chain_factor(m, grad_h).norm() * chain_factor(m, grad_s).norm();
    return std::max(1.0, p);
}

double bracket_scale(const Observable& f, const Observable& h, const Observable& s, const Metric& m,
                     const DensityState& rho) {
    return bracket_scale(m, gradient(f, m, rho), gradient(h, m, rho), gradient(s, m, rho));
}

BracketResult lie_poisson(const Observable& f, const Observable& h, const Metric& m, const DensityState& rho,
                          BracketPath path) {
    check_dims(m, rho);
    const Matrix gf = gradient(f, m, rho);
    const Matrix gh = gradient(h, m, rho);
    check_gradient(m, gf);
    check_gradient(m, gh);
    if (path == BracketPath::chain) {
        // ρ_a Ω^a_{bc} = Ω_{dbc} ρ^d, and ρ^d enters the chain as the raised state.
        const Matrix x = raised_state(m, rho);
        const Matrix af = chain_factor(m, gf);
        const Matrix ah = chain_factor(m, gh);
        return {((ah * af - af * ah) * x).trace(), BracketPath::chain};
    }
    const StructureConstants sc = structure_constants(m);
    const Tensor t1 = contract(rho.tensor(), sc.mixed, {{0, 0}, {1, 1}});
    const Tensor t2 = contract(t1, gradient_tensor(m, gf), {{0, 0}, {1, 1}});
    const Tensor t3 = contract(t2, gradient_tensor(m, gh), {{0, 0}, {1, 1}});
    return {scalar(t3), BracketPath::oracle};
}

BracketResult lie_nambu(const Observable& f, const Observable& h, const Observable& s, const Metric& m,
                        const DensityState& rho, BracketPath path) {
    check_dims(m, rho);
    const Matrix gf = gradient(f, m, rho);
    const Matrix gh = gradient(h, m, rho);
    const Matrix gs = gradient(s, m, rho);
    if (path == BracketPath::chain) return {nambu_from_gradients(m, gf, gh, gs), BracketPath::chain};

    check_gradient(m, gf);
    check_gradient(m, gh);
    check_gradient(m, gs);
    const StructureConstants sc = structure_constants(m);
    const Tensor t1 = contract(sc.lowered, gradient_tensor(m, gf), {{0, 0}, {1, 1}});
    const Tensor t2 = contract(t1, gradient_tensor(m, gh), {{0, 0}, {1, 1}});
    const Tensor t3 = contract(t2, gradient_tensor(m, gs), {{0, 0}, {1, 1}});
    return {scalar(t3), BracketPath::oracle};
}

Matrix vector_field(const Observable& h, const Observable& s, const Metric& m, const DensityState& rho) {
    check_dims(m, rho);
    const Matrix gh = gradient(h, m, rho);
    const Matrix gs = gradient(s, m, rho);
    check_gradient(m, gh);
    check_gradient(m, gs);
    const Matrix ah = chain_factor(m, gh);
    const Matrix as = chain_factor(m, gs);
    return (as * ah - ah * as) * m.matrix();
}

}  // namespace nambu
