#pragma once

// Lie-Poisson and Lie-Nambu brackets.
//
// Chain path: with A_F = G · (∇F)^T for each raised gradient ∇F,
//
//   Ω_{abc} F^a H^b S^c = Tr(A_S A_H A_F) − Tr(A_H A_S A_F) = Tr([A_S, A_H] A_F)
//
// which is the two-term chain of g_{αβ'} factors with the rank-6 tensor
// never formed. The Lie-Poisson bracket is the same expression with the
// raised state X = R·Ginv in the first slot. The oracle path contracts the
// materialized structure constants and is limited to small d.

#include "nambu/metric.hpp"
#include "nambu/observables.hpp"
#include "nambu/tensor.hpp"

namespace nambu {

enum class BracketPath { oracle, chain };

struct BracketResult {
    Complex value;
    BracketPath path;
};

/// Ω_{abc} f^a h^b s^c from raised gradient matrices, chain path.
Complex nambu_from_gradients(const Metric& m, const Matrix& grad_f, const Matrix& grad_h, const Matrix& grad_s);

/// max(1, ‖A_f‖·‖A_h‖·‖A_s‖) in Frobenius norm; "= 0" assertions scale their tolerance by it.
double bracket_scale(const Metric& m, const Matrix& grad_f, const Matrix& grad_h, const Matrix& grad_s);
double bracket_scale(const Observable& f, const Observable& h, const Observable& s, const Metric& m,
                     const DensityState& rho);

BracketResult lie_poisson(const Observable& f, const Observable& h, const Metric& m, const DensityState& rho,
                          BracketPath path = BracketPath::chain);

BracketResult lie_nambu(const Observable& f, const Observable& h, const Observable& s, const Metric& m,
                        const DensityState& rho, BracketPath path = BracketPath::chain);

/// {ρ_d, H, S} for every composite index d, in one pass: [A_S, A_H] · G.
/// This is i ∂_s ρ.
Matrix vector_field(const Observable& h, const Observable& s, const Metric& m, const DensityState& rho);

}  // namespace nambu
