#include "nambu/metric.hpp"

#include <cmath>
#include <string>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "nambu/errors.hpp"
#include "nambu/random.hpp"

namespace nambu {

Metric::Metric(Matrix g, Matrix ginv, double cond)
    : g_(std::move(g)), ginv_(std::move(ginv)), cond_(cond), space_{"alpha", static_cast<std::size_t>(g_.rows())} {}

Metric Metric::from_signature(std::span<const double> signature) {
    if (signature.empty()) throw ValidationError("metric signature is empty");
    Matrix g = Matrix::Zero(static_cast<Eigen::Index>(signature.size()), static_cast<Eigen::Index>(signature.size()));
    for (std::size_t i = 0; i < signature.size(); ++i) {
        if (!std::isfinite(signature[i])) throw ValidationError("metric signature entry is not finite");
        g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = signature[i];
    }
    return from_matrix(g);
}

Metric Metric::from_matrix(const Matrix& g) {
    if (g.rows() == 0 || g.rows() != g.cols())
        throw ValidationError("metric must be a non-empty square matrix");
    if (!g.allFinite()) throw ValidationError("metric has non-finite entries");
    const double herm = (g - g.adjoint()).cwiseAbs().maxCoeff();
    if (herm > kHermitianTolerance)
        throw ValidationError("metric is not Hermitian (residual " + std::to_string(herm) + ")");
    Matrix gh = 0.5 * (g + g.adjoint());

    Eigen::JacobiSVD<Matrix> svd(gh);
    const auto& sv = svd.singularValues();
    const double smax = sv(0);
    const double smin = sv(sv.size() - 1);
    if (!(smin > 0.0)) throw SingularityError("metric is singular");
    const double cond = smax / smin;
    if (!(cond < kMaxCondition))
        throw SingularityError("metric is ill-conditioned (condition number " + std::to_string(cond) + ")");

    Matrix ginv = gh.partialPivLu().inverse();
    const double resid = (gh * ginv - Matrix::Identity(gh.rows(), gh.cols())).cwiseAbs().maxCoeff();
    if (resid > 1e-10)
        throw SingularityError("metric inverse residual " + std::to_string(resid) + " exceeds 1e-10");
    return Metric(std::move(gh), std::move(ginv), cond);
}

Metric random_metric(std::uint64_t seed, std::size_t d, std::size_t negatives) {
    Rng rng(seed);
    Matrix s = Matrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d)) + 0.4 * rng.matrix(d);
    Matrix j = Matrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t k = 0; k < negatives && k < d; ++k)
        j(static_cast<Eigen::Index>(d - 1 - k), static_cast<Eigen::Index>(d - 1 - k)) = -1.0;
    Matrix g = s.adjoint() * j * s;
    return Metric::from_matrix(0.5 * (g + g.adjoint()));
}

PairMetric pair_metric(const Metric& m) {
    const std::size_t d = m.dim();
    const IndexSpace& sp = m.space();
    PairMetric p{Tensor({upper(sp), upper(sp, true), upper(sp), upper(sp, true)}),
                 Tensor({lower(sp), lower(sp, true), lower(sp), lower(sp, true)})};
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t ap = 0; ap < d; ++ap)
            for (std::size_t b = 0; b < d; ++b)
                for (std::size_t bp = 0; bp < d; ++bp) {
                    p.up.at({a, ap, b, bp}) = m.upper(a, bp) * m.upper(b, ap);
                    p.down.at({a, ap, b, bp}) = m.lower(a, bp) * m.lower(b, ap);
                }
    return p;
}

Tensor composite_identity(const IndexSpace& sp) {
    const std::size_t d = sp.dim;
    Tensor eps({upper(sp), upper(sp, true), lower(sp), lower(sp, true)});
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t ap = 0; ap < d; ++ap) eps.at({a, ap, a, ap}) = 1.0;
    return eps;
}

HigherMetric higher_metric(const Metric& m, std::size_t order, std::size_t max_order) {
    if (order < 1) throw ValidationError("higher_metric order must be >= 1");
    if (order > max_order)
        throw CapacityError("higher_metric order " + std::to_string(order) + " exceeds guard " +
                            std::to_string(max_order));
    const std::size_t d = m.dim();
    const IndexSpace& sp = m.space();
    std::vector<Slot> up_shape, down_shape;
    for (std::size_t k = 0; k < order; ++k) {
        up_shape.push_back(upper(sp));
        up_shape.push_back(upper(sp, true));
        down_shape.push_back(lower(sp));
        down_shape.push_back(lower(sp, true));
    }
    HigherMetric h{Tensor(up_shape), Tensor(down_shape)};

    // Chain g^{α_1 α'_n} g^{α_2 α'_1} ... g^{α_n α'_{n-1}}: unprimed slot k
    // pairs with the primed slot of the cyclic predecessor.
    std::vector<std::size_t> idx(2 * order, 0);
    for (std::size_t flat = 0; flat < h.up.size(); ++flat) {
        Complex u(1.0, 0.0), l(1.0, 0.0);
        for (std::size_t k = 0; k < order; ++k) {
            const std::size_t prev = (k + order - 1) % order;
            u *= m.upper(idx[2 * k], idx[2 * prev + 1]);
            l *= m.lower(idx[2 * k], idx[2 * prev + 1]);
        }
        h.up[flat] = u;
        h.down[flat] = l;
        for (std::size_t k = idx.size(); k-- > 0;) {
            if (++idx[k] < d) break;
            idx[k] = 0;
        }
    }
    return h;
}

StructureConstants structure_constants(const Metric& m, std::size_t max_dim) {
    const std::size_t d = m.dim();
    if (d > max_dim)
        throw CapacityError("structure constants are materialized only for d <= " + std::to_string(max_dim) +
                            " (got " + std::to_string(d) + "); use the chain-product bracket path");
    const IndexSpace& sp = m.space();
    StructureConstants sc{
        Tensor({upper(sp), upper(sp, true), lower(sp), lower(sp, true), lower(sp), lower(sp, true)}),
        Tensor({lower(sp), lower(sp, true), lower(sp), lower(sp, true), lower(sp), lower(sp, true)}),
        Tensor({upper(sp), upper(sp, true), upper(sp), upper(sp, true), upper(sp), upper(sp, true)})};

    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t ap = 0; ap < d; ++ap)
            for (std::size_t b = 0; b < d; ++b)
                for (std::size_t bp = 0; bp < d; ++bp)
                    for (std::size_t c = 0; c < d; ++c)
                        for (std::size_t cp = 0; cp < d; ++cp) {
                            // Ω^a_{bc} = ε_{γ'}^{α'} ε_β^α g_{γβ'} − ε_{β'}^{α'} ε_γ^α g_{βγ'}
                            Complex mixed(0.0, 0.0);
                            if (cp == ap && b == a) mixed += m.lower(c, bp);
                            if (bp == ap && c == a) mixed -= m.lower(b, cp);
                            sc.mixed.at({a, ap, b, bp, c, cp}) = mixed;

                            sc.lowered.at({a, ap, b, bp, c, cp}) =
                                -m.lower(a, bp) * m.lower(b, cp) * m.lower(c, ap) +
                                m.lower(a, cp) * m.lower(b, ap) * m.lower(c, bp);
                            sc.raised.at({a, ap, b, bp, c, cp}) =
                                m.upper(a, bp) * m.upper(b, cp) * m.upper(c, ap) -
                                m.upper(a, cp) * m.upper(b, ap) * m.upper(c, bp);
                        }
    return sc;
}

}  // namespace nambu
