#include "nambu/multiparticle.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "nambu/errors.hpp"

namespace nambu {

namespace {

Metric kronecker(const std::vector<const Metric*>& factors) {
    Matrix g = Matrix::Ones(1, 1);
    for (const Metric* m : factors) {
        const Matrix& f = m->matrix();
        Matrix next(g.rows() * f.rows(), g.cols() * f.cols());
        for (Eigen::Index i = 0; i < g.rows(); ++i)
            for (Eigen::Index j = 0; j < g.cols(); ++j)
                next.block(i * f.rows(), j * f.cols(), f.rows(), f.cols()) = g(i, j) * f;
        g = std::move(next);
    }
    return Metric::from_matrix(g);
}

Matrix kronecker(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// Per-particle digits of a grouped Greek index, particle 0 most significant.
std::vector<std::size_t> digits_of(std::size_t index, const std::vector<std::size_t>& dims) {
    std::vector<std::size_t> digits(dims.size());
    for (std::size_t p = dims.size(); p-- > 0;) {
        digits[p] = index % dims[p];
        index /= dims[p];
    }
    return digits;
}

std::size_t dim_product(const std::vector<std::size_t>& dims) {
    return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

void check_positions(const std::vector<std::size_t>& positions, std::size_t n) {
    if (positions.empty()) throw ValidationError("subsystem must keep at least one particle");
    std::vector<bool> seen(n, false);
    for (auto p : positions) {
        if (p >= n)
            throw ValidationError("particle position " + std::to_string(p) + " out of range for " + std::to_string(n) +
                                  " particles");
        if (seen[p]) throw ValidationError("particle position " + std::to_string(p) + " listed twice");
        seen[p] = true;
    }
}

std::vector<const Metric*> pointers(const std::vector<Metric>& ms) {
    std::vector<const Metric*> out;
    for (const auto& m : ms) out.push_back(&m);
    return out;
}

Metric checked_combined(const std::vector<Metric>& particles, std::size_t max_dim) {
    if (particles.empty()) throw ValidationError("at least one particle is required");
    std::size_t total = 1;
    for (const auto& m : particles) total *= m.dim();
    if (total > max_dim)
        throw CapacityError("N-particle dimension " + std::to_string(total) + " exceeds guard " +
                            std::to_string(max_dim));
    return kronecker(pointers(particles));
}

}  // namespace

MultiMetric::MultiMetric(std::vector<Metric> particles, std::size_t max_dim)
    : particles_(std::move(particles)), combined_(checked_combined(particles_, max_dim)) {
    for (const auto& m : particles_) dims_.push_back(m.dim());
}

MultiState::MultiState(std::vector<std::size_t> dims, DensityState state)
    : dims_(std::move(dims)), state_(std::move(state)) {
    if (dims_.empty()) throw ValidationError("multi-particle state needs at least one particle");
    if (dim_product(dims_) != state_.dim())
        throw DimensionError("state dimension " + std::to_string(state_.dim()) +
                             " does not match the product of particle dimensions");
    if (state_.hermiticity_residual() > DensityState::kHermitianTolerance)
        throw ValidationError("multi-particle state is not Hermitian");
}

MultiState MultiState::product(const std::vector<DensityState>& factors) {
    if (factors.empty()) throw ValidationError("product state needs at least one factor");
    Matrix r = Matrix::Ones(1, 1);
    std::vector<std::size_t> dims;
    for (const auto& f : factors) {
        r = kronecker(r, f.matrix());
        dims.push_back(f.dim());
    }
    return MultiState(std::move(dims), DensityState::hermitian(std::move(r), 1e-10));
}

MultiState MultiState::from_tensor(const Tensor& t) {
    if (t.rank() == 0 || t.rank() % 2 != 0) throw ShapeError("multi-particle tensor must have 2N slots");
    std::vector<std::size_t> dims;
    for (std::size_t k = 0; k < t.rank(); k += 2) {
        if (t.slot(k).space.dim != t.slot(k + 1).space.dim)
            throw ShapeError("particle slots (α, α') must have equal dimension");
        dims.push_back(t.slot(k).space.dim);
    }
    const std::size_t total = dim_product(dims);
    Matrix r(static_cast<Eigen::Index>(total), static_cast<Eigen::Index>(total));
    std::vector<std::size_t> idx(t.rank());
    for (std::size_t row = 0; row < total; ++row) {
        const auto rd = digits_of(row, dims);
        for (std::size_t col = 0; col < total; ++col) {
            const auto cd = digits_of(col, dims);
            for (std::size_t p = 0; p < dims.size(); ++p) {
                idx[2 * p] = rd[p];
                idx[2 * p + 1] = cd[p];
            }
            r(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = t.at(idx);
        }
    }
    return MultiState(std::move(dims), DensityState::hermitian(std::move(r)));
}

Tensor MultiState::tensor() const {
    std::vector<Slot> shape;
    for (auto d : dims_) {
        shape.push_back(lower(IndexSpace{"alpha", d}));
        shape.push_back(lower(IndexSpace{"alpha", d}, true));
    }
    Tensor t(shape);
    const std::size_t total = state_.dim();
    std::vector<std::size_t> idx(2 * dims_.size());
    for (std::size_t row = 0; row < total; ++row) {
        const auto rd = digits_of(row, dims_);
        for (std::size_t col = 0; col < total; ++col) {
            const auto cd = digits_of(col, dims_);
            for (std::size_t p = 0; p < dims_.size(); ++p) {
                idx[2 * p] = rd[p];
                idx[2 * p + 1] = cd[p];
            }
            t.at(idx) = state_.matrix()(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
        }
    }
    return t;
}

Subsystem::Subsystem(const MultiMetric& metrics, std::vector<std::size_t> keep)
    : keep_((check_positions(keep, metrics.particle_count()), std::move(keep))),
      metric_([&] {
          std::vector<const Metric*> kept;
          for (auto p : keep_) kept.push_back(&metrics.particle(p));
          return kronecker(kept);
      }()),
      full_dim_(metrics.total_dim()) {
    const auto& dims = metrics.dims();
    std::vector<bool> is_kept(dims.size(), false);
    for (auto p : keep_) is_kept[p] = true;

    kept_index_.resize(full_dim_);
    std::vector<std::vector<std::size_t>> digits(full_dim_);
    for (std::size_t i = 0; i < full_dim_; ++i) {
        digits[i] = digits_of(i, dims);
        std::size_t k = 0;
        for (auto p : keep_) k = k * dims[p] + digits[i][p];
        kept_index_[i] = k;
    }

    const auto n = static_cast<Eigen::Index>(full_dim_);
    weight_ = Matrix::Zero(n, n);
    for (std::size_t i = 0; i < full_dim_; ++i)
        for (std::size_t j = 0; j < full_dim_; ++j) {
            Complex w(1.0, 0.0);
            for (std::size_t p = 0; p < dims.size(); ++p)
                if (!is_kept[p]) w *= metrics.particle(p).upper(digits[i][p], digits[j][p]);
            weight_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = w;
        }
}

DensityState Subsystem::reduce(const DensityState& full) const {
    if (full.dim() != full_dim_)
        throw DimensionError("state dimension " + std::to_string(full.dim()) + " does not match subsystem source " +
                             std::to_string(full_dim_));
    const auto k = static_cast<Eigen::Index>(metric_.dim());
    Matrix r = Matrix::Zero(k, k);
    const Matrix& src = full.matrix();
    for (std::size_t i = 0; i < full_dim_; ++i)
        for (std::size_t j = 0; j < full_dim_; ++j) {
            const auto ii = static_cast<Eigen::Index>(i);
            const auto jj = static_cast<Eigen::Index>(j);
            r(static_cast<Eigen::Index>(kept_index_[i]), static_cast<Eigen::Index>(kept_index_[j])) +=
                src(ii, jj) * weight_(ii, jj);
        }
    return DensityState::unchecked(std::move(r));
}

Matrix Subsystem::lift(const Matrix& reduced_gradient) const {
    if (static_cast<std::size_t>(reduced_gradient.rows()) != metric_.dim())
        throw DimensionError("reduced gradient dimension does not match the subsystem");
    const auto n = static_cast<Eigen::Index>(full_dim_);
    Matrix g(n, n);
    for (std::size_t i = 0; i < full_dim_; ++i)
        for (std::size_t j = 0; j < full_dim_; ++j) {
            const auto ii = static_cast<Eigen::Index>(i);
            const auto jj = static_cast<Eigen::Index>(j);
            g(ii, jj) = reduced_gradient(static_cast<Eigen::Index>(kept_index_[i]),
                                         static_cast<Eigen::Index>(kept_index_[j])) *
                        weight_(ii, jj);
        }
    return g;
}

PairMetric tensor_pair_metric(const MultiMetric& metrics) {
    const std::size_t n = metrics.particle_count();
    std::vector<PairMetric> singles;
    for (const auto& m : metrics.particles()) singles.push_back(pair_metric(m));

    std::vector<Slot> up_shape, down_shape;
    for (int side = 0; side < 2; ++side)
        for (std::size_t p = 0; p < n; ++p) {
            const IndexSpace& sp = metrics.particle(p).space();
            up_shape.push_back(upper(sp));
            up_shape.push_back(upper(sp, true));
            down_shape.push_back(lower(sp));
            down_shape.push_back(lower(sp, true));
        }
    PairMetric out{Tensor(up_shape), Tensor(down_shape)};

    std::vector<std::size_t> idx(4 * n, 0), single(4);
    for (std::size_t flat = 0; flat < out.up.size(); ++flat) {
        Complex u(1.0, 0.0), l(1.0, 0.0);
        for (std::size_t p = 0; p < n; ++p) {
            single = {idx[2 * p], idx[2 * p + 1], idx[2 * n + 2 * p], idx[2 * n + 2 * p + 1]};
            u *= singles[p].up.at(single);
            l *= singles[p].down.at(single);
        }
        out.up[flat] = u;
        out.down[flat] = l;
        for (std::size_t k = idx.size(); k-- > 0;) {
            if (++idx[k] < out.up.slot(k).space.dim) break;
            idx[k] = 0;
        }
    }
    return out;
}

Tensor multi_composite_identity(const MultiMetric& metrics) {
    const std::size_t n = metrics.particle_count();
    std::vector<Slot> shape;
    for (std::size_t p = 0; p < n; ++p) {
        shape.push_back(upper(metrics.particle(p).space()));
        shape.push_back(upper(metrics.particle(p).space(), true));
    }
    for (std::size_t p = 0; p < n; ++p) {
        shape.push_back(lower(metrics.particle(p).space()));
        shape.push_back(lower(metrics.particle(p).space(), true));
    }
    Tensor eps(shape);
    std::vector<std::size_t> idx(4 * n, 0);
    for (std::size_t flat = 0; flat < eps.size(); ++flat) {
        bool diag = true;
        for (std::size_t k = 0; k < 2 * n; ++k) diag = diag && idx[k] == idx[2 * n + k];
        if (diag) eps[flat] = 1.0;
        for (std::size_t k = idx.size(); k-- > 0;) {
            if (++idx[k] < eps.slot(k).space.dim) break;
            idx[k] = 0;
        }
    }
    return eps;
}

MultiState reduce(const MultiState& rho, const std::vector<std::size_t>& keep, const MultiMetric& metrics) {
    if (rho.dims() != metrics.dims()) throw DimensionError("state particle dimensions do not match the metrics");
    const Subsystem sub(metrics, keep);
    std::vector<std::size_t> dims;
    for (auto p : keep) dims.push_back(metrics.dims()[p]);
    DensityState reduced = sub.reduce(rho.state());
    if (reduced.hermiticity_residual() > 1e-10) throw ValidationError("reduced state is not Hermitian");
    return MultiState(std::move(dims), DensityState::hermitian(reduced.matrix(), 1e-10));
}

Observable embed_observable(const Observable& f, const std::vector<std::size_t>& positions,
                            const MultiMetric& metrics) {
    auto sub = std::make_shared<const Subsystem>(metrics, positions);
    if (f.is_linear()) {
        if (static_cast<std::size_t>(f.linear_coeff().rows()) != sub->metric().dim())
            throw DimensionError("observable dimension does not match the kept particles");
        return Observable::linear(sub->lift(f.linear_coeff()));
    }
    return Observable::embedded(f, std::move(sub));
}

BracketResult lie_nambu_n(const Observable& f, const Observable& g, const Observable& s, const MultiMetric& metrics,
                          const MultiState& rho) {
    if (rho.dims() != metrics.dims()) throw DimensionError("state particle dimensions do not match the metrics");
    return lie_nambu(f, g, s, metrics.combined(), rho.state(), BracketPath::chain);
}

}  // namespace nambu
