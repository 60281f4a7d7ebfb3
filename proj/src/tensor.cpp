#include "nambu/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nambu/errors.hpp"
#include "nambu/random.hpp"

namespace nambu {

namespace {

std::size_t product_of_dims(const std::vector<Slot>& shape) {
    std::size_t n = 1;
    for (const auto& s : shape) n *= s.space.dim;
    return n;
}

std::vector<std::size_t> strides_of(const std::vector<Slot>& shape) {
    std::vector<std::size_t> strides(shape.size(), 1);
    for (std::size_t i = shape.size(); i-- > 1;)
        strides[i - 1] = strides[i] * shape[i].space.dim;
    return strides;
}

// Flat offsets (into the tensor with `strides`) of every row-major
// multi-index over the slots listed in `which`.
std::vector<std::size_t> offsets_over(const std::vector<Slot>& shape,
                                      const std::vector<std::size_t>& strides,
                                      const std::vector<std::size_t>& which) {
    std::size_t count = 1;
    for (auto w : which) count *= shape[w].space.dim;
    std::vector<std::size_t> out(count, 0);
    std::vector<std::size_t> idx(which.size(), 0);
    for (std::size_t n = 0; n < count; ++n) {
        std::size_t off = 0;
        for (std::size_t k = 0; k < which.size(); ++k) off += idx[k] * strides[which[k]];
        out[n] = off;
        for (std::size_t k = which.size(); k-- > 0;) {
            if (++idx[k] < shape[which[k]].space.dim) break;
            idx[k] = 0;
        }
    }
    return out;
}

const char* variance_name(Variance v) { return v == Variance::upper ? "upper" : "lower"; }

}  // namespace

Tensor::Tensor(std::vector<Slot> shape)
    : shape_(std::move(shape)), entries_(product_of_dims(shape_), Complex(0.0, 0.0)) {
    for (const auto& s : shape_)
        if (s.space.dim == 0) throw ShapeError("index space '" + s.space.label + "' has dim 0");
}

Tensor::Tensor(std::vector<Slot> shape, std::vector<Complex> entries)
    : shape_(std::move(shape)), entries_(std::move(entries)) {
    for (const auto& s : shape_)
        if (s.space.dim == 0) throw ShapeError("index space '" + s.space.label + "' has dim 0");
    if (entries_.size() != product_of_dims(shape_))
        throw ShapeError("entry count " + std::to_string(entries_.size()) +
                         " does not match shape size " + std::to_string(product_of_dims(shape_)));
}

std::vector<std::size_t> Tensor::dims() const {
    std::vector<std::size_t> d;
    d.reserve(shape_.size());
    for (const auto& s : shape_) d.push_back(s.space.dim);
    return d;
}

std::size_t Tensor::flat_index(std::span<const std::size_t> index) const {
    if (index.size() != shape_.size())
        throw ShapeError("index arity " + std::to_string(index.size()) + " != rank " +
                         std::to_string(shape_.size()));
    std::size_t flat = 0;
    for (std::size_t i = 0; i < index.size(); ++i) {
        if (index[i] >= shape_[i].space.dim) throw ShapeError("index out of range in slot " + std::to_string(i));
        flat = flat * shape_[i].space.dim + index[i];
    }
    return flat;
}

Complex Tensor::at(std::span<const std::size_t> index) const { return entries_[flat_index(index)]; }
Complex& Tensor::at(std::span<const std::size_t> index) { return entries_[flat_index(index)]; }
Complex Tensor::at(std::initializer_list<std::size_t> index) const {
    return at(std::span<const std::size_t>(index.begin(), index.size()));
}
Complex& Tensor::at(std::initializer_list<std::size_t> index) {
    return at(std::span<const std::size_t>(index.begin(), index.size()));
}

Tensor Tensor::identity(const IndexSpace& space) {
    Tensor t({upper(space), lower(space)});
    for (std::size_t i = 0; i < space.dim; ++i) t.at({i, i}) = 1.0;
    return t;
}

Tensor Tensor::from_matrix(const Matrix& m, Slot row, Slot col) {
    if (static_cast<std::size_t>(m.rows()) != row.space.dim || static_cast<std::size_t>(m.cols()) != col.space.dim)
        throw ShapeError("matrix dimensions do not match the requested slots");
    Tensor t({std::move(row), std::move(col)});
    const auto cols = static_cast<std::size_t>(m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            t.entries_[static_cast<std::size_t>(i) * cols + static_cast<std::size_t>(j)] = m(i, j);
    return t;
}

Matrix Tensor::to_matrix() const {
    if (rank() != 2) throw ShapeError("to_matrix requires a two-slot tensor, got rank " + std::to_string(rank()));
    const auto r = shape_[0].space.dim;
    const auto c = shape_[1].space.dim;
    Matrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = entries_[i * c + j];
    return m;
}

double Tensor::max_abs() const {
    double m = 0.0;
    for (const auto& z : entries_) m = std::max(m, std::abs(z));
    return m;
}

double Tensor::max_abs_diff(const Tensor& other) const {
    if (dims() != other.dims()) throw ShapeError("max_abs_diff on tensors of different shape");
    double m = 0.0;
    for (std::size_t i = 0; i < entries_.size(); ++i) m = std::max(m, std::abs(entries_[i] - other.entries_[i]));
    return m;
}

Tensor contract(const Tensor& t1, const Tensor& t2, std::span<const SlotPair> pairs) {
    std::vector<bool> used1(t1.rank(), false), used2(t2.rank(), false);
    for (const auto& [i, j] : pairs) {
        std::ostringstream where;
        where << "pair (" << i << ", " << j << ")";
        if (i >= t1.rank() || j >= t2.rank()) throw ContractionError(where.str() + ": slot out of range");
        if (used1[i] || used2[j]) throw ContractionError(where.str() + ": slot used twice");
        const Slot& a = t1.slot(i);
        const Slot& b = t2.slot(j);
        if (a.space.dim != b.space.dim)
            throw ContractionError(where.str() + ": dimension mismatch " + std::to_string(a.space.dim) + " vs " +
                                   std::to_string(b.space.dim));
        if (a.space.label != b.space.label)
            throw ContractionError(where.str() + ": index space mismatch '" + a.space.label + "' vs '" +
                                   b.space.label + "'");
        if (a.variance == b.variance)
            throw ContractionError(where.str() + ": variance mismatch (both " + variance_name(a.variance) + ")");
        used1[i] = true;
        used2[j] = true;
    }

    std::vector<std::size_t> free1, free2, con1, con2;
    for (std::size_t i = 0; i < t1.rank(); ++i)
        if (!used1[i]) free1.push_back(i);
    for (std::size_t j = 0; j < t2.rank(); ++j)
        if (!used2[j]) free2.push_back(j);
    for (const auto& [i, j] : pairs) {
        con1.push_back(i);
        con2.push_back(j);
    }

    std::vector<Slot> shape;
    for (auto i : free1) shape.push_back(t1.slot(i));
    for (auto j : free2) shape.push_back(t2.slot(j));

    const auto s1 = strides_of(t1.shape());
    const auto s2 = strides_of(t2.shape());
    const auto o1f = offsets_over(t1.shape(), s1, free1);
    const auto o1c = offsets_over(t1.shape(), s1, con1);
    const auto o2f = offsets_over(t2.shape(), s2, free2);
    const auto o2c = offsets_over(t2.shape(), s2, con2);

    Tensor out(std::move(shape));
    auto e1 = t1.entries();
    auto e2 = t2.entries();
    auto eo = out.entries();
    const std::size_t n2 = o2f.size();
    for (std::size_t p = 0; p < o1f.size(); ++p) {
        for (std::size_t q = 0; q < n2; ++q) {
            Complex acc(0.0, 0.0);
            for (std::size_t k = 0; k < o1c.size(); ++k) acc += e1[o1f[p] + o1c[k]] * e2[o2c[k] + o2f[q]];
            eo[p * n2 + q] = acc;
        }
    }
    return out;
}

Tensor contract(const Tensor& t1, const Tensor& t2, std::initializer_list<SlotPair> pairs) {
    return contract(t1, t2, std::span<const SlotPair>(pairs.begin(), pairs.size()));
}

Tensor outer(const Tensor& t1, const Tensor& t2) { return contract(t1, t2, std::span<const SlotPair>{}); }

Tensor adjoint(const Tensor& t) {
    if (t.rank() != 2) throw ShapeError("adjoint requires exactly two slots, got " + std::to_string(t.rank()));
    if (t.slot(0).space != t.slot(1).space) throw ShapeError("adjoint requires both slots over the same index space");
    Slot a = t.slot(1);
    Slot b = t.slot(0);
    a.primed = !a.primed;
    b.primed = !b.primed;
    const std::size_t d = t.slot(0).space.dim;
    Tensor out({a, b});
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) out[i * d + j] = std::conj(t[j * d + i]);
    return out;
}

Matrix random_hermitian_matrix(std::uint64_t seed, std::size_t d) {
    if (d == 0) throw ShapeError("random_hermitian requires d >= 1");
    Rng rng(seed);
    return rng.hermitian(d);
}

Tensor random_hermitian(std::uint64_t seed, std::size_t d) {
    const IndexSpace space{"h", d};
    return Tensor::from_matrix(random_hermitian_matrix(seed, d), lower(space), lower(space, true));
}

}  // namespace nambu
