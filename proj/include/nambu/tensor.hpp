#pragma once

// Dense complex tensors over labeled index spaces.
//
// Entries are stored row-major over the slot list. A composite index
// a = (α, α') occupies two consecutive slots, so its flat position is
// α·d + α', the ordering used throughout the project.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace nambu {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

struct IndexSpace {
    std::string label;
    std::size_t dim = 1;

    friend bool operator==(const IndexSpace&, const IndexSpace&) = default;
};

enum class Variance : unsigned char { upper, lower };

struct Slot {
    IndexSpace space;
    Variance variance = Variance::lower;
    bool primed = false;

    friend bool operator==(const Slot&, const Slot&) = default;
};

inline Slot upper(IndexSpace s, bool primed = false) { return {std::move(s), Variance::upper, primed}; }
inline Slot lower(IndexSpace s, bool primed = false) { return {std::move(s), Variance::lower, primed}; }

class Tensor {
public:
    Tensor() = default;
    /// Zero tensor of the given shape.
    explicit Tensor(std::vector<Slot> shape);
    Tensor(std::vector<Slot> shape, std::vector<Complex> entries);

    std::size_t rank() const noexcept { return shape_.size(); }
    std::size_t size() const noexcept { return entries_.size(); }
    const std::vector<Slot>& shape() const noexcept { return shape_; }
    const Slot& slot(std::size_t i) const { return shape_.at(i); }
    std::vector<std::size_t> dims() const;

    std::span<const Complex> entries() const noexcept { return entries_; }
    std::span<Complex> entries() noexcept { return entries_; }

    Complex operator[](std::size_t flat) const { return entries_[flat]; }
    Complex& operator[](std::size_t flat) { return entries_[flat]; }

    Complex at(std::span<const std::size_t> index) const;
    Complex& at(std::span<const std::size_t> index);
    Complex at(std::initializer_list<std::size_t> index) const;
    Complex& at(std::initializer_list<std::size_t> index);

    std::size_t flat_index(std::span<const std::size_t> index) const;

    /// Mixed identity δ^i_j over one space (slot 0 upper, slot 1 lower).
    static Tensor identity(const IndexSpace& space);
    /// Rank-2 tensor from a matrix (rows -> slot 0, cols -> slot 1).
    static Tensor from_matrix(const Matrix& m, Slot row, Slot col);
    Matrix to_matrix() const;

    double max_abs() const;
    double max_abs_diff(const Tensor& other) const;

private:
    std::vector<Slot> shape_;
    std::vector<Complex> entries_;
};

using SlotPair = std::pair<std::size_t, std::size_t>;

/// Sums over each (slot-in-t1, slot-in-t2) pair. Result slots are the free
/// slots of t1 followed by those of t2. Summation order is fixed, so the
/// result is bit-reproducible.
Tensor contract(const Tensor& t1, const Tensor& t2, std::span<const SlotPair> pairs);
Tensor contract(const Tensor& t1, const Tensor& t2, std::initializer_list<SlotPair> pairs);

/// Outer product (contraction over no pairs).
Tensor outer(const Tensor& t1, const Tensor& t2);

/// Conjugate transpose of a two-slot tensor; slots swap and primedness flips.
Tensor adjoint(const Tensor& t);

/// Reproducible d×d Hermitian matrix with entries of modulus at most 1.
Tensor random_hermitian(std::uint64_t seed, std::size_t d);
Matrix random_hermitian_matrix(std::uint64_t seed, std::size_t d);

}  // namespace nambu
