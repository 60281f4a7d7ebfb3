#pragma once

#include <cstdint>
#include <random>

#include "nambu/tensor.hpp"

namespace nambu {

/// Seeded generator used for every random input in the project.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. Doubles are formed from the top 53 bits directly instead of
/// going through std::uniform_real_distribution (which is
/// implementation-defined), so a seed reproduces the same values on every
/// platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    /// Uniform in [-1, 1).
    double symmetric() { return 2.0 * uniform() - 1.0; }
    Complex complex_in_disk();

    /// d×d matrix with entries in the unit disk, no symmetry.
    Matrix matrix(std::size_t d);
    Matrix hermitian(std::size_t d);
    Vector vector(std::size_t d);

private:
    std::mt19937_64 engine_;
};

}  // namespace nambu
