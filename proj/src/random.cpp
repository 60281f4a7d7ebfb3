#include "nambu/random.hpp"

#include <cmath>

namespace nambu {

Complex Rng::complex_in_disk() {
    const double re = symmetric();
    const double im = symmetric();
    return Complex(re, im) * M_SQRT1_2;
}

Matrix Rng::matrix(std::size_t d) {
    Matrix m(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            m(i, j) = complex_in_disk();
    return m;
}

Matrix Rng::hermitian(std::size_t d) {
    Matrix m(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        m(i, i) = symmetric();
        for (std::size_t j = i + 1; j < d; ++j) {
            const Complex z = complex_in_disk();
            m(i, j) = z;
            m(j, i) = std::conj(z);
        }
    }
    return m;
}

Vector Rng::vector(std::size_t d) {
    Vector v(d);
    for (std::size_t i = 0; i < d; ++i) v(i) = complex_in_disk();
    return v;
}

}  // namespace nambu
