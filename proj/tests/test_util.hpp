#pragma once

#include "lsalab/matrix.hpp"
#include "lsalab/rng.hpp"

namespace lsalab::testutil {

inline Matrix random_matrix(int d, RngStream& rng, double scale = 1.0) {
    Matrix m(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m(i, j) = scale * (2.0 * rng.uniform() - 1.0);
    return m;
}

/// Random A whose symmetric part is >= margin * I (so -A is Hurwitz).
inline Matrix random_positive_real(int d, RngStream& rng, double margin = 0.1) {
    Matrix m = random_matrix(d, rng);
    Matrix sym = 0.5 * (m + m.transpose());
    double shift = -symmetric_eigenvalues(sym).front();
    if (shift < 0.0) shift = 0.0;
    return m + (shift + margin + rng.uniform()) * Matrix::identity(d);
}

inline Matrix random_stochastic(int s, RngStream& rng, double floor_mass = 0.02) {
    Matrix p(s, s);
    for (int i = 0; i < s; ++i) {
        double total = 0.0;
        for (int j = 0; j < s; ++j) {
            p(i, j) = floor_mass + rng.uniform();
            total += p(i, j);
        }
        for (int j = 0; j < s; ++j) p(i, j) /= total;
    }
    return p;
}

/// Right-to-left fold of prod (I - alpha_i M_i); the last factor multiplies
/// from the left. Independent of linalg::gamma_product.
inline Matrix fold_product_oracle(const std::vector<std::pair<double, Matrix>>& factors,
                                  int dim) {
    // explicit right-to-left: result = (I - a_n M_n) ... (I - a_1 M_1)
    if (factors.empty()) return Matrix::identity(dim);
    Matrix acc = Matrix::identity(dim) - factors.front().first * factors.front().second;
    for (std::size_t i = 1; i < factors.size(); ++i) {
        Matrix fac = Matrix::identity(dim) - factors[i].first * factors[i].second;
        acc = fac * acc;
    }
    return acc;
}

inline double rel_err(double got, double want) {
    double scale = std::abs(want) > 1.0 ? std::abs(want) : 1.0;
    return std::abs(got - want) / scale;
}

} // namespace lsalab::testutil
