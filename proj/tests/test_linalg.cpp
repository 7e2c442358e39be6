#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lsalab/linalg.hpp"
#include "test_util.hpp"

using namespace lsalab;
using namespace lsalab::testutil;

namespace {

// independent q-norm oracle: whiten with the Cholesky factor of Q and take
// the spectral norm of L^T M L^{-T}
double q_norm_oracle(const Matrix& m, const Matrix& q) {
    Matrix l = cholesky(q);
    const int d = q.rows();
    Matrix lt_m = l.transpose() * m;
    // X = lt_m L^{-T}: forward substitution on the transposed system
    Matrix rhs = lt_m.transpose();
    Matrix xt(d, d);
    for (int c = 0; c < d; ++c) {
        for (int i = 0; i < d; ++i) {
            double s = rhs(i, c);
            for (int k = 0; k < i; ++k) s -= l(i, k) * xt(k, c);
            xt(i, c) = s / l(i, i);
        }
    }
    return spectral_norm(xt.transpose());
}

} // namespace

TEST_CASE("solve_lyapunov scalar and diagonal cases") {
    LyapunovSolution s1 = solve_lyapunov(Matrix{{1}});
    CHECK(std::abs(s1.q(0, 0) - 0.5) < 1e-14);
    CHECK(std::abs(s1.a - 1.0) < 1e-14);
    CHECK(std::abs(s1.kappa_q - 1.0) < 1e-14);

    LyapunovSolution s2 = solve_lyapunov(Matrix{{1, 0}, {0, 2}});
    CHECK(std::abs(s2.q(0, 0) - 0.5) < 1e-14);
    CHECK(std::abs(s2.q(1, 1) - 0.25) < 1e-14);
    CHECK(std::abs(s2.kappa_q - 2.0) < 1e-14);
    CHECK(std::abs(s2.a - 1.0) < 1e-14);
}

TEST_CASE("solve_lyapunov rejects non-Hurwitz input") {
    CHECK_THROWS_AS(solve_lyapunov(Matrix{{-1}}), NotHurwitzError);
    CHECK_THROWS_AS(solve_lyapunov(Matrix{{0, 1}, {-1, 0}}), NotHurwitzError);
}

TEST_CASE("solve_lyapunov residual oracle on random matrices") {
    RngStream rng(21, 0);
    for (int rep = 0; rep < 25; ++rep) {
        int d = 1 + static_cast<int>(rng.uniform_index(8));
        Matrix a = random_positive_real(d, rng);
        LyapunovSolution sol = solve_lyapunov(a);
        Matrix res = a.transpose() * sol.q + sol.q * a - Matrix::identity(d);
        CHECK(res.frobenius_norm() <= 1e-10 * d);
        CHECK(sol.kappa_q >= 1.0);
        CHECK(sol.a > 0.0);
        CHECK((sol.q - sol.q.transpose()).max_abs() < 1e-12);
        CHECK(symmetric_eigenvalues(sol.q).front() > 0.0);
    }
}

TEST_CASE("q_norm special cases and oracle") {
    Matrix m{{3, 0}, {0, -5}};
    CHECK(std::abs(q_norm(m, Matrix::identity(2)) - 5.0) < 1e-12);
    CHECK(std::abs(q_norm(m, Matrix{{4, 0}, {0, 1}}) - 5.0) < 1e-12);
    CHECK_THROWS_AS(q_norm(m, Matrix{{1, 2}, {2, 1}}), QNotPdError);

    RngStream rng(22, 0);
    for (int rep = 0; rep < 20; ++rep) {
        int d = 1 + static_cast<int>(rng.uniform_index(6));
        Matrix a = random_matrix(d, rng);
        Matrix w = random_matrix(d, rng);
        Matrix q = w * w.transpose() + 0.3 * Matrix::identity(d);
        double got = q_norm(a, q);
        double want = q_norm_oracle(a, q);
        CHECK(rel_err(got, want) < 1e-10);
    }
}

TEST_CASE("check_contraction scalar example and identity case") {
    LyapunovSolution sol = solve_lyapunov(Matrix{{1}});
    ContractionCheck c = check_contraction(Matrix{{1}}, sol, 0.5);
    CHECK(std::abs(c.qnorm_sq - 0.25) < 1e-12);
    CHECK(std::abs(c.bound - 0.5) < 1e-12);
    CHECK(c.holds);

    ContractionCheck c0 = check_contraction(Matrix{{1}}, sol, 0.0);
    CHECK(std::abs(c0.qnorm_sq - 1.0) < 1e-12);
    CHECK(std::abs(c0.bound - 1.0) < 1e-12);
    CHECK(c0.holds);

    CHECK_THROWS_AS(check_contraction(Matrix{{1}}, sol, sol.alpha_cap * 1.5),
                    AlphaOutOfRangeError);
}

TEST_CASE("contraction holds on alpha grids for random Hurwitz matrices") {
    RngStream rng(23, 0);
    for (int rep = 0; rep < 30; ++rep) {
        int d = 1 + static_cast<int>(rng.uniform_index(8));
        Matrix a = random_positive_real(d, rng, 0.05);
        LyapunovSolution sol = solve_lyapunov(a);
        for (int g = 0; g <= 50; ++g) {
            double alpha = sol.alpha_cap * g / 50.0;
            ContractionCheck c = check_contraction(a, sol, alpha);
            CHECK(c.holds);
            CHECK(c.unweighted_norm <= c.unweighted_bound + 1e-10);
        }
    }
}

TEST_CASE("gamma_product conventions and fold oracle") {
    CHECK((gamma_product({}, 3) - Matrix::identity(3)).max_abs() == 0.0);

    RngStream rng(24, 0);
    Matrix m = random_matrix(2, rng);
    Matrix single = gamma_product({{0.3, m}}, 2);
    CHECK((single - (Matrix::identity(2) - 0.3 * m)).max_abs() < 1e-15);

    for (int rep = 0; rep < 10; ++rep) {
        int d = 1 + static_cast<int>(rng.uniform_index(4));
        std::vector<std::pair<double, Matrix>> factors;
        int k = 3 + static_cast<int>(rng.uniform_index(62));
        for (int i = 0; i < k; ++i)
            factors.push_back({rng.uniform(0, 0.2), random_matrix(d, rng)});
        Matrix got = gamma_product(factors, d);
        Matrix want = fold_product_oracle(factors, d);
        CHECK((got - want).frobenius_norm() <= 1e-12 * (1.0 + want.frobenius_norm()));
    }

    CHECK_THROWS_AS(gamma_product({{0.1, Matrix::identity(2)}}, 3), DimMismatchError);
}

TEST_CASE("product ordering puts the last factor leftmost") {
    Matrix m1{{0, 1}, {0, 0}};
    Matrix m2{{0, 0}, {1, 0}};
    Matrix got = gamma_product({{1.0, m1}, {1.0, m2}}, 2);
    // (I - m2)(I - m1) = [[1,-1],[-1,2]]
    CHECK(std::abs(got(0, 0) - 1.0) < 1e-15);
    CHECK(std::abs(got(0, 1) + 1.0) < 1e-15);
    CHECK(std::abs(got(1, 0) + 1.0) < 1e-15);
    CHECK(std::abs(got(1, 1) - 2.0) < 1e-15);
}

TEST_CASE("positivity check: identity, skew, and random instances") {
    CHECK(positivity_implies_hurwitz_check(Matrix::identity(3)));
    CHECK_FALSE(positivity_implies_hurwitz_check(Matrix{{0, 1}, {-1, 0}}));

    RngStream rng(25, 0);
    for (int rep = 0; rep < 100; ++rep) {
        int d = 1 + static_cast<int>(rng.uniform_index(6));
        Matrix a = random_positive_real(d, rng, 0.05);
        CHECK(positivity_implies_hurwitz_check(a));
        CHECK(spectral_abscissa(a * -1.0) < 0.0); // eigenvalue oracle
    }
}

TEST_CASE("deterministic product bound below the stability display") {
    // ||G|| <= sqrt(kappa) prod (1 - a alpha/2) for constant A
    RngStream rng(26, 0);
    for (int rep = 0; rep < 5; ++rep) {
        int d = 2 + static_cast<int>(rng.uniform_index(4));
        Matrix a = random_positive_real(d, rng, 0.2);
        LyapunovSolution sol = solve_lyapunov(a);
        double alpha = 0.9 * sol.alpha_cap;
        Matrix g = Matrix::identity(d);
        double bound = std::sqrt(sol.kappa_q);
        for (int n = 1; n <= 64; ++n) {
            g = (Matrix::identity(d) - alpha * a) * g;
            bound *= 1.0 - sol.a * alpha / 2.0;
            CHECK(spectral_norm(g) <= bound + 1e-12);
        }
    }
}
