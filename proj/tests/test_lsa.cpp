#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>

#include "lsalab/linalg.hpp"
#include "lsalab/lsa.hpp"
#include "test_util.hpp"

using namespace lsalab;
using namespace lsalab::testutil;

namespace {

// two-state chain with stationary law (2/3, 1/3)
Matrix two_state_kernel() { return Matrix{{0.9, 0.1}, {0.2, 0.8}}; }

LsaModel scalar_two_state_model() {
    auto abar = [](const ChainState& z) {
        Matrix m(1, 1);
        m(0, 0) = z.finite == 0 ? 2.0 : -1.0;
        return m;
    };
    auto bbar = [](const ChainState& z) { return Vector{z.finite == 0 ? 1.5 : 0.5}; };
    return build_model(finite_chain(two_state_kernel()), abar, bbar, AveragingSpec{});
}

LsaModel random_finite_model(int s, int d, RngStream& rng) {
    Matrix kernel = random_stochastic(s, rng);
    auto abars = std::make_shared<std::vector<Matrix>>();
    auto bbars = std::make_shared<std::vector<Vector>>();
    // per-state matrices centered on a positive-real mean so -A is Hurwitz
    Matrix base = random_positive_real(d, rng, 0.5);
    for (int z = 0; z < s; ++z) {
        Matrix m = base + random_matrix(d, rng, 0.8);
        abars->push_back(m);
        Vector b(d);
        for (int i = 0; i < d; ++i) b[i] = rng.uniform(-1, 1);
        bbars->push_back(b);
    }
    return build_model(
        finite_chain(kernel), [abars](const ChainState& z) { return (*abars)[z.finite]; },
        [bbars](const ChainState& z) { return (*bbars)[z.finite]; }, AveragingSpec{});
}

} // namespace

TEST_CASE("build_model: constant maps give exact averages") {
    Matrix a0{{2, 0.3}, {-0.1, 1.5}};
    Vector b0{1.0, -0.5};
    LsaModel model = build_model(
        finite_chain(two_state_kernel()), [a0](const ChainState&) { return a0; },
        [b0](const ChainState&) { return b0; }, AveragingSpec{});
    CHECK((model.a_avg - a0).max_abs() < 1e-14);
    Vector residual = a0.apply(model.theta_star) - b0;
    CHECK(norm2(residual) < 1e-12);
}

TEST_CASE("build_model: exact two-state average matches the stationary mean") {
    LsaModel model = scalar_two_state_model();
    CHECK(std::abs(model.a_avg(0, 0) - 1.0) < 1e-12); // 2*(2/3) - 1*(1/3)
    // A theta* = b holds to 1e-10 relative
    Vector res = model.a_avg.apply(model.theta_star) - model.b_avg;
    CHECK(norm2(res) <= 1e-10 * (1.0 + norm2(model.b_avg)));
}

TEST_CASE("build_model rejects unstable averages") {
    auto abar = [](const ChainState& z) {
        Matrix m(1, 1);
        m(0, 0) = z.finite == 0 ? -2.0 : 1.0; // mean = -1 under (2/3,1/3)
        return m;
    };
    auto bbar = [](const ChainState&) { return Vector{0.0}; };
    CHECK_THROWS_AS(build_model(finite_chain(two_state_kernel()), abar, bbar, AveragingSpec{}),
                    NotHurwitzError);
}

TEST_CASE("monte carlo averaging reproduces a Gaussian stationary moment") {
    MarkovModel ar = gaussian_ar_chain(Matrix{{0.5}}, Matrix{{1}});
    auto abar = [](const ChainState& z) {
        Matrix m(1, 1);
        m(0, 0) = 1.0 + 0.1 * z.real_vector[0] * z.real_vector[0];
        return m;
    };
    auto bbar = [](const ChainState& z) { return Vector{0.2 * z.real_vector[0]}; };
    AveragingSpec spec;
    spec.kind = AveragingSpec::Kind::MonteCarlo;
    spec.samples = 2000000;
    spec.burnin = 10000;
    spec.seed = 99;
    spec.init = ChainState::make_real(0.0);
    LsaModel model = build_model(ar, abar, bbar, spec);
    // E[1 + 0.1 X^2] under X ~ N(0, sigma^2/(1-rho^2)) = N(0, 4/3)
    double closed = 1.0 + 0.1 * (4.0 / 3.0);
    CHECK(std::abs(model.a_avg(0, 0) - closed) < 0.004);
    CHECK(model.averaging.ci_rel <= 1e-3);
}

TEST_CASE("run_lsa: frozen and deterministic-geometric recursions") {
    LsaModel model = scalar_two_state_model();
    StepSchedule zero = StepSchedule::constant(0.0);
    LsaTrajectory frozen =
        run_lsa(model, zero, {5.0}, ChainState::make_finite(0), 50, 7);
    for (const auto& th : frozen.theta) CHECK(th[0] == 5.0);

    // Abar == 1, bbar == 0: theta_n = (1-alpha)^n theta_0 exactly
    auto abar = [](const ChainState&) { return Matrix{{1.0}}; };
    auto bbar = [](const ChainState&) { return Vector{0.0}; };
    LsaModel unit = build_model(finite_chain(two_state_kernel()), abar, bbar, AveragingSpec{});
    StepSchedule fixed = StepSchedule::constant(0.1);
    LsaTrajectory traj = run_lsa(unit, fixed, {1.0}, ChainState::make_finite(0), 30, 7);
    double expect = 1.0;
    for (long long k = 0; k <= 30; ++k) {
        CHECK(std::abs(traj.theta[k][0] - expect) < 1e-14);
        expect *= 0.9;
    }
}

TEST_CASE("replay determinism: identical seeds give bit-identical runs") {
    RngStream rng(61, 0);
    LsaModel model = random_finite_model(3, 2, rng);
    StepSchedule sched = StepSchedule::polynomial(0.5, 10.0, 1.0);
    LsaTrajectory t1 = run_lsa(model, sched, {1.0, -1.0}, ChainState::make_finite(0), 200, 5, 3);
    LsaTrajectory t2 = run_lsa(model, sched, {1.0, -1.0}, ChainState::make_finite(0), 200, 5, 3);
    for (long long k = 0; k <= 200; ++k) {
        CHECK(t1.theta[k] == t2.theta[k]);
        CHECK(t1.path[k] == t2.path[k]);
    }
    LsaTrajectory other = run_lsa(model, sched, {1.0, -1.0}, ChainState::make_finite(0), 200, 5, 4);
    bool any_different = false;
    for (long long k = 1; k <= 200; ++k)
        if (!(other.path[k] == t1.path[k])) any_different = true;
    CHECK(any_different);
}

TEST_CASE("error trajectory matches the matrix-product closed form") {
    RngStream rng(62, 0);
    LsaModel model = random_finite_model(3, 2, rng);
    NoiseVector nv = noise_vector(model);
    StepSchedule sched = StepSchedule::polynomial(0.4, 8.0, 1.0);
    const long long n = 128;
    LsaTrajectory traj = run_lsa(model, sched, {1.0, 2.0}, ChainState::make_finite(1), n, 17);

    // rebuild theta~_n = sum_j alpha_j Gamma_{j+1:n} eps(Z_j) + Gamma_{1:n} theta~_0
    Vector theta_tilde0 = traj.theta[0] - model.theta_star;
    for (long long nn : {8LL, 64LL, n}) {
        std::vector<std::pair<double, Matrix>> all;
        for (long long i = 1; i <= nn; ++i)
            all.push_back({sched.alpha(i), model.abar(traj.path[i])});
        Vector rebuilt = gamma_product(all, 2).apply(theta_tilde0);
        for (long long j = 1; j <= nn; ++j) {
            std::vector<std::pair<double, Matrix>> suffix(all.begin() + j, all.end());
            Vector term = gamma_product(suffix, 2).apply(nv.epsilon(traj.path[j]));
            axpy(sched.alpha(j), term, rebuilt);
        }
        Vector got = traj.theta[nn] - model.theta_star;
        CHECK(norm2(got - rebuilt) <= 1e-8 * (1.0 + norm2(rebuilt)));
    }
}

TEST_CASE("decompose: zero-noise path makes J0 and H0 vanish") {
    Matrix a0{{1.2}};
    Vector b0{0.6};
    LsaModel model = build_model(
        finite_chain(two_state_kernel()), [a0](const ChainState&) { return a0; },
        [b0](const ChainState&) { return b0; }, AveragingSpec{});
    Decomposition dec =
        decompose(model, StepSchedule::constant(0.1), {3.0}, ChainState::make_finite(0), 64, 11);
    for (long long k = 0; k <= 64; ++k) {
        CHECK(std::abs(dec.j0[k][0]) == 0.0);
        CHECK(std::abs(dec.h0[k][0]) == 0.0);
    }
}

TEST_CASE("decomposition identities hold at every step") {
    RngStream rng(63, 0);
    for (int rep = 0; rep < 5; ++rep) {
        LsaModel model = random_finite_model(4, 3, rng);
        StepSchedule sched = StepSchedule::polynomial(0.4, 12.0, 1.0);
        Vector theta0{1.0, -0.5, 0.25};
        Decomposition dec =
            decompose(model, sched, theta0, ChainState::make_finite(0), 256, 100 + rep);
        for (long long k = 0; k <= 256; ++k) {
            Vector lhs = dec.theta_tilde[k];
            Vector rhs = dec.theta_tr[k] + dec.j0[k] + dec.h0[k];
            CHECK(norm2(lhs - rhs) <= 1e-8 * (1.0 + norm2(lhs)));
            Vector h0 = dec.h0[k];
            Vector sum1 = dec.j1[k] + dec.h1[k];
            CHECK(norm2(h0 - sum1) <= 1e-8 * (1.0 + norm2(h0)));
        }
    }
}

TEST_CASE("closed forms for J0 and H0 match the recursions") {
    RngStream rng(64, 0);
    LsaModel model = random_finite_model(3, 2, rng);
    NoiseVector nv = noise_vector(model);
    StepSchedule sched = StepSchedule::polynomial(0.3, 10.0, 1.0);
    const long long n = 128;
    Decomposition dec = decompose(model, sched, {0.7, -0.2}, ChainState::make_finite(0), n, 21);

    // G_{j+1:n} suffix products of the deterministic matrix
    std::vector<Matrix> suffix(n + 2, Matrix::identity(2));
    for (long long k = n; k >= 1; --k)
        suffix[k] = suffix[k + 1] * (Matrix::identity(2) - sched.alpha(k) * model.a_avg);

    Vector j0(2, 0.0);
    for (long long j = 1; j <= n; ++j) {
        Vector term = suffix[j + 1].apply(nv.epsilon(dec.path[j]));
        axpy(sched.alpha(j), term, j0);
    }
    CHECK(norm2(j0 - dec.j0[n]) <= 1e-8 * (1.0 + norm2(j0)));

    // H0_n = -sum_j alpha_j Gamma_{j+1:n} Atilde(Z_j) J0_{j-1}
    Vector h0(2, 0.0);
    for (long long j = 1; j <= n; ++j) {
        std::vector<std::pair<double, Matrix>> gamma_factors;
        for (long long i = j + 1; i <= n; ++i)
            gamma_factors.push_back({sched.alpha(i), model.abar(dec.path[i])});
        Matrix gamma = gamma_product(gamma_factors, 2);
        Matrix atilde = model.abar(dec.path[j]) - model.a_avg;
        Vector term = gamma.apply(atilde.apply(dec.j0[j - 1]));
        axpy(-sched.alpha(j), term, h0);
    }
    CHECK(norm2(h0 - dec.h0[n]) <= 1e-8 * (1.0 + norm2(h0)));
}

TEST_CASE("J1 recursion equals the S-product direct summation oracle") {
    RngStream rng(65, 0);
    LsaModel model = random_finite_model(3, 2, rng);
    NoiseVector nv = noise_vector(model);
    StepSchedule sched = StepSchedule::polynomial(0.3, 10.0, 1.0);
    const long long n = 96; // J1_{n+1} rebuilt at the endpoint
    Decomposition dec = decompose(model, sched, {0.4, 0.9}, ChainState::make_finite(1), n, 31);

    const int d = 2;
    std::vector<Matrix> g_suffix(n + 2, Matrix::identity(d)); // G_{k+1:n}
    for (long long k = n; k >= 1; --k)
        g_suffix[k] = g_suffix[k + 1] * (Matrix::identity(d) - sched.alpha(k) * model.a_avg);

    Vector j1(d, 0.0);
    for (long long j = 1; j <= n - 1; ++j) {
        // S_{j+1:n} eps(Z_j) = -sum_{k=j+1}^{n} alpha_k G_{k+1:n} Atilde(Z_k) G_{j+1:k-1} eps
        Vector prefix = nv.epsilon(dec.path[j]); // G_{j+1:k-1} eps, grown as k advances
        Vector acc(d, 0.0);
        for (long long k = j + 1; k <= n; ++k) {
            Matrix atilde = model.abar(dec.path[k]) - model.a_avg;
            Vector term = g_suffix[k + 1].apply(atilde.apply(prefix));
            axpy(-sched.alpha(k), term, acc);
            prefix = (Matrix::identity(d) - sched.alpha(k) * model.a_avg).apply(prefix);
        }
        axpy(sched.alpha(j), acc, j1);
    }
    CHECK(norm2(j1 - dec.j1[n]) <= 1e-8 * (1.0 + norm2(j1)));
}

TEST_CASE("noise vector: constant model, centering, and the moment bound") {
    Matrix a0{{1.5}};
    Vector b0{2.0};
    LsaModel constant_model = build_model(
        finite_chain(two_state_kernel()), [a0](const ChainState&) { return a0; },
        [b0](const ChainState&) { return b0; }, AveragingSpec{});
    NoiseVector nv0 = noise_vector(constant_model);
    CHECK(std::abs(nv0.epsilon(ChainState::make_finite(0))[0]) < 1e-14);

    RngStream rng(66, 0);
    for (int rep = 0; rep < 3; ++rep) {
        LsaModel model = random_finite_model(4, 2, rng);
        NoiseVector nv = noise_vector(model);
        StationaryDistribution pi = stationary_exact(model.chain);
        Vector mean(2, 0.0);
        for (int z = 0; z < 4; ++z)
            axpy(pi.weights[z], nv.epsilon(ChainState::make_finite(z)), mean);
        CHECK(norm2(mean) <= 1e-10);

        // finite-collapse moment bound: ||eps(z)|| <= Cbar_eps V^{1/K}(z) with
        // V == e, Cbar_A/Cbar_b assembled from the entry maxima
        double k_moment = 8.0;
        double c_a = 0.0, c_b = 0.0, norm_a = spectral_norm(model.a_avg);
        for (int z = 0; z < 4; ++z) {
            c_a = std::max(c_a, model.abar(ChainState::make_finite(z)).max_abs());
            for (double v : model.bbar(ChainState::make_finite(z)))
                c_b = std::max(c_b, std::abs(v));
        }
        double lambda = std::exp(-1.0);
        double piv = 1.0 + std::exp(1.0) / (1.0 - lambda);
        double d = 2.0;
        double cbar_a = norm_a + d * c_a * std::pow(piv, 1.0 / k_moment);
        double cbar_b = norm2(model.b_avg) + d * c_b * std::pow(piv, 1.0 / k_moment);
        double cbar_eps = cbar_a * norm2(model.theta_star) + cbar_b;
        for (int z = 0; z < 4; ++z) {
            double norm_eps = norm2(nv.epsilon(ChainState::make_finite(z)));
            CHECK(norm_eps <= cbar_eps * std::exp(1.0 / k_moment));
        }
    }
}

TEST_CASE("streaming decomposition agrees with the stored one") {
    RngStream rng(67, 0);
    LsaModel model = random_finite_model(3, 2, rng);
    StepSchedule sched = StepSchedule::constant(0.05);
    Decomposition dec =
        decompose(model, sched, {1.0, 1.0}, ChainState::make_finite(0), 50, 13, 2);
    long long step = 0;
    run_decomposition_streaming(model, sched, {1.0, 1.0}, ChainState::make_finite(0), 50, 13, 2,
                                [&](const DecompView& v) {
                                    ++step;
                                    CHECK(v.step == step);
                                    CHECK(v.theta_tilde == dec.theta_tilde[step]);
                                    CHECK(v.j1 == dec.j1[step]);
                                });
    CHECK(step == 50);
}
