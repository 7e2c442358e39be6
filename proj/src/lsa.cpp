#include "lsalab/lsa.hpp"

#include <cmath>

#include "lsalab/errors.hpp"

namespace lsalab {

namespace {

void validate_hurwitz(const Matrix& a_avg) {
    if (spectral_abscissa(a_avg * -1.0) >= -1e-9)
        throw NotHurwitzError("build_model: -A is not Hurwitz");
}

} // namespace

LsaModel build_model(MarkovModel chain, std::function<Matrix(const ChainState&)> abar,
                     std::function<Vector(const ChainState&)> bbar,
                     const AveragingSpec& averaging) {
    LsaModel model;
    model.chain = std::move(chain);
    model.abar = std::move(abar);
    model.bbar = std::move(bbar);

    if (averaging.kind == AveragingSpec::Kind::Exact) {
        if (!model.chain.exact_kernel)
            throw MethodUnavailableError("build_model: exact averaging needs an exact kernel");
        StationaryDistribution pi = stationary_exact(model.chain);
        const int s = static_cast<int>(pi.weights.size());
        Matrix a_acc;
        Vector b_acc;
        for (int z = 0; z < s; ++z) {
            ChainState st = ChainState::make_finite(z);
            Matrix az = model.abar(st);
            Vector bz = model.bbar(st);
            if (z == 0) {
                a_acc = Matrix(az.rows(), az.cols());
                b_acc.assign(bz.size(), 0.0);
            }
            a_acc += pi.weights[z] * az;
            axpy(pi.weights[z], bz, b_acc);
        }
        model.a_avg = a_acc;
        model.b_avg = b_acc;
        model.averaging.kind = AveragingSpec::Kind::Exact;
    } else {
        // ergodic average with burn-in and batch-means confidence interval
        RngStream rng(averaging.seed, 0, 0xA7E2u);
        ChainState z = averaging.init;
        for (long long k = 0; k < averaging.burnin; ++k) {
            rng.seek(static_cast<std::uint64_t>(k) * kRngSlotsPerStep);
            z = model.chain.stepper(z, rng);
        }
        Matrix probe = model.abar(z);
        const int d = probe.rows();
        const int nb = averaging.batches;
        long long per_batch = averaging.samples / nb;
        std::vector<Matrix> batch_a(nb, Matrix(d, d));
        std::vector<Vector> batch_b(nb, Vector(model.bbar(z).size(), 0.0));
        long long step = averaging.burnin;
        for (int b = 0; b < nb; ++b) {
            for (long long k = 0; k < per_batch; ++k) {
                rng.seek(static_cast<std::uint64_t>(step++) * kRngSlotsPerStep);
                z = model.chain.stepper(z, rng);
                batch_a[b] += model.abar(z);
                Vector bz = model.bbar(z);
                axpy(1.0, bz, batch_b[b]);
            }
            batch_a[b] *= 1.0 / per_batch;
            for (double& v : batch_b[b]) v /= per_batch;
        }
        Matrix mean_a(d, d);
        Vector mean_b(batch_b[0].size(), 0.0);
        for (int b = 0; b < nb; ++b) {
            mean_a += batch_a[b];
            axpy(1.0, batch_b[b], mean_b);
        }
        mean_a *= 1.0 / nb;
        for (double& v : mean_b) v /= nb;

        double worst_ci = 0.0;
        double scale = std::max(mean_a.max_abs(), 1e-12);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                double var = 0.0;
                for (int b = 0; b < nb; ++b) {
                    double dlt = batch_a[b](i, j) - mean_a(i, j);
                    var += dlt * dlt;
                }
                var /= nb * (nb - 1.0);
                worst_ci = std::max(worst_ci, 2.5758293 * std::sqrt(var) / scale);
            }
        model.a_avg = mean_a;
        model.b_avg = mean_b;
        model.averaging.kind = AveragingSpec::Kind::MonteCarlo;
        model.averaging.ci_rel = worst_ci;
        if (worst_ci > 1e-3)
            throw AveragingNotConvergedError(
                "build_model: averaging CI wider than 1e-3 relative");
    }

    validate_hurwitz(model.a_avg);
    model.dim = model.a_avg.rows();
    try {
        model.theta_star = lu_solve(model.a_avg, model.b_avg);
    } catch (const SingularMatrixError&) {
        throw SingularAError("build_model: averaged matrix is singular");
    }
    return model;
}

LsaTrajectory run_lsa(const LsaModel& model, const StepSchedule& schedule, const Vector& theta0,
                      const ChainState& z0, long long n, std::uint64_t seed,
                      std::uint64_t replica) {
    LsaTrajectory out;
    out.theta.reserve(n + 1);
    out.path.reserve(n + 1);
    out.theta.push_back(theta0);
    out.path.push_back(z0);
    RngStream rng(seed, replica, 0x15Au);
    Vector theta = theta0;
    ChainState z = z0;
    for (long long k = 1; k <= n; ++k) {
        rng.seek(static_cast<std::uint64_t>(k) * kRngSlotsPerStep);
        z = model.chain.stepper(z, rng);
        double alpha = schedule.alpha(k);
        Matrix az = model.abar(z);
        Vector bz = model.bbar(z);
        Vector drift = az.apply(theta);
        for (std::size_t i = 0; i < theta.size(); ++i) theta[i] += alpha * (bz[i] - drift[i]);
        out.theta.push_back(theta);
        out.path.push_back(z);
    }
    return out;
}

void run_decomposition_streaming(const LsaModel& model, const StepSchedule& schedule,
                                 const Vector& theta0, const ChainState& z0, long long n,
                                 std::uint64_t seed, std::uint64_t replica,
                                 const std::function<void(const DecompView&)>& hook) {
    const std::size_t d = theta0.size();
    Vector theta_tilde = theta0 - model.theta_star;
    Vector theta_tr = theta_tilde;
    Vector j0(d, 0.0), h0(d, 0.0), j1(d, 0.0), h1(d, 0.0);
    RngStream rng(seed, replica, 0x15Au); // same stream family as run_lsa
    ChainState z = z0;
    for (long long k = 1; k <= n; ++k) {
        rng.seek(static_cast<std::uint64_t>(k) * kRngSlotsPerStep);
        z = model.chain.stepper(z, rng);
        double alpha = schedule.alpha(k);
        Matrix az = model.abar(z);
        Vector bz = model.bbar(z);

        // eps = bbar(z) - b - (Abar(z) - A) theta*
        Vector az_ts = az.apply(model.theta_star);
        Vector a_ts = model.a_avg.apply(model.theta_star);
        Vector eps(d);
        for (std::size_t i = 0; i < d; ++i)
            eps[i] = bz[i] - model.b_avg[i] - (az_ts[i] - a_ts[i]);

        Vector az_tt = az.apply(theta_tilde);
        Vector az_tr = az.apply(theta_tr);
        Vector a_j0 = model.a_avg.apply(j0);
        Vector az_j0 = az.apply(j0);
        Vector az_h0 = az.apply(h0);
        Vector a_j1 = model.a_avg.apply(j1);
        Vector az_j1 = az.apply(j1);
        Vector az_h1 = az.apply(h1);

        for (std::size_t i = 0; i < d; ++i) {
            double atilde_j0 = az_j0[i] - a_j0[i];
            double atilde_j1 = az_j1[i] - a_j1[i];
            theta_tilde[i] += alpha * (eps[i] - az_tt[i]);
            theta_tr[i] -= alpha * az_tr[i];
            j0[i] += alpha * (eps[i] - a_j0[i]);
            h0[i] -= alpha * (az_h0[i] + atilde_j0);
            j1[i] -= alpha * (a_j1[i] + atilde_j0);
            h1[i] -= alpha * (az_h1[i] + atilde_j1);
        }
        hook(DecompView{k, theta_tilde, theta_tr, j0, h0, j1, h1});
    }
}

Decomposition decompose(const LsaModel& model, const StepSchedule& schedule,
                        const Vector& theta0, const ChainState& z0, long long n,
                        std::uint64_t seed, std::uint64_t replica) {
    Decomposition out;
    const std::size_t d = theta0.size();
    Vector zero(d, 0.0);
    out.theta_tilde.push_back(theta0 - model.theta_star);
    out.theta_tr.push_back(theta0 - model.theta_star);
    out.j0.push_back(zero);
    out.h0.push_back(zero);
    out.j1.push_back(zero);
    out.h1.push_back(zero);
    out.path.push_back(z0);

    // replay the chain alongside to record the path
    RngStream rng(seed, replica, 0x15Au);
    ChainState z = z0;
    long long next = 1;
    run_decomposition_streaming(
        model, schedule, theta0, z0, n, seed, replica, [&](const DecompView& v) {
            rng.seek(static_cast<std::uint64_t>(next) * kRngSlotsPerStep);
            z = model.chain.stepper(z, rng);
            ++next;
            out.theta_tilde.push_back(v.theta_tilde);
            out.theta_tr.push_back(v.theta_tr);
            out.j0.push_back(v.j0);
            out.h0.push_back(v.h0);
            out.j1.push_back(v.j1);
            out.h1.push_back(v.h1);
            out.path.push_back(z);
        });
    return out;
}

NoiseVector noise_vector(const LsaModel& model) {
    NoiseVector nv;
    Matrix a_avg = model.a_avg;
    Vector b_avg = model.b_avg;
    Vector theta_star = model.theta_star;
    auto abar = model.abar;
    auto bbar = model.bbar;
    nv.epsilon = [a_avg, b_avg, theta_star, abar, bbar](const ChainState& z) {
        Vector az_ts = abar(z).apply(theta_star);
        Vector a_ts = a_avg.apply(theta_star);
        Vector bz = bbar(z);
        Vector out(bz.size());
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = bz[i] - b_avg[i] - (az_ts[i] - a_ts[i]);
        return out;
    };
    return nv;
}

} // namespace lsalab
