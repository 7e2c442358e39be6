#include "lsalab/stability.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "lsalab/errors.hpp"

namespace lsalab {

namespace {

void parallel_replicas(long long replicas, int threads,
                       const std::function<void(long long)>& body) {
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads <= 1 || replicas < 2 * threads) {
        for (long long r = 0; r < replicas; ++r) body(r);
        return;
    }
    std::vector<std::thread> pool;
    long long chunk = (replicas + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        long long lo = t * chunk, hi = std::min(replicas, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body] {
            for (long long r = lo; r < hi; ++r) body(r);
        });
    }
    for (auto& th : pool) th.join();
}

// batch-means mean + 99% CI over per-replica samples, merged in replica
// order so the result does not depend on the worker count
MomentPoint reduce_point(const std::vector<double>& samples, double p, int batches) {
    const long long n = static_cast<long long>(samples.size());
    const int nb = std::min<long long>(batches, n);
    std::vector<double> bsum(nb, 0.0);
    std::vector<long long> bcount(nb, 0);
    for (long long r = 0; r < n; ++r) {
        bsum[r % nb] += samples[r];
        ++bcount[r % nb];
    }
    double mean = 0.0;
    for (int b = 0; b < nb; ++b) {
        bsum[b] /= bcount[b];
        mean += bsum[b] / nb;
    }
    double var = 0.0;
    for (int b = 0; b < nb; ++b) var += (bsum[b] - mean) * (bsum[b] - mean);
    var /= nb > 1 ? nb * (nb - 1.0) : 1.0;
    double se = std::sqrt(var);
    double half = 2.5758293035489 * se; // 99%
    MomentPoint pt;
    pt.estimate = std::pow(mean, 1.0 / p);
    // delta method through x -> x^{1/p}
    double deriv = mean > 0 ? pt.estimate / (p * mean) : 0.0;
    pt.ci_low = std::max(0.0, pt.estimate - half * deriv);
    pt.ci_high = pt.estimate + half * deriv;
    return pt;
}

double sum_alpha_to(const StepSchedule& s, long long n) {
    double acc = 0.0;
    for (long long k = 1; k <= n; ++k) acc += s.alpha(k);
    return acc;
}

} // namespace

MomentSeries estimate_gamma_moment(const MarkovModel& chain,
                                   const std::function<Matrix(const ChainState&)>& abar,
                                   const StepSchedule& schedule, const ChainState& z0, double p,
                                   const std::vector<long long>& n_grid, long long replicas,
                                   std::uint64_t seed, int threads) {
    if (replicas < 100) throw Error("estimate_gamma_moment: need at least 100 replicas");
    if (p < 1.0) throw Error("estimate_gamma_moment: p must be >= 1");
    std::vector<long long> grid = n_grid;
    std::sort(grid.begin(), grid.end());
    const long long n_max = grid.back();
    const std::size_t g = grid.size();

    std::vector<std::vector<double>> samples(g, std::vector<double>(replicas, 0.0));
    std::atomic<bool> overflowed{false};
    std::atomic<long long> overflow_step{-1};

    const int dim = abar(z0).rows();
    parallel_replicas(replicas, threads, [&](long long r) {
        RngStream rng(seed, static_cast<std::uint64_t>(r), 0x6A11u);
        ChainState z = z0;
        Matrix prod = Matrix::identity(dim);
        double log_scale = 0.0;
        std::size_t next_grid = 0;
        for (long long k = 1; k <= n_max && next_grid < g; ++k) {
            rng.seek(static_cast<std::uint64_t>(k) * kRngSlotsPerStep);
            z = chain.stepper(z, rng);
            double alpha = schedule.alpha(k);
            prod = (Matrix::identity(dim) - alpha * abar(z)) * prod;
            double scale = prod.max_abs();
            if (scale > 1e100 || (scale > 0 && scale < 1e-100)) {
                prod *= 1.0 / scale;
                log_scale += std::log(scale);
            }
            if (k == grid[next_grid]) {
                double log_norm = log_scale + std::log(spectral_norm_power(prod));
                double value_p = std::exp(p * log_norm);
                if (p * log_norm > 690.0) { // ||Gamma||^p beyond ~1e300
                    if (!overflowed.exchange(true)) overflow_step = k;
                    value_p = HUGE_VAL;
                }
                samples[next_grid][r] = value_p;
                ++next_grid;
            }
        }
    });
    if (overflow_step >= 0)
        throw OverflowError("estimate_gamma_moment: running product overflow at step " +
                            std::to_string(overflow_step.load()));

    MomentSeries series;
    series.p = p;
    series.replicas = replicas;
    series.seed = seed;
    for (std::size_t i = 0; i < g; ++i) {
        MomentPoint pt = reduce_point(samples[i], p, 50);
        pt.n = grid[i];
        pt.sum_alpha = sum_alpha_to(schedule, grid[i]);
        series.points.push_back(pt);
    }
    return series;
}

std::vector<EnvelopePoint> theory_envelope(double cst_p, double a, double alpha_inf,
                                           const StepSchedule& schedule, double v_z0, double p,
                                           const std::vector<long long>& n_grid,
                                           bool enforce_cap) {
    if (enforce_cap && schedule.alpha(1) > alpha_inf)
        throw StepAboveCapError("theory_envelope: alpha_1 exceeds the admissible cap");
    std::vector<EnvelopePoint> out;
    double v_pow = std::pow(v_z0, 1.0 / (2.0 * p));
    for (long long n : n_grid) {
        EnvelopePoint e;
        e.n = n;
        e.sum_alpha = sum_alpha_to(schedule, n);
        e.bound = cst_p * std::exp(-0.25 * a * e.sum_alpha) * v_pow;
        out.push_back(e);
    }
    return out;
}

DecayFit fit_decay(const MomentSeries& series, FitAbscissa abscissa, long long window_lo,
                   long long window_hi) {
    std::vector<double> xs, ys;
    int skipped = 0;
    for (const MomentPoint& pt : series.points) {
        if (pt.n < window_lo || pt.n > window_hi) continue;
        if (!std::isfinite(pt.estimate) || pt.estimate <= 0.0) {
            ++skipped;
            continue;
        }
        xs.push_back(abscissa == FitAbscissa::SumAlpha ? pt.sum_alpha
                                                       : std::log(static_cast<double>(pt.n)));
        ys.push_back(std::log(pt.estimate));
    }
    if (xs.size() < 4) throw DegenerateWindowError("fit_decay: fewer than 4 usable points");
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    double denom = n * sxx - sx * sx;
    if (std::abs(denom) < 1e-300) throw DegenerateWindowError("fit_decay: abscissa degenerate");
    DecayFit fit;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    double ss_res = 0, ss_tot = 0, ybar = sy / n;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double pred = fit.intercept + fit.slope * xs[i];
        ss_res += (ys[i] - pred) * (ys[i] - pred);
        ss_tot += (ys[i] - ybar) * (ys[i] - ybar);
    }
    fit.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    fit.window_lo = window_lo;
    fit.window_hi = window_hi;
    fit.points_used = static_cast<int>(xs.size());
    fit.points_skipped = skipped;
    return fit;
}

CounterexampleResult counterexample_exact(const std::function<double(long long)>& tail,
                                          long long cap, double epsilon, double alpha,
                                          double theta0, long long n_max) {
    if (alpha < 0.0 || alpha >= 1.0)
        throw Error("counterexample_exact: alpha must lie in [0,1)");
    StationaryDistribution pi = stationary_forward_recurrence(tail, cap);
    CounterexampleResult out;
    out.pi_one = pi.weights[0];
    out.truncation_mass = pi.truncation_error;
    if (epsilon < 0.0 || epsilon >= out.pi_one)
        throw EpsilonTooLargeError("counterexample_exact: need epsilon below pi(1)");

    const double kept = 1.0 - out.truncation_mass;
    // conditional pmf of the truncated redraw
    Vector pmf(static_cast<std::size_t>(cap));
    for (long long k = 1; k <= cap; ++k) pmf[k - 1] = (tail(k) - tail(k + 1)) / kept;

    const double up = 1.0 + alpha * epsilon;  // factor of A_eps = -eps states
    const double down = 1.0 - alpha;          // factor of state 1

    // v_n(z) = E[prod_{k=0}^{n-1} (1 - alpha A_eps(Z_{k+1})) | Z_0 = z]
    Vector v(static_cast<std::size_t>(cap), 1.0), next(static_cast<std::size_t>(cap));
    out.u.push_back(theta0);
    out.lower_bound.push_back(theta0 * (tail(2) - out.truncation_mass) / kept);
    double growth = 1.0;
    for (long long n = 1; n <= n_max; ++n) {
        // from z = 1 the next state is a fresh draw y with factor of A_eps(y)
        double from_one = 0.0;
        for (long long y = 1; y <= cap; ++y)
            from_one += pmf[y - 1] * (y == 1 ? down : up) * v[y - 1];
        next[0] = from_one;
        for (long long z = 2; z <= cap; ++z)
            next[z - 1] = (z - 1 == 1 ? down : up) * v[z - 2];
        v.swap(next);
        out.u.push_back(theta0 * v[0]);
        growth *= up;
        // P(Y > n+1) under the truncated law
        double t = n + 2 <= cap ? (tail(n + 2) - out.truncation_mass) / kept : 0.0;
        out.lower_bound.push_back(theta0 * growth * t);
    }

    // the restriction-to-one-event bound holds exactly for the truncated law
    for (std::size_t n = 0; n < out.u.size(); ++n) {
        if (out.u[n] < out.lower_bound[n] * (1.0 - 1e-12) - 1e-300)
            throw Error("counterexample_exact: DP fell below the analytic lower bound");
    }
    return out;
}

LsaMomentSeries estimate_lsa_moment(const LsaModel& model, const StepSchedule& schedule,
                                    const Vector& theta0, const ChainState& z0, double p,
                                    const std::vector<long long>& n_grid, long long replicas,
                                    std::uint64_t seed, int threads) {
    if (replicas < 100) throw Error("estimate_lsa_moment: need at least 100 replicas");
    std::vector<long long> grid = n_grid;
    std::sort(grid.begin(), grid.end());
    const long long n_max = grid.back();
    const std::size_t g = grid.size();
    constexpr int kComponents = 5; // theta~, J0, H0, J1, H1

    std::vector<std::vector<std::vector<double>>> samples(
        kComponents, std::vector<std::vector<double>>(g, std::vector<double>(replicas, 0.0)));

    parallel_replicas(replicas, threads, [&](long long r) {
        std::size_t next_grid = 0;
        run_decomposition_streaming(
            model, schedule, theta0, z0, n_max, seed, static_cast<std::uint64_t>(r),
            [&](const DecompView& view) {
                if (next_grid >= g || view.step != grid[next_grid]) return;
                const Vector* comps[kComponents] = {&view.theta_tilde, &view.j0, &view.h0,
                                                    &view.j1, &view.h1};
                for (int c = 0; c < kComponents; ++c)
                    samples[c][next_grid][r] = std::pow(norm2(*comps[c]), p);
                ++next_grid;
            });
    });

    auto build = [&](int c) {
        MomentSeries s;
        s.p = p;
        s.replicas = replicas;
        s.seed = seed;
        for (std::size_t i = 0; i < g; ++i) {
            MomentPoint pt = reduce_point(samples[c][i], p, 50);
            pt.n = grid[i];
            pt.sum_alpha = sum_alpha_to(schedule, grid[i]);
            s.points.push_back(pt);
        }
        return s;
    };
    LsaMomentSeries out;
    out.theta_tilde = build(0);
    out.j0 = build(1);
    out.h0 = build(2);
    out.j1 = build(3);
    out.h1 = build(4);
    return out;
}

} // namespace lsalab
