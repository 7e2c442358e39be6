#pragma once

#include <functional>

#include "lsalab/lsa.hpp"

namespace lsalab {

struct MomentPoint {
    long long n = 0;
    double sum_alpha = 0; // sum of alpha_l for l <= n
    double estimate = 0;  // E^{1/p}[ . ^p]
    double ci_low = 0;
    double ci_high = 0;
};

struct MomentSeries {
    double p = 1;
    std::vector<MomentPoint> points;
    long long replicas = 0;
    std::uint64_t seed = 0;
};

struct DecayFit {
    double slope = 0;
    double intercept = 0;
    double r_squared = 0;
    long long window_lo = 0, window_hi = 0;
    int points_used = 0;
    int points_skipped = 0; // non-finite estimates excluded from the fit
};

enum class FitAbscissa { SumAlpha, LogN };

struct EnvelopePoint {
    long long n = 0;
    double sum_alpha = 0;
    double bound = 0;
};

struct CounterexampleResult {
    std::vector<double> u;           // u_0 ... u_nmax, exact under truncation
    std::vector<double> lower_bound; // theta0 (1+alpha eps)^n P(Y > n+1)
    double truncation_mass = 0;
    double pi_one = 0; // stationary mass of state 1 (truncated chain)
};

struct LsaMomentSeries {
    MomentSeries theta_tilde, j0, h0, j1, h1;
};

/// Monte Carlo estimate of E_{z0}^{1/p} ||Gamma_{1:n}||^p on a grid of n,
/// with the running product renormalized through an accumulated log scale.
MomentSeries estimate_gamma_moment(const MarkovModel& chain,
                                   const std::function<Matrix(const ChainState&)>& abar,
                                   const StepSchedule& schedule, const ChainState& z0, double p,
                                   const std::vector<long long>& n_grid, long long replicas,
                                   std::uint64_t seed, int threads = 0);

/// The stability-theorem envelope C_st,p exp(-(a/4) sum alpha) V(z0)^{1/(2p)}.
/// With enforce_cap the schedule must start below the admissible step cap.
std::vector<EnvelopePoint> theory_envelope(double cst_p, double a, double alpha_inf,
                                           const StepSchedule& schedule, double v_z0, double p,
                                           const std::vector<long long>& n_grid,
                                           bool enforce_cap = true);

DecayFit fit_decay(const MomentSeries& series, FitAbscissa abscissa, long long window_lo,
                   long long window_hi);

/// Exact dynamic program for the forward-recurrence counterexample:
/// u_n = E_1[ prod_{k=0}^{n-1} (1 - alpha A_eps(Z_{k+1})) ] theta0 with
/// A_eps(1) = 1 and A_eps(z) = -eps elsewhere, over the truncated support.
CounterexampleResult counterexample_exact(const std::function<double(long long)>& tail,
                                          long long cap, double epsilon, double alpha,
                                          double theta0, long long n_max);

/// Per-component L_p moments of the error decomposition, all components
/// sharing one set of chain paths (common random numbers).
LsaMomentSeries estimate_lsa_moment(const LsaModel& model, const StepSchedule& schedule,
                                    const Vector& theta0, const ChainState& z0, double p,
                                    const std::vector<long long>& n_grid, long long replicas,
                                    std::uint64_t seed, int threads = 0);

} // namespace lsalab
