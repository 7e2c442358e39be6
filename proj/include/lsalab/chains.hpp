#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lsalab/matrix.hpp"
#include "lsalab/rng.hpp"

namespace lsalab {

// Counter slots reserved per chain step; trajectory loops seek the stream to
// step_index * kRngSlotsPerStep before each transition so draws are keyed by
// (seed, replica, step).
inline constexpr std::uint64_t kRngSlotsPerStep = 64;

/// State of a Markov chain: finite index, positive integer, real vector, or
/// a window of tau+1 states of a base chain.
struct ChainState {
    enum class Kind { Finite, Integer, RealVector, Window };

    Kind kind = Kind::Finite;
    int finite = 0;
    long long integer = 1;
    Vector real_vector;
    std::vector<ChainState> window;

    static ChainState make_finite(int i) {
        ChainState s;
        s.kind = Kind::Finite;
        s.finite = i;
        return s;
    }
    static ChainState make_integer(long long v) {
        ChainState s;
        s.kind = Kind::Integer;
        s.integer = v;
        return s;
    }
    static ChainState make_real(Vector v) {
        ChainState s;
        s.kind = Kind::RealVector;
        s.real_vector = std::move(v);
        return s;
    }
    static ChainState make_real(double x) { return make_real(Vector{x}); }
    static ChainState make_window(std::vector<ChainState> w) {
        ChainState s;
        s.kind = Kind::Window;
        s.window = std::move(w);
        return s;
    }

    bool operator==(const ChainState& o) const;
};

struct SmallSetData {
    int m = 1;          // minorization power
    double epsilon = 0; // minorization mass, in (0, 1]
};

struct ErgodicityData {
    double b_v = 0; // V-norm convergence constant
    double rho = 0; // geometric rate, in (0, 1)
};

/// Instantiation of the drift condition for a concrete chain: W = log V with
/// W >= 1, plus the scalar drift data and optional small-set / ergodicity
/// side information.
struct DriftCertificate {
    std::function<double(const ChainState&)> w;
    double c = 0;
    double b = 0;
    double delta = 1.0; // in (1/2, 1]
    double r0 = 0;
    std::function<std::optional<SmallSetData>(double)> small_set; // radius R -> (m_R, eps_R)
    std::optional<ErgodicityData> ergodicity;
    // inf of W over {W > R0}; +infinity encodes an empty superlevel set and
    // triggers the lambda = exp(-c) clamp. Defaults to max(R0, 1).
    std::optional<double> superlevel_inf_w;
};

/// One-step Gaussian innovation structure, present when the only randomness
/// in a transition is a scalar N(0, sigma^2) draw. Lets check_drift run
/// quadrature instead of Monte Carlo.
struct GaussInnovation {
    double sigma = 1.0;
    std::function<ChainState(const ChainState&, double)> apply;
};

struct Ar1Spec {
    double rho = 0;
    double sigma = 1.0;
};

struct MarkovModel {
    std::function<ChainState(const ChainState&, RngStream&)> stepper;
    std::optional<Matrix> exact_kernel; // finite chains only, row-stochastic
    std::string description;

    std::optional<GaussInnovation> gauss_innovation;
    std::optional<Ar1Spec> ar1;        // scalar AR(1) closed forms
    double truncation_mass = 0.0;      // forward recurrence support truncation
};

struct StationaryDistribution {
    enum class Kind { ExactFinite, TruncatedSeries, SampleBased };
    Kind kind = Kind::ExactFinite;
    Vector weights;          // indexed by finite state / integer state - 1
    double truncation_error = 0.0;
};

struct DriftCheckEntry {
    ChainState state;
    double w = 0;
    double pv = 0;       // P V(state), value or estimate
    double ci_low = 0;   // equal to pv for exact / quadrature
    double ci_high = 0;
    double rhs = 0;      // drift right-hand side at state
    bool violated = false;
};

struct DriftCheckReport {
    std::vector<DriftCheckEntry> entries;
    int violations = 0;
    std::string method;
};

enum class ExpectationMethod { Exact, Quadrature, MonteCarlo };

// --- chain constructors ---

MarkovModel finite_chain(const Matrix& p);

/// Forward recurrence time chain: countdown with redraws of Y at 1.
/// `tail(k)` = P(Y >= k); the draw is truncated (conditioned) on Y <= cap.
MarkovModel forward_recurrence_chain(const std::function<double(long long)>& tail, long long cap);

MarkovModel gaussian_ar_chain(const Matrix& rho, const Matrix& noise_cov);

/// Chain of sliding windows (x_0,...,x_tau) over a base chain.
MarkovModel window_chain(const MarkovModel& base, int tau);

// --- stationary distributions ---

StationaryDistribution stationary_forward_recurrence(const std::function<double(long long)>& tail,
                                                     long long cap);

StationaryDistribution stationary_exact(const MarkovModel& model);

// --- drift machinery ---

DriftCheckReport check_drift(const MarkovModel& model, const DriftCertificate& cert,
                             const std::vector<ChainState>& test_states,
                             ExpectationMethod method, long long mc_samples = 100000,
                             std::uint64_t seed = 1);

std::pair<double, Vector> minorization_constants(const MarkovModel& model,
                                                 const std::vector<int>& set_c, int m);

/// Fills cert.ergodicity with (B_V, rho) computed from the exact kernel:
/// rho = second-largest eigenvalue modulus (clamped up to 1e-12) and
/// B_V = max over states and n <= horizon of ||P^n(z,.) - pi||_V / (rho^n V(z)).
ErgodicityData ergodicity_constants(const MarkovModel& model, DriftCertificate& cert, int horizon);

// --- helpers used across modules and tests ---

/// Exact kernel of the truncated forward recurrence chain (small caps only).
Matrix forward_recurrence_exact_kernel(const std::function<double(long long)>& tail, long long cap);

/// Exact kernel of the window chain over a finite base with S^(tau+1) encoded
/// states; encoding is little-endian in the window entries.
Matrix window_exact_kernel(const Matrix& base_kernel, int tau);

/// Tail function of P(Y = k) proportional to k^-s, with high-accuracy zeta
/// tails (Euler-Maclaurin). tail(k) = P(Y >= k) under the untruncated law.
std::function<double(long long)> power_law_tail(double s);

/// Kernel loader for the CSV external interface: S rows of S comma-separated
/// probabilities.
Matrix load_kernel_csv(const std::string& path);

double hurwitz_zeta(double s, double a);

} // namespace lsalab
