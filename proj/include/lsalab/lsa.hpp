#pragma once

#include <functional>

#include "lsalab/chains.hpp"
#include "lsalab/matrix.hpp"
#include "lsalab/schedules.hpp"

namespace lsalab {

struct AveragingSpec {
    enum class Kind { Exact, MonteCarlo };
    Kind kind = Kind::Exact;
    long long samples = 1000000;
    long long burnin = 10000;
    int batches = 50;
    std::uint64_t seed = 0;
    ChainState init; // Monte Carlo start state
};

struct AveragingMeta {
    AveragingSpec::Kind kind = AveragingSpec::Kind::Exact;
    double ci_rel = 0.0; // batch-means relative half-width (Monte Carlo only)
};

/// The data of one LSA instance: a driving chain, the per-state matrix and
/// vector maps, their stationary averages, and the fixed point.
struct LsaModel {
    MarkovModel chain;
    std::function<Matrix(const ChainState&)> abar;
    std::function<Vector(const ChainState&)> bbar;
    Matrix a_avg;
    Vector b_avg;
    Vector theta_star;
    int dim = 0;
    AveragingMeta averaging;
};

struct NoiseVector {
    std::function<Vector(const ChainState&)> epsilon;
};

struct LsaTrajectory {
    std::vector<Vector> theta;     // theta_0 ... theta_n
    std::vector<ChainState> path;  // Z_0 ... Z_n
};

/// Per-trajectory error decomposition: all sequences evaluated on one chain
/// path so the algebraic identities hold step by step.
struct Decomposition {
    std::vector<Vector> theta_tilde; // theta_n - theta*
    std::vector<Vector> theta_tr;    // transient term Gamma_{1:n} theta~_0
    std::vector<Vector> j0, h0, j1, h1;
    std::vector<ChainState> path;
};

/// View of the six decomposition vectors at one step, for streaming
/// consumers that do not want full trajectories in memory.
struct DecompView {
    long long step;
    const Vector& theta_tilde;
    const Vector& theta_tr;
    const Vector& j0;
    const Vector& h0;
    const Vector& j1;
    const Vector& h1;
};

LsaModel build_model(MarkovModel chain, std::function<Matrix(const ChainState&)> abar,
                     std::function<Vector(const ChainState&)> bbar,
                     const AveragingSpec& averaging);

LsaTrajectory run_lsa(const LsaModel& model, const StepSchedule& schedule, const Vector& theta0,
                      const ChainState& z0, long long n, std::uint64_t seed,
                      std::uint64_t replica = 0);

Decomposition decompose(const LsaModel& model, const StepSchedule& schedule,
                        const Vector& theta0, const ChainState& z0, long long n,
                        std::uint64_t seed, std::uint64_t replica = 0);

/// Runs the coupled recursions without storing trajectories; `hook` fires
/// after every step (step index starts at 1).
void run_decomposition_streaming(const LsaModel& model, const StepSchedule& schedule,
                                 const Vector& theta0, const ChainState& z0, long long n,
                                 std::uint64_t seed, std::uint64_t replica,
                                 const std::function<void(const DecompView&)>& hook);

NoiseVector noise_vector(const LsaModel& model);

} // namespace lsalab
