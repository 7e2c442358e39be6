#pragma once

#include "lsalab/constants.hpp"
#include "lsalab/lsa.hpp"

namespace lsalab {

/// Discounted Markov reward process: state kernel, reward map, discount.
struct Mrp {
    MarkovModel state_chain;
    std::function<double(const ChainState&)> reward;
    double gamma = 0.9;
};

struct FeatureMap {
    std::function<Vector(const ChainState&)> psi;
    int dim = 0;
};

struct TdConfig {
    double lambda_trace = 0.0; // trace decay, lambda_trace * gamma < 1
    int tau = 1;               // truncation depth of the eligibility trace
};

struct TdHurwitzReport {
    double lambda_min_sym = 0; // smallest eigenvalue of (A + A^T)/2
    double bound = 0;          // (1-gamma)/(1-lambda gamma) (1-(lambda gamma)^tau) l_min(Sigma)
    bool hurwitz = false;
};

/// tau-truncated eligibility vector sum_{s<tau} (lambda gamma)^s psi(x_{tau-1-s}).
Vector eligibility(const std::vector<ChainState>& window, const FeatureMap& features,
                   const TdConfig& cfg, double gamma);

/// Reduce TD with truncated traces to an LsaModel over the window chain.
/// Finite MRPs are averaged exactly through pi_0 and kernel powers.
LsaModel build_td_model(const Mrp& mrp, const FeatureMap& features, const TdConfig& cfg,
                        const AveragingSpec& averaging);

/// Quadratic-form lower bound on the TD matrix. Throws BoundViolatedError
/// when the certified bound fails (broken positive-definiteness premise or a
/// numerics bug).
TdHurwitzReport verify_hurwitz_td(const Matrix& a, const Matrix& sigma_psi, double gamma,
                                  const TdConfig& cfg);

/// Drift certificate for the window chain built from a base certificate of
/// the state kernel and the window-drift constants. `nu_mass_lower` is an
/// optional lower bound on the minorization measure's mass of the base level
/// sets, needed only if small-set data should propagate.
DriftCertificate td_drift_certificate(const DriftCertificate& base_cert, int tau,
                                      const TdConstants& tc, double nu_mass_lower = 0.0);

/// Exact averaged TD matrix and Sigma_psi for a finite MRP.
void td_exact_averages(const Mrp& mrp, const FeatureMap& features, const TdConfig& cfg,
                       Matrix& a_out, Vector& b_out, Matrix& sigma_psi_out);

} // namespace lsalab
