#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lsalab/chains.hpp"

namespace lsalab {

/// Auditable bundle of evaluated theoretical constants: echoes its inputs,
/// carries warnings for values that are infinite by construction, and is a
/// pure function of the inputs.
struct ConstantsReport {
    std::map<std::string, double> inputs;
    std::map<std::string, double> values;
    std::vector<std::string> warnings;
    double dual_max_rel_diff = 0.0; // disagreement between the two evaluators
};

using Warnings = std::vector<std::string>;

struct ErgodicScalars {
    double lambda = 0;  // Foster-Lyapunov contraction factor
    double b_tilde = 0; // log b + sup_r (c r^delta - r)
    double b_prime = 0; // log(b/(1-lambda)) + sup_r (c r^delta - r)
};

struct PolyDriftConstants {
    double c_gamma = 0;
    double b_gamma = 0;
    double r_gamma = 0;
};

struct RosenthalConstants {
    double c_f = 0;
    double c_w = 0;
    double c_ros = 0;     // exp(log_c_ros); +inf when it overflows a double
    double log_c_ros = 0; // always finite, used by downstream fractional powers
};

struct RosenthalVConstants {
    double c_f = 0;
    double c_w = 0;
    double d_ros = 0;
    double log_d_ros = 0;
};

/// Scalars derived from the Lyapunov solution of the averaged matrix.
struct AData {
    double kappa_q = 1;
    double a = 0;
    double norm_a = 0;   // ||A||
    double norm_a_q = 0; // ||A||_Q
    double norm_q = 0;   // ||Q||
};

struct StabilityInputs {
    int d = 1;
    double epsilon = 0.5; // the epsilon of the growth assumption, in (0,1)
    double c_a = 0;       // entrywise growth constant of Abar
    double beta = 0;      // growth exponent, < min(2 delta - 1, delta/(1+epsilon))
    double p = 2;
    double m_cond = 0;    // conditioning horizon in the stability constant
};

struct StabilityConstants {
    double c0 = 0;
    double c1 = 0;
    double c2p = 0;
    double r_a = 0;
    double p_tilde = 0;
    double h = 0;
    double alpha_inf = 0;     // may underflow to zero; see log_alpha_inf
    double log_alpha_inf = 0; // natural log, always finite
    double cst_p = 0;
};

struct LsaInputs {
    AData a_data;
    int d = 1;
    double epsilon = 0.5;
    double c_a = 0;   // matrix growth constant
    double beta = 0;
    double c_b_k = 0; // noise growth constant of the K-moment assumption
    double k_moment = 8;
    double theta_star_norm = 0;
    double norm_b = -1; // ||b||; < 0 substitutes the bound ||A|| ||theta*||
    double c_alpha = 0;
    double p = 2;
    double m_cond = 0;
    double b_v = 0; // <= 0 means: read from the certificate
    double rho = 0;
};

struct LsaConstants {
    double alpha_inf_0 = 0, alpha_inf_1 = 0;
    double cbar_a = 0, cbar_b = 0, cbar_eps = 0;
    double const_eps = 0;
    double cros_p = 0;      // Rosenthal constant at the V^(1/K) growth scale
    double const_j0 = 0, const_j0_4p = 0, const_h0 = 0;
    double const_s = 0, const_b = 0;
    double c1 = 0, c2 = 0, c3 = 0, c4 = 0, c5 = 0;
    double const_j1f = 0, const_j1d = 0;
    double const_h1f = 0, const_h1d = 0;
    double c_f = 0, c_d = 0; // fixed-step / diminishing-step composite bounds
    double cst_2p = 0;
};

struct TdInputs {
    int tau = 1;
    double gamma_discount = 0.9;
    double lambda_trace = 0;
    double c_psi = 1;   // feature growth constant
    double c_r_k = 1;   // reward growth constant
    double beta = 0;    // feature growth exponent
    double k_moment = 8;
};

struct TdConstants {
    double beta0 = 0;
    double c0 = 0;
    double c_p = 0;
    double b_p = 0;
    double r_p = 0;
    double r1 = 0, r2 = 0;
    double cbar_a_td = 0;
    double cbar_b_k_td = 0;
};

// --- primary evaluators ---

ErgodicScalars ergodic_scalars(const DriftCertificate& cert, Warnings* warnings = nullptr);
PolyDriftConstants poly_drift_constants(const DriftCertificate& cert, double gamma,
                                        Warnings* warnings = nullptr);
RosenthalConstants rosenthal_constants(const DriftCertificate& cert, double p, double gamma,
                                       Warnings* warnings = nullptr);
RosenthalVConstants rosenthal_constants_V(const DriftCertificate& cert, double p, double tau,
                                          Warnings* warnings = nullptr);
StabilityConstants stability_constants(const AData& a_data, const DriftCertificate& cert,
                                       const StabilityInputs& in, Warnings* warnings = nullptr);
LsaConstants lsa_constants(const DriftCertificate& cert, const LsaInputs& in,
                           Warnings* warnings = nullptr);
TdConstants td_constants(const DriftCertificate& base_cert, const TdInputs& in,
                         Warnings* warnings = nullptr);

// --- independent second evaluators (dual evaluation) ---

ErgodicScalars ergodic_scalars_alt(const DriftCertificate& cert);
PolyDriftConstants poly_drift_constants_alt(const DriftCertificate& cert, double gamma);
RosenthalConstants rosenthal_constants_alt(const DriftCertificate& cert, double p, double gamma);
RosenthalVConstants rosenthal_constants_V_alt(const DriftCertificate& cert, double p, double tau);
StabilityConstants stability_constants_alt(const AData& a_data, const DriftCertificate& cert,
                                           const StabilityInputs& in);
LsaConstants lsa_constants_alt(const DriftCertificate& cert, const LsaInputs& in);
TdConstants td_constants_alt(const DriftCertificate& base_cert, const TdInputs& in);

/// Effective infimum of W over the superlevel set {W > R0}; +infinity when
/// the set is empty, which triggers the lambda = exp(-c) clamp.
double superlevel_inf_w(const DriftCertificate& cert);

/// Full report: runs both evaluators over every requested block and records
/// the worst relative disagreement (acceptance requires <= 1e-12).
ConstantsReport build_constants_report(const DriftCertificate& cert, const AData& a_data,
                                       const StabilityInputs& stab, const LsaInputs& lsa,
                                       const std::optional<TdInputs>& td = std::nullopt);

} // namespace lsalab
