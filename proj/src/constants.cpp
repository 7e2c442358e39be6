#include "lsalab/constants.hpp"

#include <cmath>

#include "lsalab/errors.hpp"

namespace lsalab {

namespace {

constexpr double kE = 2.718281828459045235360287471353;
constexpr double kPi = 3.141592653589793238462643383280;

void warn(Warnings* w, const std::string& msg) {
    if (w) w->push_back(msg);
}

double logsumexp(double a, double b) {
    if (a == -HUGE_VAL) return b;
    if (b == -HUGE_VAL) return a;
    double m = std::max(a, b);
    return m + std::log(std::exp(a - m) + std::exp(b - m));
}

// sup_{r > 0} (c r^delta - r); attained at r* = (c delta)^{1/(1-delta)}
// for delta < 1, and 0 / +infinity at delta = 1 depending on c <= 1.
double sup_drift_gap(double c, double delta, Warnings* warnings) {
    if (delta >= 1.0) {
        if (c <= 1.0) return 0.0;
        warn(warnings, "sup_r(c r^delta - r) is infinite: delta = 1 with c > 1");
        return HUGE_VAL;
    }
    double r_star = std::pow(c * delta, 1.0 / (1.0 - delta));
    return c * std::pow(r_star, delta) - r_star;
}

SmallSetData require_small_set(const DriftCertificate& cert, double radius) {
    if (!cert.small_set)
        throw MissingSmallSetError("certificate has no small-set capability");
    auto ss = cert.small_set(radius);
    if (!ss || ss->epsilon <= 0.0 || ss->m < 1)
        throw MissingSmallSetError("no minorization data at radius " + std::to_string(radius));
    return *ss;
}

double drift_lambda(const DriftCertificate& cert) {
    double inf_w = superlevel_inf_w(cert);
    if (std::isinf(inf_w)) return std::exp(-cert.c);
    return std::min(std::exp(-cert.c * std::pow(inf_w, cert.delta)), std::exp(-cert.c));
}

// psi of the W^gamma Rosenthal route; shared by both C_f and C_W.
double psi_value(const DriftCertificate& cert, double gamma_tilde, Warnings* warnings) {
    PolyDriftConstants pd = poly_drift_constants(cert, gamma_tilde, warnings);
    PolyDriftConstants pd_shift =
        poly_drift_constants(cert, gamma_tilde + 1.0 - cert.delta, warnings);
    double ratio = pd.b_gamma / pd.c_gamma;
    double r_tilde = std::max(std::pow(2.0 * ratio, 1.0 / gamma_tilde), pd.r_gamma);
    SmallSetData ss = require_small_set(cert, r_tilde);
    double exponent = gamma_tilde + 1.0 - cert.delta;
    return 8.0 / ss.epsilon * (ratio * ss.m + std::pow(r_tilde, exponent)) +
           2.0 * (pd_shift.b_gamma / pd_shift.c_gamma + 1.0);
}

// phi of the V^{1/tau} Rosenthal route.
double phi_value(const DriftCertificate& cert, double tau_tilde, double lambda) {
    double lt = std::pow(lambda, 1.0 / tau_tilde);
    double bt = std::pow(cert.b, 1.0 / tau_tilde);
    double radius = std::max(
        cert.r0, tau_tilde * std::log(2.0) + std::log(cert.b) - tau_tilde * std::log1p(-lt));
    SmallSetData ss = require_small_set(cert, radius);
    double scale = bt / (1.0 - lt);
    return 8.0 / ss.epsilon * (scale * ss.m + 2.0 * scale) +
           2.0 * (cert.b / (1.0 - lambda) + 1.0);
}

} // namespace

double superlevel_inf_w(const DriftCertificate& cert) {
    double v = cert.superlevel_inf_w ? *cert.superlevel_inf_w : std::max(cert.r0, 1.0);
    return std::max(v, 1.0);
}

ErgodicScalars ergodic_scalars(const DriftCertificate& cert, Warnings* warnings) {
    ErgodicScalars out;
    out.lambda = drift_lambda(cert);
    double sup = sup_drift_gap(cert.c, cert.delta, warnings);
    out.b_tilde = std::log(cert.b) + sup;
    out.b_prime = std::log(cert.b / (1.0 - out.lambda)) + sup;
    return out;
}

PolyDriftConstants poly_drift_constants(const DriftCertificate& cert, double gamma,
                                        Warnings* warnings) {
    if (gamma <= 0.0) throw Error("poly_drift_constants: gamma must be positive");
    const double c = cert.c, delta = cert.delta, b = cert.b;
    const double ex = gamma + 1.0 - delta;
    PolyDriftConstants out;
    if (gamma <= delta) {
        out.r_gamma = cert.r0;
        out.c_gamma = std::min(1.0, ex * c);
        out.b_gamma = std::pow(std::log(b), ex);
        return out;
    }
    // gamma > delta branch
    double r = std::max(cert.r0, std::pow(2.0 * ex / c, 1.0 / delta));
    if (delta < 1.0) {
        // both exponent signs so that c R^{delta-1} <= 1 holds for any c
        r = std::max(r, std::pow(c, 1.0 / (delta - 1.0)));
        r = std::max(r, std::pow(c, 1.0 / (1.0 - delta)));
    } else if (c > 1.0) {
        warn(warnings, "poly drift constants infinite: delta = 1 with c > 1");
        out.r_gamma = HUGE_VAL;
        out.b_gamma = HUGE_VAL;
        out.c_gamma = 0.0;
        return out;
    }
    out.r_gamma = r;
    double e_shift = std::exp(gamma - delta);
    double log_inner = std::max(std::log(b + e_shift), r + e_shift);
    out.b_gamma = std::pow(log_inner, ex);
    double contraction = 1.0 - c * std::pow(r, delta - 1.0) / 2.0;
    out.c_gamma = std::min(1.0, ex * std::pow(contraction, gamma - delta) * (c / 2.0));
    return out;
}

RosenthalConstants rosenthal_constants(const DriftCertificate& cert, double p, double gamma,
                                       Warnings* warnings) {
    if (p < 2.0) throw RangeViolationError("rosenthal_constants: p must be >= 2");
    RosenthalConstants out;
    out.c_f = psi_value(cert, gamma, warnings);
    out.c_w = psi_value(cert, p * (gamma + 1.0 - cert.delta), warnings);
    PolyDriftConstants pdg = poly_drift_constants(cert, gamma, warnings);
    PolyDriftConstants pdp =
        poly_drift_constants(cert, p * (gamma + 1.0 - cert.delta), warnings);
    // log-space: the composite overflows a double for moderately large p
    double log_pi_w = std::log(pdp.b_gamma) - p * std::log(pdg.c_gamma) - std::log(pdp.c_gamma);
    double log_mid = logsumexp(std::log(out.c_w), log_pi_w);
    out.log_c_ros = p * std::log(6.0) + p * std::log(out.c_f) + log_mid +
                    logsumexp(p * std::log(p), std::log(2.0)) -
                    std::log(pdg.c_gamma) - std::log(pdp.c_gamma);
    out.c_ros = std::exp(out.log_c_ros);
    if (std::isinf(out.c_ros)) warn(warnings, "C_ros overflows double; log value retained");
    return out;
}

RosenthalVConstants rosenthal_constants_V(const DriftCertificate& cert, double p, double tau,
                                          Warnings* warnings) {
    if (p < 2.0) throw RangeViolationError("rosenthal_constants_V: p must be >= 2");
    double lambda = drift_lambda(cert);
    RosenthalVConstants out;
    out.c_f = phi_value(cert, tau, lambda);
    out.c_w = phi_value(cert, 1.0, lambda);
    double lt = std::pow(lambda, 1.0 / tau);
    out.log_d_ros = p * std::log(6.0) + p * std::log(out.c_f) +
                    std::log(out.c_w + cert.b / (1.0 - lambda)) +
                    logsumexp(p * std::log(p), std::log(2.0)) - std::log1p(-lambda) -
                    std::log1p(-lt);
    out.d_ros = std::exp(out.log_d_ros);
    if (std::isinf(out.d_ros)) warn(warnings, "D_ros overflows double; log value retained");
    return out;
}

StabilityConstants stability_constants(const AData& a_data, const DriftCertificate& cert,
                                       const StabilityInputs& in, Warnings* warnings) {
    const double delta = cert.delta, c = cert.c;
    if (in.epsilon <= 0.0 || in.epsilon >= 1.0)
        throw RangeViolationError("stability_constants: epsilon must lie in (0,1)");
    double beta_cap = std::min(2.0 * delta - 1.0, delta / (1.0 + in.epsilon));
    if (in.beta >= beta_cap)
        throw RangeViolationError("stability_constants: beta outside the growth assumption");

    StabilityConstants out;
    out.r_a = (delta >= 1.0) ? 0.0 : (1.0 - delta) / (2.0 * delta - 1.0 - in.beta);
    out.p_tilde = std::max(in.p, out.r_a / 4.0);

    RosenthalConstants ros = rosenthal_constants(cert, 4.0 * out.p_tilde, in.beta, warnings);

    double kappa_half = std::sqrt(a_data.kappa_q);
    out.c0 = 0.5 * kappa_half * a_data.norm_a * a_data.norm_a *
             std::exp(a_data.norm_a + a_data.a);
    out.c1 = std::pow(kappa_half * in.d * std::exp(a_data.a) * in.c_a, 1.0 + in.epsilon) /
             (1.0 + in.epsilon);
    out.c2p = kappa_half * std::exp(a_data.a) * in.d * in.c_a *
              std::exp((std::log(4.0) + ros.log_c_ros) / (4.0 * out.p_tilde));

    ErgodicScalars erg = ergodic_scalars(cert, warnings);
    double lambda = erg.lambda;
    double spread = erg.b_tilde - std::log1p(-lambda);
    double h_raw = 12.0 * out.c2p * spread / a_data.a;
    out.h = std::ceil(h_raw * h_raw);
    if (out.h < 1.0) out.h = 1.0;

    // the seven step-size caps, combined in log space
    double log_terms[7];
    log_terms[0] = -std::log(a_data.a);
    log_terms[1] = -std::log(out.h);
    log_terms[2] = -std::log(2.0 * a_data.norm_a_q * a_data.norm_a_q * a_data.norm_q);
    log_terms[3] = std::log(a_data.a) - std::log(12.0 * out.h * out.c0);
    log_terms[4] =
        (std::log(a_data.a) - std::log(12.0 * out.c1) - out.h * std::log(2.0)) / in.epsilon;
    log_terms[5] = (std::log(std::min(c, 0.5)) - std::log(2.0 * in.p * out.c1) -
                    out.h * std::log(2.0)) / (1.0 + in.epsilon);
    log_terms[6] = std::log(std::min(c, 1.0)) -
                   std::log(4.0 * in.p * out.c2p * std::sqrt(out.h));
    double log_min = log_terms[0];
    for (double t : log_terms) log_min = std::min(log_min, t);
    out.log_alpha_inf = log_min;
    out.alpha_inf = std::exp(log_min);
    if (out.alpha_inf == 0.0)
        warn(warnings, "alpha_inf underflows double; log value retained");

    double alpha_h = std::exp(out.log_alpha_inf + std::log(out.h)); // <= 1 by construction
    out.cst_p = kappa_half * std::exp(1.25 * a_data.a * alpha_h) *
                (std::pow(lambda, in.m_cond / (2.0 * in.p)) +
                 std::pow(cert.b / (1.0 - lambda), 1.0 / (2.0 * in.p)));
    return out;
}

LsaConstants lsa_constants(const DriftCertificate& cert, const LsaInputs& in,
                           Warnings* warnings) {
    const double p = in.p, k = in.k_moment;
    if (k < 8.0 || p < 2.0 || p > k / 4.0)
        throw RangeViolationError("lsa_constants: need K >= 8 and 2 <= p <= K/4");
    if (k < 32.0 || p > k / 16.0)
        warn(warnings, "expansion-theorem range (K >= 32, p <= K/16) not met; "
                       "first-order constants evaluated anyway");

    double b_v = in.b_v, rho = in.rho;
    if (b_v <= 0.0 || rho <= 0.0) {
        if (!cert.ergodicity)
            throw Error("lsa_constants: B_V and rho unavailable");
        b_v = cert.ergodicity->b_v;
        rho = cert.ergodicity->rho;
    }

    const double a = in.a_data.a;
    const double norm_a = in.a_data.norm_a;
    const double kappa = std::sqrt(in.a_data.kappa_q);
    const double lambda = drift_lambda(cert);
    const double pi_v_bound = 1.0 + cert.b / (1.0 - lambda);

    LsaConstants out;
    StabilityInputs stab_in{in.d, in.epsilon, in.c_a, in.beta, 2.0 * p, in.m_cond};
    StabilityConstants stab2p = stability_constants(in.a_data, cert, stab_in, warnings);
    out.cst_2p = stab2p.cst_p;

    out.alpha_inf_0 = std::min({stab2p.alpha_inf, rho, std::exp(-1.0)});
    out.alpha_inf_1 = std::min(out.alpha_inf_0, in.c_alpha > 0 ? 0.5 / in.c_alpha : HUGE_VAL);

    double growth = std::pow(in.beta * k / kE, in.beta); // = 1 at beta = 0
    out.cbar_a = norm_a + in.d * in.c_a * growth * std::pow(pi_v_bound, 1.0 / k);
    double norm_b = in.norm_b >= 0.0 ? in.norm_b : norm_a * in.theta_star_norm;
    out.cbar_b = norm_b + in.d * in.c_b_k * std::pow(pi_v_bound, 1.0 / k);
    out.cbar_eps = out.cbar_a * in.theta_star_norm + out.cbar_b;
    out.const_eps = std::sqrt(static_cast<double>(in.d)) * in.c_b_k +
                    2.0 * in.d * growth * in.c_a * in.theta_star_norm;

    // Rosenthal constant for the V^{1/K}-growth functionals
    auto cros_root = [&](double q) {
        RosenthalVConstants rv = rosenthal_constants_V(cert, q, k, warnings);
        return std::exp(rv.log_d_ros / q);
    };
    double root_p = cros_root(p);
    out.cros_p = std::pow(root_p, p);

    double j0_factor = in.d * kappa * out.const_eps *
                       (2.0 + 4.0 * (in.c_alpha + 2.0 * norm_a) / a + 2.0 / std::sqrt(a));
    out.const_j0 = j0_factor * root_p;
    out.const_j0_4p = j0_factor * cros_root(4.0 * p);

    out.const_h0 = 16.0 * std::sqrt(1.0 + out.alpha_inf_1 * in.c_alpha) * out.cst_2p *
                   out.const_j0_4p * out.cbar_a / a;
    warn(warnings, "Const_H0 evaluated with alpha_inf^(1) as printed");

    out.const_s = 24.0 * in.a_data.kappa_q * in.d * root_p * (in.c_a + norm_a) * norm_a;
    out.const_b = std::pow(static_cast<double>(in.d), 1.5) *
                  (2.0 * b_v * out.const_eps / std::sqrt(1.0 - rho) +
                   2.0 * out.cbar_eps * 18.0 * std::sqrt(2.0) * p);

    out.c1 = 8.0 / (a * a) * out.cbar_eps * out.const_s * kappa;
    out.c2 = 4.0 / a * out.const_b * out.const_s * kappa;
    out.c3 = 8.0 / a * kappa * out.const_s * out.cbar_eps * std::pow(b_v, 1.0 / (4.0 * p));
    out.c4 = 2.0 * out.c1 + 2.0 * std::sqrt(kE) * out.c2 / a +
             std::sqrt(2.0 * kPi) * kE * out.c3 / std::pow(a, 1.5);
    out.c5 = (3.0 * out.c1 + 2.0 * out.c2 / std::sqrt(a) + 4.0 * out.c3 / a) *
             (std::sqrt(in.c_alpha) + 1.0);

    double log_inv_rho = std::log(1.0 / rho);
    out.const_j1f = 2.0 * std::sqrt(p) * out.c4 / std::sqrt(log_inv_rho);
    out.const_j1d = 2.0 * std::sqrt(p) * out.c5 / log_inv_rho;
    out.const_h1f = 8.0 * out.const_j1f * out.cbar_a * out.cst_2p / a;
    out.const_h1d = 16.0 * out.const_j1d * out.cbar_a * out.cst_2p *
                    (1.0 + in.c_alpha * out.alpha_inf_1) / a;
    warn(warnings, "Const_H1^(d) evaluated with alpha_inf^(1) substituted for the "
                   "undefined alpha_inf^(2)");

    out.c_f = out.const_h1f + out.const_j1f;
    out.c_d = out.const_h1d + out.const_j1d;
    return out;
}

TdConstants td_constants(const DriftCertificate& base_cert, const TdInputs& in,
                         Warnings* warnings) {
    if (in.tau < 1) throw Error("td_constants: tau must be >= 1");
    if (in.gamma_discount <= 0.0 || in.gamma_discount >= 1.0)
        throw Error("td_constants: discount must lie in (0,1)");
    if (in.lambda_trace < 0.0 || in.lambda_trace >= 1.0)
        throw Error("td_constants: trace decay must lie in [0,1)");
    const double c = base_cert.c, delta = base_cert.delta, b = base_cert.b;
    const double tau = static_cast<double>(in.tau);

    auto slack = [&](double beta) {
        return (1.0 - tau * beta) * std::pow(tau * beta * c, delta) - beta;
    };
    double lo = 1.0 / (2.0 * tau), hi = 1.0 / tau;
    TdConstants out;
    if (slack(lo) <= 0.0) {
        out.beta0 = lo;
    } else {
        if (slack(hi * (1.0 - 1e-12)) > 0.0)
            throw NoFeasibleBetaError("td_constants: drift split condition never satisfied");
        double a = lo, bnd = hi;
        for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (a + bnd);
            if (slack(mid) <= 0.0)
                bnd = mid;
            else
                a = mid;
        }
        out.beta0 = bnd;
    }

    out.c0 = out.beta0 * c;
    double c_tilde = (1.0 - tau * out.beta0) * c;
    out.c_p = 0.5 * c_tilde;

    // R1: first positive root region of r - (c~ + tau c0) r^delta - log b
    double coeff = c_tilde + tau * out.c0;
    auto margin = [&](double r) { return r - coeff * std::pow(r, delta) - std::log(b); };
    if (delta >= 1.0 && coeff >= 1.0) {
        warn(warnings, "R1 infinite: delta = 1 with c >= 1 on the window chain");
        out.r1 = HUGE_VAL;
    } else {
        double hi_r = 1.0;
        while (margin(hi_r) <= 0.0 && hi_r < 1e12) hi_r *= 2.0;
        double lo_r = 0.0;
        for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (lo_r + hi_r);
            if (margin(mid) > 0.0)
                hi_r = mid;
            else
                lo_r = mid;
        }
        out.r1 = hi_r;
    }
    out.r2 = std::pow(2.0 * std::log(2.0) / c_tilde, 1.0 / delta);
    out.r_p = std::max(out.r1, out.r2);

    // sup over (0, R_P) of exp(-c~ r^delta + r) + b exp(beta0 c r^delta):
    // dense grid plus golden-section refinement around the best cell
    auto objective = [&](double r) {
        return std::exp(-c_tilde * std::pow(r, delta) + r) +
               b * std::exp(out.beta0 * c * std::pow(r, delta));
    };
    if (std::isinf(out.r_p)) {
        out.b_p = HUGE_VAL;
    } else {
        const int grid = 2048;
        double best = 0.0, best_r = 0.0;
        for (int i = 0; i <= grid; ++i) {
            double r = out.r_p * i / grid;
            double v = objective(r);
            if (v > best) {
                best = v;
                best_r = r;
            }
        }
        double lo_g = std::max(0.0, best_r - out.r_p / grid);
        double hi_g = std::min(out.r_p, best_r + out.r_p / grid);
        const double inv_phi = 0.6180339887498949;
        double x1 = hi_g - inv_phi * (hi_g - lo_g);
        double x2 = lo_g + inv_phi * (hi_g - lo_g);
        double f1 = objective(x1), f2 = objective(x2);
        while (hi_g - lo_g > 1e-13 * (1.0 + out.r_p)) {
            if (f1 < f2) {
                lo_g = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo_g + inv_phi * (hi_g - lo_g);
                f2 = objective(x2);
            } else {
                hi_g = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi_g - inv_phi * (hi_g - lo_g);
                f1 = objective(x1);
            }
        }
        out.b_p = std::max(best, std::max(f1, f2));
    }

    double trace_gap = 1.0 - in.lambda_trace * in.gamma_discount;
    out.cbar_a_td = (1.0 + in.gamma_discount) * in.c_psi * in.c_psi / trace_gap;
    out.cbar_b_k_td = in.c_r_k * in.c_psi *
                      std::pow(in.beta * in.k_moment / kE, in.beta / 2.0) / trace_gap;
    return out;
}

namespace {

double rel_diff(double x, double y) {
    if (std::isinf(x) && std::isinf(y) && (x > 0) == (y > 0)) return 0.0;
    double scale = std::max({1.0, std::abs(x), std::abs(y)});
    return std::abs(x - y) / scale;
}

} // namespace

ConstantsReport build_constants_report(const DriftCertificate& cert, const AData& a_data,
                                       const StabilityInputs& stab, const LsaInputs& lsa,
                                       const std::optional<TdInputs>& td) {
    ConstantsReport rep;
    auto in = [&](const std::string& k, double v) { rep.inputs[k] = v; };
    auto put = [&](const std::string& k, double v, double v_alt) {
        rep.values[k] = v;
        rep.dual_max_rel_diff = std::max(rep.dual_max_rel_diff, rel_diff(v, v_alt));
    };

    in("c", cert.c);
    in("b", cert.b);
    in("delta", cert.delta);
    in("R0", cert.r0);
    in("d", stab.d);
    in("epsilon", stab.epsilon);
    in("C_A", stab.c_a);
    in("beta", stab.beta);
    in("p", stab.p);
    in("kappa_Q", a_data.kappa_q);
    in("a", a_data.a);
    in("norm_A", a_data.norm_a);
    in("K", lsa.k_moment);
    in("C_bK", lsa.c_b_k);
    in("theta_star_norm", lsa.theta_star_norm);
    in("c_alpha", lsa.c_alpha);

    ErgodicScalars erg = ergodic_scalars(cert, &rep.warnings);
    ErgodicScalars erg2 = ergodic_scalars_alt(cert);
    put("lambda", erg.lambda, erg2.lambda);
    put("b_tilde", erg.b_tilde, erg2.b_tilde);
    put("b_prime", erg.b_prime, erg2.b_prime);

    for (double gamma : {0.5, 1.0, 2.0}) {
        PolyDriftConstants pd = poly_drift_constants(cert, gamma, &rep.warnings);
        PolyDriftConstants pd2 = poly_drift_constants_alt(cert, gamma);
        std::string tag = "gamma=" + std::to_string(gamma);
        put("c_" + tag, pd.c_gamma, pd2.c_gamma);
        put("b_" + tag, pd.b_gamma, pd2.b_gamma);
        put("R_" + tag, pd.r_gamma, pd2.r_gamma);
    }

    if (cert.small_set) {
        RosenthalConstants rc = rosenthal_constants(cert, stab.p, stab.beta, &rep.warnings);
        RosenthalConstants rc2 = rosenthal_constants_alt(cert, stab.p, stab.beta);
        put("C_f", rc.c_f, rc2.c_f);
        put("C_W", rc.c_w, rc2.c_w);
        put("log_C_ros", rc.log_c_ros, rc2.log_c_ros);

        RosenthalVConstants rv = rosenthal_constants_V(cert, stab.p, stab.p, &rep.warnings);
        RosenthalVConstants rv2 = rosenthal_constants_V_alt(cert, stab.p, stab.p);
        put("C_f_V", rv.c_f, rv2.c_f);
        put("C_W_V", rv.c_w, rv2.c_w);
        put("log_D_ros", rv.log_d_ros, rv2.log_d_ros);

        StabilityConstants st = stability_constants(a_data, cert, stab, &rep.warnings);
        StabilityConstants st2 = stability_constants_alt(a_data, cert, stab);
        put("C0", st.c0, st2.c0);
        put("C1", st.c1, st2.c1);
        put("C2_p", st.c2p, st2.c2p);
        put("r_A", st.r_a, st2.r_a);
        put("h", st.h, st2.h);
        put("alpha_inf_p", st.alpha_inf, st2.alpha_inf);
        put("log_alpha_inf_p", st.log_alpha_inf, st2.log_alpha_inf);
        put("C_st_p", st.cst_p, st2.cst_p);

        LsaConstants lc = lsa_constants(cert, lsa, &rep.warnings);
        LsaConstants lc2 = lsa_constants_alt(cert, lsa);
        put("alpha_inf_0", lc.alpha_inf_0, lc2.alpha_inf_0);
        put("alpha_inf_1", lc.alpha_inf_1, lc2.alpha_inf_1);
        put("Cbar_A", lc.cbar_a, lc2.cbar_a);
        put("Cbar_b", lc.cbar_b, lc2.cbar_b);
        put("Cbar_eps", lc.cbar_eps, lc2.cbar_eps);
        put("Const_eps", lc.const_eps, lc2.const_eps);
        put("Const_J0", lc.const_j0, lc2.const_j0);
        put("Const_H0", lc.const_h0, lc2.const_h0);
        put("Const_S", lc.const_s, lc2.const_s);
        put("Const_B", lc.const_b, lc2.const_b);
        put("Const_J1f", lc.const_j1f, lc2.const_j1f);
        put("Const_J1d", lc.const_j1d, lc2.const_j1d);
        put("Const_H1f", lc.const_h1f, lc2.const_h1f);
        put("Const_H1d", lc.const_h1d, lc2.const_h1d);
        put("C_p_f", lc.c_f, lc2.c_f);
        put("C_p_d", lc.c_d, lc2.c_d);
        put("C_st_2p", lc.cst_2p, lc2.cst_2p);
    }

    if (td) {
        TdConstants tc = td_constants(cert, *td, &rep.warnings);
        TdConstants tc2 = td_constants_alt(cert, *td);
        put("beta0", tc.beta0, tc2.beta0);
        put("c0_td", tc.c0, tc2.c0);
        put("c_P", tc.c_p, tc2.c_p);
        put("b_P", tc.b_p, tc2.b_p);
        put("R_P", tc.r_p, tc2.r_p);
        put("Cbar_A_td", tc.cbar_a_td, tc2.cbar_a_td);
        put("Cbar_bK_td", tc.cbar_b_k_td, tc2.cbar_b_k_td);
    }
    return rep;
}

} // namespace lsalab
