// Second, independently written evaluators for every theoretical constant.
// These deliberately avoid the helper structure of constants.cpp: formulas
// are spelled out inline and optimizations/searches use different methods,
// so agreement between the two paths is a meaningful check.

#include <cmath>

#include "lsalab/constants.hpp"
#include "lsalab/errors.hpp"

namespace lsalab {

namespace {

double lam_of(const DriftCertificate& cert) {
    double iw = cert.superlevel_inf_w ? *cert.superlevel_inf_w : (cert.r0 > 1.0 ? cert.r0 : 1.0);
    if (iw < 1.0) iw = 1.0;
    double le = -cert.c;
    if (!std::isinf(iw)) le = std::min(le, -cert.c * std::pow(iw, cert.delta));
    return std::exp(le);
}

// sup_{r>0}(c r^d - r) by golden-section over a generous bracket.
double sup_gap_search(double c, double d) {
    if (d >= 1.0) return c <= 1.0 ? 0.0 : HUGE_VAL;
    double r_hint = std::pow(c * d, 1.0 / (1.0 - d));
    double lo = 0.0, hi = 10.0 * r_hint + 10.0;
    auto f = [&](double r) { return c * std::pow(r, d) - r; };
    const double g = 0.6180339887498949;
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 240; ++it) {
        if (f1 < f2) {
            lo = x1; x1 = x2; f1 = f2;
            x2 = lo + g * (hi - lo); f2 = f(x2);
        } else {
            hi = x2; x2 = x1; f2 = f1;
            x1 = hi - g * (hi - lo); f1 = f(x1);
        }
        if (hi - lo < 1e-14 * (1.0 + hi)) break;
    }
    return std::max(f(0.5 * (lo + hi)), 0.0);
}

double lse2(double a, double b) {
    if (a == -HUGE_VAL) return b;
    if (b == -HUGE_VAL) return a;
    return std::max(a, b) + std::log1p(std::exp(-std::abs(a - b)));
}

PolyDriftConstants poly_alt(const DriftCertificate& cert, double g) {
    PolyDriftConstants o;
    double e = g + 1.0 - cert.delta;
    if (g <= cert.delta) {
        o.c_gamma = e * cert.c < 1.0 ? e * cert.c : 1.0;
        o.b_gamma = std::exp(e * std::log(std::log(cert.b)));
        o.r_gamma = cert.r0;
    } else {
        if (cert.delta >= 1.0 && cert.c > 1.0) {
            o.r_gamma = HUGE_VAL;
            o.b_gamma = HUGE_VAL;
            o.c_gamma = 0.0;
            return o;
        }
        double r = cert.r0;
        double t2 = std::pow(2.0 * e / cert.c, 1.0 / cert.delta);
        if (t2 > r) r = t2;
        if (cert.delta < 1.0) {
            double t3a = std::exp(std::log(cert.c) / (cert.delta - 1.0));
            double t3b = std::exp(std::log(cert.c) / (1.0 - cert.delta));
            if (t3a > r) r = t3a;
            if (t3b > r) r = t3b;
        }
        o.r_gamma = r;
        double shift = std::exp(g - cert.delta);
        double la = std::log(cert.b + shift);
        double lb = r + shift;
        o.b_gamma = std::pow(la > lb ? la : lb, e);
        double base = 1.0 - 0.5 * cert.c * std::pow(r, cert.delta - 1.0);
        double cg = e * std::pow(base, g - cert.delta) * cert.c * 0.5;
        o.c_gamma = cg < 1.0 ? cg : 1.0;
    }
    return o;
}

double psi_alt(const DriftCertificate& cert, double g) {
    PolyDriftConstants at = poly_alt(cert, g);
    PolyDriftConstants shifted = poly_alt(cert, g + 1.0 - cert.delta);
    double big_r = std::pow(2.0 * at.b_gamma / at.c_gamma, 1.0 / g);
    if (at.r_gamma > big_r) big_r = at.r_gamma;
    auto ss = cert.small_set ? cert.small_set(big_r) : std::nullopt;
    if (!ss || ss->epsilon <= 0.0)
        throw MissingSmallSetError("psi_alt: missing minorization data");
    return (8.0 / ss->epsilon) *
               (at.b_gamma / at.c_gamma * ss->m + std::pow(big_r, g + 1.0 - cert.delta)) +
           2.0 * shifted.b_gamma / shifted.c_gamma + 2.0;
}

double phi_alt(const DriftCertificate& cert, double t, double lambda) {
    double root = std::exp(std::log(lambda) / t);
    double broot = std::exp(std::log(cert.b) / t);
    double rad = std::log(std::pow(2.0, t) * cert.b) - t * std::log(1.0 - root);
    if (cert.r0 > rad) rad = cert.r0;
    auto ss = cert.small_set ? cert.small_set(rad) : std::nullopt;
    if (!ss || ss->epsilon <= 0.0)
        throw MissingSmallSetError("phi_alt: missing minorization data");
    double unit = broot / (1.0 - root);
    return (8.0 / ss->epsilon) * (unit * ss->m + 2.0 * unit) + 2.0 * cert.b / (1.0 - lambda) +
           2.0;
}

} // namespace

ErgodicScalars ergodic_scalars_alt(const DriftCertificate& cert) {
    ErgodicScalars o;
    o.lambda = lam_of(cert);
    double gap = sup_gap_search(cert.c, cert.delta);
    o.b_tilde = gap + std::log(cert.b);
    o.b_prime = gap + std::log(cert.b) - std::log1p(-o.lambda);
    return o;
}

PolyDriftConstants poly_drift_constants_alt(const DriftCertificate& cert, double gamma) {
    if (gamma <= 0.0) throw Error("poly_drift_constants_alt: gamma must be positive");
    return poly_alt(cert, gamma);
}

RosenthalConstants rosenthal_constants_alt(const DriftCertificate& cert, double p,
                                           double gamma) {
    RosenthalConstants o;
    o.c_f = psi_alt(cert, gamma);
    double lifted = p * (gamma + 1.0 - cert.delta);
    o.c_w = psi_alt(cert, lifted);
    PolyDriftConstants low = poly_alt(cert, gamma);
    PolyDriftConstants high = poly_alt(cert, lifted);
    double log_pi = std::log(high.b_gamma) - p * std::log(low.c_gamma) - std::log(high.c_gamma);
    o.log_c_ros = p * (std::log(6.0) + std::log(o.c_f)) + lse2(std::log(o.c_w), log_pi) +
                  lse2(p * std::log(p), std::log(2.0)) - std::log(low.c_gamma) -
                  std::log(high.c_gamma);
    o.c_ros = std::exp(o.log_c_ros);
    return o;
}

RosenthalVConstants rosenthal_constants_V_alt(const DriftCertificate& cert, double p,
                                              double tau) {
    RosenthalVConstants o;
    double lambda = lam_of(cert);
    o.c_f = phi_alt(cert, tau, lambda);
    o.c_w = phi_alt(cert, 1.0, lambda);
    double root = std::exp(std::log(lambda) / tau);
    o.log_d_ros = p * (std::log(6.0) + std::log(o.c_f)) +
                  std::log(o.c_w + cert.b / (1.0 - lambda)) +
                  lse2(p * std::log(p), std::log(2.0)) - std::log(1.0 - lambda) -
                  std::log(1.0 - root);
    o.d_ros = std::exp(o.log_d_ros);
    return o;
}

StabilityConstants stability_constants_alt(const AData& q, const DriftCertificate& cert,
                                           const StabilityInputs& in) {
    if (in.epsilon <= 0.0 || in.epsilon >= 1.0)
        throw RangeViolationError("stability_constants_alt: bad epsilon");
    double cap = 2.0 * cert.delta - 1.0;
    double cap2 = cert.delta / (1.0 + in.epsilon);
    if (in.beta >= (cap < cap2 ? cap : cap2))
        throw RangeViolationError("stability_constants_alt: beta out of range");

    StabilityConstants o;
    o.r_a = cert.delta >= 1.0 ? 0.0 : (1.0 - cert.delta) / (cap - in.beta);
    o.p_tilde = in.p > o.r_a / 4.0 ? in.p : o.r_a / 4.0;
    RosenthalConstants ros = rosenthal_constants_alt(cert, 4.0 * o.p_tilde, in.beta);

    double rk = std::sqrt(q.kappa_q);
    o.c0 = 0.5 * rk * q.norm_a * q.norm_a * std::exp(q.norm_a) * std::exp(q.a);
    o.c1 = std::exp((1.0 + in.epsilon) * std::log(rk * in.d * std::exp(q.a) * in.c_a)) /
           (1.0 + in.epsilon);
    o.c2p = rk * std::exp(q.a) * in.d * in.c_a *
            std::exp((ros.log_c_ros + std::log(4.0)) / (4.0 * o.p_tilde));

    double lambda = lam_of(cert);
    double btl = std::log(cert.b) + sup_gap_search(cert.c, cert.delta);
    double edge = 12.0 * o.c2p * (btl - std::log(1.0 - lambda)) / q.a;
    o.h = std::ceil(edge * edge);
    if (o.h < 1.0) o.h = 1.0;

    double lmin = -std::log(q.a);
    auto fold = [&](double v) { if (v < lmin) lmin = v; };
    fold(-std::log(o.h));
    fold(-std::log(2.0) - 2.0 * std::log(q.norm_a_q) - std::log(q.norm_q));
    fold(std::log(q.a / 12.0) - std::log(o.h) - std::log(o.c0));
    fold((std::log(q.a / 12.0) - std::log(o.c1) - o.h * std::log(2.0)) / in.epsilon);
    double chalf = cert.c < 0.5 ? cert.c : 0.5;
    fold((std::log(chalf) - std::log(2.0 * in.p) - std::log(o.c1) - o.h * std::log(2.0)) /
         (1.0 + in.epsilon));
    double cone = cert.c < 1.0 ? cert.c : 1.0;
    fold(std::log(cone) - std::log(4.0 * in.p) - std::log(o.c2p) - 0.5 * std::log(o.h));
    o.log_alpha_inf = lmin;
    o.alpha_inf = std::exp(lmin);

    double ah = std::exp(lmin + std::log(o.h));
    o.cst_p = rk * std::exp(5.0 * q.a * ah / 4.0) *
              (std::exp(in.m_cond / (2.0 * in.p) * std::log(lambda)) +
               std::exp(std::log(cert.b / (1.0 - lambda)) / (2.0 * in.p)));
    return o;
}

LsaConstants lsa_constants_alt(const DriftCertificate& cert, const LsaInputs& in) {
    if (in.k_moment < 8.0 || in.p < 2.0 || in.p > in.k_moment / 4.0)
        throw RangeViolationError("lsa_constants_alt: K/p outside theorem range");
    double b_v = in.b_v, rho = in.rho;
    if (b_v <= 0.0 || rho <= 0.0) {
        if (!cert.ergodicity) throw Error("lsa_constants_alt: no ergodicity data");
        b_v = cert.ergodicity->b_v;
        rho = cert.ergodicity->rho;
    }

    LsaConstants o;
    StabilityInputs si;
    si.d = in.d;
    si.epsilon = in.epsilon;
    si.c_a = in.c_a;
    si.beta = in.beta;
    si.p = 2.0 * in.p;
    si.m_cond = in.m_cond;
    StabilityConstants st = stability_constants_alt(in.a_data, cert, si);
    o.cst_2p = st.cst_p;

    o.alpha_inf_0 = st.alpha_inf;
    if (rho < o.alpha_inf_0) o.alpha_inf_0 = rho;
    if (std::exp(-1.0) < o.alpha_inf_0) o.alpha_inf_0 = std::exp(-1.0);
    o.alpha_inf_1 = o.alpha_inf_0;
    if (in.c_alpha > 0.0 && 0.5 / in.c_alpha < o.alpha_inf_1) o.alpha_inf_1 = 0.5 / in.c_alpha;

    double lambda = lam_of(cert);
    double piv = 1.0 + cert.b / (1.0 - lambda);
    double pow_beta = std::pow(in.beta * in.k_moment / std::exp(1.0), in.beta);
    o.cbar_a = in.a_data.norm_a +
               in.d * in.c_a * pow_beta * std::exp(std::log(piv) / in.k_moment);
    double nb = in.norm_b >= 0.0 ? in.norm_b : in.a_data.norm_a * in.theta_star_norm;
    o.cbar_b = nb + in.d * in.c_b_k * std::exp(std::log(piv) / in.k_moment);
    o.cbar_eps = o.cbar_a * in.theta_star_norm + o.cbar_b;
    o.const_eps = std::sqrt(1.0 * in.d) * in.c_b_k +
                  2.0 * in.d * pow_beta * in.c_a * in.theta_star_norm;

    auto ros_root = [&](double q) {
        RosenthalVConstants rv = rosenthal_constants_V_alt(cert, q, in.k_moment);
        return std::exp(rv.log_d_ros / q);
    };
    double rr = ros_root(in.p);
    o.cros_p = std::pow(rr, in.p);
    double a = in.a_data.a;
    double kap = std::sqrt(in.a_data.kappa_q);
    double bracket = 2.0 + 4.0 * (in.c_alpha + 2.0 * in.a_data.norm_a) / a + 2.0 / std::sqrt(a);
    o.const_j0 = in.d * kap * o.const_eps * bracket * rr;
    o.const_j0_4p = in.d * kap * o.const_eps * bracket * ros_root(4.0 * in.p);

    o.const_h0 = 16.0 / a * std::sqrt(1.0 + o.alpha_inf_1 * in.c_alpha) * o.cst_2p *
                 o.const_j0_4p * o.cbar_a;
    o.const_s = 24.0 * in.a_data.kappa_q * in.d * rr * (in.c_a + in.a_data.norm_a) *
                in.a_data.norm_a;
    o.const_b = std::sqrt(1.0 * in.d) * in.d *
                (2.0 * b_v * o.const_eps / std::sqrt(1.0 - rho) +
                 36.0 * std::sqrt(2.0) * in.p * o.cbar_eps);

    o.c1 = 8.0 * o.cbar_eps * o.const_s * kap / (a * a);
    o.c2 = 4.0 * o.const_b * o.const_s * kap / a;
    o.c3 = 8.0 * kap * o.const_s * o.cbar_eps * std::exp(std::log(b_v) / (4.0 * in.p)) / a;
    o.c4 = 2.0 * o.c1 + 2.0 * std::exp(0.5) * o.c2 / a +
           std::sqrt(2.0 * 3.141592653589793238462643383280) * std::exp(1.0) * o.c3 /
               (a * std::sqrt(a));
    o.c5 = (3.0 * o.c1 + 2.0 * o.c2 / std::sqrt(a) + 4.0 * o.c3 / a) * (1.0 + std::sqrt(in.c_alpha));

    double li = -std::log(rho);
    o.const_j1f = 2.0 * std::sqrt(in.p) * o.c4 * std::pow(li, -0.5);
    o.const_j1d = 2.0 * std::sqrt(in.p) * o.c5 / li;
    o.const_h1f = 8.0 * o.const_j1f * o.cbar_a * o.cst_2p / a;
    o.const_h1d = 16.0 * o.const_j1d * o.cbar_a * o.cst_2p * (1.0 + in.c_alpha * o.alpha_inf_1) / a;
    o.c_f = o.const_j1f + o.const_h1f;
    o.c_d = o.const_j1d + o.const_h1d;
    return o;
}

TdConstants td_constants_alt(const DriftCertificate& base, const TdInputs& in) {
    TdConstants o;
    double tau = in.tau;
    double c = base.c, delta = base.delta, b = base.b;

    // beta0 by monotone boundary search on g(beta)/beta, refined by bisection
    auto feasible = [&](double beta) {
        return (1.0 - tau * beta) * std::pow(tau * beta * c, delta) <= beta;
    };
    double left = 0.5 / tau, right = 1.0 / tau;
    if (feasible(left)) {
        o.beta0 = left;
    } else {
        if (!feasible(right * (1.0 - 1e-12)))
            throw NoFeasibleBetaError("td_constants_alt: no feasible beta");
        double a0 = left, b0 = right;
        for (int i = 0; i < 220; ++i) {
            double mid = 0.5 * (a0 + b0);
            (feasible(mid) ? b0 : a0) = mid;
        }
        o.beta0 = b0;
    }
    o.c0 = o.beta0 * c;
    double ct = (1.0 - tau * o.beta0) * c;
    o.c_p = ct / 2.0;

    double coeff = ct + tau * o.c0;
    if (delta >= 1.0 && coeff >= 1.0) {
        o.r1 = HUGE_VAL;
    } else {
        auto positive = [&](double r) {
            return r - coeff * std::pow(r, delta) - std::log(b) > 0.0;
        };
        double hi = 0.5;
        while (!positive(hi) && hi < 4e11) hi *= 4.0;
        double lo = 0.0;
        for (int i = 0; i < 300; ++i) {
            double mid = 0.5 * (lo + hi);
            (positive(mid) ? hi : lo) = mid;
        }
        o.r1 = hi;
    }
    o.r2 = std::exp(std::log(2.0 * std::log(2.0) / ct) / delta);
    o.r_p = o.r1 > o.r2 ? o.r1 : o.r2;

    if (std::isinf(o.r_p)) {
        o.b_p = HUGE_VAL;
    } else {
        // sup by ternary search around the best point of a coarse scan
        auto f = [&](double r) {
            return std::exp(r - ct * std::pow(r, delta)) + b * std::exp(o.c0 * std::pow(r, delta));
        };
        int coarse = 4097;
        double best_r = 0.0, best = f(0.0);
        for (int i = 1; i < coarse; ++i) {
            double r = o.r_p * i / (coarse - 1.0);
            double v = f(r);
            if (v > best) { best = v; best_r = r; }
        }
        double lo = best_r - o.r_p / (coarse - 1.0);
        double hi = best_r + o.r_p / (coarse - 1.0);
        if (lo < 0.0) lo = 0.0;
        if (hi > o.r_p) hi = o.r_p;
        for (int i = 0; i < 200; ++i) {
            double m1 = lo + (hi - lo) / 3.0;
            double m2 = hi - (hi - lo) / 3.0;
            if (f(m1) < f(m2)) lo = m1; else hi = m2;
        }
        double refined = f(0.5 * (lo + hi));
        o.b_p = refined > best ? refined : best;
    }

    double gap = 1.0 - in.lambda_trace * in.gamma_discount;
    o.cbar_a_td = in.c_psi * in.c_psi * (1.0 + in.gamma_discount) / gap;
    double growth = in.beta > 0.0
                        ? std::exp(0.5 * in.beta * std::log(in.beta * in.k_moment / std::exp(1.0)))
                        : 1.0;
    o.cbar_b_k_td = in.c_psi * in.c_r_k * growth / gap;
    return o;
}

} // namespace lsalab
