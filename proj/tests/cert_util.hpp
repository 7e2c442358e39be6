#pragma once

#include <cmath>

#include "lsalab/chains.hpp"

namespace lsalab::testutil {

/// Uniformly ergodic encoding: constant drift function (W = 1 everywhere),
/// b = e, R0 = 1 so the drift holds vacuously with the whole space as the
/// sublevel set and lambda clamps to exp(-c).
inline DriftCertificate collapse_cert(double c = 1.0, double eps = 0.3, int m = 1) {
    DriftCertificate cert;
    cert.w = [](const ChainState&) { return 1.0; };
    cert.c = c;
    cert.b = std::exp(1.0);
    cert.delta = 1.0;
    cert.r0 = 1.0;
    cert.superlevel_inf_w = HUGE_VAL;
    cert.small_set = [m, eps](double) -> std::optional<SmallSetData> {
        return SmallSetData{m, eps};
    };
    return cert;
}

inline double normal_cdf_u(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

/// E[exp(s|mu + xi|)], xi ~ N(0, sigma^2).
inline double folded_exp_moment_oracle(double s, double mu, double sigma) {
    double c = std::exp(0.5 * s * s * sigma * sigma);
    return c * (std::exp(s * mu) * normal_cdf_u(mu / sigma + s * sigma) +
                std::exp(-s * mu) * normal_cdf_u(-mu / sigma + s * sigma));
}

/// The scalar AR(1) certificate with V = exp(1 + |x|): delta = 1, c = 1/4,
/// R0 = 6.1, b the maximum of PV over the sublevel set.
inline DriftCertificate ar1_certificate(double rho = 0.5, double sigma = 1.0) {
    DriftCertificate cert;
    cert.w = [](const ChainState& z) { return 1.0 + std::abs(z.real_vector[0]); };
    cert.delta = 1.0;
    cert.c = 0.25;
    cert.r0 = 6.1;
    cert.b = std::exp(1.0) * folded_exp_moment_oracle(1.0, rho * (cert.r0 - 1.0), sigma);
    cert.superlevel_inf_w = cert.r0;
    return cert;
}

/// Drift certificate fitted on a finite chain: given W values and a split
/// radius R0, computes the largest certified rate c on the superlevel set
/// (shrunk by the margin), b as the sublevel maximum of PV, and exact
/// small-set data from column minorization.
inline DriftCertificate fitted_finite_cert(const MarkovModel& model, const Vector& w_values,
                                           double r0, double margin = 0.9,
                                           double delta = 1.0) {
    const Matrix& p = *model.exact_kernel;
    const int s = p.rows();
    DriftCertificate cert;
    cert.w = [w_values](const ChainState& z) { return w_values[z.finite]; };
    cert.delta = delta;
    cert.r0 = r0;

    Vector pv(s, 0.0);
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) pv[i] += p(i, j) * std::exp(w_values[j]);

    double c_max = HUGE_VAL;
    double b = 1.0;
    double inf_w = HUGE_VAL;
    for (int i = 0; i < s; ++i) {
        if (w_values[i] > r0) {
            double rate = (w_values[i] - std::log(pv[i])) / std::pow(w_values[i], delta);
            c_max = std::min(c_max, rate);
            inf_w = std::min(inf_w, w_values[i]);
        } else {
            b = std::max(b, pv[i]);
        }
    }
    cert.c = std::isinf(c_max) ? 0.5 : margin * c_max;
    if (cert.c <= 0) throw Error("fitted_finite_cert: no valid drift rate at this R0");
    cert.b = b;
    cert.superlevel_inf_w = inf_w;

    auto kernel = p;
    auto wv = w_values;
    cert.small_set = [kernel, wv](double r) -> std::optional<SmallSetData> {
        std::vector<int> set_c;
        for (std::size_t i = 0; i < wv.size(); ++i)
            if (wv[i] <= r) set_c.push_back(static_cast<int>(i));
        if (set_c.empty()) return std::nullopt;
        MarkovModel m = finite_chain(kernel);
        for (int power = 1; power <= 4; ++power) {
            auto [eps, nu] = minorization_constants(m, set_c, power);
            if (eps > 0.0) return SmallSetData{power, eps};
        }
        return std::nullopt;
    };
    return cert;
}

} // namespace lsalab::testutil
