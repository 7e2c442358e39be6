#include "lsalab/td.hpp"

#include <cmath>

#include "lsalab/errors.hpp"
#include "lsalab/linalg.hpp"

namespace lsalab {

Vector eligibility(const std::vector<ChainState>& window, const FeatureMap& features,
                   const TdConfig& cfg, double gamma) {
    if (static_cast<int>(window.size()) != cfg.tau)
        throw WindowLengthMismatchError("eligibility: window length must equal tau");
    double decay = cfg.lambda_trace * gamma;
    Vector phi(features.dim, 0.0);
    double weight = 1.0;
    for (int s = 0; s < cfg.tau; ++s) {
        Vector psi = features.psi(window[cfg.tau - 1 - s]);
        axpy(weight, psi, phi);
        weight *= decay;
    }
    return phi;
}

void td_exact_averages(const Mrp& mrp, const FeatureMap& features, const TdConfig& cfg,
                       Matrix& a_out, Vector& b_out, Matrix& sigma_psi_out) {
    if (!mrp.state_chain.exact_kernel)
        throw MethodUnavailableError("td_exact_averages: finite MRP required");
    const Matrix& q = *mrp.state_chain.exact_kernel;
    const int s = q.rows();
    const int d = features.dim;
    StationaryDistribution pi0 = stationary_exact(mrp.state_chain);

    std::vector<Vector> psi(s);
    Vector reward(s);
    for (int x = 0; x < s; ++x) {
        psi[x] = features.psi(ChainState::make_finite(x));
        reward[x] = mrp.reward(ChainState::make_finite(x));
    }

    sigma_psi_out = Matrix(d, d);
    for (int x = 0; x < s; ++x) sigma_psi_out += pi0.weights[x] * outer(psi[x], psi[x]);

    // A = sum_l (lambda gamma)^l E[psi(X_0){psi(X_l) - gamma psi(X_{l+1})}^T],
    // b = sum_l (lambda gamma)^l E[psi(X_0) R(X_l)], lags via kernel powers
    double decay = cfg.lambda_trace * mrp.gamma;
    a_out = Matrix(d, d);
    b_out.assign(d, 0.0);
    Matrix q_pow = Matrix::identity(s);
    double weight = 1.0;
    for (int lag = 0; lag < cfg.tau; ++lag) {
        Matrix q_next = q_pow * q;
        for (int x = 0; x < s; ++x) {
            Vector expected(d, 0.0); // E[psi(X_l) - gamma psi(X_{l+1}) | X_0 = x]
            double expected_r = 0.0;
            for (int y = 0; y < s; ++y) {
                axpy(q_pow(x, y), psi[y], expected);
                axpy(-mrp.gamma * q_next(x, y), psi[y], expected);
                expected_r += q_pow(x, y) * reward[y];
            }
            a_out += (weight * pi0.weights[x]) * outer(psi[x], expected);
            axpy(weight * pi0.weights[x] * expected_r, psi[x], b_out);
        }
        q_pow = q_next;
        weight *= decay;
    }
}

LsaModel build_td_model(const Mrp& mrp, const FeatureMap& features, const TdConfig& cfg,
                        const AveragingSpec& averaging) {
    if (cfg.lambda_trace * mrp.gamma >= 1.0)
        throw Error("build_td_model: lambda * gamma must be below 1");
    const int tau = cfg.tau;
    MarkovModel window = window_chain(mrp.state_chain, tau);

    FeatureMap feats = features;
    double gamma = mrp.gamma;
    auto reward = mrp.reward;
    TdConfig conf = cfg;
    auto abar = [feats, conf, gamma, tau](const ChainState& z) {
        std::vector<ChainState> head(z.window.begin(), z.window.begin() + tau);
        Vector phi = eligibility(head, feats, conf, gamma);
        Vector tail_dir = feats.psi(z.window[tau - 1]);
        Vector next_psi = feats.psi(z.window[tau]);
        for (std::size_t i = 0; i < tail_dir.size(); ++i) tail_dir[i] -= gamma * next_psi[i];
        return outer(phi, tail_dir);
    };
    auto bbar = [feats, conf, gamma, tau, reward](const ChainState& z) {
        std::vector<ChainState> head(z.window.begin(), z.window.begin() + tau);
        Vector phi = eligibility(head, feats, conf, gamma);
        double r = reward(z.window[tau - 1]);
        for (double& v : phi) v *= r;
        return phi;
    };

    if (averaging.kind == AveragingSpec::Kind::Exact) {
        if (!mrp.state_chain.exact_kernel)
            throw MethodUnavailableError("build_td_model: exact averaging needs a finite MRP");
        LsaModel model;
        model.chain = std::move(window);
        model.abar = abar;
        model.bbar = bbar;
        Matrix sigma;
        td_exact_averages(mrp, features, cfg, model.a_avg, model.b_avg, sigma);
        if (spectral_abscissa(model.a_avg * -1.0) >= -1e-9)
            throw NotHurwitzError("build_td_model: -A is not Hurwitz");
        try {
            model.theta_star = lu_solve(model.a_avg, model.b_avg);
        } catch (const SingularMatrixError&) {
            throw SingularAError("build_td_model: averaged TD matrix is singular");
        }
        model.dim = features.dim;
        model.averaging.kind = AveragingSpec::Kind::Exact;
        return model;
    }

    AveragingSpec spec = averaging;
    if (spec.init.kind != ChainState::Kind::Window) {
        std::vector<ChainState> w(tau + 1, spec.init);
        spec.init = ChainState::make_window(std::move(w));
    }
    return build_model(std::move(window), abar, bbar, spec);
}

TdHurwitzReport verify_hurwitz_td(const Matrix& a, const Matrix& sigma_psi, double gamma,
                                  const TdConfig& cfg) {
    Vector sig_ev = symmetric_eigenvalues(sigma_psi);
    if (sig_ev.front() <= 0.0)
        throw QNotPdError("verify_hurwitz_td: Sigma_psi is not positive definite");
    double decay = cfg.lambda_trace * gamma;
    TdHurwitzReport rep;
    Matrix sym = 0.5 * (a + a.transpose());
    rep.lambda_min_sym = symmetric_eigenvalues(sym).front();
    rep.bound = (1.0 - gamma) / (1.0 - decay) * (1.0 - std::pow(decay, cfg.tau)) * sig_ev.front();
    if (rep.lambda_min_sym < rep.bound - 1e-10)
        throw BoundViolatedError("verify_hurwitz_td: quadratic-form bound violated");
    rep.hurwitz = positivity_implies_hurwitz_check(a);
    return rep;
}

DriftCertificate td_drift_certificate(const DriftCertificate& base_cert, int tau,
                                      const TdConstants& tc, double nu_mass_lower) {
    DriftCertificate cert;
    double c0 = tc.c0;
    double delta = base_cert.delta;
    auto base_w = base_cert.w;
    cert.w = [c0, delta, base_w, tau](const ChainState& z) {
        double acc = 0.0;
        for (int i = 0; i < tau; ++i)
            acc += (i + 1) * std::pow(base_w(z.window[i]), delta);
        return c0 * acc + base_w(z.window[tau]);
    };
    cert.c = tc.c_p;
    cert.b = tc.b_p;
    cert.delta = delta;
    cert.r0 = tc.r_p;
    cert.superlevel_inf_w = std::max(tc.r_p, 1.0);
    if (base_cert.small_set && nu_mass_lower > 0.0) {
        auto base_ss = base_cert.small_set;
        cert.small_set = [base_ss, tau, nu_mass_lower](double r) -> std::optional<SmallSetData> {
            auto inner = base_ss(r);
            if (!inner) return std::nullopt;
            SmallSetData out;
            out.m = tau + 1;
            out.epsilon = std::pow(inner->epsilon * nu_mass_lower, tau + 1);
            return out;
        };
    }
    return cert;
}

} // namespace lsalab
