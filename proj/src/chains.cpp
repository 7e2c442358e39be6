#include "lsalab/chains.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <numeric>
#include <sstream>

#include "lsalab/errors.hpp"

namespace lsalab {

bool ChainState::operator==(const ChainState& o) const {
    if (kind != o.kind) return false;
    switch (kind) {
        case Kind::Finite: return finite == o.finite;
        case Kind::Integer: return integer == o.integer;
        case Kind::RealVector: return real_vector == o.real_vector;
        case Kind::Window: return window == o.window;
    }
    return false;
}

double hurwitz_zeta(double s, double a) {
    // direct terms + Euler-Maclaurin remainder from M = a + N
    const int N = 40;
    double sum = 0.0;
    for (int k = 0; k < N; ++k) sum += std::pow(a + k, -s);
    double m = a + N;
    double ms = std::pow(m, -s);
    sum += m * ms / (s - 1.0) + 0.5 * ms;
    sum += s * ms / m / 12.0;
    sum -= s * (s + 1.0) * (s + 2.0) * ms / (m * m * m) / 720.0;
    sum += s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) * ms / (m * m * m * m * m) / 30240.0;
    return sum;
}

std::function<double(long long)> power_law_tail(double s) {
    if (s <= 2.0) throw BadTailError("power_law_tail: need s > 2 for a finite mean");
    double z1 = hurwitz_zeta(s, 1.0);
    return [s, z1](long long k) -> double {
        if (k <= 1) return 1.0;
        return hurwitz_zeta(s, static_cast<double>(k)) / z1;
    };
}

namespace {

int categorical_draw(const Vector& cdf, RngStream& rng) {
    double u = rng.uniform();
    auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
    int idx = static_cast<int>(it - cdf.begin());
    if (idx >= static_cast<int>(cdf.size())) idx = static_cast<int>(cdf.size()) - 1;
    return idx;
}

void validate_stochastic(const Matrix& p) {
    if (!p.square()) throw NotStochasticError("kernel must be square");
    for (int i = 0; i < p.rows(); ++i) {
        double s = 0.0;
        for (int j = 0; j < p.cols(); ++j) {
            if (p(i, j) < 0.0) throw NotStochasticError("kernel has a negative entry");
            s += p(i, j);
        }
        if (std::abs(s - 1.0) > 1e-12)
            throw NotStochasticError("kernel row does not sum to one");
    }
}

// strong connectivity + aperiodicity of the support graph
void check_primitive(const Matrix& p) {
    const int n = p.rows();
    auto reach = [&](bool forward) {
        std::vector<char> seen(n, 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int v = 0; v < n; ++v) {
                double w = forward ? p(u, v) : p(v, u);
                if (w > 0.0 && !seen[v]) {
                    seen[v] = 1;
                    stack.push_back(v);
                }
            }
        }
        return seen;
    };
    auto fwd = reach(true), bwd = reach(false);
    for (int i = 0; i < n; ++i)
        if (!fwd[i] || !bwd[i]) throw ReducibleError("kernel is not irreducible");

    // gcd of d(u) + 1 - d(v) over edges, BFS levels from state 0
    std::vector<int> depth(n, -1);
    depth[0] = 0;
    std::vector<int> queue{0};
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        int u = queue[qi];
        for (int v = 0; v < n; ++v)
            if (p(u, v) > 0.0 && depth[v] < 0) {
                depth[v] = depth[u] + 1;
                queue.push_back(v);
            }
    }
    int g = 0;
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v)
            if (p(u, v) > 0.0) g = std::gcd(g, std::abs(depth[u] + 1 - depth[v]));
    if (g != 1) throw PeriodicError("kernel is periodic");
}

std::shared_ptr<std::vector<Vector>> row_cdfs(const Matrix& p) {
    auto cdfs = std::make_shared<std::vector<Vector>>();
    cdfs->reserve(p.rows());
    for (int i = 0; i < p.rows(); ++i) {
        Vector cdf(p.cols());
        double acc = 0.0;
        for (int j = 0; j < p.cols(); ++j) {
            acc += p(i, j);
            cdf[j] = acc;
        }
        cdf.back() = 1.0;
        cdfs->push_back(std::move(cdf));
    }
    return cdfs;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// E[exp(s|Y|)] for Y ~ N(mu, sigma^2)
double folded_exp_moment(double s, double mu, double sigma) {
    double c = std::exp(0.5 * s * s * sigma * sigma);
    return c * (std::exp(s * mu) * normal_cdf(mu / sigma + s * sigma) +
                std::exp(-s * mu) * normal_cdf(-mu / sigma + s * sigma));
}

// composite Simpson with interval doubling
double simpson_integral(const std::function<double(double)>& f, double lo, double hi,
                        double rel_tol) {
    int n = 64;
    auto eval = [&](int panels) {
        double h = (hi - lo) / panels;
        double s = f(lo) + f(hi);
        for (int i = 1; i < panels; ++i) s += f(lo + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
        return s * h / 3.0;
    };
    double prev = eval(n);
    for (int round = 0; round < 12; ++round) {
        n *= 2;
        double cur = eval(n);
        if (std::abs(cur - prev) <= rel_tol * std::max(1.0, std::abs(cur))) return cur;
        prev = cur;
    }
    return prev;
}

} // namespace

MarkovModel finite_chain(const Matrix& p) {
    validate_stochastic(p);
    MarkovModel m;
    m.exact_kernel = p;
    m.description = "finite chain on " + std::to_string(p.rows()) + " states";
    auto cdfs = row_cdfs(p);
    m.stepper = [cdfs](const ChainState& z, RngStream& rng) {
        return ChainState::make_finite(categorical_draw((*cdfs)[z.finite], rng));
    };
    return m;
}

MarkovModel forward_recurrence_chain(const std::function<double(long long)>& tail, long long cap) {
    if (cap < 1) throw BadTailError("forward_recurrence_chain: cap must be >= 1");
    if (std::abs(tail(1) - 1.0) > 1e-12) throw BadTailError("tail(1) must equal 1");
    auto pmf = std::make_shared<Vector>(static_cast<std::size_t>(cap), 0.0);
    double prev = tail(1);
    for (long long k = 1; k <= cap; ++k) {
        double next = tail(k + 1);
        if (next > prev + 1e-12) throw BadTailError("tail must be non-increasing");
        (*pmf)[k - 1] = prev - next;
        if ((*pmf)[k - 1] < -1e-12) throw BadTailError("tail produced a negative mass");
        prev = next;
    }
    double trunc = tail(cap + 1);
    double kept = 1.0 - trunc;
    if (kept <= 0.0) throw BadTailError("all mass truncated away");
    auto cdf = std::make_shared<Vector>(pmf->size());
    double acc = 0.0;
    for (std::size_t i = 0; i < pmf->size(); ++i) {
        acc += (*pmf)[i] / kept;
        (*cdf)[i] = acc;
    }
    cdf->back() = 1.0;

    MarkovModel m;
    m.description = "forward recurrence chain, support capped at " + std::to_string(cap);
    m.truncation_mass = trunc;
    m.stepper = [cdf](const ChainState& z, RngStream& rng) {
        if (z.integer > 1) return ChainState::make_integer(z.integer - 1);
        return ChainState::make_integer(1 + categorical_draw(*cdf, rng));
    };
    return m;
}

Matrix forward_recurrence_exact_kernel(const std::function<double(long long)>& tail,
                                       long long cap) {
    MarkovModel probe = forward_recurrence_chain(tail, cap); // validates the tail
    (void)probe;
    const int s = static_cast<int>(cap);
    double kept = 1.0 - tail(cap + 1);
    Matrix p(s, s);
    for (long long k = 1; k <= cap; ++k) p(0, static_cast<int>(k - 1)) = (tail(k) - tail(k + 1)) / kept;
    for (int z = 2; z <= s; ++z) p(z - 1, z - 2) = 1.0;
    return p;
}

MarkovModel gaussian_ar_chain(const Matrix& rho, const Matrix& noise_cov) {
    if (!rho.square() || rho.rows() != noise_cov.rows())
        throw DimMismatchError("gaussian_ar_chain: shape mismatch");
    if (spectral_radius(rho) >= 1.0)
        throw UnstableError("gaussian_ar_chain: spectral radius of rho is >= 1");
    Matrix l = cholesky(noise_cov); // also validates positive definiteness
    const int d = rho.rows();

    MarkovModel m;
    m.description = "Gaussian AR(1) in dimension " + std::to_string(d);
    auto rho_p = std::make_shared<Matrix>(rho);
    auto l_p = std::make_shared<Matrix>(l);
    m.stepper = [rho_p, l_p, d](const ChainState& z, RngStream& rng) {
        Vector x = rho_p->apply(z.real_vector);
        Vector g(d);
        for (int i = 0; i < d; ++i) g[i] = rng.gaussian();
        Vector noise = l_p->apply(g);
        for (int i = 0; i < d; ++i) x[i] += noise[i];
        return ChainState::make_real(std::move(x));
    };
    if (d == 1) {
        double r = rho(0, 0);
        double sd = std::sqrt(noise_cov(0, 0));
        m.ar1 = Ar1Spec{r, sd};
        m.gauss_innovation = GaussInnovation{
            sd, [r](const ChainState& z, double u) {
                return ChainState::make_real(r * z.real_vector[0] + u);
            }};
    }
    return m;
}

MarkovModel window_chain(const MarkovModel& base, int tau) {
    if (tau < 1) throw Error("window_chain: tau must be >= 1");
    MarkovModel m;
    m.description = "window chain (tau = " + std::to_string(tau) + ") over " + base.description;
    auto base_step = base.stepper;
    m.stepper = [base_step](const ChainState& z, RngStream& rng) {
        std::vector<ChainState> next(z.window.begin() + 1, z.window.end());
        next.push_back(base_step(z.window.back(), rng));
        return ChainState::make_window(std::move(next));
    };
    if (base.gauss_innovation) {
        auto inner = *base.gauss_innovation;
        m.gauss_innovation = GaussInnovation{
            inner.sigma, [inner](const ChainState& z, double u) {
                std::vector<ChainState> next(z.window.begin() + 1, z.window.end());
                next.push_back(inner.apply(z.window.back(), u));
                return ChainState::make_window(std::move(next));
            }};
    }
    if (base.exact_kernel) {
        long long s = base.exact_kernel->rows();
        double count = std::pow(static_cast<double>(s), tau + 1);
        if (count <= 4096) m.exact_kernel = window_exact_kernel(*base.exact_kernel, tau);
    }
    m.truncation_mass = base.truncation_mass;
    return m;
}

Matrix window_exact_kernel(const Matrix& base_kernel, int tau) {
    const int s = base_kernel.rows();
    long long n = 1;
    for (int i = 0; i <= tau; ++i) n *= s;
    Matrix p(static_cast<int>(n), static_cast<int>(n));
    // encoding: index = sum_i w_i s^i  (w_0 in the lowest digit)
    for (long long idx = 0; idx < n; ++idx) {
        std::vector<int> w(tau + 1);
        long long rem = idx;
        for (int i = 0; i <= tau; ++i) {
            w[i] = static_cast<int>(rem % s);
            rem /= s;
        }
        for (int nxt = 0; nxt < s; ++nxt) {
            double prob = base_kernel(w[tau], nxt);
            if (prob == 0.0) continue;
            long long to = 0;
            long long mult = 1;
            for (int i = 0; i < tau; ++i) {
                to += w[i + 1] * mult;
                mult *= s;
            }
            to += static_cast<long long>(nxt) * mult;
            p(static_cast<int>(idx), static_cast<int>(to)) += prob;
        }
    }
    return p;
}

StationaryDistribution stationary_forward_recurrence(
    const std::function<double(long long)>& tail, long long cap) {
    MarkovModel probe = forward_recurrence_chain(tail, cap); // validates
    double trunc = probe.truncation_mass;
    double kept = 1.0 - trunc;
    StationaryDistribution sd;
    sd.kind = StationaryDistribution::Kind::TruncatedSeries;
    sd.truncation_error = trunc;
    sd.weights.resize(static_cast<std::size_t>(cap));
    double mean = 0.0;
    for (long long z = 1; z <= cap; ++z) {
        double t = (tail(z) - trunc) / kept;
        sd.weights[z - 1] = t;
        mean += t;
    }
    for (double& w : sd.weights) w /= mean;
    return sd;
}

StationaryDistribution stationary_exact(const MarkovModel& model) {
    if (!model.exact_kernel)
        throw MethodUnavailableError("stationary_exact: model has no exact kernel");
    const Matrix& p = *model.exact_kernel;
    check_primitive(p);
    const int n = p.rows();
    // solve pi (P - I) = 0 with the last column replaced by the normalization
    Matrix sys(n, n);
    Vector rhs(n, 0.0);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) sys(j, i) = p(i, j) - (i == j ? 1.0 : 0.0);
    }
    for (int i = 0; i < n; ++i) sys(n - 1, i) = 1.0;
    rhs[n - 1] = 1.0;
    Vector pi = lu_solve(sys, rhs);
    double total = 0.0;
    for (double& v : pi) {
        if (v < 0.0 && v > -1e-13) v = 0.0;
        total += v;
    }
    for (double& v : pi) v /= total;

    double resid = 0.0;
    for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += pi[i] * p(i, j);
        resid += std::abs(s - pi[j]);
    }
    if (resid > 1e-12) throw IllConditionedError("stationary_exact: residual above 1e-12");

    StationaryDistribution sd;
    sd.kind = StationaryDistribution::Kind::ExactFinite;
    sd.weights = pi;
    return sd;
}

DriftCheckReport check_drift(const MarkovModel& model, const DriftCertificate& cert,
                             const std::vector<ChainState>& test_states,
                             ExpectationMethod method, long long mc_samples, std::uint64_t seed) {
    if (test_states.empty()) throw Error("check_drift: no test states");
    DriftCheckReport report;
    report.violations = 0;

    std::optional<double> ar1_scale; // s in V = exp(s(1+|x|)) if it matches
    if (method == ExpectationMethod::Exact && model.ar1) {
        double s0 = cert.w(ChainState::make_real(0.0));
        bool matches = true;
        for (double probe : {0.7, 1.9, -3.3}) {
            double expect = s0 * (1.0 + std::abs(probe));
            if (std::abs(cert.w(ChainState::make_real(probe)) - expect) > 1e-12 * (1 + expect))
                matches = false;
        }
        if (matches) ar1_scale = s0;
    }

    switch (method) {
        case ExpectationMethod::Exact:
            if (!model.exact_kernel && !ar1_scale)
                throw MethodUnavailableError("check_drift: exact expectation unavailable");
            report.method = "exact";
            break;
        case ExpectationMethod::Quadrature:
            if (!model.gauss_innovation)
                throw MethodUnavailableError("check_drift: no Gaussian innovation structure");
            report.method = "quadrature";
            break;
        case ExpectationMethod::MonteCarlo:
            if (mc_samples < 10000)
                throw Error("check_drift: montecarlo requires at least 10^4 samples");
            report.method = "montecarlo";
            break;
    }

    std::uint64_t state_counter = 0;
    for (const ChainState& z : test_states) {
        DriftCheckEntry e;
        e.state = z;
        e.w = cert.w(z);
        e.rhs = (e.w > cert.r0) ? std::exp(e.w - cert.c * std::pow(e.w, cert.delta)) : cert.b;

        if (method == ExpectationMethod::Exact) {
            if (model.exact_kernel) {
                const Matrix& p = *model.exact_kernel;
                double pv = 0.0;
                for (int j = 0; j < p.cols(); ++j)
                    pv += p(z.finite, j) * std::exp(cert.w(ChainState::make_finite(j)));
                e.pv = pv;
            } else {
                double s = *ar1_scale;
                double mu = model.ar1->rho * z.real_vector[0];
                e.pv = std::exp(s) * folded_exp_moment(s, mu, model.ar1->sigma);
            }
            e.ci_low = e.ci_high = e.pv;
            e.violated = e.pv > e.rhs * (1.0 + 1e-12);
        } else if (method == ExpectationMethod::Quadrature) {
            const auto& gi = *model.gauss_innovation;
            double sd = gi.sigma;
            auto integrand = [&](double u) {
                double density = std::exp(-0.5 * (u / sd) * (u / sd)) /
                                 (sd * std::sqrt(2.0 * 3.14159265358979323846));
                return std::exp(cert.w(gi.apply(z, u))) * density;
            };
            // +-12 sigma window; the discarded tail is < exp(W_max - 60) of
            // the retained mass for the drift functions used here
            e.pv = simpson_integral(integrand, -12.0 * sd, 12.0 * sd, 1e-11);
            e.ci_low = e.ci_high = e.pv;
            e.violated = e.pv > e.rhs * (1.0 + 1e-10);
        } else {
            RngStream rng(seed, state_counter, 0xD21Fu);
            double sum = 0.0, sum_sq = 0.0;
            for (long long k = 0; k < mc_samples; ++k) {
                rng.seek(static_cast<std::uint64_t>(k) * kRngSlotsPerStep);
                double v = std::exp(cert.w(model.stepper(z, rng)));
                sum += v;
                sum_sq += v * v;
            }
            double mean = sum / mc_samples;
            double var = std::max(0.0, sum_sq / mc_samples - mean * mean);
            double half = 2.5758293035489 * std::sqrt(var / mc_samples); // 99%
            e.pv = mean;
            e.ci_low = mean - half;
            e.ci_high = mean + half;
            e.violated = e.ci_low > e.rhs;
        }
        if (e.violated) ++report.violations;
        report.entries.push_back(std::move(e));
        ++state_counter;
    }
    return report;
}

std::pair<double, Vector> minorization_constants(const MarkovModel& model,
                                                 const std::vector<int>& set_c, int m) {
    if (!model.exact_kernel)
        throw MethodUnavailableError("minorization_constants: exact kernel required");
    if (set_c.empty()) throw Error("minorization_constants: empty set");
    Matrix pm = Matrix::identity(model.exact_kernel->rows());
    for (int i = 0; i < m; ++i) pm = pm * (*model.exact_kernel);
    const int n = pm.cols();
    Vector mins(n, 0.0);
    double eps = 0.0;
    for (int j = 0; j < n; ++j) {
        double mn = HUGE_VAL;
        for (int i : set_c) mn = std::min(mn, pm(i, j));
        mins[j] = mn;
        eps += mn;
    }
    Vector nu(n, 0.0);
    if (eps > 0.0)
        for (int j = 0; j < n; ++j) nu[j] = mins[j] / eps;
    return {eps, nu};
}

ErgodicityData ergodicity_constants(const MarkovModel& model, DriftCertificate& cert,
                                    int horizon) {
    if (!model.exact_kernel)
        throw MethodUnavailableError("ergodicity_constants: exact kernel required");
    const Matrix& p = *model.exact_kernel;
    check_primitive(p);
    StationaryDistribution pi = stationary_exact(model);
    const int n = p.rows();

    double slem = 0.0;
    int unit_roots = 0;
    for (const auto& ev : general_eigenvalues(p)) {
        double mod = std::abs(ev);
        if (mod > 1.0 - 1e-9) {
            ++unit_roots;
            continue;
        }
        slem = std::max(slem, mod);
    }
    if (unit_roots != 1) throw ReducibleError("ergodicity_constants: repeated unit eigenvalue");
    double rho = std::max(slem + 1e-12, 1e-12);

    Vector v(n);
    for (int i = 0; i < n; ++i) v[i] = std::exp(cert.w(ChainState::make_finite(i)));

    double v_max = 0.0;
    for (int i = 0; i < n; ++i) v_max = std::max(v_max, v[i]);

    double b_v = 0.0;
    Matrix pn = Matrix::identity(n);
    double rho_n = 1.0;
    for (int step = 0; step <= horizon; ++step) {
        for (int z = 0; z < n; ++z) {
            double dist = 0.0;
            for (int j = 0; j < n; ++j) dist += std::abs(pn(z, j) - pi.weights[j]) * v[j];
            // repeated kernel powers resolve the distance only down to
            // rounding noise; below that the ratio would measure noise
            if (dist <= 1e-12 * (step + 1.0) * v_max) continue;
            b_v = std::max(b_v, dist / (rho_n * v[z]));
        }
        pn = pn * p;
        rho_n *= rho;
        if (rho_n < 1e-280) break;
    }
    ErgodicityData out{b_v, rho};
    cert.ergodicity = out;
    return out;
}

Matrix load_kernel_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open kernel file: " + path);
    std::vector<Vector> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        Vector row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw IoError("kernel file is empty: " + path);
    const int s = static_cast<int>(rows.size());
    Matrix p(s, s);
    for (int i = 0; i < s; ++i) {
        if (static_cast<int>(rows[i].size()) != s)
            throw IoError("kernel file is not square: " + path);
        for (int j = 0; j < s; ++j) p(i, j) = rows[i][j];
    }
    validate_stochastic(p);
    return p;
}

} // namespace lsalab
