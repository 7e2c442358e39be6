#include "lsalab/runner.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "lsalab/constants.hpp"
#include "lsalab/csvio.hpp"
#include "lsalab/errors.hpp"
#include "lsalab/stability.hpp"
#include "lsalab/td.hpp"

namespace lsalab {

namespace {

using nlohmann::json;

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + ": expected an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError(where + ": unknown key '" + it.key() + "'");
}

const json& need(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) throw ConfigError(where + ": missing required key '" + key + "'");
    return j.at(key);
}

double num_at(const json& j, const std::string& key, const std::string& where) {
    const json& v = need(j, key, where);
    if (!v.is_number()) throw ConfigError(where + "." + key + ": expected a number");
    return v.get<double>();
}

double num_or(const json& j, const std::string& key, double fallback) {
    return j.contains(key) ? j.at(key).get<double>() : fallback;
}

Matrix parse_matrix(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) throw ConfigError(where + ": expected a matrix");
    int rows = static_cast<int>(j.size());
    int cols = static_cast<int>(j[0].size());
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        if (static_cast<int>(j[i].size()) != cols)
            throw ConfigError(where + ": ragged matrix rows");
        for (int c = 0; c < cols; ++c) m(i, c) = j[i][c].get<double>();
    }
    return m;
}

Vector parse_vector(const json& j, const std::string& where) {
    if (!j.is_array()) throw ConfigError(where + ": expected an array");
    Vector v;
    for (const auto& x : j) v.push_back(x.get<double>());
    return v;
}

StepSchedule parse_schedule(const json& j) {
    check_keys(j, {"kind", "alpha", "c", "n0", "t", "values"}, "schedule");
    std::string kind = need(j, "kind", "schedule").get<std::string>();
    if (kind == "constant") return StepSchedule::constant(num_at(j, "alpha", "schedule"));
    if (kind == "polynomial")
        return StepSchedule::polynomial(num_at(j, "c", "schedule"), num_at(j, "n0", "schedule"),
                                        num_at(j, "t", "schedule"));
    if (kind == "explicit")
        return StepSchedule::explicit_list(parse_vector(need(j, "values", "schedule"), "schedule"));
    throw ConfigError("schedule.kind: expected constant|polynomial|explicit");
}

std::function<double(long long)> parse_tail(const json& j) {
    check_keys(j, {"kind", "s", "pmf"}, "tail");
    std::string kind = need(j, "kind", "tail").get<std::string>();
    if (kind == "power-law") return power_law_tail(num_at(j, "s", "tail"));
    if (kind == "pmf") {
        Vector pmf = parse_vector(need(j, "pmf", "tail"), "tail.pmf");
        return [pmf](long long k) {
            double t = 0.0;
            for (std::size_t i = (k >= 1 ? static_cast<std::size_t>(k - 1) : 0); i < pmf.size(); ++i)
                t += pmf[i];
            return t;
        };
    }
    throw ConfigError("tail.kind: expected power-law|pmf");
}

DriftCertificate parse_certificate(const json& j, const std::string& where) {
    check_keys(j,
               {"c", "b", "delta", "r0", "superlevel_inf_w", "small_set", "b_v", "rho", "w"},
               where);
    DriftCertificate cert;
    cert.c = num_at(j, "c", where);
    cert.b = num_at(j, "b", where);
    cert.delta = num_at(j, "delta", where);
    cert.r0 = num_at(j, "r0", where);
    if (j.contains("superlevel_inf_w")) cert.superlevel_inf_w = j["superlevel_inf_w"].get<double>();
    if (j.contains("b_v") && j.contains("rho"))
        cert.ergodicity = ErgodicityData{j["b_v"].get<double>(), j["rho"].get<double>()};
    if (j.contains("small_set")) {
        const json& ss = j["small_set"];
        check_keys(ss, {"radii", "m", "eps"}, where + ".small_set");
        Vector radii = parse_vector(need(ss, "radii", where), where);
        Vector eps = parse_vector(need(ss, "eps", where), where);
        Vector ms = parse_vector(need(ss, "m", where), where);
        if (radii.size() != eps.size() || radii.size() != ms.size())
            throw ConfigError(where + ".small_set: radii/m/eps length mismatch");
        cert.small_set = [radii, eps, ms](double r) -> std::optional<SmallSetData> {
            for (std::size_t i = 0; i < radii.size(); ++i)
                if (radii[i] >= r) return SmallSetData{static_cast<int>(ms[i]), eps[i]};
            return std::nullopt;
        };
    }
    if (j.contains("w")) {
        const json& w = j["w"];
        check_keys(w, {"kind", "scale", "values"}, where + ".w");
        std::string kind = need(w, "kind", where + ".w").get<std::string>();
        if (kind == "exp-abs") {
            double scale = num_or(w, "scale", 1.0);
            cert.w = [scale](const ChainState& z) {
                return scale * (1.0 + std::abs(z.real_vector[0]));
            };
        } else if (kind == "values") {
            Vector values = parse_vector(need(w, "values", where), where + ".w.values");
            cert.w = [values](const ChainState& z) { return values[z.finite]; };
        } else {
            throw ConfigError(where + ".w.kind: expected exp-abs|values");
        }
    }
    return cert;
}

std::string fmt_kv(const std::string& k, double v) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%s=%.15g\n", k.c_str(), v);
    return buf;
}

void write_moment_rows(CsvWriter& csv, const std::string& experiment,
                       const std::string& component, const MomentSeries& series,
                       const std::vector<double>& bounds) {
    for (std::size_t i = 0; i < series.points.size(); ++i) {
        const MomentPoint& pt = series.points[i];
        csv.row({experiment, component, CsvWriter::num(pt.n), CsvWriter::num(pt.sum_alpha),
                 CsvWriter::num(series.p), CsvWriter::num(pt.estimate),
                 CsvWriter::num(pt.ci_low), CsvWriter::num(pt.ci_high),
                 CsvWriter::num(bounds.empty() ? 0.0 : bounds[i]),
                 CsvWriter::num(series.replicas), CsvWriter::num((long long)series.seed)});
    }
}

constexpr const char* kMomentHeader =
    "experiment,component,n,sum_alpha,p,estimate,ci_low,ci_high,bound,replicas,seed";

Matrix kernel_from(const json& mj, const std::string& where) {
    if (mj.contains("kernel_csv"))
        return load_kernel_csv(mj.at("kernel_csv").get<std::string>());
    return parse_matrix(need(mj, "kernel", where), where + ".kernel");
}

// one-trajectory decomposition dump: step plus the norm of each component
void dump_trajectory_csv(const LsaModel& model, const StepSchedule& schedule,
                         const Vector& theta0, const ChainState& z0, long long n,
                         std::uint64_t seed, const std::string& path,
                         std::uint64_t config_hash) {
    CsvWriter csv(path, "step,thetaTilde_norm,thetaTr_norm,J0_norm,H0_norm,J1_norm,H1_norm",
                  config_hash, seed);
    Vector init = theta0 - model.theta_star;
    csv.row({"0", CsvWriter::num(norm2(init)), CsvWriter::num(norm2(init)), "0", "0", "0",
             "0"});
    run_decomposition_streaming(model, schedule, theta0, z0, n, seed, 0,
                                [&](const DecompView& v) {
                                    csv.row({CsvWriter::num(v.step),
                                             CsvWriter::num(norm2(v.theta_tilde)),
                                             CsvWriter::num(norm2(v.theta_tr)),
                                             CsvWriter::num(norm2(v.j0)),
                                             CsvWriter::num(norm2(v.h0)),
                                             CsvWriter::num(norm2(v.j1)),
                                             CsvWriter::num(norm2(v.h1))});
                                });
}

std::vector<long long> parse_grid(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) throw ConfigError(where + ": expected a non-empty array");
    std::vector<long long> grid;
    for (const auto& v : j) grid.push_back(v.get<long long>());
    return grid;
}

// --- experiment runners ---

int run_stability(const json& cfg, std::uint64_t seed, long long replicas,
                  const std::string& out, int threads) {
    check_keys(cfg,
               {"experiment", "seed", "replicas", "out", "model", "schedule", "p", "n_grid",
                "z0", "envelope"},
               "config");
    const json& mj = need(cfg, "model", "config");
    check_keys(mj, {"type", "kernel", "kernel_csv", "abar"}, "model");
    std::string type = need(mj, "type", "model").get<std::string>();
    if (type != "finite-scalar")
        throw ConfigError("stability experiment supports model.type=finite-scalar");
    Matrix kernel = kernel_from(mj, "model");
    Vector coeffs = parse_vector(need(mj, "abar", "model"), "model.abar");
    if (static_cast<int>(coeffs.size()) != kernel.rows())
        throw ConfigError("model.abar length must match the kernel size");
    MarkovModel chain = finite_chain(kernel);
    auto abar = [coeffs](const ChainState& z) {
        Matrix m(1, 1);
        m(0, 0) = coeffs[z.finite];
        return m;
    };
    StepSchedule schedule = parse_schedule(need(cfg, "schedule", "config"));
    std::vector<long long> grid = parse_grid(need(cfg, "n_grid", "config"), "n_grid");
    int z0 = static_cast<int>(num_or(cfg, "z0", 0));

    std::string dump = cfg.dump();
    CsvWriter csv(out, kMomentHeader, fnv1a(dump), seed);
    for (const auto& pj : need(cfg, "p", "config")) {
        double p = pj.get<double>();
        MomentSeries series = estimate_gamma_moment(chain, abar, schedule,
                                                    ChainState::make_finite(z0), p, grid,
                                                    replicas, seed, threads);
        std::vector<double> bounds;
        if (cfg.contains("envelope")) {
            const json& ej = cfg["envelope"];
            check_keys(ej, {"cst_p", "a", "alpha_inf", "v_z0", "enforce_cap"}, "envelope");
            auto env = theory_envelope(num_at(ej, "cst_p", "envelope"), num_at(ej, "a", "envelope"),
                                       num_or(ej, "alpha_inf", 0.0), schedule,
                                       num_at(ej, "v_z0", "envelope"), p, grid,
                                       ej.value("enforce_cap", true));
            for (const auto& e : env) bounds.push_back(e.bound);
        }
        write_moment_rows(csv, "stability", "gamma", series, bounds);
    }
    return 0;
}

int run_lsa_experiment(const json& cfg, std::uint64_t seed, long long replicas,
                       const std::string& out, int threads) {
    check_keys(cfg,
               {"experiment", "seed", "replicas", "out", "model", "schedule", "p", "n_grid",
                "theta0", "z0", "dump_trajectory", "dump_n"},
               "config");
    const json& mj = need(cfg, "model", "config");
    check_keys(mj, {"type", "kernel", "kernel_csv", "abar", "bbar"}, "model");
    if (need(mj, "type", "model").get<std::string>() != "finite")
        throw ConfigError("lsa experiment supports model.type=finite");
    Matrix kernel = kernel_from(mj, "model");
    const json& aj = need(mj, "abar", "model");
    const json& bj = need(mj, "bbar", "model");
    std::vector<Matrix> abars;
    std::vector<Vector> bbars;
    for (const auto& item : aj) abars.push_back(parse_matrix(item, "model.abar[]"));
    for (const auto& item : bj) bbars.push_back(parse_vector(item, "model.bbar[]"));
    if (static_cast<int>(abars.size()) != kernel.rows() ||
        static_cast<int>(bbars.size()) != kernel.rows())
        throw ConfigError("model.abar/bbar must list one entry per state");

    AveragingSpec avg;
    LsaModel model = build_model(
        finite_chain(kernel), [abars](const ChainState& z) { return abars[z.finite]; },
        [bbars](const ChainState& z) { return bbars[z.finite]; }, avg);

    StepSchedule schedule = parse_schedule(need(cfg, "schedule", "config"));
    std::vector<long long> grid = parse_grid(need(cfg, "n_grid", "config"), "n_grid");
    Vector theta0 = parse_vector(need(cfg, "theta0", "config"), "theta0");
    int z0 = static_cast<int>(num_or(cfg, "z0", 0));

    CsvWriter csv(out, kMomentHeader, fnv1a(cfg.dump()), seed);
    for (const auto& pj : need(cfg, "p", "config")) {
        double p = pj.get<double>();
        LsaMomentSeries ms = estimate_lsa_moment(model, schedule, theta0,
                                                 ChainState::make_finite(z0), p, grid, replicas,
                                                 seed, threads);
        write_moment_rows(csv, "lsa", "theta_tilde", ms.theta_tilde, {});
        write_moment_rows(csv, "lsa", "J0", ms.j0, {});
        write_moment_rows(csv, "lsa", "H0", ms.h0, {});
        write_moment_rows(csv, "lsa", "J1", ms.j1, {});
        write_moment_rows(csv, "lsa", "H1", ms.h1, {});
    }
    if (cfg.contains("dump_trajectory")) {
        long long dump_n = static_cast<long long>(num_or(cfg, "dump_n", grid.back()));
        dump_trajectory_csv(model, schedule, theta0, ChainState::make_finite(z0), dump_n, seed,
                            cfg["dump_trajectory"].get<std::string>(), fnv1a(cfg.dump()));
    }
    return 0;
}

int run_td_experiment(const json& cfg, std::uint64_t seed, long long replicas,
                      const std::string& out, int threads) {
    check_keys(cfg,
               {"experiment", "seed", "replicas", "out", "mrp", "td", "schedule", "p", "n_grid",
                "theta0", "x0", "dump_trajectory", "dump_n"},
               "config");
    const json& mj = need(cfg, "mrp", "config");
    check_keys(mj, {"kernel", "kernel_csv", "rewards", "features", "gamma"}, "mrp");
    Matrix kernel = kernel_from(mj, "mrp");
    Vector rewards = parse_vector(need(mj, "rewards", "mrp"), "mrp.rewards");
    Matrix features = parse_matrix(need(mj, "features", "mrp"), "mrp.features");
    double gamma = num_at(mj, "gamma", "mrp");
    const json& tj = need(cfg, "td", "config");
    check_keys(tj, {"lambda", "tau"}, "td");
    TdConfig tcfg{num_or(tj, "lambda", 0.0), static_cast<int>(num_or(tj, "tau", 1))};

    Mrp mrp;
    mrp.state_chain = finite_chain(kernel);
    mrp.reward = [rewards](const ChainState& x) { return rewards[x.finite]; };
    mrp.gamma = gamma;
    FeatureMap fm;
    fm.dim = features.cols();
    fm.psi = [features](const ChainState& x) {
        Vector v(features.cols());
        for (int j = 0; j < features.cols(); ++j) v[j] = features(x.finite, j);
        return v;
    };
    AveragingSpec avg;
    LsaModel model = build_td_model(mrp, fm, tcfg, avg);

    StepSchedule schedule = parse_schedule(need(cfg, "schedule", "config"));
    std::vector<long long> grid = parse_grid(need(cfg, "n_grid", "config"), "n_grid");
    Vector theta0 = cfg.contains("theta0") ? parse_vector(cfg["theta0"], "theta0")
                                           : Vector(fm.dim, 0.0);
    int x0 = static_cast<int>(num_or(cfg, "x0", 0));
    std::vector<ChainState> w(tcfg.tau + 1, ChainState::make_finite(x0));
    ChainState z0 = ChainState::make_window(w);

    CsvWriter csv(out, kMomentHeader, fnv1a(cfg.dump()), seed);
    for (const auto& pj : need(cfg, "p", "config")) {
        double p = pj.get<double>();
        LsaMomentSeries ms =
            estimate_lsa_moment(model, schedule, theta0, z0, p, grid, replicas, seed, threads);
        write_moment_rows(csv, "td", "theta_tilde", ms.theta_tilde, {});
        write_moment_rows(csv, "td", "J0", ms.j0, {});
        write_moment_rows(csv, "td", "H0", ms.h0, {});
        write_moment_rows(csv, "td", "J1", ms.j1, {});
        write_moment_rows(csv, "td", "H1", ms.h1, {});
    }
    if (cfg.contains("dump_trajectory")) {
        long long dump_n = static_cast<long long>(num_or(cfg, "dump_n", grid.back()));
        dump_trajectory_csv(model, schedule, theta0, z0, dump_n, seed,
                            cfg["dump_trajectory"].get<std::string>(), fnv1a(cfg.dump()));
    }
    return 0;
}

int run_counterexample(const json& cfg, std::uint64_t seed, const std::string& out) {
    check_keys(cfg,
               {"experiment", "seed", "out", "tail", "cap", "epsilon", "alpha", "theta0",
                "n_max"},
               "config");
    auto tail = parse_tail(need(cfg, "tail", "config"));
    long long cap = static_cast<long long>(num_at(cfg, "cap", "config"));
    CounterexampleResult res =
        counterexample_exact(tail, cap, num_at(cfg, "epsilon", "config"),
                             num_at(cfg, "alpha", "config"), num_at(cfg, "theta0", "config"),
                             static_cast<long long>(num_at(cfg, "n_max", "config")));
    CsvWriter csv(out, "n,u,lower_bound", fnv1a(cfg.dump()), seed);
    for (std::size_t n = 0; n < res.u.size(); ++n)
        csv.row({CsvWriter::num(static_cast<long long>(n)), CsvWriter::num(res.u[n]),
                 CsvWriter::num(res.lower_bound[n])});
    return 0;
}

int run_constants(const json& cfg, const std::string& out) {
    check_keys(cfg, {"experiment", "seed", "out", "certificate", "a_data", "stability", "lsa",
                     "td"},
               "config");
    DriftCertificate cert = parse_certificate(need(cfg, "certificate", "config"), "certificate");
    const json& ad = need(cfg, "a_data", "config");
    check_keys(ad, {"kappa_q", "a", "norm_a", "norm_a_q", "norm_q"}, "a_data");
    AData a_data{num_at(ad, "kappa_q", "a_data"), num_at(ad, "a", "a_data"),
                 num_at(ad, "norm_a", "a_data"), num_at(ad, "norm_a_q", "a_data"),
                 num_at(ad, "norm_q", "a_data")};
    const json& sj = need(cfg, "stability", "config");
    check_keys(sj, {"d", "epsilon", "c_a", "beta", "p", "m_cond"}, "stability");
    StabilityInputs stab;
    stab.d = static_cast<int>(num_at(sj, "d", "stability"));
    stab.epsilon = num_at(sj, "epsilon", "stability");
    stab.c_a = num_at(sj, "c_a", "stability");
    stab.beta = num_at(sj, "beta", "stability");
    stab.p = num_at(sj, "p", "stability");
    stab.m_cond = num_or(sj, "m_cond", 0.0);
    const json& lj = need(cfg, "lsa", "config");
    check_keys(lj, {"c_b_k", "k_moment", "theta_star_norm", "norm_b", "c_alpha", "p", "b_v",
                    "rho"},
               "lsa");
    LsaInputs lsa;
    lsa.a_data = a_data;
    lsa.d = stab.d;
    lsa.epsilon = stab.epsilon;
    lsa.c_a = stab.c_a;
    lsa.beta = stab.beta;
    lsa.c_b_k = num_at(lj, "c_b_k", "lsa");
    lsa.k_moment = num_at(lj, "k_moment", "lsa");
    lsa.theta_star_norm = num_at(lj, "theta_star_norm", "lsa");
    lsa.norm_b = num_or(lj, "norm_b", -1.0);
    lsa.c_alpha = num_at(lj, "c_alpha", "lsa");
    lsa.p = num_at(lj, "p", "lsa");
    lsa.m_cond = stab.m_cond;
    lsa.b_v = num_or(lj, "b_v", 0.0);
    lsa.rho = num_or(lj, "rho", 0.0);

    std::optional<TdInputs> td;
    if (cfg.contains("td")) {
        const json& tj = cfg["td"];
        check_keys(tj, {"tau", "gamma", "lambda", "c_psi", "c_r_k", "beta", "k_moment"}, "td");
        TdInputs t;
        t.tau = static_cast<int>(num_at(tj, "tau", "td"));
        t.gamma_discount = num_at(tj, "gamma", "td");
        t.lambda_trace = num_or(tj, "lambda", 0.0);
        t.c_psi = num_or(tj, "c_psi", 1.0);
        t.c_r_k = num_or(tj, "c_r_k", 1.0);
        t.beta = num_or(tj, "beta", 0.0);
        t.k_moment = num_or(tj, "k_moment", 8.0);
        td = t;
    }

    ConstantsReport rep = build_constants_report(cert, a_data, stab, lsa, td);
    std::ofstream os(out);
    if (!os) throw IoError("cannot open output file: " + out);
    for (const auto& [k, v] : rep.inputs) os << fmt_kv("input." + k, v);
    for (const auto& [k, v] : rep.values) os << fmt_kv(k, v);
    os << fmt_kv("dual_max_rel_diff", rep.dual_max_rel_diff);
    for (const auto& w : rep.warnings) os << "warning=" << w << "\n";
    json jrep;
    jrep["inputs"] = rep.inputs;
    jrep["values"] = rep.values;
    jrep["warnings"] = rep.warnings;
    jrep["dual_max_rel_diff"] = rep.dual_max_rel_diff;
    os << jrep.dump(2) << "\n";
    if (rep.dual_max_rel_diff > 1e-12)
        throw Error("constants: dual evaluation disagrees beyond 1e-12");
    return 0;
}

int run_drift_check(const json& cfg, std::uint64_t seed, const std::string& out) {
    check_keys(cfg,
               {"experiment", "seed", "out", "model", "certificate", "states", "method",
                "mc_samples"},
               "config");
    const json& mj = need(cfg, "model", "config");
    check_keys(mj, {"type", "kernel", "kernel_csv", "rho", "sigma", "tau"}, "model");
    std::string type = need(mj, "type", "model").get<std::string>();

    MarkovModel model;
    std::vector<ChainState> states;
    const json& stj = need(cfg, "states", "config");
    check_keys(stj, {"kind", "lo", "hi", "count"}, "states");
    std::string skind = need(stj, "kind", "states").get<std::string>();

    if (type == "finite") {
        model = finite_chain(kernel_from(mj, "model"));
        if (skind != "finite-all") throw ConfigError("states.kind must be finite-all here");
        for (int i = 0; i < model.exact_kernel->rows(); ++i)
            states.push_back(ChainState::make_finite(i));
    } else if (type == "ar1" || type == "ar1-window") {
        Matrix rho(1, 1), cov(1, 1);
        rho(0, 0) = num_at(mj, "rho", "model");
        double sigma = num_at(mj, "sigma", "model");
        cov(0, 0) = sigma * sigma;
        MarkovModel base = gaussian_ar_chain(rho, cov);
        int tau = type == "ar1-window" ? static_cast<int>(num_at(mj, "tau", "model")) : 0;
        model = tau > 0 ? window_chain(base, tau) : base;
        if (skind != "grid") throw ConfigError("states.kind must be grid here");
        double lo = num_at(stj, "lo", "states"), hi = num_at(stj, "hi", "states");
        int count = static_cast<int>(num_at(stj, "count", "states"));
        for (int i = 0; i < count; ++i) {
            double x = lo + (hi - lo) * i / std::max(1, count - 1);
            if (tau > 0) {
                std::vector<ChainState> w(tau + 1, ChainState::make_real(x));
                states.push_back(ChainState::make_window(w));
            } else {
                states.push_back(ChainState::make_real(x));
            }
        }
    } else {
        throw ConfigError("model.type: expected finite|ar1|ar1-window");
    }

    DriftCertificate cert = parse_certificate(need(cfg, "certificate", "config"), "certificate");
    if (!cert.w) throw ConfigError("certificate.w required for drift-check");

    std::string method = need(cfg, "method", "config").get<std::string>();
    ExpectationMethod em;
    if (method == "exact") em = ExpectationMethod::Exact;
    else if (method == "quadrature") em = ExpectationMethod::Quadrature;
    else if (method == "montecarlo") em = ExpectationMethod::MonteCarlo;
    else throw ConfigError("method: expected exact|quadrature|montecarlo");

    DriftCheckReport rep = check_drift(model, cert, states, em,
                                       static_cast<long long>(num_or(cfg, "mc_samples", 100000)),
                                       seed);
    CsvWriter csv(out, "index,w,pv,ci_low,ci_high,rhs,violated", fnv1a(cfg.dump()), seed);
    for (std::size_t i = 0; i < rep.entries.size(); ++i) {
        const DriftCheckEntry& e = rep.entries[i];
        csv.row({CsvWriter::num(static_cast<long long>(i)), CsvWriter::num(e.w),
                 CsvWriter::num(e.pv), CsvWriter::num(e.ci_low), CsvWriter::num(e.ci_high),
                 CsvWriter::num(e.rhs), e.violated ? "1" : "0"});
    }
    if (rep.violations > 0)
        throw Error("drift-check: " + std::to_string(rep.violations) + " violations");
    return 0;
}

int run_schedule_check(const json& cfg, const std::string& out) {
    check_keys(cfg,
               {"experiment", "seed", "out", "schedule", "a", "horizon", "identity_n", "bounds"},
               "config");
    StepSchedule schedule = parse_schedule(need(cfg, "schedule", "config"));
    double a = num_at(cfg, "a", "config");
    long long horizon = static_cast<long long>(num_or(cfg, "horizon", 1000000));

    std::ofstream os(out);
    if (!os) throw IoError("cannot open output file: " + out);
    A5Report a5 = validate_A5(schedule, a, horizon);
    os << fmt_kv("a5.minimal_c_alpha", a5.minimal_c_alpha);
    os << fmt_kv("a5.passes", a5.passes ? 1 : 0);
    if (schedule.kind() == StepSchedule::Kind::Constant) {
        os << "a6.not_applicable=1\n";
    } else if (schedule.square_summable()) {
        A6Report a6 = validate_A6(schedule, a, std::min<long long>(horizon, 20000));
        os << fmt_kv("a6.minimal_c_alpha", a6.minimal_c_alpha);
        os << fmt_kv("a6.ratio_bound", a6.ratio_bound);
        os << fmt_kv("a6.passes", a6.passes ? 1 : 0);
    } else {
        os << "a6.square_summable=0\n";
    }
    long long idn = static_cast<long long>(num_or(cfg, "identity_n", 50));
    if (schedule.alpha(0) < 1.0 / a) {
        SumIdentityReport idrep = weighted_sum_identity(schedule, a, idn);
        os << fmt_kv("identity.lhs", idrep.lhs);
        os << fmt_kv("identity.rhs", idrep.rhs);
        os << fmt_kv("identity.gap", idrep.gap);
        if (idrep.gap > 1e-12) throw Error("schedule-check: identity gap above 1e-12");
    }
    if (cfg.contains("bounds")) {
        const json& bj = cfg["bounds"];
        check_keys(bj, {"b", "p", "q", "n_max"}, "bounds");
        SumBoundReport br = weighted_sum_bounds(schedule, num_at(bj, "b", "bounds"),
                                                num_at(bj, "p", "bounds"),
                                                num_or(bj, "q", 0.0),
                                                static_cast<long long>(num_at(bj, "n_max", "bounds")));
        os << fmt_kv("bounds.sum", br.sum_value);
        os << fmt_kv("bounds.bound", br.bound);
        os << fmt_kv("bounds.holds", br.holds ? 1 : 0);
        if (!br.holds) throw Error("schedule-check: weighted sum bound violated");
    }
    return 0;
}

json apply_override(json config, const std::string& kv) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("override must look like key=value: " + kv);
    std::string path = kv.substr(0, eq);
    std::string value = kv.substr(eq + 1);
    json* node = &config;
    std::stringstream ss(path);
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(ss, part, '.')) parts.push_back(part);
    if (parts.empty()) throw ConfigError("override has an empty key: " + kv);
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) node = &((*node)[parts[i]]);
    json parsed;
    try {
        parsed = json::parse(value);
    } catch (...) {
        parsed = value; // plain string leaf
    }
    (*node)[parts.back()] = parsed;
    return config;
}

} // namespace

json load_experiment_config(const RunOptions& opts) {
    std::ifstream in(opts.config_path);
    if (!in) throw ConfigError("cannot open config: " + opts.config_path);
    json config;
    try {
        config = json::parse(in, nullptr, true, true); // allow comments
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    for (const auto& kv : opts.overrides) config = apply_override(config, kv);
    if (!config.contains("experiment") || !config["experiment"].is_string())
        throw ConfigError("config: missing required key 'experiment'");
    return config;
}

int run_experiment(const json& config, const RunOptions& opts) {
    std::string experiment = config.at("experiment").get<std::string>();
    std::uint64_t seed = opts.seed_set ? opts.seed
                                       : static_cast<std::uint64_t>(config.value("seed", 1));
    long long replicas = opts.replicas > 0 ? opts.replicas : config.value("replicas", 0LL);
    std::string out = !opts.out_path.empty() ? opts.out_path : config.value("out", "");
    if (out.empty()) throw ConfigError("config: missing output path ('out' or --out)");

    if (experiment == "stability") return run_stability(config, seed, replicas, out, opts.threads);
    if (experiment == "lsa") return run_lsa_experiment(config, seed, replicas, out, opts.threads);
    if (experiment == "td") return run_td_experiment(config, seed, replicas, out, opts.threads);
    if (experiment == "counterexample") return run_counterexample(config, seed, out);
    if (experiment == "constants") return run_constants(config, out);
    if (experiment == "drift-check") return run_drift_check(config, seed, out);
    if (experiment == "schedule-check") return run_schedule_check(config, out);
    throw ConfigError("unknown experiment kind: " + experiment);
}

} // namespace lsalab
