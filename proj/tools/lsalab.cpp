#include <iostream>

#include <CLI11.hpp>

#include "lsalab/errors.hpp"
#include "lsalab/runner.hpp"

namespace {

int dispatch(const lsalab::RunOptions& opts) {
    try {
        nlohmann::json config = lsalab::load_experiment_config(opts);
        return lsalab::run_experiment(config, opts);
    } catch (const lsalab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 3;
    } catch (const lsalab::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "invariant violated: " << e.what() << "\n";
        return 2;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"lsalab: verification experiments for linear stochastic approximation "
                 "with Markovian noise"};
    app.require_subcommand(1);

    lsalab::RunOptions opts;
    const char* names[] = {"stability",      "lsa",       "td",            "counterexample",
                           "constants",      "drift-check", "schedule-check"};
    const char* descs[] = {
        "matrix-product moment estimation and envelope comparison",
        "LSA error decomposition moment estimation",
        "TD policy-evaluation experiment on a finite MRP",
        "exact forward-recurrence counterexample dynamic program",
        "evaluate all theoretical constants with dual-evaluation checking",
        "drift-condition certification on a state grid",
        "step-size assumption validators and summation lemmas"};
    for (int i = 0; i < 7; ++i) {
        CLI::App* sub = app.add_subcommand(names[i], descs[i]);
        sub->add_option("--config", opts.config_path, "experiment config (JSON)")->required();
        sub->add_option("--seed", [&opts](const std::vector<std::string>& v) {
            opts.seed = std::stoull(v[0]);
            opts.seed_set = true;
            return true;
        }, "master seed override");
        sub->add_option("--replicas", opts.replicas, "replica count override");
        sub->add_option("--out", opts.out_path, "output path override");
        sub->add_option("--threads", opts.threads, "worker threads (0 = hardware)");
        sub->add_option("--set", opts.overrides, "dotted-path config override key=value")
            ->take_all();
    }

    CLI11_PARSE(app, argc, argv);
    return dispatch(opts);
}
