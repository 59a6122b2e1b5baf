// Command-line front end for the scenario runner.
//
//   decolab --version
//   decolab --scenario coherence_vs_t --n-env 12 --t-max 5 --out run.csv
//   decolab --config lab.cfg ensemble_average --runs 64
//
// Precedence: built-in defaults, then --config file, then flags. Subcommand
// names select the scenario; their options share the top-level flag set via
// fallthrough.

#include <cstdio>
#include <exception>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include <decolab/decolab.hpp>

namespace {

struct CliValues {
    std::optional<std::string> config;
    std::optional<std::string> scenario;
    std::optional<std::size_t> n_env;
    std::optional<double> t_max;
    std::optional<std::size_t> steps;
    std::optional<std::uint64_t> seed;
    std::optional<double> lam;
    std::optional<std::size_t> runs;
    std::optional<std::string> sampling;
    std::optional<std::string> observable;
    std::optional<double> theta;
    std::optional<std::string> out;
};

void add_options(CLI::App& app, CliValues& v) {
    app.add_option("--n-env", v.n_env, "Number of environment spins");
    app.add_option("--t-max", v.t_max, "End of the time grid");
    app.add_option("--steps", v.steps, "Grid intervals (rows = steps + 1)");
    app.add_option("--seed", v.seed, "Base seed; run k uses seed + k");
    app.add_option("--lambda", v.lam, "Bath width parameter");
    app.add_option("--runs", v.runs, "Ensemble size");
    app.add_option("--sampling", v.sampling, "complex_square or real_unit");
    app.add_option("--observable", v.observable, "magnitude or real_part");
    app.add_option("--theta", v.theta, "Measurement basis angle");
    app.add_option("--out", v.out, "Output CSV path");
}

void overlay(decolab::ScenarioConfig& cfg, const CliValues& v) {
    if (v.scenario) cfg.scenario = *v.scenario;
    if (v.n_env) cfg.n_env = *v.n_env;
    if (v.t_max) cfg.t_max = *v.t_max;
    if (v.steps) cfg.steps = *v.steps;
    if (v.seed) cfg.seed = *v.seed;
    if (v.lam) cfg.lam = *v.lam;
    if (v.runs) cfg.runs = *v.runs;
    if (v.sampling) cfg.sampling = decolab::sampling_from_string(*v.sampling);
    if (v.observable) cfg.observable = decolab::observable_from_string(*v.observable);
    if (v.theta) cfg.basis_theta = *v.theta;
    if (v.out) cfg.out_path = *v.out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spin-bath decoherence laboratory"};
    app.set_version_flag("--version", std::string(decolab::schema_version));

    CliValues top;
    app.add_option("--config", top.config, "Flat key = value config file");
    app.add_option("--scenario", top.scenario, "Scenario name");
    add_options(app, top);

    // One subcommand per scenario; each accepts the same flags.
    std::vector<std::pair<CLI::App*, CliValues>> subs;
    subs.reserve(decolab::scenario_names().size());
    for (const std::string& name : decolab::scenario_names()) {
        CLI::App* sub = app.add_subcommand(name, "Run the " + name + " scenario");
        sub->fallthrough();
        subs.emplace_back(sub, CliValues{});
        add_options(*sub, subs.back().second);
    }
    app.require_subcommand(0, 1);

    CLI11_PARSE(app, argc, argv);

    try {
        decolab::ScenarioConfig cfg;
        if (top.config) cfg = decolab::load_config_file(*top.config, cfg);
        overlay(cfg, top);
        for (auto& [sub, values] : subs)
            if (sub->parsed()) {
                cfg.scenario = sub->get_name();
                overlay(cfg, values);
            }
        if (cfg.scenario.empty())
            throw std::invalid_argument(
                "no scenario selected (use --scenario, a config file, or a subcommand)");

        const decolab::RunRecord rec = decolab::run_scenario(cfg);
        std::printf("%s: %zu rows -> %s (%.3f s)\n", rec.config.scenario.c_str(),
                    rec.rows.size(), rec.config.out_path.c_str(), rec.wall_seconds);
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
