#pragma once

// Config-driven experiment runner. Every scenario is a pure function of its
// ScenarioConfig: per-run random streams are derived as seed + run_index, all
// floats are printed with 17 significant digits, and ensemble assembly is
// order-restoring, so the same config yields byte-identical CSV regardless
// of scheduling.
//
// CSV schema: first line
//   # decoherence-lab v1, scenario=<name>, seed=<n>, observable=<o>
// then a column-header row, then data rows; UTF-8, LF line endings.
//
// Coupling scale: scenarios that probe a sampled environment directly
// (coherence_vs_*, surface_n_t, dm_topography_*, dfs_demo, reduce_demo) draw
// each coupling with standard deviation sqrt(2 * lam). The two scenarios that
// compare against the infinite-bath law exp(-4 lam t^2) (finite_vs_infinite,
// ensemble_average) spread the same bath over the environment, drawing each
// of the n spins with variance 2 * lam / n so the aggregate width stays lam;
// that is the discretization under which finite runs converge to the law.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <future>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "bath.hpp"
#include "closed_form.hpp"
#include "coupling.hpp"
#include "sampling.hpp"
#include "spin.hpp"

namespace decolab {

inline constexpr const char* schema_version = "decoherence-lab v1";

enum class Observable { magnitude, real_part };

inline const char* to_string(Observable o) {
    return o == Observable::magnitude ? "magnitude" : "real_part";
}

inline Observable observable_from_string(const std::string& s) {
    if (s == "magnitude") return Observable::magnitude;
    if (s == "real_part") return Observable::real_part;
    throw std::invalid_argument("observable must be magnitude or real_part, got '" + s + "'");
}

inline double apply_observable(Observable o, cplx v) {
    return o == Observable::magnitude ? std::abs(v) : v.real();
}

struct ScenarioConfig {
    std::string scenario;
    std::size_t n_env = 10;
    double t_max = 10.0;
    std::size_t steps = 100;
    std::uint64_t seed = 42;
    double lam = 0.2;
    std::size_t runs = 1;
    SamplingMode sampling = SamplingMode::complex_square;
    Observable observable = Observable::magnitude;
    double basis_theta = 0.0;
    std::string out_path;  // empty: "<scenario>.csv"
};

inline const std::vector<std::string>& scenario_names() {
    static const std::vector<std::string> names{
        "coherence_vs_n", "coherence_vs_t",   "surface_n_t",      "finite_vs_infinite",
        "ensemble_average", "dm_topography_1q", "dm_topography_2q", "bell_table",
        "dfs_demo",         "reduce_demo"};
    return names;
}

inline void validate_config(const ScenarioConfig& cfg) {
    const auto& names = scenario_names();
    bool known = false;
    for (const std::string& n : names) known = known || (n == cfg.scenario);
    if (!known)
        throw std::invalid_argument("config: unknown scenario '" + cfg.scenario + "'");
    if (cfg.steps < 1) throw std::invalid_argument("config: steps must be >= 1");
    if (cfg.runs < 1) throw std::invalid_argument("config: runs must be >= 1");
    if (!(cfg.t_max > 0.0) || !std::isfinite(cfg.t_max))
        throw std::invalid_argument("config: t_max must be positive and finite");
    if (!(cfg.lam > 0.0) || !std::isfinite(cfg.lam))
        throw std::invalid_argument("config: lam must be positive and finite");
    if (!std::isfinite(cfg.basis_theta))
        throw std::invalid_argument("config: basis_theta must be finite");
}

struct RunRecord {
    ScenarioConfig config;                        // echo, with the effective out_path
    std::vector<std::uint64_t> run_seeds;         // seed + run_index
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;   // cells exactly as written
    std::string csv;                              // full file image
    double wall_seconds = 0.0;
};

inline std::string format_float(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// --- config file: flat "key = value" lines, '#' comments ------------------

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& s, const std::string& key) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad value '" + s + "' for " + key);
    }
    if (pos != s.size())
        throw std::invalid_argument("config: bad value '" + s + "' for " + key);
    return v;
}

inline std::uint64_t parse_uint(const std::string& s, const std::string& key) {
    std::size_t pos = 0;
    std::uint64_t v = 0;
    try {
        if (s.find('-') != std::string::npos) throw std::invalid_argument(s);
        v = std::stoull(s, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad value '" + s + "' for " + key);
    }
    if (pos != s.size())
        throw std::invalid_argument("config: bad value '" + s + "' for " + key);
    return v;
}

}  // namespace detail

inline void apply_key_value(ScenarioConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "scenario") cfg.scenario = value;
    else if (key == "n_env") cfg.n_env = static_cast<std::size_t>(detail::parse_uint(value, key));
    else if (key == "t_max") cfg.t_max = detail::parse_double(value, key);
    else if (key == "steps") cfg.steps = static_cast<std::size_t>(detail::parse_uint(value, key));
    else if (key == "seed") cfg.seed = detail::parse_uint(value, key);
    else if (key == "lam") cfg.lam = detail::parse_double(value, key);
    else if (key == "runs") cfg.runs = static_cast<std::size_t>(detail::parse_uint(value, key));
    else if (key == "sampling") cfg.sampling = sampling_from_string(value);
    else if (key == "observable") cfg.observable = observable_from_string(value);
    else if (key == "basis_theta") cfg.basis_theta = detail::parse_double(value, key);
    else if (key == "out_path") cfg.out_path = value;
    else throw std::invalid_argument("config: unknown key '" + key + "'");
}

inline ScenarioConfig load_config_file(const std::string& path, ScenarioConfig base = {}) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot read '" + path + "'");
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: expected 'key = value', got '" + line + "'");
        apply_key_value(base, detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
    }
    return base;
}

// --- scenario internals ----------------------------------------------------

namespace detail {

inline std::vector<double> time_grid(double t_max, std::size_t steps) {
    std::vector<double> t(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k)
        t[k] = t_max * static_cast<double>(k) / static_cast<double>(steps);
    return t;
}

// Runs `runs` independent replicas (seed + k) concurrently and averages their
// numeric series element-wise, accumulating in run order so the result does
// not depend on scheduling.
template <class OneRun>
std::vector<std::vector<double>> ensemble_mean(const ScenarioConfig& cfg, OneRun&& one_run,
                                               std::vector<std::uint64_t>& run_seeds) {
    run_seeds.clear();
    for (std::size_t k = 0; k < cfg.runs; ++k) run_seeds.push_back(cfg.seed + k);

    std::vector<std::vector<std::vector<double>>> per_run(cfg.runs);
    const std::size_t workers = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    for (std::size_t base = 0; base < cfg.runs; base += workers) {
        const std::size_t hi = std::min(cfg.runs, base + workers);
        std::vector<std::future<std::vector<std::vector<double>>>> batch;
        for (std::size_t k = base; k < hi; ++k)
            batch.push_back(std::async(std::launch::async,
                                       [&one_run, seed = run_seeds[k]] { return one_run(seed); }));
        for (std::size_t k = base; k < hi; ++k) per_run[k] = batch[k - base].get();
    }

    std::vector<std::vector<double>> mean = std::move(per_run[0]);
    for (std::size_t k = 1; k < cfg.runs; ++k)
        for (std::size_t i = 0; i < mean.size(); ++i)
            for (std::size_t j = 0; j < mean[i].size(); ++j) mean[i][j] += per_run[k][i][j];
    const double inv = 1.0 / static_cast<double>(cfg.runs);
    for (auto& row : mean)
        for (double& v : row) v *= inv;
    return mean;
}

inline EnvironmentSpec environment_prefix(const EnvironmentSpec& env, std::size_t n) {
    EnvironmentSpec out;
    out.basis = env.basis;
    out.spins.assign(env.spins.begin(), env.spins.begin() + n);
    return out;
}

// Coherence magnitudes/real parts on the time grid, cumulative in n:
// row n holds the series of the first n spins.
inline std::vector<std::vector<double>> coherence_surface(const EnvironmentSpec& env,
                                                          const std::vector<double>& grid,
                                                          Observable obs) {
    std::vector<std::vector<double>> vals(env.spins.size() + 1,
                                          std::vector<double>(grid.size()));
    for (std::size_t k = 0; k < grid.size(); ++k) {
        cplx r{1.0};
        vals[0][k] = apply_observable(obs, r);
        for (std::size_t i = 0; i < env.spins.size(); ++i) {
            const EnvSpin& s = env.spins[i];
            const double delta = std::norm(s.state.alpha) - std::norm(s.state.beta);
            r *= coherence_step(2.0 * s.omega * grid[k], delta);
            vals[i + 1][k] = apply_observable(obs, r);
        }
    }
    return vals;
}

inline EnvironmentSpec ground_state_environment(SplitMix64& rng, std::size_t n, double lam) {
    EnvironmentSpec env;
    env.spins.reserve(n);
    const double sd = std::sqrt(2.0 * lam);
    for (std::size_t i = 0; i < n; ++i)
        env.spins.push_back({rng.gaussian(0.0, sd), QubitState{1.0, 0.0}});
    return env;
}

}  // namespace detail

// --- run_scenario ----------------------------------------------------------

inline RunRecord run_scenario(const ScenarioConfig& input) {
    validate_config(input);
    const auto t_start = std::chrono::steady_clock::now();

    RunRecord rec;
    rec.config = input;
    if (rec.config.out_path.empty()) rec.config.out_path = input.scenario + ".csv";
    const ScenarioConfig& cfg = rec.config;

    const std::vector<double> grid = detail::time_grid(cfg.t_max, cfg.steps);
    auto add_row = [&rec](std::vector<std::string> cells) { rec.rows.push_back(std::move(cells)); };

    if (cfg.scenario == "coherence_vs_n") {
        // Coherence left after the first n spins, at t = 1.
        auto one_run = [&cfg](std::uint64_t seed) {
            SplitMix64 rng(seed);
            const EnvironmentSpec env = sample_environment(rng, cfg.n_env, cfg.sampling, cfg.lam);
            std::vector<std::vector<double>> vals(cfg.n_env + 1, std::vector<double>(1));
            for (std::size_t n = 0; n <= cfg.n_env; ++n)
                vals[n][0] = apply_observable(
                    cfg.observable, coherence_factor(detail::environment_prefix(env, n), 1.0));
            return vals;
        };
        const auto mean = detail::ensemble_mean(cfg, one_run, rec.run_seeds);
        rec.columns = {"n", "coherence"};
        for (std::size_t n = 0; n <= cfg.n_env; ++n)
            add_row({std::to_string(n), format_float(mean[n][0])});

    } else if (cfg.scenario == "coherence_vs_t") {
        auto one_run = [&cfg, &grid](std::uint64_t seed) {
            SplitMix64 rng(seed);
            const EnvironmentSpec env = sample_environment(rng, cfg.n_env, cfg.sampling, cfg.lam);
            const auto surface = detail::coherence_surface(env, grid, cfg.observable);
            return std::vector<std::vector<double>>{surface.back()};
        };
        const auto mean = detail::ensemble_mean(cfg, one_run, rec.run_seeds);
        rec.columns = {"t", "coherence"};
        for (std::size_t k = 0; k < grid.size(); ++k)
            add_row({format_float(grid[k]), format_float(mean[0][k])});

    } else if (cfg.scenario == "surface_n_t") {
        auto one_run = [&cfg, &grid](std::uint64_t seed) {
            SplitMix64 rng(seed);
            const EnvironmentSpec env = sample_environment(rng, cfg.n_env, cfg.sampling, cfg.lam);
            return detail::coherence_surface(env, grid, cfg.observable);
        };
        const auto mean = detail::ensemble_mean(cfg, one_run, rec.run_seeds);
        rec.columns = {"n", "t", "coherence"};
        for (std::size_t n = 0; n <= cfg.n_env; ++n)
            for (std::size_t k = 0; k < grid.size(); ++k)
                add_row({std::to_string(n), format_float(grid[k]), format_float(mean[n][k])});

    } else if (cfg.scenario == "finite_vs_infinite" || cfg.scenario == "ensemble_average") {
        if (cfg.n_env < 1)
            throw std::invalid_argument("config: " + cfg.scenario + " requires n_env >= 1");
        // Spread the bath over the environment: per-spin variance 2*lam/n.
        const double lam_spin = cfg.lam / static_cast<double>(cfg.n_env);
        auto one_run = [&cfg, &grid, lam_spin](std::uint64_t seed) {
            SplitMix64 rng(seed);
            const EnvironmentSpec env = sample_environment(rng, cfg.n_env, cfg.sampling, lam_spin);
            const auto surface = detail::coherence_surface(env, grid, cfg.observable);
            return std::vector<std::vector<double>>{surface.back()};
        };
        const auto mean = detail::ensemble_mean(cfg, one_run, rec.run_seeds);
        const char* value_col = cfg.scenario == "finite_vs_infinite" ? "finite" : "mean_coherence";
        rec.columns = {"t", value_col, "analytic"};
        for (std::size_t k = 0; k < grid.size(); ++k)
            add_row({format_float(grid[k]), format_float(mean[0][k]),
                     format_float(analytic_coherence(grid[k], cfg.lam))});

    } else if (cfg.scenario == "dm_topography_1q") {
        // Environment of z ground states: the magnitude of the off-diagonal
        // stays 1 while its real part oscillates as a cosine product.
        const QubitState sys{1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)};
        auto one_run = [&cfg, &grid, &sys](std::uint64_t seed) {
            SplitMix64 rng(seed);
            const EnvironmentSpec env = detail::ground_state_environment(rng, cfg.n_env, cfg.lam);
            std::vector<std::vector<double>> vals(grid.size(), std::vector<double>(4));
            for (std::size_t k = 0; k < grid.size(); ++k) {
                const DensityMatrix rho = single_qubit_rdm(sys, env, grid[k]);
                for (std::size_t e = 0; e < 4; ++e)
                    vals[k][e] = apply_observable(cfg.observable, rho(e / 2, e % 2));
            }
            return vals;
        };
        const auto mean = detail::ensemble_mean(cfg, one_run, rec.run_seeds);
        rec.columns = {"t", "e00", "e01", "e10", "e11"};
        for (std::size_t k = 0; k < grid.size(); ++k)
            add_row({format_float(grid[k]), format_float(mean[k][0]), format_float(mean[k][1]),
                     format_float(mean[k][2]), format_float(mean[k][3])});

    } else if (cfg.scenario == "dm_topography_2q") {
        const double h = 0.5;
        const TwoQubitState sys{{h, h, h, h}};
        auto one_run = [&cfg, &grid, &sys](std::uint64_t seed) {
            SplitMix64 rng(seed);
            const TwoQubitEnvSpec env =
                collective_environment(detail::ground_state_environment(rng, cfg.n_env, cfg.lam));
            std::vector<std::vector<double>> vals(grid.size(), std::vector<double>(16));
            for (std::size_t k = 0; k < grid.size(); ++k) {
                const DensityMatrix rho = two_qubit_rdm(sys, env, grid[k]);
                for (std::size_t e = 0; e < 16; ++e)
                    vals[k][e] = apply_observable(cfg.observable, rho(e / 4, e % 4));
            }
            return vals;
        };
        const auto mean = detail::ensemble_mean(cfg, one_run, rec.run_seeds);
        rec.columns = {"t"};
        for (std::size_t r = 0; r < 4; ++r)
            for (std::size_t c = 0; c < 4; ++c)
                rec.columns.push_back("e" + std::to_string(r) + std::to_string(c));
        for (std::size_t k = 0; k < grid.size(); ++k) {
            std::vector<std::string> row{format_float(grid[k])};
            for (std::size_t e = 0; e < 16; ++e) row.push_back(format_float(mean[k][e]));
            add_row(std::move(row));
        }

    } else if (cfg.scenario == "bell_table") {
        // Bell-state coefficients in the theta basis, theta in [0, pi].
        rec.run_seeds = {cfg.seed};
        rec.columns = {"theta"};
        const char* bell_names[4] = {"b00", "b01", "b10", "b11"};
        const char* amp_names[4] = {"00", "01", "10", "11"};
        for (const char* b : bell_names)
            for (const char* a : amp_names)
                rec.columns.push_back(std::string(b) + "_" + a);
        for (std::size_t k = 0; k <= cfg.steps; ++k) {
            const double theta =
                std::numbers::pi * static_cast<double>(k) / static_cast<double>(cfg.steps);
            std::vector<std::string> row{format_float(theta)};
            for (int x = 0; x < 2; ++x)
                for (int y = 0; y < 2; ++y) {
                    const TwoQubitState rotated =
                        rotate_two_qubit(bell_state(x, y), BasisAngle{theta});
                    // The transform is real at phi = 0.
                    for (const cplx& amp : rotated.amps) row.push_back(format_float(amp.real()));
                }
            add_row(std::move(row));
        }

    } else if (cfg.scenario == "dfs_demo") {
        const TwoQubitState singlet = bell_state(1, 1);
        const TwoQubitState triplet = bell_state(0, 1);
        auto one_run = [&cfg, &grid, &singlet, &triplet](std::uint64_t seed) {
            SplitMix64 rng(seed);
            EnvironmentSpec base = sample_environment(rng, cfg.n_env, cfg.sampling, cfg.lam);
            base.basis = BasisAngle{cfg.basis_theta};
            const TwoQubitEnvSpec env = collective_environment(base);
            const CoherenceSeries cs = dfs_coherence(singlet, env, grid);
            const CoherenceSeries ct = dfs_coherence(triplet, env, grid);
            std::vector<std::vector<double>> vals(grid.size(), std::vector<double>(4));
            for (std::size_t k = 0; k < grid.size(); ++k) {
                vals[k][0] = fidelity(singlet, two_qubit_rdm(singlet, env, grid[k]));
                vals[k][1] = fidelity(triplet, two_qubit_rdm(triplet, env, grid[k]));
                vals[k][2] = apply_observable(cfg.observable, cs.values[k]);
                vals[k][3] = apply_observable(cfg.observable, ct.values[k]);
            }
            return vals;
        };
        const auto mean = detail::ensemble_mean(cfg, one_run, rec.run_seeds);
        rec.columns = {"t", "singlet_fidelity", "triplet_fidelity", "singlet_central",
                       "triplet_central"};
        for (std::size_t k = 0; k < grid.size(); ++k)
            add_row({format_float(grid[k]), format_float(mean[k][0]), format_float(mean[k][1]),
                     format_float(mean[k][2]), format_float(mean[k][3])});

    } else {  // reduce_demo
        if (cfg.n_env < 1)
            throw std::invalid_argument("config: reduce_demo requires n_env >= 1");
        rec.run_seeds = {cfg.seed};
        SplitMix64 rng(cfg.seed);
        const std::size_t n = cfg.n_env + 1;
        const double sd = std::sqrt(2.0 * cfg.lam);
        CouplingMatrix c(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) {
                if (i == j) {
                    c(i, i) = rng.gaussian(0.0, sd);
                } else {
                    c(i, j) = cplx{rng.gaussian(0.0, sd), rng.gaussian(0.0, sd)};
                    c(j, i) = std::conj(c(i, j));
                }
            }
        const ReducedCoupling red = many_to_one_reduce(c);
        const CouplingMatrix arrow = arrowhead_matrix(red);
        const std::vector<double> eig_orig = diagonalize_hermitian(c).values;
        const std::vector<double> eig_arrow = diagonalize_hermitian(arrow).values;
        rec.columns = {"kind", "i", "j", "re", "im"};
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                add_row({"arrowhead", std::to_string(i), std::to_string(j),
                         format_float(arrow(i, j).real()), format_float(arrow(i, j).imag())});
        for (std::size_t k = 0; k < n; ++k)
            add_row({"spectrum_original", std::to_string(k), "0", format_float(eig_orig[k]), "0"});
        for (std::size_t k = 0; k < n; ++k)
            add_row({"spectrum_arrowhead", std::to_string(k), "0", format_float(eig_arrow[k]), "0"});
    }

    // Assemble the CSV image and write it.
    std::string csv = "# ";
    csv += schema_version;
    csv += ", scenario=" + cfg.scenario;
    csv += ", seed=" + std::to_string(cfg.seed);
    csv += ", observable=" + std::string(to_string(cfg.observable));
    csv += "\n";
    for (std::size_t i = 0; i < rec.columns.size(); ++i) {
        if (i) csv += ",";
        csv += rec.columns[i];
    }
    csv += "\n";
    for (const auto& row : rec.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) csv += ",";
            csv += row[i];
        }
        csv += "\n";
    }
    rec.csv = std::move(csv);

    {
        std::ofstream out(rec.config.out_path, std::ios::binary);
        if (!out || !(out << rec.csv) || !out.flush())
            throw std::runtime_error("run_scenario: cannot write '" + rec.config.out_path + "'");
    }

    rec.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return rec;
}

}  // namespace decolab
