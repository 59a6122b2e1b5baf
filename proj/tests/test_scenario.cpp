#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <decolab/bath.hpp>
#include <decolab/closed_form.hpp>
#include <decolab/rng.hpp>
#include <decolab/sampling.hpp>
#include <decolab/scenario.hpp>

using decolab::Observable;
using decolab::RunRecord;
using decolab::SamplingMode;
using decolab::ScenarioConfig;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempFile {
    std::string path;
    explicit TempFile(std::string p) : path(std::move(p)) {}
    ~TempFile() { std::remove(path.c_str()); }
};

ScenarioConfig small(const std::string& name) {
    ScenarioConfig cfg;
    cfg.scenario = name;
    cfg.n_env = 5;
    cfg.steps = 8;
    cfg.t_max = 3.0;
    cfg.runs = 2;
    return cfg;
}

}  // namespace

TEST_CASE("defaults are the documented ones") {
    const ScenarioConfig cfg;
    REQUIRE(cfg.n_env == 10);
    REQUIRE(cfg.t_max == 10.0);
    REQUIRE(cfg.steps == 100);
    REQUIRE(cfg.seed == 42);
    REQUIRE(cfg.lam == 0.2);
    REQUIRE(cfg.runs == 1);
    REQUIRE(cfg.sampling == SamplingMode::complex_square);
    REQUIRE(cfg.observable == Observable::magnitude);
    REQUIRE(cfg.basis_theta == 0.0);
    REQUIRE(cfg.out_path.empty());
}

TEST_CASE("key-value assignment covers every field") {
    ScenarioConfig cfg;
    decolab::apply_key_value(cfg, "scenario", "dfs_demo");
    decolab::apply_key_value(cfg, "n_env", "25");
    decolab::apply_key_value(cfg, "t_max", "3.5");
    decolab::apply_key_value(cfg, "steps", "50");
    decolab::apply_key_value(cfg, "seed", "18446744073709551615");
    decolab::apply_key_value(cfg, "lam", "0.4");
    decolab::apply_key_value(cfg, "runs", "12");
    decolab::apply_key_value(cfg, "sampling", "real_unit");
    decolab::apply_key_value(cfg, "observable", "real_part");
    decolab::apply_key_value(cfg, "basis_theta", "0.25");
    decolab::apply_key_value(cfg, "out_path", "somewhere.csv");
    REQUIRE(cfg.scenario == "dfs_demo");
    REQUIRE(cfg.n_env == 25);
    REQUIRE(cfg.t_max == 3.5);
    REQUIRE(cfg.steps == 50);
    REQUIRE(cfg.seed == 18446744073709551615ULL);
    REQUIRE(cfg.lam == 0.4);
    REQUIRE(cfg.runs == 12);
    REQUIRE(cfg.sampling == SamplingMode::real_unit);
    REQUIRE(cfg.observable == Observable::real_part);
    REQUIRE(cfg.basis_theta == 0.25);
    REQUIRE(cfg.out_path == "somewhere.csv");
}

TEST_CASE("malformed values are rejected with the key named") {
    ScenarioConfig cfg;
    REQUIRE_THROWS_AS(decolab::apply_key_value(cfg, "steps", "abc"), std::invalid_argument);
    REQUIRE_THROWS_AS(decolab::apply_key_value(cfg, "steps", "-4"), std::invalid_argument);
    REQUIRE_THROWS_AS(decolab::apply_key_value(cfg, "t_max", "1.5x"), std::invalid_argument);
    REQUIRE_THROWS_AS(decolab::apply_key_value(cfg, "observable", "phase"),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(decolab::apply_key_value(cfg, "sampling", "cube"), std::invalid_argument);
    REQUIRE_THROWS_AS(decolab::apply_key_value(cfg, "frobnicate", "1"), std::invalid_argument);
}

TEST_CASE("config files layer over a base and tolerate comments") {
    const TempFile tmp("tmp_test_scenario.cfg");
    {
        std::ofstream out(tmp.path);
        out << "# base settings\n"
               "scenario = coherence_vs_t   # inline comment\n"
               "\n"
               "n_env= 7\n"
               " lam =0.5\n";
    }
    ScenarioConfig base;
    base.seed = 99;
    const ScenarioConfig cfg = decolab::load_config_file(tmp.path, base);
    REQUIRE(cfg.scenario == "coherence_vs_t");
    REQUIRE(cfg.n_env == 7);
    REQUIRE(cfg.lam == 0.5);
    REQUIRE(cfg.seed == 99);  // untouched by the file
}

TEST_CASE("config file errors are explicit") {
    REQUIRE_THROWS_AS(decolab::load_config_file("definitely_missing.cfg"), std::runtime_error);
    const TempFile tmp("tmp_test_scenario_bad.cfg");
    {
        std::ofstream out(tmp.path);
        out << "just words\n";
    }
    REQUIRE_THROWS_AS(decolab::load_config_file(tmp.path), std::invalid_argument);
}

TEST_CASE("config validation rejects out-of-range settings") {
    ScenarioConfig cfg = small("coherence_vs_t");
    REQUIRE_NOTHROW(decolab::validate_config(cfg));
    cfg.scenario = "nope";
    REQUIRE_THROWS_AS(decolab::validate_config(cfg), std::invalid_argument);
    cfg = small("coherence_vs_t");
    cfg.steps = 0;
    REQUIRE_THROWS_AS(decolab::validate_config(cfg), std::invalid_argument);
    cfg = small("coherence_vs_t");
    cfg.runs = 0;
    REQUIRE_THROWS_AS(decolab::validate_config(cfg), std::invalid_argument);
    cfg = small("coherence_vs_t");
    cfg.t_max = -1.0;
    REQUIRE_THROWS_AS(decolab::validate_config(cfg), std::invalid_argument);
    cfg = small("coherence_vs_t");
    cfg.lam = 0.0;
    REQUIRE_THROWS_AS(decolab::validate_config(cfg), std::invalid_argument);
}

TEST_CASE("the CSV image matches the written file, header first, LF only") {
    ScenarioConfig cfg = small("coherence_vs_t");
    cfg.seed = 7;
    cfg.out_path = "tmp_test_scn_schema.csv";
    const TempFile tmp(cfg.out_path);
    const RunRecord rec = decolab::run_scenario(cfg);

    REQUIRE(rec.csv == slurp(cfg.out_path));
    REQUIRE(rec.csv.find('\r') == std::string::npos);
    REQUIRE(rec.csv.rfind("# decoherence-lab v1, scenario=coherence_vs_t, seed=7, "
                          "observable=magnitude\n", 0) == 0);

    std::istringstream lines(rec.csv);
    std::string line;
    std::getline(lines, line);  // schema comment
    std::getline(lines, line);
    REQUIRE(line == "t,coherence");
    REQUIRE(rec.columns == std::vector<std::string>{"t", "coherence"});
    REQUIRE(rec.rows.size() == cfg.steps + 1);
    REQUIRE(rec.run_seeds == std::vector<std::uint64_t>{7, 8});
    REQUIRE(rec.wall_seconds >= 0.0);

    // Endpoint-inclusive uniform grid.
    REQUIRE(rec.rows.front()[0] == "0");
    REQUIRE(rec.rows.front()[1] == "1");
    REQUIRE(rec.rows.back()[0] == "3");
}

TEST_CASE("re-running a config reproduces the bytes exactly") {
    for (const std::string name : {"coherence_vs_t", "ensemble_average", "dfs_demo"}) {
        ScenarioConfig cfg = small(name);
        cfg.runs = 8;  // exercise the concurrent path
        cfg.basis_theta = 0.6;
        cfg.out_path = "tmp_test_scn_rerun_a.csv";
        const TempFile ta(cfg.out_path);
        const RunRecord a = decolab::run_scenario(cfg);
        cfg.out_path = "tmp_test_scn_rerun_b.csv";
        const TempFile tb(cfg.out_path);
        const RunRecord b = decolab::run_scenario(cfg);
        REQUIRE(a.csv == b.csv);
        REQUIRE(slurp(ta.path) == slurp(tb.path));
    }
}

TEST_CASE("the ensemble mean is the run-ordered arithmetic mean of the seeds") {
    ScenarioConfig cfg = small("coherence_vs_t");
    cfg.runs = 4;
    cfg.out_path = "tmp_test_scn_mean.csv";
    const TempFile tmp(cfg.out_path);
    const RunRecord rec = decolab::run_scenario(cfg);

    for (std::size_t k = 0; k <= cfg.steps; ++k) {
        const double t = cfg.t_max * static_cast<double>(k) / static_cast<double>(cfg.steps);
        double sum = 0.0;
        for (std::size_t run = 0; run < cfg.runs; ++run) {
            decolab::SplitMix64 rng(cfg.seed + run);
            const auto env = decolab::sample_environment(rng, cfg.n_env, cfg.sampling, cfg.lam);
            sum += std::abs(decolab::coherence_factor(env, t));
        }
        const double mean = sum * (1.0 / static_cast<double>(cfg.runs));
        REQUIRE(rec.rows[k][1] == decolab::format_float(mean));
    }
}

TEST_CASE("coherence_vs_n walks environment prefixes at unit time") {
    ScenarioConfig cfg = small("coherence_vs_n");
    cfg.runs = 1;
    cfg.out_path = "tmp_test_scn_vsn.csv";
    const TempFile tmp(cfg.out_path);
    const RunRecord rec = decolab::run_scenario(cfg);
    REQUIRE(rec.columns == std::vector<std::string>{"n", "coherence"});
    REQUIRE(rec.rows.size() == cfg.n_env + 1);
    REQUIRE(rec.rows[0][0] == "0");
    REQUIRE(rec.rows[0][1] == "1");  // no environment, no decoherence

    decolab::SplitMix64 rng(cfg.seed);
    auto env = decolab::sample_environment(rng, cfg.n_env, cfg.sampling, cfg.lam);
    env.spins.resize(3);
    REQUIRE(rec.rows[3][1] ==
            decolab::format_float(std::abs(decolab::coherence_factor(env, 1.0))));
}

TEST_CASE("surface rows sweep n outer, t inner") {
    ScenarioConfig cfg = small("surface_n_t");
    cfg.out_path = "tmp_test_scn_surface.csv";
    const TempFile tmp(cfg.out_path);
    const RunRecord rec = decolab::run_scenario(cfg);
    REQUIRE(rec.columns == std::vector<std::string>{"n", "t", "coherence"});
    REQUIRE(rec.rows.size() == (cfg.n_env + 1) * (cfg.steps + 1));
    for (std::size_t k = 0; k <= cfg.steps; ++k) {
        REQUIRE(rec.rows[k][0] == "0");
        REQUIRE(rec.rows[k][2] == "1");  // the empty prefix never decoheres
    }
    REQUIRE(rec.rows[cfg.steps + 1][0] == "1");
}

TEST_CASE("finite_vs_infinite pairs the sampled curve with the analytic law") {
    ScenarioConfig cfg = small("finite_vs_infinite");
    cfg.n_env = 40;
    cfg.runs = 4;
    cfg.out_path = "tmp_test_scn_fvi.csv";
    const TempFile tmp(cfg.out_path);
    const RunRecord rec = decolab::run_scenario(cfg);
    REQUIRE(rec.columns == std::vector<std::string>{"t", "finite", "analytic"});
    REQUIRE(rec.rows[0][1] == "1");
    for (std::size_t k = 0; k <= cfg.steps; ++k) {
        const double t = cfg.t_max * static_cast<double>(k) / static_cast<double>(cfg.steps);
        REQUIRE(rec.rows[k][2] ==
                decolab::format_float(decolab::analytic_coherence(t, cfg.lam)));
    }
}

TEST_CASE("single-qubit topography keeps magnitudes flat and real parts moving") {
    ScenarioConfig cfg = small("dm_topography_1q");
    cfg.n_env = 10;
    cfg.steps = 40;
    cfg.t_max = 10.0;
    cfg.runs = 1;
    cfg.out_path = "tmp_test_scn_topo1.csv";
    const TempFile tmp(cfg.out_path);

    const RunRecord mag = decolab::run_scenario(cfg);
    REQUIRE(mag.columns ==
            std::vector<std::string>{"t", "e00", "e01", "e10", "e11"});
    for (const auto& row : mag.rows) {
        REQUIRE(std::abs(std::stod(row[1]) - 0.5) < 1e-12);
        REQUIRE(std::abs(std::stod(row[2]) - 0.5) < 1e-12);  // z eigenstates: |r| = 1
        REQUIRE(std::abs(std::stod(row[4]) - 0.5) < 1e-12);
    }

    cfg.observable = Observable::real_part;
    const RunRecord re = decolab::run_scenario(cfg);
    double lo = 1.0, hi = -1.0;
    for (const auto& row : re.rows) {
        const double v = std::stod(row[2]);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    REQUIRE(hi - lo > 0.1);  // the measurable part oscillates
}

TEST_CASE("two-qubit topography pins the protected central element") {
    ScenarioConfig cfg = small("dm_topography_2q");
    cfg.out_path = "tmp_test_scn_topo2.csv";
    const TempFile tmp(cfg.out_path);
    const RunRecord rec = decolab::run_scenario(cfg);
    REQUIRE(rec.columns.size() == 17);
    REQUIRE(rec.columns[1] == "e00");
    REQUIRE(rec.columns[16] == "e33");
    const std::size_t e12 = 7;  // "t" plus row-major offset of (1,2)
    REQUIRE(rec.columns[e12] == "e12");
    for (const auto& row : rec.rows)
        REQUIRE(std::abs(std::stod(row[e12]) - 0.25) < 1e-12);
}

TEST_CASE("the bell table reproduces the basis-change rows") {
    ScenarioConfig cfg = small("bell_table");
    cfg.steps = 6;
    cfg.out_path = "tmp_test_scn_bell.csv";
    const TempFile tmp(cfg.out_path);
    const RunRecord rec = decolab::run_scenario(cfg);
    REQUIRE(rec.columns.size() == 17);
    REQUIRE(rec.rows.size() == cfg.steps + 1);
    REQUIRE(rec.run_seeds == std::vector<std::uint64_t>{cfg.seed});

    const double inv = 1.0 / std::sqrt(2.0);
    for (std::size_t k = 0; k <= cfg.steps; ++k) {
        const auto& row = rec.rows[k];
        const double theta = std::stod(row[0]);
        // beta_01 block: (sin, cos, cos, -sin)/sqrt(2).
        REQUIRE(std::abs(std::stod(row[5]) - std::sin(theta) * inv) < 1e-14);
        REQUIRE(std::abs(std::stod(row[6]) - std::cos(theta) * inv) < 1e-14);
        // The singlet block never moves.
        REQUIRE(std::abs(std::stod(row[14]) - inv) < 1e-14);
        REQUIRE(std::abs(std::stod(row[15]) + inv) < 1e-14);
    }
    REQUIRE(std::abs(std::stod(rec.rows.back()[0]) - std::numbers::pi) < 1e-14);
}

TEST_CASE("dfs_demo holds the singlet flat in the z basis") {
    ScenarioConfig cfg = small("dfs_demo");
    cfg.out_path = "tmp_test_scn_dfs.csv";
    const TempFile tmp(cfg.out_path);
    const RunRecord rec = decolab::run_scenario(cfg);
    REQUIRE(rec.columns ==
            std::vector<std::string>{"t", "singlet_fidelity", "triplet_fidelity",
                                     "singlet_central", "triplet_central"});
    for (const auto& row : rec.rows) {
        REQUIRE(std::abs(std::stod(row[1]) - 1.0) < 1e-12);
        REQUIRE(std::abs(std::stod(row[3]) - 1.0) < 1e-12);
    }
}

TEST_CASE("reduce_demo emits an arrowhead whose spectrum matches the original") {
    ScenarioConfig cfg = small("reduce_demo");
    cfg.out_path = "tmp_test_scn_reduce.csv";
    const TempFile tmp(cfg.out_path);
    const RunRecord rec = decolab::run_scenario(cfg);
    REQUIRE(rec.columns == std::vector<std::string>{"kind", "i", "j", "re", "im"});
    const std::size_t n = cfg.n_env + 1;
    REQUIRE(rec.rows.size() == n * n + 2 * n);

    std::vector<double> orig, arrow;
    for (const auto& row : rec.rows) {
        if (row[0] == "spectrum_original") orig.push_back(std::stod(row[3]));
        if (row[0] == "spectrum_arrowhead") arrow.push_back(std::stod(row[3]));
    }
    REQUIRE(orig.size() == n);
    REQUIRE(arrow.size() == n);
    for (std::size_t k = 0; k < n; ++k) REQUIRE(std::abs(orig[k] - arrow[k]) < 1e-10);
}

TEST_CASE("an empty output path defaults to the scenario name") {
    ScenarioConfig cfg = small("bell_table");
    cfg.steps = 2;
    const TempFile tmp("bell_table.csv");
    const RunRecord rec = decolab::run_scenario(cfg);
    REQUIRE(rec.config.out_path == "bell_table.csv");
    REQUIRE(slurp("bell_table.csv") == rec.csv);
}

TEST_CASE("an unwritable output path is a runtime error") {
    ScenarioConfig cfg = small("bell_table");
    cfg.out_path = "missing_dir_for_test/out.csv";
    REQUIRE_THROWS_AS(decolab::run_scenario(cfg), std::runtime_error);
}
