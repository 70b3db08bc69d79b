#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "anthracnose/config.hpp"
#include "anthracnose/discrete.hpp"
#include "anthracnose/grid.hpp"
#include "anthracnose/io.hpp"
#include "anthracnose/pipeline.hpp"
#include "anthracnose/predictor.hpp"

namespace fs = std::filesystem;
using namespace anthracnose;

namespace {

constexpr const char* kOutEnv = "ANTHRACNOSE_OUT_DIR";

constexpr const char* kFooter = R"(Exit codes:
  0  success
  1  invalid arguments, configuration or parameter values, I/O failure
  2  numerical failure: the filter density collapsed to zero mass

Output directory: --out, else $ANTHRACNOSE_OUT_DIR, else the current directory.)";

struct Common {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--config", c.config, "Flat key = value configuration file")->check(CLI::ExistingFile);
    cmd->add_option("--seed", c.seed, "Master seed, overrides the config");
    cmd->add_option("--out", c.out, "Output directory");
}

ScenarioConfig load(const Common& c) {
    ScenarioConfig cfg = c.config.empty() ? parse_config("") : load_config(c.config);
    if (c.seed) cfg.sim.seed = *c.seed;
    return cfg;
}

fs::path out_dir(const Common& c) {
    fs::path dir = ".";
    if (!c.out.empty()) {
        dir = c.out;
    } else if (const char* env = std::getenv(kOutEnv); env && *env) {
        dir = env;
    }
    fs::create_directories(dir);
    return dir;
}

Scenario single_scenario(const ScenarioConfig& cfg) {
    return simulate_scenario(cfg, CellSpec{0, cfg.sim.theta0, cfg.sim.v0, cfg.sim.rho0, cfg.sim.seed});
}

std::size_t record_at(const ObsPath& obs, double tau) {
    const auto it = std::lower_bound(obs.times.begin(), obs.times.end(), tau - 1e-9);
    if (it == obs.times.end() || std::abs(*it - tau) > 1e-9)
        throw ValidationError("tau", "not an observation record time");
    return static_cast<std::size_t>(it - obs.times.begin());
}

void write_prediction_csv(const fs::path& path, const Grid& g, const std::vector<double>& posterior,
                          const std::vector<double>& predicted) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "x,posterior,predicted\n";
    for (std::size_t i = 0; i < g.size(); ++i)
        out << format_double(g.nodes[i]) << ',' << format_double(posterior[i]) << ','
            << format_double(predicted[i]) << '\n';
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

void report(const fs::path& p) { std::cout << p.string() << '\n'; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Nonlinear filtering for the lumped anthracnose model", "anthracnose"};
    app.footer(kFooter);
    app.require_subcommand(1);

    Common c;
    std::string method = "zakai";
    std::optional<double> tau, horizon, dtau, vartheta;
    std::optional<std::size_t> particles;

    auto* sim = app.add_subcommand("simulate", "Simulate truth and observations; writes path.csv");
    auto* filt = app.add_subcommand("filter", "Continuous grid filter; writes run_<method>.csv");
    filt->add_option("--method", method, "zakai or ks")->check(CLI::IsMember({"zakai", "ks"}));
    auto* pred = app.add_subcommand("predict", "Filter up to tau then predict; writes prediction.csv");
    pred->add_option("--tau", tau, "Prediction origin (a record time)");
    pred->add_option("--horizon", horizon, "Prediction horizon, >= 0");
    auto* disc = app.add_subcommand("discrete", "Discrete-time filter; writes run_discrete.csv");
    disc->add_option("--dtau", dtau, "Filter interval, a multiple of dt");
    disc->add_option("--vartheta", vartheta, "Theta-scheme implicitness in [0, 1]");
    auto* orc = app.add_subcommand("oracle", "Bootstrap particle filter; writes run_oracle.csv");
    orc->add_option("--particles", particles, "Number of particles, >= 100");
    auto* cmp = app.add_subcommand("compare", "Every scenario cell and method; writes cell CSVs and summary.csv");
    for (auto* cmd : {sim, filt, pred, disc, orc, cmp}) add_common(cmd, c);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        ScenarioConfig cfg = load(c);
        if (tau) cfg.filter.tau = *tau;
        if (horizon) cfg.filter.horizon = *horizon;
        if (dtau) cfg.filter.dtau = *dtau;
        if (vartheta) cfg.filter.scheme.vartheta = *vartheta;
        if (particles) cfg.filter.particles = *particles;
        cfg.validate();
        const fs::path dir = out_dir(c);

        if (*cmp) {
            const CompareSummary s = run_compare(cfg, dir);
            for (const auto& r : s.rows) report(dir / r.file);
            report(s.summary_file);
            return 0;
        }

        const Scenario sc = single_scenario(cfg);
        if (*sim) {
            write_path_csv(dir / "path.csv", sc.truth, sc.obs);
            report(dir / "path.csv");
        } else if (*filt) {
            const fs::path file = dir / ("run_" + method + ".csv");
            write_run_csv(file, sc.truth, sc.obs, run_method(sc, cfg, parse_method(method)));
            report(file);
        } else if (*disc) {
            write_run_csv(dir / "run_discrete.csv", sc.truth, sc.obs, run_method(sc, cfg, Method::kDiscrete));
            report(dir / "run_discrete.csv");
        } else if (*orc) {
            write_run_csv(dir / "run_oracle.csv", sc.truth, sc.obs, run_method(sc, cfg, Method::kOracle));
            report(dir / "run_oracle.csv");
        } else if (*pred) {
            if (cfg.filter.horizon < 0.0) throw ValidationError("horizon", "must be >= 0");
            const std::size_t stop = record_at(sc.obs, cfg.filter.tau);
            const Grid g = cfg.filter.grid.grid();
            const GridFilterCheckpoint cp = run_grid_filter_until(sc.obs, cfg.params, cfg.filter.grid, stop);
            const GridDensity predicted =
                predict(g, PredictionRequest{sc.obs.times[stop], cfg.filter.horizon, cp.state}, cfg.sim.dt,
                        cfg.params, cfg.filter.grid.step);
            write_prediction_csv(dir / "prediction.csv", g, normalize(g, cp.state.density).pi.values,
                                 predicted.values);
            report(dir / "prediction.csv");
        }
        return 0;
    } catch (const FilterCollapse& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
