#include "anthracnose/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

#include "anthracnose/discrete.hpp"
#include "anthracnose/particle.hpp"
#include "anthracnose/rng.hpp"

namespace anthracnose {

std::uint64_t cell_seed(std::uint64_t master, std::size_t index) {
    return derive_seed(master, 0x1000 + static_cast<std::uint64_t>(index));
}

std::vector<CellSpec> scenario_cells(const ScenarioConfig& cfg) {
    std::vector<CellSpec> cells;
    std::size_t idx = 0;
    for (double th : cfg.matrix.theta0)
        for (double v : cfg.matrix.v0)
            for (double rho : cfg.matrix.rho0) {
                cells.push_back(CellSpec{idx, th, v, rho, cell_seed(cfg.sim.seed, idx)});
                ++idx;
            }
    return cells;
}

Scenario simulate_scenario(const ScenarioConfig& cfg, const CellSpec& cell) {
    Scenario sc;
    sc.cell = cell;
    sc.sim = cfg.sim;
    sc.sim.seed = cell.seed;
    sc.sim.theta0 = cell.theta0;
    sc.sim.v0 = cell.v0;
    sc.sim.rho0 = cell.rho0;
    sc.truth = simulate_truth(sc.sim, cfg.params);
    sc.mean = integrate_mean_obs(sc.truth, cfg.params);
    sc.obs = simulate_observations(sc.mean, sc.sim, cfg.params);
    return sc;
}

namespace {

FilterSeries from_grid(GridFilterResult r) {
    return FilterSeries{std::move(r.times), std::move(r.mean), std::move(r.variance), std::move(r.log_zeta)};
}

}  // namespace

FilterSeries run_method(const Scenario& sc, const ScenarioConfig& cfg, Method method) {
    const auto& fc = cfg.filter;
    switch (method) {
        case Method::kZakai:
            return from_grid(run_grid_filter(sc.obs, cfg.params, fc.grid, ContinuousMethod::kZakai));
        case Method::kKushnerStratonovich:
            return from_grid(run_grid_filter(sc.obs, cfg.params, fc.grid, ContinuousMethod::kKushnerStratonovich));
        case Method::kDiscrete: {
            DiscreteFilterResult r = run_discrete_filter(sc.obs, cfg.params, fc.grid, fc.scheme, fc.dtau);
            return FilterSeries{std::move(r.times), std::move(r.mean), std::move(r.variance), std::move(r.log_zeta)};
        }
        case Method::kOracle: {
            ParticleFilterSettings ps;
            ps.n_particles = fc.particles;
            ps.seed = sc.cell.seed;
            ps.mean_mode = fc.grid.mean_mode;
            ps.prior = fc.grid.prior;
            ps.prior_mean = fc.grid.prior_mean;
            ps.prior_sd = fc.grid.prior_sd;
            ps.vartheta = cfg.sim.vartheta;
            ParticleFilterResult r = pf_run(sc.obs, cfg.params, ps);
            return FilterSeries{std::move(r.times), std::move(r.mean), std::move(r.variance), std::move(r.log_zeta)};
        }
    }
    throw ValidationError("methods", "unknown method");
}

FilterSeries prior_baseline(const ObsPath& obs, const ModelParams& p, const GridFilterSettings& settings) {
    const Grid grid = settings.grid();
    std::vector<double> values = normalize(grid, settings.initial_density(grid)).pi.values;
    FilterSeries out;
    FloorStats stats;
    auto record = [&](std::size_t k) {
        const PosteriorStats s = posterior_stats(grid, GridDensity{values, DensityKind::kNormalized});
        out.times.push_back(obs.times[k]);
        out.mean.push_back(s.mean);
        out.variance.push_back(s.variance);
        out.log_zeta.push_back(0.0);
    };
    record(0);
    for (std::size_t k = 0; k + 1 < obs.size(); ++k) {
        fokker_planck_advance(grid, values, obs.times[k], obs.times[k + 1] - obs.times[k], p,
                              settings.step.stencil, stats, settings.step.substep);
        values = normalize(grid, GridDensity{values, DensityKind::kUnnormalized}).pi.values;
        record(k + 1);
    }
    return out;
}

namespace {

std::size_t find_time(const std::vector<double>& times, double t) {
    const auto it = std::lower_bound(times.begin(), times.end(), t - 1e-9);
    if (it == times.end() || std::abs(*it - t) > 1e-9) throw std::invalid_argument("time grids are not aligned");
    return static_cast<std::size_t>(it - times.begin());
}

}  // namespace

ErrorStats error_vs_truth(const FilterSeries& f, const TruthPath& truth) {
    ErrorStats e;
    for (std::size_t r = 0; r < f.times.size(); ++r) {
        const double d = std::abs(f.mean[r] - truth.theta[find_time(truth.times, f.times[r])]);
        e.mae += d;
        e.max_err = std::max(e.max_err, d);
    }
    if (!f.times.empty()) e.mae /= static_cast<double>(f.times.size());
    return e;
}

double mae_between(const FilterSeries& a, const FilterSeries& b) {
    double s = 0.0;
    for (std::size_t r = 0; r < a.times.size(); ++r) s += std::abs(a.mean[r] - b.mean[find_time(b.times, a.times[r])]);
    return a.times.empty() ? 0.0 : s / static_cast<double>(a.times.size());
}

CompareSummary run_compare(const ScenarioConfig& cfg, const std::filesystem::path& out_dir) {
    cfg.validate();
    if (cfg.filter.methods.empty()) throw ValidationError("methods", "needs at least one method");
    std::filesystem::create_directories(out_dir);

    const std::vector<CellSpec> cells = scenario_cells(cfg);
    const auto& methods = cfg.filter.methods;
    std::vector<std::vector<CompareRow>> per_cell(cells.size());

    auto run_cell = [&](std::size_t c) {
        const Scenario sc = simulate_scenario(cfg, cells[c]);
        std::vector<FilterSeries> series;
        for (Method m : methods) series.push_back(run_method(sc, cfg, m));
        const auto oracle = std::find(methods.begin(), methods.end(), Method::kOracle);
        for (std::size_t i = 0; i < methods.size(); ++i) {
            CompareRow row;
            row.cell = cells[c];
            row.method = methods[i];
            row.error = error_vs_truth(series[i], sc.truth);
            if (oracle != methods.end() && methods[i] != Method::kOracle)
                row.mae_vs_oracle = mae_between(series[i], series[static_cast<std::size_t>(oracle - methods.begin())]);
            row.file = "cell" + std::to_string(cells[c].index) + "_" + method_name(methods[i]) + ".csv";
            write_run_csv(out_dir / row.file, sc.truth, sc.obs, series[i]);
            per_cell[c].push_back(std::move(row));
        }
    };

    std::size_t workers = cfg.threads != 0 ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, cells.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    auto worker = [&] {
        for (std::size_t c = next++; c < cells.size(); c = next++) {
            try {
                run_cell(c);
            } catch (...) {
                std::lock_guard lock(failure_mu);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t i = 1; i < workers; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);

    CompareSummary summary;
    for (auto& rows : per_cell)
        for (auto& r : rows) summary.rows.push_back(std::move(r));

    summary.summary_file = out_dir / "summary.csv";
    std::ofstream out(summary.summary_file, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + summary.summary_file.string());
    out << "cell,theta0,v0,rho0,seed,method,mae,max_err,mae_vs_oracle,file\n";
    for (const auto& r : summary.rows) {
        out << r.cell.index << ',' << format_double(r.cell.theta0) << ',' << format_double(r.cell.v0) << ','
            << format_double(r.cell.rho0) << ',' << r.cell.seed << ',' << method_name(r.method) << ','
            << format_double(r.error.mae) << ',' << format_double(r.error.max_err) << ','
            << (r.mae_vs_oracle ? format_double(*r.mae_vs_oracle) : std::string()) << ',' << r.file << '\n';
    }
    if (!out) throw std::runtime_error("write failed for " + summary.summary_file.string());
    return summary;
}

}  // namespace anthracnose
