#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "anthracnose/config.hpp"
#include "anthracnose/io.hpp"
#include "anthracnose/simulation.hpp"

namespace anthracnose {

struct CellSpec {
    std::size_t index = 0;
    double theta0 = 0.0;
    double v0 = 0.0;
    double rho0 = 0.0;
    std::uint64_t seed = 0;
};

/// Seed of scenario cell `index`; depends only on (master, index).
std::uint64_t cell_seed(std::uint64_t master, std::size_t index);

/// Cells in theta0-major order.
std::vector<CellSpec> scenario_cells(const ScenarioConfig& cfg);

struct Scenario {
    CellSpec cell;
    SimConfig sim;
    TruthPath truth;
    MeanObsPath mean;
    ObsPath obs;
};

Scenario simulate_scenario(const ScenarioConfig& cfg, const CellSpec& cell);

FilterSeries run_method(const Scenario& sc, const ScenarioConfig& cfg, Method method);

/// Posterior mean of the prior pushed forward by the Fokker-Planck operator
/// alone, ignoring every observation.
FilterSeries prior_baseline(const ObsPath& obs, const ModelParams& p, const GridFilterSettings& settings);

/// Mean and maximum absolute error of a posterior mean against the truth.
struct ErrorStats {
    double mae = 0.0;
    double max_err = 0.0;
};
ErrorStats error_vs_truth(const FilterSeries& f, const TruthPath& truth);
/// Mean absolute difference of two posterior means on the records of `a`.
double mae_between(const FilterSeries& a, const FilterSeries& b);

struct CompareRow {
    CellSpec cell;
    Method method = Method::kZakai;
    ErrorStats error;
    std::optional<double> mae_vs_oracle;
    std::string file;
};

struct CompareSummary {
    std::vector<CompareRow> rows;
    std::filesystem::path summary_file;
};

/// Simulates every scenario cell once and runs each configured method on the
/// same observation path. Writes cell<i>_<method>.csv per run and summary.csv.
CompareSummary run_compare(const ScenarioConfig& cfg, const std::filesystem::path& out_dir);

}  // namespace anthracnose
