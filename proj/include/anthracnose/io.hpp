#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "anthracnose/simulation.hpp"

namespace anthracnose {

/// Posterior summary of one filter run. `times` must be a subset of the
/// observation record times.
struct FilterSeries {
    std::vector<double> times;
    std::vector<double> mean;
    std::vector<double> variance;
    std::vector<double> log_zeta;
};

inline constexpr const char* kRunCsvHeader =
    "time,theta_true,v_true,rho_true,X,Y,post_mean,post_var,rel_abs_err,zeta";

/// Shortest text that reads back to the same double (at most 17 digits).
std::string format_double(double x);

/// One row per filter record. The zeta column holds log(zeta): the normalizer
/// itself overflows a double after a fraction of the horizon.
void write_run_csv(const std::filesystem::path& path, const TruthPath& truth, const ObsPath& obs,
                   const FilterSeries& filter);

/// Truth and observation paths, one row per record.
void write_path_csv(const std::filesystem::path& path, const TruthPath& truth, const ObsPath& obs);

/// Minimal CSV reader: header plus numeric rows; text cells read as NaN.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    std::size_t column(const std::string& name) const;
};
CsvTable read_csv(const std::filesystem::path& path);

}  // namespace anthracnose
