#include "anthracnose/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace anthracnose {

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

namespace {

std::size_t record_index(const std::vector<double>& times, double t) {
    const auto it = std::lower_bound(times.begin(), times.end(), t - 1e-9);
    if (it == times.end() || std::abs(*it - t) > 1e-9)
        throw std::invalid_argument("filter time " + format_double(t) + " is not an observation record");
    return static_cast<std::size_t>(it - times.begin());
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

}  // namespace

void write_run_csv(const std::filesystem::path& path, const TruthPath& truth, const ObsPath& obs,
                   const FilterSeries& filter) {
    if (truth.size() != obs.size()) throw std::invalid_argument("truth and observation records differ in length");
    std::ofstream out = open_out(path);
    out << kRunCsvHeader << '\n';
    for (std::size_t r = 0; r < filter.times.size(); ++r) {
        const std::size_t k = record_index(obs.times, filter.times[r]);
        const double th = truth.theta[k];
        const double err = std::abs(filter.mean[r] - th) / std::max(th, 1e-6);
        out << format_double(filter.times[r]) << ',' << format_double(th) << ',' << format_double(truth.v[k]) << ','
            << format_double(truth.rho[k]) << ',' << format_double(obs.x[k]) << ',' << format_double(obs.y[k]) << ','
            << format_double(filter.mean[r]) << ',' << format_double(filter.variance[r]) << ','
            << format_double(err) << ',' << format_double(filter.log_zeta[r]) << '\n';
    }
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

void write_path_csv(const std::filesystem::path& path, const TruthPath& truth, const ObsPath& obs) {
    if (truth.size() != obs.size()) throw std::invalid_argument("truth and observation records differ in length");
    std::ofstream out = open_out(path);
    out << "time,theta,v,rho,X,Y,Xbar,Ybar\n";
    for (std::size_t k = 0; k < truth.size(); ++k)
        out << format_double(truth.times[k]) << ',' << format_double(truth.theta[k]) << ','
            << format_double(truth.v[k]) << ',' << format_double(truth.rho[k]) << ',' << format_double(obs.x[k])
            << ',' << format_double(obs.y[k]) << ',' << format_double(obs.xbar[k]) << ','
            << format_double(obs.ybar[k]) << '\n';
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::size_t CsvTable::column(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw std::out_of_range("no column named " + name);
    return static_cast<std::size_t>(it - header.begin());
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    CsvTable t;
    std::string line;
    if (!std::getline(in, line)) return t;
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) t.header.push_back(cell);
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            // text cells read as NaN
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            row.push_back(cell.empty() || *end != '\0' ? std::nan("") : v);
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

}  // namespace anthracnose
