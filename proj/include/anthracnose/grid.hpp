#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace anthracnose {

/// Thrown when every grid node (or particle weight) has vanished.
class FilterCollapse : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Uniform 1-D grid over the interval O, both endpoints included.
struct Grid {
    double x_min = 0.0;
    double x_max = 1.0;
    double dx = 0.1;
    std::vector<double> nodes;

    std::size_t size() const { return nodes.size(); }
};

Grid build_grid(double x_min, double x_max, double dx);

enum class DensityKind { kUnnormalized, kNormalized };

struct GridDensity {
    std::vector<double> values;
    DensityKind kind = DensityKind::kUnnormalized;
};

double trapezoid(const Grid& grid, std::span<const double> values);

/// Trapezoid integral of h * values.
double trapezoid_product(const Grid& grid, std::span<const double> h, std::span<const double> values);

struct Normalized {
    GridDensity pi;
    double zeta = 0.0;
};

/// pi = density / zeta with zeta its trapezoid integral. Throws FilterCollapse
/// when the integral is not positive.
Normalized normalize(const Grid& grid, const GridDensity& density);

struct PosteriorStats {
    double mean = 0.0;
    double variance = 0.0;
};

PosteriorStats posterior_stats(const Grid& grid, const GridDensity& pi);

/// Uniform density on [lo, hi] intersected with the grid, normalized.
GridDensity uniform_density(const Grid& grid, double lo = 0.0, double hi = 1.0);
/// Discretized normal density restricted to the grid, normalized.
GridDensity gaussian_density(const Grid& grid, double mean, double sd);

/// Trapezoid L1 distance between two densities on the same grid.
double l1_distance(const Grid& grid, std::span<const double> a, std::span<const double> b);

}  // namespace anthracnose
