#include "anthracnose/grid.hpp"

#include <algorithm>
#include <cmath>

#include "anthracnose/params.hpp"

namespace anthracnose {

Grid build_grid(double x_min, double x_max, double dx) {
    if (!(dx > 0.0)) throw ValidationError("dx", "must be > 0");
    if (!(x_min < x_max)) throw ValidationError("x_min", "must be < x_max");
    const double ratio = (x_max - x_min) / dx;
    const double intervals = std::round(ratio);
    if (std::abs(ratio - intervals) > 1e-9 * std::max(1.0, ratio))
        throw ValidationError("dx", "must divide x_max - x_min");
    if (intervals < 2.0) throw ValidationError("dx", "grid needs at least 3 nodes");

    Grid g;
    g.x_min = x_min;
    g.x_max = x_max;
    const auto n = static_cast<std::size_t>(intervals);
    g.dx = (x_max - x_min) / static_cast<double>(n);
    g.nodes.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i) g.nodes[i] = x_min + static_cast<double>(i) * g.dx;
    g.nodes.back() = x_max;
    return g;
}

double trapezoid(const Grid& grid, std::span<const double> values) {
    const std::size_t n = values.size();
    if (n == 0) return 0.0;
    double sum = 0.5 * (values.front() + values.back());
    for (std::size_t i = 1; i + 1 < n; ++i) sum += values[i];
    return sum * grid.dx;
}

double trapezoid_product(const Grid& grid, std::span<const double> h, std::span<const double> values) {
    const std::size_t n = values.size();
    if (n == 0) return 0.0;
    double sum = 0.5 * (h.front() * values.front() + h.back() * values.back());
    for (std::size_t i = 1; i + 1 < n; ++i) sum += h[i] * values[i];
    return sum * grid.dx;
}

Normalized normalize(const Grid& grid, const GridDensity& density) {
    const double zeta = trapezoid(grid, density.values);
    if (!(zeta > 0.0) || !std::isfinite(zeta)) throw FilterCollapse("density has no positive mass");
    Normalized out;
    out.zeta = zeta;
    out.pi.kind = DensityKind::kNormalized;
    out.pi.values.resize(density.values.size());
    std::transform(density.values.begin(), density.values.end(), out.pi.values.begin(),
                   [zeta](double v) { return v / zeta; });
    return out;
}

PosteriorStats posterior_stats(const Grid& grid, const GridDensity& pi) {
    const double mass = trapezoid(grid, pi.values);
    const double m1 = trapezoid_product(grid, grid.nodes, pi.values) / mass;
    std::vector<double> centered(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double d = grid.nodes[i] - m1;
        centered[i] = d * d;
    }
    const double var = trapezoid_product(grid, centered, pi.values) / mass;
    return PosteriorStats{m1, std::max(var, 0.0)};
}

GridDensity uniform_density(const Grid& grid, double lo, double hi) {
    GridDensity d;
    d.values.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = grid.nodes[i];
        d.values[i] = (x >= lo - 1e-12 && x <= hi + 1e-12) ? 1.0 : 0.0;
    }
    return normalize(grid, d).pi;
}

GridDensity gaussian_density(const Grid& grid, double mean, double sd) {
    GridDensity d;
    d.values.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double z = (grid.nodes[i] - mean) / sd;
        d.values[i] = std::exp(-0.5 * z * z);
    }
    return normalize(grid, d).pi;
}

double l1_distance(const Grid& grid, std::span<const double> a, std::span<const double> b) {
    std::vector<double> diff(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) diff[i] = std::abs(a[i] - b[i]);
    return trapezoid(grid, diff);
}

}  // namespace anthracnose
