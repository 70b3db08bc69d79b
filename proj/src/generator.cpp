#include "anthracnose/generator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "anthracnose/model.hpp"

namespace anthracnose {

double GeneratorRows::max_rate() const {
    double r = 0.0;
    for (double d : diag) r = std::max(r, std::abs(d));
    return r;
}

GeneratorRows build_generator(const Grid& grid, std::span<const double> drift,
                              std::span<const double> diffusion, Stencil stencil) {
    const std::size_t n = grid.size();
    const double dx = grid.dx;
    const double dx2 = dx * dx;
    GeneratorRows a;
    a.lower.resize(n);
    a.diag.resize(n);
    a.upper.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double f = drift[i];
        const double d = 0.5 * diffusion[i] * diffusion[i] / dx2;
        if (stencil == Stencil::kUpwind) {
            const double fp = std::max(f, 0.0) / dx;
            const double fm = std::min(f, 0.0) / dx;
            a.lower[i] = -fm + d;
            a.diag[i] = -fp + fm - 2.0 * d;
            a.upper[i] = fp + d;
        } else {
            const double c = 0.5 * f / dx;
            a.lower[i] = -c + d;
            a.diag[i] = -2.0 * d;
            a.upper[i] = c + d;
        }
    }
    return a;
}

GeneratorRows build_generator(const Grid& grid, double t, const ModelParams& p, Stencil stencil) {
    const double alpha = eval_alpha(t, p);
    const double w = eval_control(t, p).w;
    std::vector<double> drift(grid.size());
    std::vector<double> diffusion(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        drift[i] = inhibition_drift(grid.nodes[i], alpha, w);
        diffusion[i] = p.delta1 * noise_shape(grid.nodes[i]);
    }
    return build_generator(grid, drift, diffusion, stencil);
}

std::vector<double> apply_generator(const GeneratorRows& a, std::span<const double> phi) {
    const std::size_t n = a.size();
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = a.diag[i] * phi[i];
        if (i > 0) s += a.lower[i] * phi[i - 1];
        if (i + 1 < n) s += a.upper[i] * phi[i + 1];
        out[i] = s;
    }
    return out;
}

std::vector<double> apply_generator_adjoint(const Grid& grid, const GeneratorRows& a,
                                            std::span<const double> density) {
    const std::size_t n = grid.size();
    // adjoint in the trapezoid inner product: W^{-1} A^T W, W = diag(1/2, 1, ..., 1, 1/2)
    auto weight = [n](std::size_t i) { return (i == 0 || i + 1 == n) ? 0.5 : 1.0; };
    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j) {
        double s = a.diag[j] * weight(j) * density[j];
        if (j > 0) s += a.upper[j - 1] * weight(j - 1) * density[j - 1];
        if (j + 1 < n) s += a.lower[j + 1] * weight(j + 1) * density[j + 1];
        out[j] = s / weight(j);
    }
    return out;
}

std::vector<double> apply_generator_adjoint(const Grid& grid, std::span<const double> density,
                                            double t, const ModelParams& p, Stencil stencil) {
    return apply_generator_adjoint(grid, build_generator(grid, t, p, stencil), density);
}

void floor_negative(std::span<double> values, FloorStats& stats) {
    stats.node_steps += values.size();
    for (double& v : values) {
        if (v < 0.0) {
            v = 0.0;
            ++stats.floor_events;
        }
    }
}

void fokker_planck_advance(const Grid& grid, std::vector<double>& density, double t, double dt,
                           const ModelParams& p, Stencil stencil, FloorStats& stats, bool substep) {
    const GeneratorRows first = build_generator(grid, t, p, stencil);
    std::size_t pieces = 1;
    if (substep) {
        // 10% headroom: the rates drift within the step
        const double need = dt * first.max_rate() / 0.9;
        if (need > 1.0) pieces = static_cast<std::size_t>(std::ceil(need));
    }
    const double h = dt / static_cast<double>(pieces);
    for (std::size_t j = 0; j < pieces; ++j) {
        const GeneratorRows a = j == 0 ? first : build_generator(grid, t + static_cast<double>(j) * h, p, stencil);
        const std::vector<double> change = apply_generator_adjoint(grid, a, density);
        for (std::size_t i = 0; i < density.size(); ++i) density[i] += h * change[i];
        floor_negative(density, stats);
    }
}

double diffusion_dt_limit(const Grid& grid, const ModelParams& p) {
    double g2 = 0.0;
    for (double x : grid.nodes) {
        const double g = p.delta1 * noise_shape(x);
        g2 = std::max(g2, g * g);
    }
    if (g2 == 0.0) return std::numeric_limits<double>::infinity();
    return grid.dx * grid.dx / g2;
}

}  // namespace anthracnose
