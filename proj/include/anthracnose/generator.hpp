#pragma once

#include <span>
#include <vector>

#include "anthracnose/grid.hpp"
#include "anthracnose/params.hpp"

namespace anthracnose {

/// First-derivative stencil of the signal generator.
enum class Stencil {
    kUpwind,   ///< donor-cell differences; the discrete generator is a Markov chain generator
    kCentral,  ///< second-order central differences
};

/// Tridiagonal rows of the discrete generator A phi = f phi' + g^2/2 phi''.
/// Neighbours outside the grid are zero (Dirichlet ghost nodes).
struct GeneratorRows {
    std::vector<double> lower;  ///< coefficient of phi[i-1] in row i
    std::vector<double> diag;
    std::vector<double> upper;  ///< coefficient of phi[i+1] in row i

    std::size_t size() const { return diag.size(); }
    /// max_i |diag_i|; forward Euler keeps positivity for dt <= 1 / max_rate (upwind).
    double max_rate() const;
};

GeneratorRows build_generator(const Grid& grid, std::span<const double> drift,
                              std::span<const double> diffusion, Stencil stencil);

/// Generator of the inhibition-rate diffusion at time t.
GeneratorRows build_generator(const Grid& grid, double t, const ModelParams& p, Stencil stencil);

/// (A phi)_i
std::vector<double> apply_generator(const GeneratorRows& a, std::span<const double> phi);

/// Fokker-Planck operator: the adjoint of A in the trapezoid inner product,
/// so that trapezoid(phi * A* density) = trapezoid(density * A phi).
std::vector<double> apply_generator_adjoint(const Grid& grid, const GeneratorRows& a,
                                            std::span<const double> density);

std::vector<double> apply_generator_adjoint(const Grid& grid, std::span<const double> density,
                                            double t, const ModelParams& p,
                                            Stencil stencil = Stencil::kUpwind);

/// Counters for the positivity floor applied after explicit steps.
struct FloorStats {
    std::size_t floor_events = 0;
    std::size_t node_steps = 0;

    double rate() const {
        return node_steps == 0 ? 0.0 : static_cast<double>(floor_events) / static_cast<double>(node_steps);
    }
};

/// Sets negative entries to zero, counting them.
void floor_negative(std::span<double> values, FloorStats& stats);

/// Advances a density by dt under the Fokker-Planck operator only, splitting
/// the step into as many explicit substeps as positivity requires.
void fokker_planck_advance(const Grid& grid, std::vector<double>& density, double t, double dt,
                           const ModelParams& p, Stencil stencil, FloorStats& stats,
                           bool substep = true);

/// Largest dt accepted by the diffusion stability guard dt <= dx^2 / max g1^2.
double diffusion_dt_limit(const Grid& grid, const ModelParams& p);

}  // namespace anthracnose
