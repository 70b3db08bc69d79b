#pragma once

#include <functional>
#include <span>
#include <vector>

#include "anthracnose/generator.hpp"
#include "anthracnose/grid.hpp"
#include "anthracnose/simulation.hpp"

namespace anthracnose {

/// How the observation terms h dX enter a step.
enum class UpdateScheme {
    /// Multiply by exp(h dX - delta^2 h^2 dt / 2): the exact solution of the
    /// observation part over one step (splitting). Positive by construction.
    kExponential,
    /// Add h * density * dX (plain Euler-Maruyama), then floor negatives.
    kExplicit,
};

/// Where the mean observations (Xbar, Ybar) entering the likelihood come from.
enum class MeanObsMode {
    kReconstructed,  ///< integrated by the filter from its own posterior mean
    kOracle,         ///< taken from the simulator
};

enum class ContinuousMethod { kZakai, kKushnerStratonovich };

enum class PriorKind { kUniform, kGaussian };

struct StepOptions {
    Stencil stencil = Stencil::kUpwind;
    UpdateScheme update = UpdateScheme::kExponential;
    bool substep = true;
};

struct GridFilterSettings {
    double x_min = 0.0;
    double x_max = 1.0;
    double dx = 0.1;
    StepOptions step;
    MeanObsMode mean_mode = MeanObsMode::kReconstructed;
    PriorKind prior = PriorKind::kUniform;
    double prior_mean = 0.5;
    double prior_sd = 0.1;

    Grid grid() const { return build_grid(x_min, x_max, dx); }
    GridDensity initial_density(const Grid& grid) const;
};

/// Time and mean observations at the left end of a step.
struct ObservationContext {
    double t = 0.0;
    double xbar = 0.0;
    double ybar = 0.0;
};

/// Multiplication coefficients h2 = f / delta2^2 and h3 = g / delta3^2 on the grid.
struct LikelihoodField {
    std::vector<double> h2;
    std::vector<double> h3;
};

/// The signal variable is clipped to [0, 1] before evaluating f and g, so grids
/// that extend past 1 + epsilon stay finite.
LikelihoodField likelihood_field(const Grid& grid, const ObservationContext& ctx, const ModelParams& p);

/// Unnormalized conditional density. The true density is exp(log_scale) * density.values.
struct FilterRunState {
    double t = 0.0;
    GridDensity density;
    double log_scale = 0.0;

    double zeta(const Grid& grid) const;
    double log_zeta(const Grid& grid) const;
};

/// One step of the Zakai equation.
FilterRunState zakai_step(const Grid& grid, const FilterRunState& state, double dX, double dY, double dt,
                          const ObservationContext& ctx, const ModelParams& p, const StepOptions& opt,
                          FloorStats& stats);

FilterRunState zakai_step(const Grid& grid, const FilterRunState& state, double dX, double dY, double dt,
                          const ObservationContext& ctx, const ModelParams& p,
                          const StepOptions& opt = {});

/// One step of the Kushner-Stratonovich equation on a normalized density; the
/// result is renormalized.
GridDensity ks_step(const Grid& grid, const GridDensity& pi, double dX, double dY, double dt,
                    const ObservationContext& ctx, const ModelParams& p, const StepOptions& opt,
                    FloorStats& stats);

GridDensity ks_step(const Grid& grid, const GridDensity& pi, double dX, double dY, double dt,
                    const ObservationContext& ctx, const ModelParams& p, const StepOptions& opt = {});

/// Supplies (Xbar, Ybar) at each observation record, either from the simulator
/// or by integrating the mean-observation ODEs along the filter's estimate.
class MeanObsTracker {
public:
    MeanObsTracker(const ObsPath& obs, const ModelParams& p, MeanObsMode mode);

    ObservationContext context(std::size_t k) const;
    /// Moves from record k to k + 1 using the current estimate of theta.
    void advance(std::size_t k, double theta_hat);

private:
    const ObsPath* obs_;
    const ModelParams* p_;
    MeanObsMode mode_;
    MeanObsState state_;
};

struct GridFilterResult {
    std::vector<double> times;
    std::vector<double> mean;
    std::vector<double> variance;
    /// log of the normalizer from the grid integral of the unnormalized density
    /// (Zakai) or accumulated from the normalization constants (KS).
    std::vector<double> log_zeta;
    /// log of the normalizer from exp(int pi(h) dX - delta^2/2 int pi(h)^2 dt + ...).
    std::vector<double> log_zeta_closed;
    FloorStats floor;
};

/// Called with the normalized posterior after every record, including t = 0.
using DensityObserver = std::function<void(std::size_t k, double t, std::span<const double> pi)>;

GridFilterResult run_grid_filter(const ObsPath& obs, const ModelParams& p, const GridFilterSettings& settings,
                                 ContinuousMethod method, const DensityObserver& observer = {});

/// Filter run that stops at record `stop` and hands back the unnormalized state
/// together with the posterior-mean history up to it.
struct GridFilterCheckpoint {
    FilterRunState state;
    GridFilterResult history;
};

GridFilterCheckpoint run_grid_filter_until(const ObsPath& obs, const ModelParams& p,
                                           const GridFilterSettings& settings, std::size_t stop);

}  // namespace anthracnose
