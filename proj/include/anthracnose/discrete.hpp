#pragma once

#include <functional>
#include <vector>

#include "anthracnose/grid.hpp"
#include "anthracnose/quadrature.hpp"
#include "anthracnose/simulation.hpp"
#include "anthracnose/zakai.hpp"

namespace anthracnose {

struct ThetaScheme {
    double vartheta = 0.5;
    int quad_order = 21;

    void validate() const;
};

/// Unnormalized node masses of the discrete-observation filter. The true
/// masses are exp(log_scale) * values, so zeta_n = exp(log_scale) * sum(values).
struct DiscreteFilterState {
    std::size_t n = 0;
    double tau = 0.0;
    std::vector<double> values;
    double log_scale = 0.0;

    double zeta() const;
    double log_zeta() const;
};

/// Coefficients frozen over one observation interval: the time tau_n and the
/// vartheta-blended mean observations.
struct DiscreteContext {
    double t = 0.0;
    double xbar = 0.0;
    double ybar = 0.0;
};

/// Theta-scheme image of x for the standard normal draw xi, clipped to [0, 1].
double theta_transition(double x, double xi, double dtau, double vartheta, double t, const ModelParams& p);

/// E[phi(theta_{n+1}) | theta_n = x] by Gauss-Hermite quadrature.
double transition_expectation(double x, const std::function<double(double)>& phi, double dtau,
                              const ThetaScheme& scheme, const GaussHermiteRule& rule, double t,
                              const ModelParams& p);
double transition_expectation(double x, const std::function<double(double)>& phi, double dtau,
                              const ThetaScheme& scheme, double t, const ModelParams& p);

/// log of the Gaussian increment likelihood at signal value x.
double log_increment_likelihood(double x, double dX, double dY, double dtau, const DiscreteContext& ctx,
                                const ModelParams& p);
double increment_likelihood(double x, double dX, double dY, double dtau, const DiscreteContext& ctx,
                            const ModelParams& p);

/// Node masses whose sum is 1, built from a density on the grid.
DiscreteFilterState discrete_initial_state(const Grid& grid, const GridDensity& density, double tau0);

/// sigma_{n+1}(phi) = sigma_n(P_n(., Lambda phi)), with the kernel pushed
/// through quadrature and deposited onto the grid by linear interpolation.
DiscreteFilterState discrete_step(const Grid& grid, const DiscreteFilterState& state, double dX, double dY,
                                  double dtau, const ThetaScheme& scheme, const GaussHermiteRule& rule,
                                  const DiscreteContext& ctx, const ModelParams& p);

/// log zeta_{n+1} = log sigma_n(P_n(., Lambda)) evaluated without building
/// the new masses.
double discrete_log_normalizer(const Grid& grid, const DiscreteFilterState& state, double dX, double dY,
                               double dtau, const ThetaScheme& scheme, const GaussHermiteRule& rule,
                               const DiscreteContext& ctx, const ModelParams& p);

PosteriorStats discrete_stats(const Grid& grid, const DiscreteFilterState& state);

struct DiscreteFilterResult {
    std::vector<double> times;
    std::vector<double> mean;
    std::vector<double> variance;
    std::vector<double> log_zeta;
};

/// Runs the recursion on the observation path subsampled every dtau. dtau must
/// be a whole multiple of the path's record spacing.
DiscreteFilterResult run_discrete_filter(const ObsPath& obs, const ModelParams& p,
                                         const GridFilterSettings& settings, const ThetaScheme& scheme,
                                         double dtau);

}  // namespace anthracnose
