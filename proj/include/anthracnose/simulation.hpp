#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "anthracnose/model.hpp"

namespace anthracnose {

struct SimConfig {
    double t_end = 1.0;
    double dt = 1e-3;
    std::uint64_t seed = 1;
    double theta0 = 0.05;
    double v0 = 0.5;
    double rho0 = 0.25;
    std::size_t record_stride = 1;
    /// Implicitness of the state-linear part of each drift: 0 is plain
    /// Euler-Maruyama, 1 is linearly drift-implicit. Noise is always explicit.
    double vartheta = 1.0;

    std::size_t steps() const;
    void validate(const ModelParams& p) const;
};

/// Bookkeeping of the clamping rule applied after every step.
struct ClampStats {
    std::size_t steps = 0;
    std::size_t clamped_steps = 0;
    double max_overshoot = 0.0;
    /// Steps whose pre-clamp overshoot exceeded 5 max(delta) sqrt(dt) + max|f| dt.
    std::size_t overshoot_bound_violations = 0;

    double clamped_fraction() const {
        return steps == 0 ? 0.0 : static_cast<double>(clamped_steps) / static_cast<double>(steps);
    }
};

struct TruthPath {
    std::vector<double> times;
    std::vector<double> theta;
    std::vector<double> v;
    std::vector<double> rho;
    /// Brownian increments accumulated between consecutive records (size records - 1).
    std::vector<double> dB1;
    std::vector<double> dB2;
    std::vector<double> dB3;
    ClampStats clamp;

    std::size_t size() const { return times.size(); }
};

struct MeanObsPath {
    std::vector<double> times;
    std::vector<double> vbar;
    std::vector<double> rhobar;
    std::vector<double> xbar;
    std::vector<double> ybar;
    /// Records at which vbar or rhobar sat on the boundary of its interval.
    std::size_t boundary_hits = 0;
};

struct ObsPath {
    std::vector<double> times;
    std::vector<double> xbar;
    std::vector<double> ybar;
    std::vector<double> x;
    std::vector<double> y;
    /// Increments x[n+1] - x[n] (size records - 1).
    std::vector<double> dx;
    std::vector<double> dy;

    std::size_t size() const { return times.size(); }
};

/// One theta-method step of the hidden state, before clamping. The implicit
/// part of each drift is evaluated at t + dt.
/// `noise` holds the Brownian increments of the three components.
HiddenState sde_step(double t, const HiddenState& s, double dt, const double noise[3],
                     double vartheta, const ModelParams& p);

/// Drift coefficients of the inhibition rate at both ends of a step.
struct InhibitionCoeffs {
    double alpha0 = 0.0;
    double rate0 = 0.0;  ///< alpha w at t
    double alpha1 = 0.0;
    double rate1 = 0.0;  ///< alpha w at t + dt
};
InhibitionCoeffs inhibition_coeffs(double t, double dt, const ModelParams& p);

/// One step of the inhibition rate alone, clamped to [0, 1].
double inhibition_step(const InhibitionCoeffs& c, double theta, double dt, double dB, double vartheta,
                       const ModelParams& p);
double inhibition_step(double t, double theta, double dt, double dB, double vartheta,
                       const ModelParams& p);

TruthPath simulate_truth(const SimConfig& config, const ModelParams& p);

/// Mean-observation state (vbar, rhobar).
struct MeanObsState {
    double vbar = 0.0;
    double rhobar = 0.0;
};

/// RK4 step of the mean-observation ODEs with theta frozen over the step.
/// Inactive components stay frozen.
MeanObsState advance_mean_obs(const MeanObsState& s, double t, double dt, double theta,
                              const ModelParams& p, bool v_active = true, bool rho_active = true);

/// RK4 step of the same ODEs written directly in logit coordinates.
std::pair<double, double> advance_mean_logit(double xbar, double ybar, double t, double dt,
                                             double theta, const ModelParams& p,
                                             bool v_active = true, bool rho_active = true);

/// |logit| cap used when a mean component reaches its boundary.
inline constexpr double kLogitCap = 36.0;

double bounded_logit(double value, double upper, bool* hit = nullptr);

/// Integrates vbar, rhobar along the theta path and maps them to (Xbar, Ybar).
MeanObsPath integrate_mean_obs(const TruthPath& truth, const ModelParams& p);

/// Same trajectory obtained by integrating the logit-coordinate ODEs directly.
MeanObsPath integrate_mean_obs_direct(const TruthPath& truth, const ModelParams& p);

/// Adds independent Brownian noise of ranges delta2, delta3 to the mean observations.
ObsPath simulate_observations(const MeanObsPath& mean, const SimConfig& config,
                              const ModelParams& p);

}  // namespace anthracnose
