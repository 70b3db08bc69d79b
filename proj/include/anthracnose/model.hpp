#pragma once

#include <utility>

#include "anthracnose/params.hpp"

namespace anthracnose {

/// Hidden state of the lumped model: inhibition rate, fruit volume, rot proportion.
struct HiddenState {
    double theta = 0.0;
    double v = 0.0;
    double rho = 0.0;
};

/// Logit-transformed observation coordinates and their mean-observation counterparts.
struct ObsCoords {
    double x = 0.0;
    double y = 0.0;
    double xbar = 0.0;
    double ybar = 0.0;
};

struct Control {
    double u = 0.0;  ///< fungicide control, in [0, 1]
    double w = 1.0;  ///< inhibition weight 1/(1 - sigma u)
};

struct Rates {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    double eta = 1.0;
};

struct Drift {
    double f1 = 0.0;
    double f2 = 0.0;
    double f3 = 0.0;
};

struct Diffusion {
    double g1 = 0.0;
    double g2 = 0.0;
    double g3 = 0.0;
};

/// Drift of the logit observations (X, Y) given the mean observations.
struct ObsDrift {
    double f = 0.0;
    double g = 0.0;
};

/// |X| beyond which (1 + e^{+-X}) is evaluated in shifted form.
inline constexpr double kExpShiftCap = 30.0;

// --- scalar building blocks -------------------------------------------------

/// Seasonal amplitude b (1 - cos(c t)) (t - d)^2.
double seasonal(double t, double b, double c, double d);

/// Noise shape x(1 - x) on (0, 1), zero elsewhere.
double noise_shape(double x);

double inhibition_weight(double u, double sigma);

/// 1 + e^x, evaluated without overflow below |x| ~ 709 and shifted beyond kExpShiftCap.
double one_plus_exp(double x);

double logit(double p);
/// 1/(1 + e^{-x}) without overflow.
double logistic(double x);

// --- model coefficients -----------------------------------------------------

Control eval_control(double t, const ModelParams& p);

/// gamma(t, theta, v, rho), floored at zero.
double eval_gamma(double t, double theta, double v, double rho, const ModelParams& p);
double eval_alpha(double t, const ModelParams& p);
double eval_beta(double t, double theta, const ModelParams& p);

Rates eval_rates(double t, const HiddenState& s, const ModelParams& p);

/// f1 = alpha (1 - theta w) for a given control weight.
double inhibition_drift(double theta, double alpha, double w);
double inhibition_drift(double t, double theta, const ModelParams& p);

Drift eval_drift(double t, const HiddenState& s, const ModelParams& p);
Diffusion eval_diffusion(double t, const HiddenState& s, const ModelParams& p);

/// X-observation drift from an explicit beta value.
double obs_drift_x(double xbar, double theta, double beta, double eta, const ModelParams& p);
/// Y-observation drift from an explicit gamma value.
double obs_drift_y(double ybar, double gamma);

ObsDrift eval_obs_drift(double t, double xbar, double ybar, double theta, const ModelParams& p);

// --- logit transforms -------------------------------------------------------

/// Forward map (v, rho) -> (X, Y). Throws std::domain_error on a closed-interval
/// boundary, where the transform is undefined.
std::pair<double, double> to_obs_coords(double v, double rho, const ModelParams& p);
std::pair<double, double> from_obs_coords(double x, double y, const ModelParams& p);

}  // namespace anthracnose
