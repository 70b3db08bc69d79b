#include "anthracnose/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace anthracnose {

double seasonal(double t, double b, double c, double d) {
    const double shift = t - d;
    return b * (1.0 - std::cos(c * t)) * shift * shift;
}

double noise_shape(double x) {
    if (!(x > 0.0 && x < 1.0)) return 0.0;
    return x * (1.0 - x);
}

double inhibition_weight(double u, double sigma) { return 1.0 / (1.0 - sigma * u); }

double one_plus_exp(double x) {
    // beyond ~709 the result is not representable; saturate at e^700
    x = std::min(x, 700.0);
    if (x <= kExpShiftCap) return 1.0 + std::exp(x);
    return std::exp(x) * (std::exp(-x) + 1.0);
}

double logit(double p) { return std::log(p / (1.0 - p)); }

double logistic(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

Control eval_control(double t, const ModelParams& p) {
    const double a = t - p.phi1;
    const double b = t - p.phi2;
    const double s = std::sin(p.omega1 * a * a);
    Control c;
    c.u = s * s * std::exp(-p.omega2 * b * b);
    c.w = inhibition_weight(c.u, p.sigma);
    return c;
}

double eval_alpha(double t, const ModelParams& p) {
    return p.p1_value + seasonal(t, p.b1, p.c1, p.d1);
}

double eval_beta(double t, double /*theta*/, const ModelParams& p) {
    return seasonal(t, p.b2, p.c2, p.d2) * p.p2_value;
}

double eval_gamma(double t, double theta, double v, double rho, const ModelParams& p) {
    const double raw = seasonal(t, p.b3, p.c3, p.d3) * (theta - p.kappa * rho) * v;
    return std::max(raw, 0.0);
}

Rates eval_rates(double t, const HiddenState& s, const ModelParams& p) {
    return Rates{eval_alpha(t, p), eval_beta(t, s.theta, p), eval_gamma(t, s.theta, s.v, s.rho, p),
                 p.eta_value};
}

double inhibition_drift(double theta, double alpha, double w) { return alpha * (1.0 - theta * w); }

double inhibition_drift(double t, double theta, const ModelParams& p) {
    return inhibition_drift(theta, eval_alpha(t, p), eval_control(t, p).w);
}

Drift eval_drift(double t, const HiddenState& s, const ModelParams& p) {
    const Rates r = eval_rates(t, s, p);
    const Control c = eval_control(t, p);
    Drift d;
    d.f1 = inhibition_drift(s.theta, r.alpha, c.w);
    const double cap = r.eta * p.v_max;
    d.f2 = r.beta / cap * (cap - s.v / (1.0 + p.epsilon - s.theta));
    d.f3 = r.gamma * (1.0 - s.rho);
    return d;
}

Diffusion eval_diffusion(double /*t*/, const HiddenState& s, const ModelParams& p) {
    return Diffusion{p.delta1 * noise_shape(s.theta), p.delta2 * noise_shape(s.v / p.v_max),
                     p.delta3 * noise_shape(s.rho)};
}

double obs_drift_x(double xbar, double theta, double beta, double eta, const ModelParams& p) {
    const double up = one_plus_exp(xbar);
    const double down = one_plus_exp(-xbar);
    // (eta (1+e^-X) - 1/(1+eps-theta)) (1+e^X), distributed so that each
    // product stays finite for large |X|
    const double bracket = eta * down * up - up / (1.0 + p.epsilon - theta);
    return bracket * beta / (eta * p.v_max);
}

double obs_drift_y(double ybar, double gamma) {
    if (gamma == 0.0) return 0.0;
    return one_plus_exp(-ybar) * gamma;
}

ObsDrift eval_obs_drift(double t, double xbar, double ybar, double theta, const ModelParams& p) {
    const double beta = eval_beta(t, theta, p);
    const double v = p.v_max * logistic(xbar);
    const double rho = logistic(ybar);
    return ObsDrift{obs_drift_x(xbar, theta, beta, p.eta_value, p),
                    obs_drift_y(ybar, eval_gamma(t, theta, v, rho, p))};
}

std::pair<double, double> to_obs_coords(double v, double rho, const ModelParams& p) {
    if (!(v > 0.0 && v < p.v_max))
        throw std::domain_error("volume on the boundary of [0, v_max]: logit undefined");
    if (!(rho > 0.0 && rho < 1.0))
        throw std::domain_error("rot proportion on the boundary of [0, 1]: logit undefined");
    return {std::log(v / (p.v_max - v)), logit(rho)};
}

std::pair<double, double> from_obs_coords(double x, double y, const ModelParams& p) {
    return {p.v_max * logistic(x), logistic(y)};
}

}  // namespace anthracnose
