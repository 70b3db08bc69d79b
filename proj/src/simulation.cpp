#include "anthracnose/simulation.hpp"

#include <algorithm>
#include <cmath>

#include "anthracnose/rng.hpp"

namespace anthracnose {

std::size_t SimConfig::steps() const {
    return static_cast<std::size_t>(std::llround(t_end / dt));
}

void SimConfig::validate(const ModelParams& p) const {
    if (!(dt > 0.0)) throw ValidationError("dt", "must be > 0");
    if (!(t_end >= dt)) throw ValidationError("t_end", "must be >= dt");
    if (record_stride < 1) throw ValidationError("record_stride", "must be >= 1");
    if (!(vartheta >= 0.0 && vartheta <= 1.0)) throw ValidationError("vartheta", "must lie in [0, 1]");
    if (!(theta0 >= 0.0 && theta0 <= 1.0)) throw ValidationError("theta0", "must lie in [0, 1]");
    if (!(v0 >= 0.0 && v0 <= p.v_max)) throw ValidationError("v0", "must lie in [0, v_max]");
    if (!(rho0 >= 0.0 && rho0 <= 1.0)) throw ValidationError("rho0", "must lie in [0, 1]");
}

namespace {

// Theta method for dx = (a(t) - k(t) x) dt + noise with the implicit part at t + dt:
// x1 (1 + vt dt k1) = x0 + dt ((1 - vt)(a0 - k0 x0) + vt a1) + noise.
double theta_method(double x, double a0, double k0, double a1, double k1, double dt, double noise,
                    double vartheta) {
    return (x + dt * ((1.0 - vartheta) * (a0 - k0 * x) + vartheta * a1) + noise) / (1.0 + vartheta * dt * k1);
}

double overshoot(double x, double upper) {
    if (x < 0.0) return -x;
    if (x > upper) return x - upper;
    return 0.0;
}

}  // namespace

HiddenState sde_step(double t, const HiddenState& s, double dt, const double noise[3],
                     double vartheta, const ModelParams& p) {
    const Rates r = eval_rates(t, s, p);
    const Control c = eval_control(t, p);
    const Diffusion g = eval_diffusion(t, s, p);
    const double t1 = t + dt;
    auto volume_rate = [&](double beta, double theta) {
        return beta / (r.eta * p.v_max * (1.0 + p.epsilon - theta));
    };

    HiddenState next;
    // the implicit coefficients see the already advanced components, clipped to their ranges
    const double alpha1 = eval_alpha(t1, p);
    next.theta = theta_method(s.theta, r.alpha, r.alpha * c.w, alpha1, alpha1 * eval_control(t1, p).w, dt,
                              g.g1 * noise[0], vartheta);
    const double theta1 = std::clamp(next.theta, 0.0, 1.0);
    const double beta1 = eval_beta(t1, theta1, p);
    next.v = theta_method(s.v, r.beta, volume_rate(r.beta, s.theta), beta1, volume_rate(beta1, theta1), dt,
                          g.g2 * noise[1], vartheta);
    const double gamma1 = eval_gamma(t1, theta1, std::clamp(next.v, 0.0, p.v_max), s.rho, p);
    next.rho = theta_method(s.rho, r.gamma, r.gamma, gamma1, gamma1, dt, g.g3 * noise[2], vartheta);
    return next;
}

InhibitionCoeffs inhibition_coeffs(double t, double dt, const ModelParams& p) {
    InhibitionCoeffs c;
    c.alpha0 = eval_alpha(t, p);
    c.rate0 = c.alpha0 * eval_control(t, p).w;
    c.alpha1 = eval_alpha(t + dt, p);
    c.rate1 = c.alpha1 * eval_control(t + dt, p).w;
    return c;
}

double inhibition_step(const InhibitionCoeffs& c, double theta, double dt, double dB, double vartheta,
                       const ModelParams& p) {
    const double g1 = p.delta1 * noise_shape(theta);
    const double next = theta_method(theta, c.alpha0, c.rate0, c.alpha1, c.rate1, dt, g1 * dB, vartheta);
    return std::clamp(next, 0.0, 1.0);
}

double inhibition_step(double t, double theta, double dt, double dB, double vartheta,
                       const ModelParams& p) {
    return inhibition_step(inhibition_coeffs(t, dt, p), theta, dt, dB, vartheta, p);
}

TruthPath simulate_truth(const SimConfig& config, const ModelParams& p) {
    config.validate(p);
    const std::size_t n = config.steps();
    const double dt = config.dt;
    const double sqrt_dt = std::sqrt(dt);

    std::mt19937_64 rng1 = make_stream(config.seed, Stream::kInhibition);
    std::mt19937_64 rng2 = make_stream(config.seed, Stream::kVolume);
    std::mt19937_64 rng3 = make_stream(config.seed, Stream::kRot);
    std::normal_distribution<double> normal;

    TruthPath path;
    const std::size_t records = n / config.record_stride + 1;
    path.times.reserve(records);
    path.theta.reserve(records);
    path.v.reserve(records);
    path.rho.reserve(records);

    HiddenState s{config.theta0, config.v0, config.rho0};
    auto record = [&](double t) {
        path.times.push_back(t);
        path.theta.push_back(s.theta);
        path.v.push_back(s.v);
        path.rho.push_back(s.rho);
    };
    record(0.0);

    const double max_delta = std::max({p.delta1, p.delta2, p.delta3});
    double acc[3] = {0.0, 0.0, 0.0};
    for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) * dt;
        const double noise[3] = {sqrt_dt * normal(rng1), sqrt_dt * normal(rng2),
                                 sqrt_dt * normal(rng3)};
        const Drift f = eval_drift(t, s, p);
        HiddenState next = sde_step(t, s, dt, noise, config.vartheta, p);

        const double over = std::max({overshoot(next.theta, 1.0), overshoot(next.v / p.v_max, 1.0),
                                      overshoot(next.rho, 1.0)});
        ++path.clamp.steps;
        if (over > 0.0) {
            ++path.clamp.clamped_steps;
            path.clamp.max_overshoot = std::max(path.clamp.max_overshoot, over);
            const double max_f = std::max({std::abs(f.f1), std::abs(f.f2 / p.v_max), std::abs(f.f3)});
            if (over > 5.0 * max_delta * sqrt_dt + max_f * dt) ++path.clamp.overshoot_bound_violations;
        }
        next.theta = std::clamp(next.theta, 0.0, 1.0);
        next.v = std::clamp(next.v, 0.0, p.v_max);
        next.rho = std::clamp(next.rho, 0.0, 1.0);
        s = next;

        for (int i = 0; i < 3; ++i) acc[i] += noise[i];
        if ((k + 1) % config.record_stride == 0) {
            record(static_cast<double>(k + 1) * dt);
            path.dB1.push_back(acc[0]);
            path.dB2.push_back(acc[1]);
            path.dB3.push_back(acc[2]);
            acc[0] = acc[1] = acc[2] = 0.0;
        }
    }
    return path;
}

// --- mean observations -------------------------------------------------------

namespace {

struct MeanRhs {
    double dv;
    double drho;
};

MeanRhs mean_rhs(double t, double vbar, double rhobar, double theta, const ModelParams& p,
                 bool v_active, bool rho_active) {
    MeanRhs r{0.0, 0.0};
    if (v_active) {
        const double cap = p.eta_value * p.v_max;
        r.dv = eval_beta(t, theta, p) / cap * (cap - vbar / (1.0 + p.epsilon - theta));
    }
    if (rho_active) r.drho = eval_gamma(t, theta, vbar, rhobar, p) * (1.0 - rhobar);
    return r;
}

MeanRhs logit_rhs(double t, double xbar, double ybar, double theta, const ModelParams& p,
                  bool v_active, bool rho_active) {
    MeanRhs r{0.0, 0.0};
    if (v_active) r.dv = obs_drift_x(xbar, theta, eval_beta(t, theta, p), p.eta_value, p);
    if (rho_active) {
        const double vbar = p.v_max * logistic(xbar);
        r.drho = obs_drift_y(ybar, eval_gamma(t, theta, vbar, logistic(ybar), p));
    }
    return r;
}

template <class Rhs>
std::pair<double, double> rk4(double a, double b, double t, double dt, Rhs&& rhs) {
    const MeanRhs k1 = rhs(t, a, b);
    const MeanRhs k2 = rhs(t + 0.5 * dt, a + 0.5 * dt * k1.dv, b + 0.5 * dt * k1.drho);
    const MeanRhs k3 = rhs(t + 0.5 * dt, a + 0.5 * dt * k2.dv, b + 0.5 * dt * k2.drho);
    const MeanRhs k4 = rhs(t + dt, a + dt * k3.dv, b + dt * k3.drho);
    return {a + dt / 6.0 * (k1.dv + 2.0 * k2.dv + 2.0 * k3.dv + k4.dv),
            b + dt / 6.0 * (k1.drho + 2.0 * k2.drho + 2.0 * k3.drho + k4.drho)};
}

}  // namespace

MeanObsState advance_mean_obs(const MeanObsState& s, double t, double dt, double theta,
                              const ModelParams& p, bool v_active, bool rho_active) {
    auto [v, rho] = rk4(s.vbar, s.rhobar, t, dt, [&](double tt, double a, double b) {
        return mean_rhs(tt, a, b, theta, p, v_active, rho_active);
    });
    return MeanObsState{std::clamp(v, 0.0, p.v_max), std::clamp(rho, 0.0, 1.0)};
}

std::pair<double, double> advance_mean_logit(double xbar, double ybar, double t, double dt,
                                             double theta, const ModelParams& p, bool v_active,
                                             bool rho_active) {
    auto [x, y] = rk4(xbar, ybar, t, dt, [&](double tt, double a, double b) {
        return logit_rhs(tt, a, b, theta, p, v_active, rho_active);
    });
    return {std::clamp(x, -kLogitCap, kLogitCap), std::clamp(y, -kLogitCap, kLogitCap)};
}

double bounded_logit(double value, double upper, bool* hit) {
    const double frac = value / upper;
    const bool at_edge = !(frac > 0.0 && frac < 1.0);
    if (hit) *hit = at_edge;
    if (at_edge) return frac <= 0.0 ? -kLogitCap : kLogitCap;
    return std::clamp(std::log(frac / (1.0 - frac)), -kLogitCap, kLogitCap);
}

MeanObsPath integrate_mean_obs(const TruthPath& truth, const ModelParams& p) {
    MeanObsPath out;
    const std::size_t n = truth.size();
    out.times = truth.times;
    out.vbar.resize(n);
    out.rhobar.resize(n);
    out.xbar.resize(n);
    out.ybar.resize(n);

    MeanObsState s{truth.v.front(), truth.rho.front()};
    for (std::size_t k = 0; k < n; ++k) {
        if (k > 0) {
            const double dt = truth.times[k] - truth.times[k - 1];
            s = advance_mean_obs(s, truth.times[k - 1], dt, truth.theta[k - 1], p,
                                 truth.v[k - 1] > 0.0, truth.rho[k - 1] > 0.0);
        }
        out.vbar[k] = s.vbar;
        out.rhobar[k] = s.rhobar;
        bool hit_v = false;
        bool hit_rho = false;
        out.xbar[k] = bounded_logit(s.vbar, p.v_max, &hit_v);
        out.ybar[k] = bounded_logit(s.rhobar, 1.0, &hit_rho);
        if (hit_v || hit_rho) ++out.boundary_hits;
    }
    return out;
}

MeanObsPath integrate_mean_obs_direct(const TruthPath& truth, const ModelParams& p) {
    MeanObsPath out;
    const std::size_t n = truth.size();
    out.times = truth.times;
    out.vbar.resize(n);
    out.rhobar.resize(n);
    out.xbar.resize(n);
    out.ybar.resize(n);

    bool hit_v = false;
    bool hit_rho = false;
    double x = bounded_logit(truth.v.front(), p.v_max, &hit_v);
    double y = bounded_logit(truth.rho.front(), 1.0, &hit_rho);
    for (std::size_t k = 0; k < n; ++k) {
        if (k > 0) {
            const double dt = truth.times[k] - truth.times[k - 1];
            std::tie(x, y) = advance_mean_logit(x, y, truth.times[k - 1], dt, truth.theta[k - 1], p,
                                                truth.v[k - 1] > 0.0, truth.rho[k - 1] > 0.0);
        }
        out.xbar[k] = x;
        out.ybar[k] = y;
        out.vbar[k] = p.v_max * logistic(x);
        out.rhobar[k] = logistic(y);
        if (std::abs(x) >= kLogitCap || std::abs(y) >= kLogitCap) ++out.boundary_hits;
    }
    return out;
}

ObsPath simulate_observations(const MeanObsPath& mean, const SimConfig& config,
                              const ModelParams& p) {
    std::mt19937_64 rng_x = make_stream(config.seed, Stream::kObsX);
    std::mt19937_64 rng_y = make_stream(config.seed, Stream::kObsY);
    std::normal_distribution<double> normal;

    ObsPath obs;
    const std::size_t n = mean.times.size();
    obs.times = mean.times;
    obs.xbar = mean.xbar;
    obs.ybar = mean.ybar;
    obs.x.resize(n);
    obs.y.resize(n);
    double wx = 0.0;
    double wy = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        if (k > 0) {
            const double sqrt_dt = std::sqrt(mean.times[k] - mean.times[k - 1]);
            wx += p.delta2 * sqrt_dt * normal(rng_x);
            wy += p.delta3 * sqrt_dt * normal(rng_y);
        }
        obs.x[k] = mean.xbar[k] + wx;
        obs.y[k] = mean.ybar[k] + wy;
    }
    obs.dx.resize(n > 0 ? n - 1 : 0);
    obs.dy.resize(obs.dx.size());
    for (std::size_t k = 0; k + 1 < n; ++k) {
        obs.dx[k] = obs.x[k + 1] - obs.x[k];
        obs.dy[k] = obs.y[k + 1] - obs.y[k];
    }
    return obs;
}

}  // namespace anthracnose
