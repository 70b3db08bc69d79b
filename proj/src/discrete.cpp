#include "anthracnose/discrete.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace anthracnose {

void ThetaScheme::validate() const {
    if (!(vartheta >= 0.0 && vartheta <= 1.0)) throw ValidationError("vartheta", "must lie in [0, 1]");
    if (quad_order < 3 || quad_order % 2 == 0) throw ValidationError("quad_order", "must be odd and >= 3");
}

double DiscreteFilterState::log_zeta() const {
    double s = 0.0;
    for (double v : values) s += v;
    return log_scale + std::log(s);
}

double DiscreteFilterState::zeta() const { return std::exp(log_zeta()); }

double theta_transition(double x, double xi, double dtau, double vartheta, double t, const ModelParams& p) {
    const double alpha = eval_alpha(t, p);
    const double w = eval_control(t, p).w;
    const double num = x + dtau * alpha * (1.0 - w * (1.0 - vartheta) * x) +
                       std::sqrt(dtau) * p.delta1 * noise_shape(x) * xi;
    return std::clamp(num / (1.0 + dtau * alpha * w * vartheta), 0.0, 1.0);
}

double transition_expectation(double x, const std::function<double(double)>& phi, double dtau,
                              const ThetaScheme& scheme, const GaussHermiteRule& rule, double t,
                              const ModelParams& p) {
    if (!(dtau > 0.0)) throw ValidationError("dtau", "must be > 0");
    double acc = 0.0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q)
        acc += rule.weights[q] * phi(theta_transition(x, rule.nodes[q], dtau, scheme.vartheta, t, p));
    return acc;
}

double transition_expectation(double x, const std::function<double(double)>& phi, double dtau,
                              const ThetaScheme& scheme, double t, const ModelParams& p) {
    return transition_expectation(x, phi, dtau, scheme, gauss_hermite(scheme.quad_order), t, p);
}

double log_increment_likelihood(double x, double dX, double dY, double dtau, const DiscreteContext& ctx,
                                const ModelParams& p) {
    const ObsDrift d = eval_obs_drift(ctx.t, ctx.xbar, ctx.ybar, std::clamp(x, 0.0, 1.0), p);
    const double q2 = p.delta2 * p.delta2;
    const double q3 = p.delta3 * p.delta3;
    return -dtau * (d.f * d.f / (2.0 * q2) + d.g * d.g / (2.0 * q3)) + dX * d.f / q2 + dY * d.g / q3;
}

double increment_likelihood(double x, double dX, double dY, double dtau, const DiscreteContext& ctx,
                            const ModelParams& p) {
    return std::exp(log_increment_likelihood(x, dX, dY, dtau, ctx, p));
}

DiscreteFilterState discrete_initial_state(const Grid& grid, const GridDensity& density, double tau0) {
    DiscreteFilterState s;
    s.tau = tau0;
    s.values.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double end = (i == 0 || i + 1 == grid.size()) ? 0.5 : 1.0;
        s.values[i] = density.values[i] * grid.dx * end;
    }
    double total = 0.0;
    for (double v : s.values) total += v;
    if (!(total > 0.0)) throw FilterCollapse("initial density has no mass");
    for (double& v : s.values) v /= total;
    return s;
}

namespace {

// Images and log-likelihoods of every (source node, quadrature node) pair.
struct KernelTable {
    std::vector<double> image;
    std::vector<double> log_lambda;
    double max_log = -std::numeric_limits<double>::infinity();
};

KernelTable kernel_table(const Grid& grid, const DiscreteFilterState& state, double dX, double dY, double dtau,
                         const ThetaScheme& scheme, const GaussHermiteRule& rule, const DiscreteContext& ctx,
                         const ModelParams& p) {
    if (!(dtau > 0.0)) throw ValidationError("dtau", "must be > 0");
    const std::size_t nq = rule.nodes.size();
    KernelTable kt;
    kt.image.resize(grid.size() * nq);
    kt.log_lambda.resize(grid.size() * nq);
    const double vt = scheme.vartheta;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = std::clamp(grid.nodes[i], 0.0, 1.0);
        for (std::size_t q = 0; q < nq; ++q) {
            const double y = theta_transition(x, rule.nodes[q], dtau, vt, ctx.t, p);
            const double ll = log_increment_likelihood((1.0 - vt) * x + vt * y, dX, dY, dtau, ctx, p);
            kt.image[i * nq + q] = y;
            kt.log_lambda[i * nq + q] = ll;
            if (state.values[i] > 0.0) kt.max_log = std::max(kt.max_log, ll);
        }
    }
    if (!std::isfinite(kt.max_log)) throw FilterCollapse("discrete filter has no mass");
    return kt;
}

}  // namespace

DiscreteFilterState discrete_step(const Grid& grid, const DiscreteFilterState& state, double dX, double dY,
                                  double dtau, const ThetaScheme& scheme, const GaussHermiteRule& rule,
                                  const DiscreteContext& ctx, const ModelParams& p) {
    const KernelTable kt = kernel_table(grid, state, dX, dY, dtau, scheme, rule, ctx, p);
    const std::size_t nq = rule.nodes.size();
    const std::size_t last = grid.size() - 1;

    DiscreteFilterState next;
    next.n = state.n + 1;
    next.tau = state.tau + dtau;
    next.values.assign(grid.size(), 0.0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (state.values[i] <= 0.0) continue;
        for (std::size_t q = 0; q < nq; ++q) {
            const double mass =
                state.values[i] * rule.weights[q] * std::exp(kt.log_lambda[i * nq + q] - kt.max_log);
            const double s = (std::clamp(kt.image[i * nq + q], grid.x_min, grid.x_max) - grid.x_min) / grid.dx;
            const auto j = std::min(static_cast<std::size_t>(s), last);
            const double frac = j == last ? 0.0 : s - static_cast<double>(j);
            next.values[j] += (1.0 - frac) * mass;
            if (frac > 0.0) next.values[j + 1] += frac * mass;
        }
    }

    double total = 0.0;
    for (double v : next.values) total += v;
    if (!(total > 0.0)) throw FilterCollapse("discrete filter weights vanished");
    for (double& v : next.values) v /= total;
    next.log_scale = state.log_scale + kt.max_log + std::log(total);
    return next;
}

double discrete_log_normalizer(const Grid& grid, const DiscreteFilterState& state, double dX, double dY,
                               double dtau, const ThetaScheme& scheme, const GaussHermiteRule& rule,
                               const DiscreteContext& ctx, const ModelParams& p) {
    const KernelTable kt = kernel_table(grid, state, dX, dY, dtau, scheme, rule, ctx, p);
    const std::size_t nq = rule.nodes.size();
    double acc = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double inner = 0.0;
        for (std::size_t q = 0; q < nq; ++q)
            inner += rule.weights[q] * std::exp(kt.log_lambda[i * nq + q] - kt.max_log);
        acc += state.values[i] * inner;
    }
    return state.log_scale + kt.max_log + std::log(acc);
}

PosteriorStats discrete_stats(const Grid& grid, const DiscreteFilterState& state) {
    double m0 = 0.0, m1 = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        m0 += state.values[i];
        m1 += state.values[i] * grid.nodes[i];
    }
    const double mean = m1 / m0;
    double var = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double d = grid.nodes[i] - mean;
        var += state.values[i] * d * d;
    }
    return PosteriorStats{mean, std::max(0.0, var / m0)};
}

DiscreteFilterResult run_discrete_filter(const ObsPath& obs, const ModelParams& p,
                                         const GridFilterSettings& settings, const ThetaScheme& scheme,
                                         double dtau) {
    scheme.validate();
    if (!(dtau > 0.0)) throw ValidationError("dtau", "must be > 0");
    if (!(p.delta2 > 0.0)) throw ValidationError("delta2", "filtering needs delta2 > 0");
    if (!(p.delta3 > 0.0)) throw ValidationError("delta3", "filtering needs delta3 > 0");
    if (obs.size() < 2) throw ValidationError("t_end", "observation path needs at least two records");
    const double h = obs.times[1] - obs.times[0];
    const double ratio = dtau / h;
    const auto stride = static_cast<std::size_t>(std::llround(ratio));
    if (stride == 0 || std::abs(ratio - static_cast<double>(stride)) > 1e-6)
        throw ValidationError("dtau", "must be a whole multiple of the observation spacing");

    const Grid grid = settings.grid();
    const GaussHermiteRule rule = gauss_hermite(scheme.quad_order);
    MeanObsTracker tracker(obs, p, settings.mean_mode);
    DiscreteFilterState state = discrete_initial_state(grid, settings.initial_density(grid), obs.times.front());

    DiscreteFilterResult r;
    auto record = [&](std::size_t k) {
        const PosteriorStats s = discrete_stats(grid, state);
        r.times.push_back(obs.times[k]);
        r.mean.push_back(s.mean);
        r.variance.push_back(s.variance);
        r.log_zeta.push_back(state.log_zeta());
    };
    record(0);

    const double vt = scheme.vartheta;
    for (std::size_t k = 0; k + stride < obs.size(); k += stride) {
        const ObservationContext c0 = tracker.context(k);
        // extrapolate the mean observations to the end of the interval with the current estimate
        const double theta_hat = r.mean.back();
        for (std::size_t j = k; j < k + stride; ++j) tracker.advance(j, theta_hat);
        const ObservationContext c1 = tracker.context(k + stride);
        const DiscreteContext ctx{c0.t, (1.0 - vt) * c0.xbar + vt * c1.xbar, (1.0 - vt) * c0.ybar + vt * c1.ybar};

        const double step = obs.times[k + stride] - obs.times[k];
        state = discrete_step(grid, state, obs.x[k + stride] - obs.x[k], obs.y[k + stride] - obs.y[k], step,
                              scheme, rule, ctx, p);
        record(k + stride);
    }
    return r;
}

}  // namespace anthracnose
