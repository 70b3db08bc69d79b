#include "anthracnose/zakai.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "anthracnose/model.hpp"

namespace anthracnose {

GridDensity GridFilterSettings::initial_density(const Grid& grid) const {
    GridDensity d = prior == PriorKind::kUniform ? uniform_density(grid, 0.0, 1.0)
                                                 : gaussian_density(grid, prior_mean, prior_sd);
    d.kind = DensityKind::kUnnormalized;
    return d;
}

LikelihoodField likelihood_field(const Grid& grid, const ObservationContext& ctx, const ModelParams& p) {
    LikelihoodField lf;
    lf.h2.resize(grid.size());
    lf.h3.resize(grid.size());
    const double inv2 = 1.0 / (p.delta2 * p.delta2);
    const double inv3 = 1.0 / (p.delta3 * p.delta3);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = std::clamp(grid.nodes[i], 0.0, 1.0);
        const ObsDrift d = eval_obs_drift(ctx.t, ctx.xbar, ctx.ybar, x, p);
        lf.h2[i] = d.f * inv2;
        lf.h3[i] = d.g * inv3;
    }
    return lf;
}

double FilterRunState::zeta(const Grid& grid) const {
    return std::exp(log_scale) * trapezoid(grid, density.values);
}

double FilterRunState::log_zeta(const Grid& grid) const {
    return log_scale + std::log(trapezoid(grid, density.values));
}

namespace {

// Scales values to unit trapezoid mass and returns the log of the factor removed.
double rescale_unit_mass(const Grid& grid, std::vector<double>& values) {
    const double mass = trapezoid(grid, values);
    if (!(mass > 0.0) || !std::isfinite(mass)) throw FilterCollapse("all grid nodes vanished");
    for (double& v : values) v /= mass;
    return std::log(mass);
}

// Multiplies values by exp(log_factor) after shifting by the largest exponent
// over the support; returns the shift.
double multiply_exp(std::vector<double>& values, const std::vector<double>& log_factor) {
    double shift = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < values.size(); ++i)
        if (values[i] > 0.0) shift = std::max(shift, log_factor[i]);
    if (!std::isfinite(shift)) throw FilterCollapse("all grid nodes vanished");
    for (std::size_t i = 0; i < values.size(); ++i)
        values[i] = values[i] > 0.0 ? values[i] * std::exp(log_factor[i] - shift) : 0.0;
    return shift;
}

}  // namespace

FilterRunState zakai_step(const Grid& grid, const FilterRunState& state, double dX, double dY, double dt,
                          const ObservationContext& ctx, const ModelParams& p, const StepOptions& opt,
                          FloorStats& stats) {
    const LikelihoodField lf = likelihood_field(grid, ctx, p);
    FilterRunState next;
    next.t = state.t + dt;
    next.log_scale = state.log_scale;
    next.density.kind = DensityKind::kUnnormalized;
    std::vector<double>& v = next.density.values;

    if (opt.update == UpdateScheme::kExplicit) {
        const std::vector<double>& old = state.density.values;
        const std::vector<double> drift = apply_generator_adjoint(grid, build_generator(grid, ctx.t, p, opt.stencil), old);
        v.resize(old.size());
        for (std::size_t i = 0; i < old.size(); ++i)
            v[i] = old[i] + dt * drift[i] + lf.h2[i] * old[i] * dX + lf.h3[i] * old[i] * dY;
        floor_negative(v, stats);
    } else {
        v = state.density.values;
        fokker_planck_advance(grid, v, ctx.t, dt, p, opt.stencil, stats, opt.substep);
        const double a2 = 0.5 * p.delta2 * p.delta2 * dt;
        const double a3 = 0.5 * p.delta3 * p.delta3 * dt;
        std::vector<double> log_factor(v.size());
        for (std::size_t i = 0; i < v.size(); ++i)
            log_factor[i] = lf.h2[i] * dX - a2 * lf.h2[i] * lf.h2[i] + lf.h3[i] * dY - a3 * lf.h3[i] * lf.h3[i];
        next.log_scale += multiply_exp(v, log_factor);
    }
    next.log_scale += rescale_unit_mass(grid, v);
    return next;
}

FilterRunState zakai_step(const Grid& grid, const FilterRunState& state, double dX, double dY, double dt,
                          const ObservationContext& ctx, const ModelParams& p, const StepOptions& opt) {
    FloorStats stats;
    return zakai_step(grid, state, dX, dY, dt, ctx, p, opt, stats);
}

GridDensity ks_step(const Grid& grid, const GridDensity& pi, double dX, double dY, double dt,
                    const ObservationContext& ctx, const ModelParams& p, const StepOptions& opt,
                    FloorStats& stats) {
    const LikelihoodField lf = likelihood_field(grid, ctx, p);
    const double q2 = p.delta2 * p.delta2;
    const double q3 = p.delta3 * p.delta3;
    GridDensity next;
    next.kind = DensityKind::kNormalized;
    std::vector<double>& v = next.values;

    if (opt.update == UpdateScheme::kExplicit) {
        const std::vector<double>& old = pi.values;
        const double mean2 = trapezoid_product(grid, lf.h2, old);
        const double mean3 = trapezoid_product(grid, lf.h3, old);
        const double innov2 = dX - q2 * mean2 * dt;
        const double innov3 = dY - q3 * mean3 * dt;
        const std::vector<double> drift = apply_generator_adjoint(grid, build_generator(grid, ctx.t, p, opt.stencil), old);
        v.resize(old.size());
        for (std::size_t i = 0; i < old.size(); ++i)
            v[i] = old[i] + dt * drift[i] + (lf.h2[i] - mean2) * old[i] * innov2 +
                   (lf.h3[i] - mean3) * old[i] * innov3;
        floor_negative(v, stats);
    } else {
        v = pi.values;
        fokker_planck_advance(grid, v, ctx.t, dt, p, opt.stencil, stats, opt.substep);
        rescale_unit_mass(grid, v);
        const double mean2 = trapezoid_product(grid, lf.h2, v);
        const double mean3 = trapezoid_product(grid, lf.h3, v);
        const double innov2 = dX - q2 * mean2 * dt;
        const double innov3 = dY - q3 * mean3 * dt;
        std::vector<double> log_factor(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double c2 = lf.h2[i] - mean2;
            const double c3 = lf.h3[i] - mean3;
            log_factor[i] = c2 * innov2 - 0.5 * q2 * c2 * c2 * dt + c3 * innov3 - 0.5 * q3 * c3 * c3 * dt;
        }
        multiply_exp(v, log_factor);
    }
    rescale_unit_mass(grid, v);
    return next;
}

GridDensity ks_step(const Grid& grid, const GridDensity& pi, double dX, double dY, double dt,
                    const ObservationContext& ctx, const ModelParams& p, const StepOptions& opt) {
    FloorStats stats;
    return ks_step(grid, pi, dX, dY, dt, ctx, p, opt, stats);
}

// --- mean observations seen by the filter ------------------------------------

MeanObsTracker::MeanObsTracker(const ObsPath& obs, const ModelParams& p, MeanObsMode mode)
    : obs_(&obs), p_(&p), mode_(mode) {
    if (mode_ == MeanObsMode::kReconstructed) {
        // no noise has accumulated at t = 0, so X_0 = Xbar_0
        auto [v, rho] = from_obs_coords(obs.x.front(), obs.y.front(), p);
        state_ = MeanObsState{v, rho};
    }
}

ObservationContext MeanObsTracker::context(std::size_t k) const {
    if (mode_ == MeanObsMode::kOracle) return ObservationContext{obs_->times[k], obs_->xbar[k], obs_->ybar[k]};
    return ObservationContext{obs_->times[k], bounded_logit(state_.vbar, p_->v_max),
                              bounded_logit(state_.rhobar, 1.0)};
}

void MeanObsTracker::advance(std::size_t k, double theta_hat) {
    if (mode_ == MeanObsMode::kOracle) return;
    const double dt = obs_->times[k + 1] - obs_->times[k];
    state_ = advance_mean_obs(state_, obs_->times[k], dt, std::clamp(theta_hat, 0.0, 1.0), *p_);
}

// --- continuous-time driver --------------------------------------------------

namespace {

void check_filter_inputs(const Grid& grid, const ObsPath& obs, const ModelParams& p) {
    if (!(p.delta2 > 0.0)) throw ValidationError("delta2", "filtering needs delta2 > 0");
    if (!(p.delta3 > 0.0)) throw ValidationError("delta3", "filtering needs delta3 > 0");
    if (obs.size() < 2) throw ValidationError("t_end", "observation path needs at least two records");
    const double limit = diffusion_dt_limit(grid, p);
    for (std::size_t k = 0; k + 1 < obs.size(); ++k)
        if (obs.times[k + 1] - obs.times[k] > limit)
            throw ValidationError("dt", "violates the diffusion stability bound dx^2 / max g1^2");
}

struct LoopOutput {
    FilterRunState zakai;
    GridFilterResult result;
};

LoopOutput filter_loop(const ObsPath& obs, const ModelParams& p, const GridFilterSettings& settings,
                       ContinuousMethod method, std::size_t stop, const DensityObserver& observer) {
    const Grid grid = settings.grid();
    check_filter_inputs(grid, obs, p);
    MeanObsTracker tracker(obs, p, settings.mean_mode);

    LoopOutput out;
    GridFilterResult& r = out.result;
    out.zakai.t = obs.times.front();
    out.zakai.density = settings.initial_density(grid);
    GridDensity pi = normalize(grid, out.zakai.density).pi;

    double log_closed = 0.0;
    auto record = [&](std::size_t k, double log_zeta) {
        const PosteriorStats s = posterior_stats(grid, pi);
        r.times.push_back(obs.times[k]);
        r.mean.push_back(s.mean);
        r.variance.push_back(s.variance);
        r.log_zeta.push_back(log_zeta);
        r.log_zeta_closed.push_back(log_closed);
        if (observer) observer(k, obs.times[k], pi.values);
    };
    record(0, out.zakai.log_zeta(grid));

    const double q2 = p.delta2 * p.delta2;
    const double q3 = p.delta3 * p.delta3;
    for (std::size_t k = 0; k < stop; ++k) {
        const ObservationContext ctx = tracker.context(k);
        const double dt = obs.times[k + 1] - obs.times[k];
        const double dX = obs.dx[k];
        const double dY = obs.dy[k];

        const LikelihoodField lf = likelihood_field(grid, ctx, p);
        std::vector<double> predicted = pi.values;
        {
            FloorStats scratch;
            fokker_planck_advance(grid, predicted, ctx.t, dt, p, settings.step.stencil, scratch,
                                  settings.step.substep);
            rescale_unit_mass(grid, predicted);
        }
        const double m2 = trapezoid_product(grid, lf.h2, predicted);
        const double m3 = trapezoid_product(grid, lf.h3, predicted);
        log_closed += m2 * dX - 0.5 * q2 * m2 * m2 * dt + m3 * dY - 0.5 * q3 * m3 * m3 * dt;
        const double theta_hat = r.mean.back();

        double log_zeta = log_closed;
        if (method == ContinuousMethod::kZakai) {
            out.zakai = zakai_step(grid, out.zakai, dX, dY, dt, ctx, p, settings.step, r.floor);
            pi = normalize(grid, out.zakai.density).pi;
            log_zeta = out.zakai.log_zeta(grid);
        } else {
            pi = ks_step(grid, pi, dX, dY, dt, ctx, p, settings.step, r.floor);
        }
        tracker.advance(k, theta_hat);
        record(k + 1, log_zeta);
    }
    return out;
}

}  // namespace

GridFilterResult run_grid_filter(const ObsPath& obs, const ModelParams& p, const GridFilterSettings& settings,
                                 ContinuousMethod method, const DensityObserver& observer) {
    return filter_loop(obs, p, settings, method, obs.size() - 1, observer).result;
}

GridFilterCheckpoint run_grid_filter_until(const ObsPath& obs, const ModelParams& p,
                                           const GridFilterSettings& settings, std::size_t stop) {
    if (stop >= obs.size()) throw ValidationError("tau", "lies beyond the observation horizon");
    LoopOutput out = filter_loop(obs, p, settings, ContinuousMethod::kZakai, stop, {});
    return GridFilterCheckpoint{std::move(out.zakai), std::move(out.result)};
}

}  // namespace anthracnose
