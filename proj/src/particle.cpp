#include "anthracnose/particle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "anthracnose/rng.hpp"

namespace anthracnose {

double ParticleEnsemble::ess() const {
    double s = 0.0;
    for (double w : weights) s += w * w;
    return s > 0.0 ? 1.0 / s : 0.0;
}

std::vector<std::size_t> resample_systematic(std::span<const double> weights, std::mt19937_64& rng) {
    const std::size_t n = weights.size();
    std::vector<std::size_t> idx(n);
    if (n == 0) return idx;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double u0 = unif(rng);
    const double nn = static_cast<double>(n);
    double cum = weights[0] * nn;
    std::size_t j = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double u = u0 + static_cast<double>(i);
        while (u >= cum && j + 1 < n) cum += weights[++j] * nn;
        idx[i] = j;
    }
    return idx;
}

double normalize_log_weights(std::span<const double> log_w, std::vector<double>& weights) {
    double m = -std::numeric_limits<double>::infinity();
    for (double l : log_w) m = std::max(m, l);
    if (!std::isfinite(m)) throw FilterCollapse("all particle weights vanished");
    weights.resize(log_w.size());
    double s = 0.0;
    for (std::size_t i = 0; i < log_w.size(); ++i) {
        weights[i] = std::exp(log_w[i] - m);
        s += weights[i];
    }
    for (double& w : weights) w /= s;
    return m + std::log(s);
}

namespace {

std::vector<double> initial_positions(const ParticleFilterSettings& s, std::mt19937_64& rng) {
    std::vector<double> x(s.n_particles);
    if (s.init == ParticleInit::kPoint) {
        std::fill(x.begin(), x.end(), std::clamp(s.init_value, 0.0, 1.0));
    } else if (s.prior == PriorKind::kUniform) {
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        for (double& xi : x) xi = unif(rng);
    } else {
        // truncated normal by rejection
        std::normal_distribution<double> gauss(s.prior_mean, s.prior_sd);
        for (double& xi : x) {
            do xi = gauss(rng);
            while (xi < 0.0 || xi > 1.0);
        }
    }
    return x;
}

}  // namespace

ParticleFilterResult pf_run(const ObsPath& obs, const ModelParams& p, const ParticleFilterSettings& settings) {
    if (settings.n_particles < 100) throw ValidationError("particles", "need at least 100 particles");
    if (!(p.delta2 > 0.0)) throw ValidationError("delta2", "filtering needs delta2 > 0");
    if (!(p.delta3 > 0.0)) throw ValidationError("delta3", "filtering needs delta3 > 0");
    if (obs.size() < 2) throw ValidationError("t_end", "observation path needs at least two records");

    std::mt19937_64 rng = make_stream(settings.seed, Stream::kParticles);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const std::size_t n = settings.n_particles;

    ParticleEnsemble ens;
    ens.positions = initial_positions(settings, rng);
    ens.weights.assign(n, 1.0 / static_cast<double>(n));
    std::vector<double> log_w(n);
    std::vector<double> scratch(n);
    MeanObsTracker tracker(obs, p, settings.mean_mode);

    ParticleFilterResult r;
    double log_zeta = 0.0;
    auto record = [&](std::size_t k) {
        double m = 0.0;
        for (std::size_t i = 0; i < n; ++i) m += ens.weights[i] * ens.positions[i];
        double var = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = ens.positions[i] - m;
            var += ens.weights[i] * d * d;
        }
        r.times.push_back(obs.times[k]);
        r.mean.push_back(m);
        r.variance.push_back(var);
        r.log_zeta.push_back(log_zeta);
        r.ess.push_back(ens.ess());
    };
    record(0);

    const double q2 = p.delta2 * p.delta2;
    const double q3 = p.delta3 * p.delta3;
    for (std::size_t k = 0; k + 1 < obs.size(); ++k) {
        const ObservationContext ctx = tracker.context(k);
        const double dt = obs.times[k + 1] - obs.times[k];
        const double sq = std::sqrt(dt);
        const double dX = obs.dx[k];
        const double dY = obs.dy[k];

        const InhibitionCoeffs coeffs = inhibition_coeffs(ctx.t, dt, p);
        for (std::size_t i = 0; i < n; ++i) {
            const double y = inhibition_step(coeffs, ens.positions[i], dt, sq * gauss(rng), settings.vartheta, p);
            ens.positions[i] = y;
            const ObsDrift d = eval_obs_drift(ctx.t, ctx.xbar, ctx.ybar, y, p);
            // Girsanov increment; differs from the Gaussian transition density by an x-free factor
            log_w[i] = std::log(ens.weights[i]) + d.f * dX / q2 - 0.5 * d.f * d.f * dt / q2 + d.g * dY / q3 -
                       0.5 * d.g * d.g * dt / q3;
        }
        log_zeta += normalize_log_weights(log_w, ens.weights);

        record(k + 1);
        tracker.advance(k, r.mean[k]);

        if (ens.ess() < settings.resample_threshold * static_cast<double>(n)) {
            const auto idx = resample_systematic(ens.weights, rng);
            for (std::size_t i = 0; i < n; ++i) scratch[i] = ens.positions[idx[i]];
            ens.positions.swap(scratch);
            ens.weights.assign(n, 1.0 / static_cast<double>(n));
            ++r.resample_count;
        }
    }
    return r;
}

}  // namespace anthracnose
