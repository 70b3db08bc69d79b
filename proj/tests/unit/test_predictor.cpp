#include <cmath>

#include "anthracnose/predictor.hpp"
#include "doctest.h"

using namespace anthracnose;

namespace {

ObsPath sample_path(std::uint64_t seed, const ModelParams& p) {
    SimConfig cfg;
    cfg.seed = seed;
    const TruthPath truth = simulate_truth(cfg, p);
    return simulate_observations(integrate_mean_obs(truth, p), cfg, p);
}

}  // namespace

TEST_CASE("zero horizon is the identity") {
    const Grid g = build_grid(0.0, 1.0, 0.01);
    ModelParams p;
    PredictionRequest req;
    req.tau = 0.3;
    req.horizon = 0.0;
    req.base.density = gaussian_density(g, 0.4, 0.05);
    const GridDensity out = predict(g, req, 1e-3, p);
    for (std::size_t i = 0; i < g.size(); ++i)
        CHECK(out.values[i] == doctest::Approx(req.base.density.values[i]).epsilon(1e-14));
}

TEST_CASE("zero generator leaves the density unchanged") {
    const Grid g = build_grid(0.0, 1.0, 0.01);
    ModelParams p;
    p.b1 = 0.0;
    p.delta1 = 0.0;
    PredictionRequest req;
    req.tau = 0.1;
    req.horizon = 0.4;
    req.base.density = gaussian_density(g, 0.6, 0.1);
    const GridDensity out = predict(g, req, 1e-3, p);
    for (std::size_t i = 0; i < g.size(); ++i)
        CHECK(out.values[i] == doctest::Approx(req.base.density.values[i]).epsilon(1e-14));
}

TEST_CASE("negative horizon is rejected") {
    const Grid g = build_grid(0.0, 1.0, 0.1);
    PredictionRequest req;
    req.horizon = -0.1;
    req.base.density = uniform_density(g);
    CHECK_THROWS_AS(predict(g, req, 1e-3, ModelParams{}), ValidationError);
}

TEST_CASE("prediction ignores observations after tau") {
    ModelParams p;
    const ObsPath obs = sample_path(5, p);
    GridFilterSettings s;
    s.dx = 0.01;
    const std::size_t stop = 500;
    const GridFilterCheckpoint a = run_grid_filter_until(obs, p, s, stop);

    ObsPath perturbed = obs;
    for (std::size_t k = stop; k + 1 < perturbed.size(); ++k) {
        perturbed.dx[k] += 0.37;
        perturbed.dy[k] -= 0.11;
        perturbed.x[k + 1] += 1.0;
    }
    const GridFilterCheckpoint b = run_grid_filter_until(perturbed, p, s, stop);
    const Grid g = s.grid();
    PredictionRequest ra{obs.times[stop], 0.25, a.state};
    PredictionRequest rb{perturbed.times[stop], 0.25, b.state};
    CHECK(predict(g, ra, 1e-3, p).values == predict(g, rb, 1e-3, p).values);
}

TEST_CASE("prediction composes with the filter at the seam") {
    ModelParams p;
    const ObsPath obs = sample_path(6, p);
    GridFilterSettings s;
    s.dx = 0.01;
    const Grid g = s.grid();
    const GridFilterCheckpoint cp = run_grid_filter_until(obs, p, s, 400);

    // the filter's recorded posterior at tau equals the normalized checkpoint
    const GridDensity at_tau = normalize(g, cp.state.density).pi;
    CHECK(posterior_stats(g, at_tau).mean == cp.history.mean.back());

    // predicting h1 then h2 equals predicting h1 + h2 for identical step sequences
    PredictionRequest whole{obs.times[400], 0.2, cp.state};
    PredictionRequest first{obs.times[400], 0.1, cp.state};
    FilterRunState mid;
    mid.density = predict(g, first, 1e-3, p);
    PredictionRequest second{obs.times[400] + 0.1, 0.1, mid};
    const GridDensity a = predict(g, whole, 1e-3, p);
    const GridDensity b = predict(g, second, 1e-3, p);
    CHECK(l1_distance(g, a.values, b.values) <= 1e-12);
}
