#include <cmath>
#include <numbers>

#include "anthracnose/discrete.hpp"
#include "doctest.h"

using namespace anthracnose;

TEST_CASE("Gauss-Hermite rule") {
    for (int n : {3, 5, 11, 21, 41}) {
        const GaussHermiteRule r = gauss_hermite(n);
        double m0 = 0.0, m1 = 0.0, m2 = 0.0, m4 = 0.0;
        for (int i = 0; i < n; ++i) {
            const double x = r.nodes[i];
            m0 += r.weights[i];
            m1 += r.weights[i] * x;
            m2 += r.weights[i] * x * x;
            m4 += r.weights[i] * x * x * x * x;
        }
        CHECK(m0 == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(std::abs(m1) <= 1e-13);
        CHECK(m2 == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(m4 == doctest::Approx(3.0).epsilon(1e-12));
    }
    const GaussHermiteRule r3 = gauss_hermite(3);
    CHECK(r3.nodes[2] == doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));
    CHECK(r3.weights[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(r3.weights[0] == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    // E[cos(xi)] = e^{-1/2}
    const GaussHermiteRule r21 = gauss_hermite(21);
    double c = 0.0;
    for (int i = 0; i < 21; ++i) c += r21.weights[i] * std::cos(r21.nodes[i]);
    CHECK(c == doctest::Approx(std::exp(-0.5)).epsilon(1e-13));
}

TEST_CASE("theta scheme validation") {
    ThetaScheme s;
    CHECK_NOTHROW(s.validate());
    s.quad_order = 4;
    CHECK_THROWS_AS(s.validate(), ValidationError);
    s.quad_order = 1;
    CHECK_THROWS_AS(s.validate(), ValidationError);
    s = ThetaScheme{};
    s.vartheta = 1.2;
    CHECK_THROWS_AS(s.validate(), ValidationError);
}

TEST_CASE("transition expectation") {
    ModelParams p;
    const double t = 0.3, dtau = 1e-2;
    ThetaScheme s;
    const double alpha = eval_alpha(t, p);
    const double w = eval_control(t, p).w;

    SUBCASE("boundary points are deterministic") {
        for (double x : {0.0, 1.0}) {
            const double image = theta_transition(x, 0.0, dtau, s.vartheta, t, p);
            auto phi = [](double y) { return y * y + std::sin(3.0 * y); };
            CHECK(transition_expectation(x, phi, dtau, s, t, p) == doctest::Approx(phi(image)).epsilon(1e-14));
        }
    }
    SUBCASE("explicit scheme and linear phi give the drift image") {
        ThetaScheme ex;
        ex.vartheta = 0.0;
        const double x = 0.4;
        auto phi = [](double y) { return 2.0 * y - 0.5; };
        const double expect = phi(x + dtau * inhibition_drift(x, alpha, w));
        CHECK(transition_expectation(x, phi, dtau, ex, t, p) == doctest::Approx(expect).epsilon(1e-13));
    }
    SUBCASE("constant phi integrates to one") {
        auto one = [](double) { return 1.0; };
        for (double x : {0.0, 0.2, 0.5, 0.9})
            CHECK(std::abs(transition_expectation(x, one, dtau, s, t, p) - 1.0) <= 1e-12);
    }
    SUBCASE("implicit scheme contracts towards 1/w") {
        ModelParams q = p;
        q.delta1 = 0.0;
        const double eq = 1.0 / w;
        for (double dt : {1e-3, 0.1, 10.0, 1e3}) {
            double x = 0.02;
            double gap = std::abs(x - eq);
            for (int k = 0; k < 20; ++k) {
                x = theta_transition(x, 0.0, dt, 1.0, t, q);
                const double g = std::abs(x - eq);
                REQUIRE(g <= gap);
                gap = g;
            }
        }
    }
}

TEST_CASE("increment likelihood") {
    ModelParams p;
    const double dtau = 1e-2;
    SUBCASE("no drift gives one") {
        const DiscreteContext ctx{0.75, 0.1, 0.2};  // beta = gamma = 0
        CHECK(increment_likelihood(0.4, 0.3, -0.1, dtau, ctx, p) == 1.0);
    }
    SUBCASE("matched increments complete the square") {
        const DiscreteContext ctx{0.3, 0.1, -0.5};
        const double x = 0.6;
        const ObsDrift d = eval_obs_drift(ctx.t, ctx.xbar, ctx.ybar, x, p);
        const double q2 = p.delta2 * p.delta2, q3 = p.delta3 * p.delta3;
        const double lam = log_increment_likelihood(x, dtau * d.f, dtau * d.g, dtau, ctx, p);
        CHECK(lam == doctest::Approx(dtau * (d.f * d.f / (2.0 * q2) + d.g * d.g / (2.0 * q3))).epsilon(1e-12));
        CHECK(lam >= 0.0);
    }
    SUBCASE("always positive") {
        const DiscreteContext ctx{0.3, 0.1, -0.5};
        for (double x : {0.0, 0.3, 0.7, 1.0})
            for (double dX : {-0.1, 0.0, 0.1}) CHECK(increment_likelihood(x, dX, 0.0, dtau, ctx, p) >= 0.0);
    }
}

TEST_CASE("discrete step") {
    ModelParams p;
    const Grid g = build_grid(0.0, 1.0, 0.01);
    const GaussHermiteRule rule = gauss_hermite(21);
    ThetaScheme s;
    const DiscreteFilterState s0 = discrete_initial_state(g, gaussian_density(g, 0.4, 0.08), 0.0);
    double total = 0.0;
    for (double v : s0.values) total += v;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(s0.zeta() == doctest::Approx(1.0).epsilon(1e-14));

    SUBCASE("normalizer computed two ways") {
        const DiscreteContext ctx{0.3, -0.2, -0.9};
        const double dX = 0.004, dY = -0.002, dtau = 1e-2;
        const DiscreteFilterState s1 = discrete_step(g, s0, dX, dY, dtau, s, rule, ctx, p);
        const double direct = discrete_log_normalizer(g, s0, dX, dY, dtau, s, rule, ctx, p);
        CHECK(std::abs(std::exp(s1.log_zeta() - direct) - 1.0) <= 1e-12);
        for (double v : s1.values) CHECK(v >= 0.0);
        CHECK(s1.n == 1);
        CHECK(s1.tau == doctest::Approx(dtau));
    }
    SUBCASE("vanishing step with no information is the identity") {
        ModelParams q = p;
        const DiscreteContext ctx{0.75, 0.0, 0.0};  // all rates vanish
        const DiscreteFilterState s1 = discrete_step(g, s0, 0.0, 0.0, 1e-9, s, rule, ctx, q);
        for (std::size_t i = 0; i < g.size(); ++i) CHECK(s1.values[i] == doctest::Approx(s0.values[i]).epsilon(1e-4));
    }
}

TEST_CASE("discrete filter run") {
    ModelParams p;
    SimConfig cfg;
    cfg.seed = 3;
    const TruthPath truth = simulate_truth(cfg, p);
    const ObsPath obs = simulate_observations(integrate_mean_obs(truth, p), cfg, p);
    GridFilterSettings gs;
    gs.dx = 0.01;
    ThetaScheme s;
    const DiscreteFilterResult r = run_discrete_filter(obs, p, gs, s, 1e-2);
    CHECK(r.times.size() == 101);
    double mae = 0.0;
    for (std::size_t k = 0; k < r.times.size(); ++k) mae += std::abs(r.mean[k] - truth.theta[k * 10]) / 101.0;
    CHECK(mae < 0.1);
    CHECK_THROWS_AS(run_discrete_filter(obs, p, gs, s, 2.5e-3), ValidationError);
}
