#include "anthracnose/predictor.hpp"

#include <cmath>

namespace anthracnose {

GridDensity predict(const Grid& grid, const PredictionRequest& req, double dt, const ModelParams& p,
                    const StepOptions& opt) {
    if (!(req.horizon >= 0.0)) throw ValidationError("horizon", "must be >= 0");
    if (!(dt > 0.0)) throw ValidationError("dt", "must be > 0");

    std::vector<double> values = req.base.density.values;
    FloorStats stats;
    const auto full = static_cast<std::size_t>(std::floor(req.horizon / dt + 1e-9));
    double t = req.tau;
    for (std::size_t k = 0; k < full; ++k) {
        fokker_planck_advance(grid, values, t, dt, p, opt.stencil, stats, opt.substep);
        t = req.tau + static_cast<double>(k + 1) * dt;
    }
    const double rest = req.horizon - static_cast<double>(full) * dt;
    if (rest > 1e-12 * dt) fokker_planck_advance(grid, values, t, rest, p, opt.stencil, stats, opt.substep);

    return normalize(grid, GridDensity{std::move(values), DensityKind::kUnnormalized}).pi;
}

}  // namespace anthracnose
