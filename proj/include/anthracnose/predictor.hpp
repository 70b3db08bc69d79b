#pragma once

#include "anthracnose/zakai.hpp"

namespace anthracnose {

/// Conditional law at the last observation time tau, to be carried forward.
struct PredictionRequest {
    double tau = 0.0;
    double horizon = 0.0;
    FilterRunState base;
};

/// Propagates the base density from tau to tau + horizon with the
/// Fokker-Planck operator alone (no observation terms past tau) and returns the
/// normalized result. A zero horizon returns the normalized base.
GridDensity predict(const Grid& grid, const PredictionRequest& req, double dt, const ModelParams& p,
                    const StepOptions& opt = {});

}  // namespace anthracnose
