#include "anthracnose/params.hpp"

namespace anthracnose {

void ModelParams::derive_from_scale() {
    eta_value = 1.0 / (1.0 + epsilon);
    b2 = v_max * std::log(1e5 * v_max * (1.0 - epsilon * eta_value)) / 2.0;
    b3 = v_max * std::log(1e5 * v_max);
}

namespace {

void require(bool ok, const char* key, const char* what) {
    if (!ok) throw ValidationError(key, what);
}

}  // namespace

void ModelParams::validate() const {
    require(std::isfinite(v_max) && v_max > 0.0, "v_max", "must be > 0");
    require(std::isfinite(epsilon) && epsilon > 0.0, "epsilon", "must be > 0");
    require(sigma > 0.0 && sigma < 1.0, "sigma", "must lie in (0, 1)");
    require(std::isfinite(kappa) && kappa >= 0.0, "kappa", "must be >= 0");
    require(std::isfinite(b1) && b1 >= 0.0, "b1", "must be >= 0");
    require(std::isfinite(b2) && b2 >= 0.0, "b2", "must be >= 0");
    require(std::isfinite(b3) && b3 >= 0.0, "b3", "must be >= 0");
    require(std::isfinite(c1), "c1", "must be finite");
    require(std::isfinite(c2), "c2", "must be finite");
    require(std::isfinite(c3), "c3", "must be finite");
    require(std::isfinite(d1), "d1", "must be finite");
    require(std::isfinite(d2), "d2", "must be finite");
    require(std::isfinite(d3), "d3", "must be finite");
    require(std::isfinite(omega1), "omega1", "must be finite");
    require(std::isfinite(omega2) && omega2 >= 0.0, "omega2", "must be >= 0");
    require(std::isfinite(phi1), "phi1", "must be finite");
    require(std::isfinite(phi2), "phi2", "must be finite");
    require(std::isfinite(delta1) && delta1 > 0.0, "delta1", "must be > 0");
    require(std::isfinite(delta2) && delta2 > 0.0, "delta2", "must be > 0");
    require(std::isfinite(delta3) && delta3 > 0.0, "delta3", "must be > 0");
    require(eta_value > 0.0 && eta_value <= 1.0, "eta_value", "must lie in (0, 1]");
    require(std::isfinite(p1_value) && p1_value >= 0.0, "p1_value", "must be >= 0");
    require(std::isfinite(p2_value) && p2_value > 0.0, "p2_value", "must be > 0");
}

}  // namespace anthracnose
