#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace anthracnose {

/// Raised when a parameter or configuration value is out of its valid range.
/// `key()` names the offending field.
class ValidationError : public std::invalid_argument {
public:
    ValidationError(std::string key, const std::string& what)
        : std::invalid_argument(key + ": " + what), key_(std::move(key)) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

/// Coefficients of the lumped anthracnose model. Defaults are the values used
/// for the filtering experiments (fruit volume scale 1, noise ranges 1e-2).
struct ModelParams {
    double v_max = 1.0;
    double epsilon = 1e-4;
    double sigma = 0.9;
    double kappa = 1.0;

    double b1 = 5.0 * std::numbers::ln10;
    // eta* read as sup_t eta(t) = 1/(1+epsilon)
    double b2 = 0.5 * std::log(1e5 * (1.0 - 1e-4 / (1.0 + 1e-4)));
    double b3 = std::log(1e5);

    double c1 = 10.0 * std::numbers::pi;
    double c2 = 10.0 * std::numbers::pi;
    double c3 = 10.0 * std::numbers::pi;
    double d1 = 0.75;
    double d2 = 0.75;
    double d3 = 0.75;

    double omega1 = 25.0 * std::numbers::pi;
    double omega2 = 10.0;
    double phi1 = 0.4;
    double phi2 = 0.6;

    double delta1 = 1e-2;
    double delta2 = 1e-2;
    double delta3 = 1e-2;

    double eta_value = 1.0 / (1.0 + 1e-4);
    double p1_value = 0.0;
    double p2_value = 1.0;

    /// Recomputes b2, b3 and eta from v_max and epsilon the way the default
    /// table ties them together.
    void derive_from_scale();

    /// Throws ValidationError naming the first invalid field.
    void validate() const;
};

}  // namespace anthracnose
