#pragma once

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "anthracnose/discrete.hpp"
#include "anthracnose/params.hpp"
#include "anthracnose/simulation.hpp"
#include "anthracnose/zakai.hpp"

namespace anthracnose {

/// Missing or unreadable configuration file, or a line that is not `key = value`.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Method { kZakai, kKushnerStratonovich, kDiscrete, kOracle };

/// Accepts zakai, ks, discrete, oracle. Throws ValidationError("methods", ...).
Method parse_method(std::string_view name);
std::string method_name(Method m);

struct FilterConfig {
    GridFilterSettings grid;
    std::vector<Method> methods{Method::kZakai};
    ThetaScheme scheme;
    double dtau = 1e-2;
    std::size_t particles = 1000;
    double tau = 0.5;
    double horizon = 0.25;
};

/// Initial-condition lists; every combination is one scenario cell.
struct ScenarioMatrix {
    std::vector<double> theta0{0.05, 0.75};
    std::vector<double> v0{0.05, 0.5};
    std::vector<double> rho0{0.25, 0.75};

    std::size_t size() const { return theta0.size() * v0.size() * rho0.size(); }
};

struct ScenarioConfig {
    ModelParams params;
    SimConfig sim;
    FilterConfig filter;
    ScenarioMatrix matrix;
    /// Worker threads for run_compare; 0 picks the hardware concurrency.
    std::size_t threads = 0;

    void validate() const;
};

/// Parses flat `key = value` text. Lines starting with # are comments; list
/// values are comma separated. Omitted keys keep their defaults.
ScenarioConfig parse_config(std::string_view text);
ScenarioConfig load_config(const std::filesystem::path& path);

/// Names of every accepted key, in documentation order.
const std::vector<std::string>& config_keys();

}  // namespace anthracnose
