#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "anthracnose/simulation.hpp"
#include "anthracnose/zakai.hpp"

namespace anthracnose {

struct ParticleEnsemble {
    std::vector<double> positions;
    std::vector<double> weights;

    /// 1 / sum(w^2).
    double ess() const;
};

/// Single-uniform systematic resampling. Returns one parent index per slot.
std::vector<std::size_t> resample_systematic(std::span<const double> weights, std::mt19937_64& rng);

/// Turns log-weights into normalized weights. Returns the log of the sum of
/// the unnormalized weights.
double normalize_log_weights(std::span<const double> log_w, std::vector<double>& weights);

enum class ParticleInit {
    kPrior,  ///< draw from the same prior as the grid filter
    kPoint,  ///< every particle at `init_value`
};

struct ParticleFilterSettings {
    std::size_t n_particles = 1000;
    std::uint64_t seed = 1;
    MeanObsMode mean_mode = MeanObsMode::kReconstructed;
    ParticleInit init = ParticleInit::kPrior;
    PriorKind prior = PriorKind::kUniform;
    double prior_mean = 0.5;
    double prior_sd = 0.1;
    double init_value = 0.05;
    /// Implicitness of the propagation step; matches the simulator.
    double vartheta = 1.0;
    /// Resample when ESS falls below this fraction of n_particles.
    double resample_threshold = 0.5;
};

struct ParticleFilterResult {
    std::vector<double> times;
    std::vector<double> mean;
    std::vector<double> variance;
    std::vector<double> log_zeta;
    std::vector<double> ess;
    std::size_t resample_count = 0;
};

ParticleFilterResult pf_run(const ObsPath& obs, const ModelParams& p, const ParticleFilterSettings& settings);

}  // namespace anthracnose
