#pragma once

#include <vector>

namespace anthracnose {

/// Nodes and weights for E[phi(xi)] with xi ~ N(0, 1). Weights sum to 1.
struct GaussHermiteRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point rule, computed by Newton iteration on the Hermite recurrence.
GaussHermiteRule gauss_hermite(int n);

}  // namespace anthracnose
