#pragma once

#include <vector>

namespace photonmem {

// Result of fitting g(t) = A * exp(-t/T) + g0.
struct DecayFit {
    double amplitude = 0.0;  // A
    double decay_time_ns = 0.0; // T, always > 0
    double offset = 0.0;     // g0
    double residual_norm = 0.0; // sqrt(sum of squared weighted residuals)
};

struct DecayPoint {
    double t_ns = 0.0;
    double g = 0.0;
    double stderr = 0.0; // <= 0 means unweighted
};

// Damped least squares (Levenberg-Marquardt) on the three-parameter
// exponential decay. The decay time is iterated in log space so T stays
// positive. Initialization: A = g(first) - g(last), g0 = g(last),
// T = half the time span. Deterministic for identical input.
DecayFit fit_exponential_decay(const std::vector<DecayPoint>& points);

} // namespace photonmem
