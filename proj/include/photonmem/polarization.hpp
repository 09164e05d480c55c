#pragma once

#include <complex>
#include <cstdint>
#include <string>

#include <Eigen/Dense>

namespace photonmem {

using Jones = Eigen::Vector2cd;
using Mat2 = Eigen::Matrix2cd;

enum class StateLabel { H, V, D, A, R, L };

StateLabel parse_state_label(const std::string& name);
std::string to_string(StateLabel label);

// Unit-norm Jones vector in the (H, V) basis.
struct PolarizationState {
    Jones amplitudes = Jones(1.0, 0.0);

    void validate() const;
};

// Standard Jones vectors; circular states follow the convention
// R = (H - iV)/sqrt(2), L = (H + iV)/sqrt(2).
PolarizationState prepare_state(StateLabel label);

// 2x2 density operator: Hermitian, unit trace, positive semidefinite
// (within numerical tolerance).
struct DensityMatrix {
    Mat2 rho = Mat2::Identity() * 0.5;

    void validate() const;
    static DensityMatrix pure(const PolarizationState& psi);
};

// Waveplate Jones matrices. The angle is the fast-axis angle measured from
// the vertical axis; with this convention qwp(pi/4) maps H to L and V to
// (i times) R up to a common global phase.
Mat2 hwp(double theta_rad);
Mat2 qwp(double theta_rad);

// Generic retarder used by both; exposed for tests.
Mat2 waveplate(double theta_from_vertical_rad, double retardance_rad);

// Dual-rail storage channel. The two orthogonal polarization components
// travel a common loop, so only a residual relative phase jitter of width
// phase_noise_sigma survives; depolarization mixes in I/2 and loss is
// bookkept as a success probability (the returned state is post-selected).
struct ChannelParams {
    double loss = 0.0;                // [0, 1]
    double phase_noise_sigma = 0.0;   // radians
    double depolarization = 0.0;      // [0, 1]

    void validate() const;
};

struct SagnacResult {
    DensityMatrix rho;
    double success_probability = 1.0;
};

// Monte Carlo average over the Gaussian relative-phase jitter (the sampled
// phases enter only through the mean of e^{-i phi}, which multiplies the
// coherences); the expectation damps off-diagonals by e^{-sigma^2/2}.
SagnacResult sagnac_store(const PolarizationState& state, const ChannelParams& ch,
                          std::uint64_t seed);

// Born-rule projective measurement: clicks ~ Binomial(shots, <a|rho|a>).
struct ClickRecord {
    std::uint64_t clicks = 0;
    std::uint64_t shots = 0;

    double frequency() const {
        return shots == 0 ? std::numeric_limits<double>::quiet_NaN()
                          : static_cast<double>(clicks) / static_cast<double>(shots);
    }
};

ClickRecord measure_projection(const DensityMatrix& rho, const PolarizationState& analyzer,
                               std::uint64_t shots, std::uint64_t seed);

// F = <psi|rho|psi>.
double state_fidelity(const DensityMatrix& rho, const PolarizationState& psi);

} // namespace photonmem
