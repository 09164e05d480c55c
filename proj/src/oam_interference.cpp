#include "photonmem/oam_interference.hpp"

#include <cmath>
#include <stdexcept>

#include "photonmem/errors.hpp"
#include "photonmem/spatial_modes.hpp"

namespace photonmem {

namespace {

constexpr double kPi = 3.14159265358979323846;

} // namespace

void HybridState::validate() const {
    if (l < 1) {
        throw std::invalid_argument("hybrid state needs l >= 1");
    }
    if (std::abs(coefficients.squaredNorm() - 1.0) > 1e-10) {
        throw std::invalid_argument("hybrid state is not normalized");
    }
}

Mat2 HybridState::polarization_density() const {
    // Partial trace over the OAM factor; basis order (H,+l),(H,-l),(V,+l),(V,-l).
    Mat2 rho;
    const auto& c = coefficients;
    rho(0, 0) = std::norm(c(0)) + std::norm(c(1));
    rho(0, 1) = c(0) * std::conj(c(2)) + c(1) * std::conj(c(3));
    rho(1, 0) = std::conj(rho(0, 1));
    rho(1, 1) = std::norm(c(2)) + std::norm(c(3));
    return rho;
}

HybridState prepare_eq1(int l) {
    if (l < 1) {
        throw std::invalid_argument("prepare_eq1: l must be a positive integer");
    }
    HybridState state;
    state.l = l;
    const double s = 1.0 / std::sqrt(2.0);
    state.coefficients << s, 0.0, 0.0, s;
    return state;
}

HybridState apply_waveplate(const HybridState& state, const Mat2& plate) {
    state.validate();
    if ((plate * plate.adjoint() - Mat2::Identity()).cwiseAbs().maxCoeff() > 1e-8) {
        throw std::invalid_argument("apply_waveplate: plate matrix is not unitary");
    }
    HybridState out = state;
    // plate acts on the polarization factor: kron(plate, I2).
    Eigen::Matrix4cd u = Eigen::Matrix4cd::Zero();
    u.block<2, 2>(0, 0) = plate(0, 0) * Mat2::Identity();
    u.block<2, 2>(0, 2) = plate(0, 1) * Mat2::Identity();
    u.block<2, 2>(2, 0) = plate(1, 0) * Mat2::Identity();
    u.block<2, 2>(2, 2) = plate(1, 1) * Mat2::Identity();
    out.coefficients = u * state.coefficients;
    return out;
}

std::pair<Eigen::Vector2cd, double> project_polarization(const HybridState& state,
                                                         const PolarizationState& analyzer) {
    state.validate();
    analyzer.validate();
    const auto& c = state.coefficients;
    const auto a = analyzer.amplitudes;
    Eigen::Vector2cd oam;
    oam(0) = std::conj(a(0)) * c(0) + std::conj(a(1)) * c(2); // +l
    oam(1) = std::conj(a(0)) * c(1) + std::conj(a(1)) * c(3); // -l
    const double prob = oam.squaredNorm();
    return {oam, prob};
}

IntensityImage project_and_pattern(const HybridState& state, double theta_rad,
                                   const TransverseGrid& grid, double waist_mm) {
    grid.validate();
    if (waist_mm <= 0.0) {
        waist_mm = grid.width * grid.pitch_mm / 6.0;
    }

    HybridState after = apply_waveplate(state, qwp(kPi / 4.0));
    after = apply_waveplate(after, hwp(theta_rad));
    auto [oam, prob] = project_polarization(after, prepare_state(StateLabel::V));
    if (!(prob > 0.0)) {
        throw InvalidDataError("project_and_pattern: analyzer port is dark");
    }
    oam /= std::sqrt(prob);

    const SpatialField plus = lg_mode(state.l, waist_mm, grid);
    const SpatialField minus = lg_mode(-state.l, waist_mm, grid);
    SpatialField field(grid);
    for (std::size_t i = 0; i < field.amplitude.size(); ++i) {
        field.amplitude[i] = oam(0) * plus.amplitude[i] + oam(1) * minus.amplitude[i];
    }
    const double power = field.total_power();
    if (power > 0.0) {
        const double scale = 1.0 / std::sqrt(power);
        for (auto& a : field.amplitude) a *= scale;
    }
    return intensity(field);
}

double spot_counts(double theta_rad, double azimuth0_rad, double noise_floor) {
    if (noise_floor < 0.0 || noise_floor >= 1.0) {
        throw std::invalid_argument("spot_counts: noise floor must lie in [0, 1)");
    }
    const double v = 1.0 - noise_floor;
    return (1.0 - v * std::sin(4.0 * theta_rad + 4.0 * azimuth0_rad)) / 2.0;
}

double fringe_visibility(const std::vector<FringeSample>& samples) {
    if (samples.size() < 8) {
        throw std::invalid_argument("fringe_visibility: need at least 8 samples");
    }
    double lo = samples[0].theta_rad;
    double hi = samples[0].theta_rad;
    for (const auto& s : samples) {
        lo = std::min(lo, s.theta_rad);
        hi = std::max(hi, s.theta_rad);
    }
    if (hi - lo < kPi / 2.0 - 1e-9) {
        throw std::invalid_argument("fringe_visibility: samples must span a full period");
    }

    // Linear least squares on {1, sin 4theta, cos 4theta}.
    Eigen::Matrix3d ata = Eigen::Matrix3d::Zero();
    Eigen::Vector3d atb = Eigen::Vector3d::Zero();
    for (const auto& s : samples) {
        Eigen::Vector3d row(1.0, std::sin(4.0 * s.theta_rad), std::cos(4.0 * s.theta_rad));
        ata += row * row.transpose();
        atb += row * s.counts;
    }
    const Eigen::Vector3d coeff = ata.ldlt().solve(atb);
    const double c0 = coeff(0);
    const double c1 = std::hypot(coeff(1), coeff(2));
    if (!(c0 > 0.0)) {
        throw InvalidDataError("fringe_visibility: non-positive mean count level");
    }
    return c1 / c0;
}

} // namespace photonmem
