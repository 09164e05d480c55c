#include "photonmem/polarization.hpp"

#include <cmath>
#include <stdexcept>

#include "photonmem/rng.hpp"

namespace photonmem {

namespace {

constexpr double kPi = 3.14159265358979323846;
const std::complex<double> kI(0.0, 1.0);

// Sample count for the phase-jitter average; sized so the estimate of
// E[e^{-i phi}] is within ~1e-3 of the Gaussian characteristic function for
// sigma up to ~0.6 rad.
constexpr int kPhaseSamples = 1 << 18;

} // namespace

StateLabel parse_state_label(const std::string& name) {
    if (name == "H") return StateLabel::H;
    if (name == "V") return StateLabel::V;
    if (name == "D") return StateLabel::D;
    if (name == "A") return StateLabel::A;
    if (name == "R") return StateLabel::R;
    if (name == "L") return StateLabel::L;
    throw std::invalid_argument("unknown polarization label '" + name + "'");
}

std::string to_string(StateLabel label) {
    switch (label) {
    case StateLabel::H: return "H";
    case StateLabel::V: return "V";
    case StateLabel::D: return "D";
    case StateLabel::A: return "A";
    case StateLabel::R: return "R";
    case StateLabel::L: return "L";
    }
    return "?";
}

void PolarizationState::validate() const {
    const double n = amplitudes.squaredNorm();
    if (std::abs(n - 1.0) > 1e-10) {
        throw std::invalid_argument("polarization state is not normalized");
    }
}

PolarizationState prepare_state(StateLabel label) {
    const double s = 1.0 / std::sqrt(2.0);
    PolarizationState psi;
    switch (label) {
    case StateLabel::H: psi.amplitudes = Jones(1.0, 0.0); break;
    case StateLabel::V: psi.amplitudes = Jones(0.0, 1.0); break;
    case StateLabel::D: psi.amplitudes = Jones(s, s); break;
    case StateLabel::A: psi.amplitudes = Jones(s, -s); break;
    case StateLabel::R: psi.amplitudes = Jones(s, -kI * s); break;
    case StateLabel::L: psi.amplitudes = Jones(s, kI * s); break;
    }
    return psi;
}

void DensityMatrix::validate() const {
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
        throw std::invalid_argument("density matrix is not Hermitian");
    }
    if (std::abs(rho.trace().real() - 1.0) > 1e-10 || std::abs(rho.trace().imag()) > 1e-10) {
        throw std::invalid_argument("density matrix trace is not 1");
    }
    Eigen::SelfAdjointEigenSolver<Mat2> es(rho);
    if (es.eigenvalues().minCoeff() < -1e-8) {
        throw std::invalid_argument("density matrix has a negative eigenvalue");
    }
}

DensityMatrix DensityMatrix::pure(const PolarizationState& psi) {
    psi.validate();
    DensityMatrix dm;
    dm.rho = psi.amplitudes * psi.amplitudes.adjoint();
    return dm;
}

Mat2 waveplate(double theta_from_vertical_rad, double retardance_rad) {
    const double a = theta_from_vertical_rad + kPi / 2.0; // fast axis from horizontal
    const double c = std::cos(a);
    const double s = std::sin(a);
    Mat2 rot;
    rot << c, -s, s, c;
    Mat2 retard = Mat2::Zero();
    retard(0, 0) = 1.0;
    retard(1, 1) = std::exp(kI * retardance_rad);
    return rot * retard * rot.adjoint();
}

Mat2 hwp(double theta_rad) { return waveplate(theta_rad, kPi); }

Mat2 qwp(double theta_rad) { return waveplate(theta_rad, kPi / 2.0); }

void ChannelParams::validate() const {
    if (loss < 0.0 || loss > 1.0) {
        throw std::invalid_argument("channel loss must lie in [0, 1]");
    }
    if (phase_noise_sigma < 0.0) {
        throw std::invalid_argument("channel phase noise sigma must be non-negative");
    }
    if (depolarization < 0.0 || depolarization > 1.0) {
        throw std::invalid_argument("channel depolarization must lie in [0, 1]");
    }
}

SagnacResult sagnac_store(const PolarizationState& state, const ChannelParams& ch,
                          std::uint64_t seed) {
    state.validate();
    ch.validate();

    // Average of U(phi) rho U(phi)^dag over sampled phases, U = diag(1, e^{i phi}).
    // Only the coherence picks up the phase, so the average reduces to one
    // complex damping factor m = mean of e^{-i phi}.
    std::complex<double> m(1.0, 0.0);
    if (ch.phase_noise_sigma > 0.0) {
        Xoshiro256 rng(seed);
        std::complex<double> acc(0.0, 0.0);
        for (int k = 0; k < kPhaseSamples; ++k) {
            const double phi = ch.phase_noise_sigma * rng.normal();
            acc += std::exp(-kI * phi);
        }
        m = acc / static_cast<double>(kPhaseSamples);
    }

    Mat2 rho = state.amplitudes * state.amplitudes.adjoint();
    rho(0, 1) *= m;
    rho(1, 0) *= std::conj(m);

    SagnacResult result;
    result.rho.rho = (1.0 - ch.depolarization) * rho +
                     ch.depolarization * 0.5 * Mat2::Identity();
    result.success_probability = 1.0 - ch.loss;
    return result;
}

ClickRecord measure_projection(const DensityMatrix& rho, const PolarizationState& analyzer,
                               std::uint64_t shots, std::uint64_t seed) {
    if (shots == 0) {
        throw std::invalid_argument("measure_projection: shots must be positive");
    }
    analyzer.validate();
    double p = (analyzer.amplitudes.adjoint() * rho.rho * analyzer.amplitudes)(0, 0).real();
    p = std::min(1.0, std::max(0.0, p));

    Xoshiro256 rng(seed);
    std::uint64_t clicks = 0;
    for (std::uint64_t s = 0; s < shots; ++s) {
        if (rng.bernoulli(p)) ++clicks;
    }
    return {clicks, shots};
}

double state_fidelity(const DensityMatrix& rho, const PolarizationState& psi) {
    psi.validate();
    double f = (psi.amplitudes.adjoint() * rho.rho * psi.amplitudes)(0, 0).real();
    return std::min(1.0, std::max(0.0, f));
}

} // namespace photonmem
