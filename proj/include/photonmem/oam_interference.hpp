#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "photonmem/grid.hpp"
#include "photonmem/polarization.hpp"

namespace photonmem {

// Polarization-OAM hybrid state over the basis
// {H,+l}, {H,-l}, {V,+l}, {V,-l} for a fixed winding magnitude l.
struct HybridState {
    Eigen::Vector4cd coefficients = Eigen::Vector4cd::Zero();
    int l = 1;

    void validate() const;
    // Reduced polarization state (OAM traced out).
    Mat2 polarization_density() const;
};

// The stored superposition (|H>|+l> + |V>|-l>)/sqrt(2).
HybridState prepare_eq1(int l);

// Applies a polarization unitary, identity on the OAM factor.
HybridState apply_waveplate(const HybridState& state, const Mat2& plate);

// Amplitudes over {+l, -l} after projecting the polarization onto the
// analyzer state, plus the success probability of that projection.
std::pair<Eigen::Vector2cd, double> project_polarization(const HybridState& state,
                                                         const PolarizationState& analyzer);

// Sends the state through a quarter-wave plate at 45 degrees and a half-wave
// plate at theta, projects on the vertical analyzer port (the port whose
// output is the pure +-l superposition carrying the e^{+-i 2 theta} phases),
// and renders the resulting transverse intensity. The azimuthal intensity is
// proportional to 1 - sin(2 l phi + 4 theta): 2|l| lobes, rotating rigidly
// with the plate angle. waist_mm <= 0 selects a default of one sixth of the
// frame width.
IntensityImage project_and_pattern(const HybridState& state, double theta_rad,
                                   const TransverseGrid& grid, double waist_mm = 0.0);

// Detected intensity at a fixed azimuth as a function of the half-wave plate
// angle: (1 - V sin(4 theta + 4 azimuth0)) / 2 with V = 1 - noise_floor.
// Exactly pi/2-periodic in theta.
double spot_counts(double theta_rad, double azimuth0_rad, double noise_floor);

struct FringeSample {
    double theta_rad = 0.0;
    double counts = 0.0;
};

// Least-squares fit of counts = c0 + c1 sin(4 theta + phi0); returns
// |c1| / c0. Requires at least 8 samples spanning a full pi/2 period.
double fringe_visibility(const std::vector<FringeSample>& samples);

} // namespace photonmem
