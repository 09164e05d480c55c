#pragma once

#include <array>
#include <map>

#include <Eigen/Dense>

#include "photonmem/polarization.hpp"

namespace photonmem {

using Mat4 = Eigen::Matrix4cd;

// Input basis prepared before the channel and analyzer set projected after
// it. Four linearly independent inputs determine a single-qubit process;
// the six-analyzer set is overcomplete for good conditioning.
inline constexpr std::array<StateLabel, 4> kTomographyInputs = {
    StateLabel::H, StateLabel::V, StateLabel::D, StateLabel::R};
inline constexpr std::array<StateLabel, 6> kTomographyAnalyzers = {
    StateLabel::H, StateLabel::V, StateLabel::D,
    StateLabel::A, StateLabel::R, StateLabel::L};

// Measured click records: data[input][analyzer].
struct TomographyData {
    std::map<StateLabel, std::map<StateLabel, ClickRecord>> records;

    double frequency(StateLabel input, StateLabel analyzer) const;
};

// Process matrix chi over the operator basis {I, X, Y, Z}:
// eps(rho) = sum_mn chi_mn B_m rho B_n^dag. Linear inversion result; the
// trace-preservation residual ||sum chi_mn B_n^dag B_m - I|| is reported,
// not enforced.
struct ProcessMatrix {
    Mat4 chi = Mat4::Zero();
    double tp_residual = 0.0;
};

// Least-squares single-qubit state estimate from the six analyzer
// frequencies, eigenvalue-clipped to positive semidefinite and renormalized.
DensityMatrix reconstruct_state(const std::map<StateLabel, double>& frequencies);

// Full process reconstruction: per-input state tomography followed by exact
// linear inversion of the operator-basis expansion.
ProcessMatrix reconstruct_process(const TomographyData& data);

// Reconstruct from frequencies directly (each in [0, 1]); convenience
// entry point for synthetic noiseless data.
ProcessMatrix reconstruct_process(
    const std::map<StateLabel, std::map<StateLabel, double>>& frequencies);

} // namespace photonmem
