#include "photonmem/tomography.hpp"

#include <cmath>
#include <stdexcept>

#include "photonmem/errors.hpp"

namespace photonmem {

namespace {

const std::complex<double> kI(0.0, 1.0);

std::array<Mat2, 4> pauli_basis() {
    Mat2 id = Mat2::Identity();
    Mat2 x, y, z;
    x << 0, 1, 1, 0;
    y << 0, -kI, kI, 0;
    z << 1, 0, 0, -1;
    return {id, x, y, z};
}

// Bloch-axis bookkeeping for the six analyzers: <a|rho|a> = (1 + sign * s_axis)/2.
struct AnalyzerAxis {
    int axis;   // 0 = x (D/A), 1 = y (L/R), 2 = z (H/V)
    double sign;
};

AnalyzerAxis analyzer_axis(StateLabel a) {
    switch (a) {
    case StateLabel::D: return {0, +1.0};
    case StateLabel::A: return {0, -1.0};
    case StateLabel::L: return {1, +1.0};
    case StateLabel::R: return {1, -1.0};
    case StateLabel::H: return {2, +1.0};
    case StateLabel::V: return {2, -1.0};
    }
    throw std::invalid_argument("analyzer_axis: bad label");
}

} // namespace

double TomographyData::frequency(StateLabel input, StateLabel analyzer) const {
    const auto in_it = records.find(input);
    if (in_it == records.end()) {
        throw IllConditionedReconstructionError(
            "tomography data missing input state " + to_string(input));
    }
    const auto an_it = in_it->second.find(analyzer);
    if (an_it == in_it->second.end()) {
        throw IllConditionedReconstructionError("tomography data missing analyzer " +
                                                to_string(analyzer) + " for input " +
                                                to_string(input));
    }
    return an_it->second.frequency();
}

DensityMatrix reconstruct_state(const std::map<StateLabel, double>& frequencies) {
    // Overdetermined least squares for the Bloch vector. With the paired
    // analyzer set the normal equations decouple per axis:
    // s_axis = f(+) - f(-).
    double s[3] = {0.0, 0.0, 0.0};
    int seen[3] = {0, 0, 0};
    for (const auto& [label, f] : frequencies) {
        if (!(f >= 0.0 && f <= 1.0)) {
            throw IllConditionedReconstructionError(
                "analyzer frequency for " + to_string(label) +
                " is not a probability (missing shots?)");
        }
        const AnalyzerAxis ax = analyzer_axis(label);
        s[ax.axis] += ax.sign * (2.0 * f - 1.0);
        seen[ax.axis] += 1;
    }
    for (int k = 0; k < 3; ++k) {
        if (seen[k] == 0) {
            throw IllConditionedReconstructionError(
                "analyzer set does not span the Bloch sphere");
        }
        s[k] /= seen[k];
    }

    const auto basis = pauli_basis();
    Mat2 rho = 0.5 * (basis[0] + s[0] * basis[1] + s[1] * basis[2] + s[2] * basis[3]);

    // Clip to positive semidefinite, renormalize the trace.
    Eigen::SelfAdjointEigenSolver<Mat2> es(rho);
    Eigen::Vector2d ev = es.eigenvalues().cwiseMax(0.0);
    const double tr = ev.sum();
    if (!(tr > 0.0)) {
        throw IllConditionedReconstructionError("state estimate has zero trace");
    }
    ev /= tr;
    DensityMatrix out;
    out.rho = es.eigenvectors() * ev.asDiagonal().toDenseMatrix().cast<std::complex<double>>() *
              es.eigenvectors().adjoint();
    return out;
}

ProcessMatrix reconstruct_process(
    const std::map<StateLabel, std::map<StateLabel, double>>& frequencies) {
    // Per-input output states.
    std::map<StateLabel, Mat2> out_state;
    for (StateLabel input : kTomographyInputs) {
        const auto it = frequencies.find(input);
        if (it == frequencies.end()) {
            throw IllConditionedReconstructionError("tomography data missing input state " +
                                                    to_string(input));
        }
        if (it->second.size() < kTomographyAnalyzers.size()) {
            throw IllConditionedReconstructionError(
                "tomography data incomplete for input " + to_string(input));
        }
        out_state[input] = reconstruct_state(it->second).rho;
    }

    // Action of the channel on the matrix units E_jk, by linearity:
    //   eps(E00) = eps(H), eps(E11) = eps(V),
    //   eps(E01) = eps(D) - i eps(R) - (1-i)/2 (eps(H) + eps(V)),
    //   eps(E10) = adjoint image (conjugate combination).
    const Mat2& eh = out_state[StateLabel::H];
    const Mat2& ev = out_state[StateLabel::V];
    const Mat2& ed = out_state[StateLabel::D];
    const Mat2& er = out_state[StateLabel::R];
    std::array<Mat2, 4> eps_unit; // order E00, E01, E10, E11
    eps_unit[0] = eh;
    eps_unit[1] = ed - kI * er - 0.5 * (1.0 - kI) * (eh + ev);
    eps_unit[2] = ed + kI * er - 0.5 * (1.0 + kI) * (eh + ev);
    eps_unit[3] = ev;

    // Solve sum_mn chi_mn B_m E_jk B_n^dag = eps(E_jk) as a 16x16 linear
    // system (columns indexed by (m, n), rows by (jk, entry)).
    const auto basis = pauli_basis();
    Eigen::MatrixXcd system(16, 16);
    Eigen::VectorXcd target(16);
    std::array<Mat2, 4> unit;
    unit[0] << 1, 0, 0, 0;
    unit[1] << 0, 1, 0, 0;
    unit[2] << 0, 0, 1, 0;
    unit[3] << 0, 0, 0, 1;
    for (int in = 0; in < 4; ++in) {
        for (int r = 0; r < 2; ++r) {
            for (int c = 0; c < 2; ++c) {
                const int row = in * 4 + r * 2 + c;
                target(row) = eps_unit[static_cast<std::size_t>(in)](r, c);
                for (int m = 0; m < 4; ++m) {
                    for (int n = 0; n < 4; ++n) {
                        const Mat2 term =
                            basis[static_cast<std::size_t>(m)] *
                            unit[static_cast<std::size_t>(in)] *
                            basis[static_cast<std::size_t>(n)].adjoint();
                        system(row, m * 4 + n) = term(r, c);
                    }
                }
            }
        }
    }

    Eigen::FullPivLU<Eigen::MatrixXcd> lu(system);
    if (lu.rank() < 16) {
        throw IllConditionedReconstructionError(
            "process inversion is rank deficient");
    }
    const Eigen::VectorXcd chi_vec = lu.solve(target);

    ProcessMatrix result;
    for (int m = 0; m < 4; ++m) {
        for (int n = 0; n < 4; ++n) {
            result.chi(m, n) = chi_vec(m * 4 + n);
        }
    }
    // Hermitize away solver round-off; the inversion is Hermitian by
    // construction whenever the input states are.
    result.chi = 0.5 * (result.chi + result.chi.adjoint()).eval();

    Mat2 tp = Mat2::Zero();
    for (int m = 0; m < 4; ++m) {
        for (int n = 0; n < 4; ++n) {
            tp += result.chi(m, n) * basis[static_cast<std::size_t>(n)].adjoint() *
                  basis[static_cast<std::size_t>(m)];
        }
    }
    result.tp_residual = (tp - Mat2::Identity()).norm();
    return result;
}

ProcessMatrix reconstruct_process(const TomographyData& data) {
    std::map<StateLabel, std::map<StateLabel, double>> freqs;
    for (StateLabel input : kTomographyInputs) {
        for (StateLabel analyzer : kTomographyAnalyzers) {
            const double f = data.frequency(input, analyzer);
            if (!std::isfinite(f)) {
                throw IllConditionedReconstructionError(
                    "tomography frequency is not finite for input " + to_string(input) +
                    ", analyzer " + to_string(analyzer));
            }
            freqs[input][analyzer] = f;
        }
    }
    return reconstruct_process(freqs);
}

} // namespace photonmem
