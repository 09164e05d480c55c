#include "photonmem/decay_fit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "photonmem/errors.hpp"

namespace photonmem {

namespace {

struct Model {
    double a = 0.0;   // amplitude
    double lnT = 0.0; // log decay time
    double g0 = 0.0;  // offset

    double T() const { return std::exp(lnT); }
    double eval(double t) const { return a * std::exp(-t / T()) + g0; }
};

double chi2(const Model& m, const std::vector<DecayPoint>& pts,
            const std::vector<double>& w) {
    double sum = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double r = (m.eval(pts[i].t_ns) - pts[i].g) * w[i];
        sum += r * r;
    }
    return sum;
}

} // namespace

DecayFit fit_exponential_decay(const std::vector<DecayPoint>& points) {
    if (points.size() < 4) {
        throw std::invalid_argument("fit_exponential_decay: need at least 4 points");
    }
    std::vector<DecayPoint> pts = points;
    std::sort(pts.begin(), pts.end(),
              [](const DecayPoint& a, const DecayPoint& b) { return a.t_ns < b.t_ns; });
    const double span = pts.back().t_ns - pts.front().t_ns;
    if (!(span > 0.0)) {
        throw IllConditionedFitError(
            "fit_exponential_decay: decay time T unconstrained (no time span)");
    }

    std::vector<double> w(pts.size());
    double max_sigma = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        w[i] = pts[i].stderr > 0.0 ? 1.0 / pts[i].stderr : 1.0;
        max_sigma = std::max(max_sigma, pts[i].stderr > 0.0 ? pts[i].stderr : 0.0);
    }

    double gmin = pts[0].g, gmax = pts[0].g;
    for (const auto& p : pts) {
        gmin = std::min(gmin, p.g);
        gmax = std::max(gmax, p.g);
    }
    if (gmax - gmin <= max_sigma) {
        throw IllConditionedFitError(
            "fit_exponential_decay: data constant within stderr; decay time T "
            "is unconstrained");
    }

    Model m;
    double a0 = pts.front().g - pts.back().g;
    if (a0 == 0.0) {
        a0 = gmax - gmin; // first == last but data not constant
    }
    m.a = a0;
    m.g0 = pts.back().g;
    m.lnT = std::log(span / 2.0);

    double lambda = 1e-3;
    double cost = chi2(m, pts, w);
    const int max_iter = 500;
    for (int iter = 0; iter < max_iter; ++iter) {
        Eigen::Matrix3d jtj = Eigen::Matrix3d::Zero();
        Eigen::Vector3d jtr = Eigen::Vector3d::Zero();
        const double T = m.T();
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const double t = pts[i].t_ns;
            const double e = std::exp(-t / T);
            const double r = (m.a * e + m.g0 - pts[i].g) * w[i];
            Eigen::Vector3d j;
            j << e * w[i],                      // d/dA
                m.a * e * (t / T) * w[i],       // d/d lnT
                w[i];                           // d/d g0
            jtj += j * j.transpose();
            jtr += j * r;
        }

        bool stepped = false;
        for (int tries = 0; tries < 40; ++tries) {
            Eigen::Matrix3d damped = jtj;
            for (int k = 0; k < 3; ++k) {
                damped(k, k) += lambda * std::max(jtj(k, k), 1e-300);
            }
            const Eigen::Vector3d delta = damped.ldlt().solve(-jtr);
            if (!delta.allFinite()) {
                lambda *= 10.0;
                continue;
            }
            Model trial = m;
            trial.a += delta(0);
            trial.lnT += delta(1);
            trial.g0 += delta(2);
            const double trial_cost = chi2(trial, pts, w);
            if (trial_cost <= cost) {
                const double rel_step =
                    delta.cwiseAbs().maxCoeff() /
                    std::max({std::abs(m.a), std::abs(m.g0), 1.0});
                const double improvement = cost - trial_cost;
                m = trial;
                cost = trial_cost;
                lambda = std::max(lambda * 0.3, 1e-12);
                stepped = true;
                if (rel_step < 1e-13 || improvement < 1e-15 * (1.0 + cost)) {
                    iter = max_iter; // converged
                }
                break;
            }
            lambda *= 10.0;
        }
        if (!stepped) {
            break; // no downhill direction left at any damping
        }
    }

    if (!std::isfinite(m.a) || !std::isfinite(m.g0) || !std::isfinite(m.lnT)) {
        throw IllConditionedFitError("fit_exponential_decay: fit diverged");
    }

    DecayFit fit;
    fit.amplitude = m.a;
    fit.decay_time_ns = m.T();
    fit.offset = m.g0;
    fit.residual_norm = std::sqrt(cost);
    return fit;
}

} // namespace photonmem
