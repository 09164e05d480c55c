#pragma once

#include <cstdint>
#include <vector>

#include "photonmem/pair_source.hpp"

namespace photonmem {

// Histogram of tag-pair delays t_b - t_a over [min_delay, max_delay) with
// uniform integer bin width.
struct CoincidenceHistogram {
    std::int64_t bin_width_ns = 1;
    std::int64_t min_delay_ns = 0;
    std::int64_t max_delay_ns = 0;
    std::vector<std::uint64_t> bins;
    std::uint64_t total_pairs_examined = 0;

    std::size_t bin_count() const { return bins.size(); }
    double bin_center_ns(std::size_t i) const {
        return static_cast<double>(min_delay_ns) +
               (static_cast<double>(i) + 0.5) * static_cast<double>(bin_width_ns);
    }
};

struct G2Curve {
    std::vector<double> tau_ns;
    std::vector<double> g;
    std::vector<double> stderr;
};

// Single pass with a sliding window over the sorted stream; every ordered
// pair (a-tag, b-tag) with delay in range increments one bin. max - min must
// be a whole number of bins.
CoincidenceHistogram coincidence_histogram(const TimeTagStream& stream, int ch_a,
                                           int ch_b, std::int64_t bin_width_ns,
                                           std::int64_t min_delay_ns,
                                           std::int64_t max_delay_ns);

// Sums adjacent groups of `factor` bins; bin count must divide evenly.
CoincidenceHistogram rebin(const CoincidenceHistogram& hist, int factor);

// Normalizes counts to the accidental-coincidence level
// singles_a * singles_b * bin_width / duration; stderr is Poisson
// (sqrt(counts) propagated).
G2Curve normalize_g2(const CoincidenceHistogram& hist, std::uint64_t singles_a,
                     std::uint64_t singles_b, double duration_s);

// Largest g value on the curve; returns its index.
std::size_t peak_index(const G2Curve& curve);

// Normalized coincidences integrated over a single delay window
// [center - width/2, center + width/2); returns (g, stderr). Better
// statistics than a single 1 ns bin when only the peak height matters.
struct WindowedG2 {
    double g = 0.0;
    double stderr = 0.0;
    std::uint64_t counts = 0;
};
WindowedG2 windowed_g2(const TimeTagStream& stream, int ch_a, int ch_b,
                       std::int64_t center_ns, std::int64_t width_ns,
                       double duration_s);

// Full width at half maximum of a histogram peak, in ns, with linear
// interpolation at the half-height crossings.
double histogram_fwhm(const CoincidenceHistogram& hist);

// Cauchy-Schwarz factor R = g_cross^2 / (g_auto_a * g_auto_b); classical
// fields satisfy R <= 1.
double cauchy_schwarz_R(double g_cross_peak, double g_auto_a, double g_auto_b);

// Thermal single-mode auto-correlation value used for the source statistics
// when no HBT estimate is taken.
inline constexpr double kThermalAutoG2 = 2.0;

// Heralded auto-correlation counts for the anti-correlation parameter.
struct AlphaCounts {
    std::uint64_t p1 = 0;   // triggers
    std::uint64_t p12 = 0;  // trigger & split-arm a
    std::uint64_t p13 = 0;  // trigger & split-arm b
    std::uint64_t p123 = 0; // threefold

    double alpha() const;
    // Counting-statistics error of alpha (uncorrelated Poisson propagation;
    // conservative since the threefold counts are subsets of the twofolds).
    double alpha_stderr() const;
};

// alpha = P1 * P123 / (P12 * P13); -> 0 for an ideal heralded single photon,
// >= 1 for classical fields.
double anti_correlation_alpha(std::uint64_t p1, std::uint64_t p12, std::uint64_t p13,
                              std::uint64_t p123);

// Counts windowed coincidences around each trigger tag. The window on the
// two split arms is [t_trigger + center - width/2, t_trigger + center + width/2).
AlphaCounts count_alpha_coincidences(const TimeTagStream& stream, int trigger_ch,
                                     int ch_a, int ch_b, std::int64_t window_ns,
                                     std::int64_t window_center_ns);

double measure_alpha(const TimeTagStream& stream, int trigger_ch, int ch_a, int ch_b,
                     std::int64_t window_ns, std::int64_t window_center_ns);

// Cross-check estimator for the unconditioned auto-correlation of one
// channel: splits it 50/50 and normalizes the coincidences between the two
// halves at the given delay window. For Poissonian marks this tends to 1.
double estimate_auto_g2(const TimeTagStream& stream, int channel,
                        std::int64_t window_ns, std::uint64_t seed);

} // namespace photonmem
