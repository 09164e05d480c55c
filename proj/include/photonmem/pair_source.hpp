#pragma once

#include <cstdint>
#include <vector>

namespace photonmem {

// Default channel ids used by the simulator.
inline constexpr int kTriggerChannel = 0;
inline constexpr int kSignalChannel = 1;
inline constexpr int kSplitChannelA = 2;
inline constexpr int kSplitChannelB = 3;

// Photon-pair source model. Pairs arrive as a homogeneous Poisson process;
// the partner photon is delayed by delay_offset_ns plus a one-sided
// exponential of constant coherence_time_ns, so the cross-correlation has
// FWHM = coherence_time_ns * ln 2. Uncorrelated background is Poissonian on
// each channel and detectors are modeled as Bernoulli thinning.
struct SourceParams {
    double pair_rate_hz = 0.0;
    double delay_offset_ns = 19.0;
    double coherence_time_ns = 46.8935015972954; // 32.5 / ln 2
    double background_trigger_hz = 0.0;
    double background_signal_hz = 0.0;
    double det_eff_trigger = 0.5;
    double det_eff_signal = 0.5;

    void validate() const;

    // Total singles rates per channel (counts/s), detector efficiency and
    // background included.
    double singles_trigger_hz() const {
        return pair_rate_hz * det_eff_trigger + background_trigger_hz;
    }
    double singles_signal_hz() const {
        return pair_rate_hz * det_eff_signal + background_signal_hz;
    }
};

struct TimeTag {
    int channel = 0;
    std::int64_t t_ns = 0;
};

// Time-ordered detector click records. duration_ns is observation-window
// metadata carried through transforms; it is not part of the CSV wire format.
struct TimeTagStream {
    std::vector<TimeTag> records;
    std::vector<int> channels; // declared channel set, sorted
    double duration_ns = 0.0;

    bool has_channel(int id) const;
    std::size_t count_channel(int id) const;
    bool is_sorted() const;
};

// Stable time-then-channel ordering used by every stream producer.
bool tag_before(const TimeTag& a, const TimeTag& b);

// Merges individually sorted tag runs into one sorted vector.
std::vector<TimeTag> merge_sorted_tags(std::vector<std::vector<TimeTag>> parts);

// Monte Carlo stream generation. Timestamps are quantized to integer
// nanoseconds at emission (1 ns digitizer). Identical (params, duration,
// seed) produce byte-identical streams; sub-streams (pairs, backgrounds) use
// seeds derived from the master seed.
TimeTagStream simulate_timetags(const SourceParams& params, double duration_s,
                                std::uint64_t seed);

// Closed-form normalized cross-correlation of the model at delay tau:
//   g2(tau) = 1 + R_pair * eff_t * eff_s * f(tau) / (r_trigger * r_signal)
// where f is the one-sided exponential delay density. Approaches 1 far from
// the peak on either side.
double analytic_g2(double tau_ns, const SourceParams& params);

// Solves for the pair rate that makes analytic_g2 peak at target_peak at
// tau = delay_offset_ns, keeping every other parameter fixed. Of the two
// mathematical roots the larger is returned; it is the one that converges to
// the background-free solution 1/(coherence_time * (target-1)) as the
// background rates go to zero.
SourceParams calibrate_to_peak(double target_peak, const SourceParams& fixed);

// Reassigns every tag on signal_channel to out_a or out_b with probability
// 1/2 each (50/50 beam splitter); all other channels pass through.
TimeTagStream hbt_split(const TimeTagStream& stream, int signal_channel,
                        int out_a, int out_b, std::uint64_t seed);

} // namespace photonmem
