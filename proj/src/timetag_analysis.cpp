#include "photonmem/timetag_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "photonmem/errors.hpp"

namespace photonmem {

namespace {

constexpr double kNsPerSecond = 1e9;

std::vector<std::int64_t> channel_times(const TimeTagStream& stream, int channel) {
    std::vector<std::int64_t> times;
    for (const auto& r : stream.records) {
        if (r.channel == channel) {
            times.push_back(r.t_ns);
        }
    }
    return times;
}

void require_channel(const TimeTagStream& stream, int channel, const char* who) {
    if (!stream.has_channel(channel)) {
        throw std::invalid_argument(std::string(who) + ": unknown channel " +
                                    std::to_string(channel));
    }
}

} // namespace

CoincidenceHistogram coincidence_histogram(const TimeTagStream& stream, int ch_a,
                                           int ch_b, std::int64_t bin_width_ns,
                                           std::int64_t min_delay_ns,
                                           std::int64_t max_delay_ns) {
    require_channel(stream, ch_a, "coincidence_histogram");
    require_channel(stream, ch_b, "coincidence_histogram");
    if (bin_width_ns < 1) {
        throw std::invalid_argument("coincidence_histogram: bin width must be >= 1 ns");
    }
    if (max_delay_ns <= min_delay_ns) {
        throw std::invalid_argument("coincidence_histogram: empty delay range");
    }
    if ((max_delay_ns - min_delay_ns) % bin_width_ns != 0) {
        throw std::invalid_argument(
            "coincidence_histogram: delay range must be a whole number of bins");
    }
    if (!stream.is_sorted()) {
        throw std::invalid_argument("coincidence_histogram: stream is not time-ordered");
    }

    CoincidenceHistogram hist;
    hist.bin_width_ns = bin_width_ns;
    hist.min_delay_ns = min_delay_ns;
    hist.max_delay_ns = max_delay_ns;
    hist.bins.assign(static_cast<std::size_t>((max_delay_ns - min_delay_ns) / bin_width_ns),
                     0);

    const std::vector<std::int64_t> ta = channel_times(stream, ch_a);
    const std::vector<std::int64_t> tb =
        ch_a == ch_b ? ta : channel_times(stream, ch_b);

    std::size_t lo = 0;
    std::size_t hi = 0;
    for (std::size_t i = 0; i < ta.size(); ++i) {
        const std::int64_t a = ta[i];
        while (lo < tb.size() && tb[lo] - a < min_delay_ns) ++lo;
        if (hi < lo) hi = lo;
        while (hi < tb.size() && tb[hi] - a < max_delay_ns) ++hi;
        for (std::size_t j = lo; j < hi; ++j) {
            if (ch_a == ch_b && j == i) {
                continue; // a tag is not its own coincidence partner
            }
            const std::int64_t d = tb[j] - a;
            hist.bins[static_cast<std::size_t>((d - min_delay_ns) / bin_width_ns)] += 1;
            hist.total_pairs_examined += 1;
        }
    }
    return hist;
}

CoincidenceHistogram rebin(const CoincidenceHistogram& hist, int factor) {
    if (factor < 1) {
        throw std::invalid_argument("rebin: factor must be >= 1");
    }
    if (hist.bins.size() % static_cast<std::size_t>(factor) != 0) {
        throw std::invalid_argument("rebin: bin count not divisible by factor");
    }
    CoincidenceHistogram out;
    out.bin_width_ns = hist.bin_width_ns * factor;
    out.min_delay_ns = hist.min_delay_ns;
    out.max_delay_ns = hist.max_delay_ns;
    out.total_pairs_examined = hist.total_pairs_examined;
    out.bins.assign(hist.bins.size() / static_cast<std::size_t>(factor), 0);
    for (std::size_t i = 0; i < hist.bins.size(); ++i) {
        out.bins[i / static_cast<std::size_t>(factor)] += hist.bins[i];
    }
    return out;
}

G2Curve normalize_g2(const CoincidenceHistogram& hist, std::uint64_t singles_a,
                     std::uint64_t singles_b, double duration_s) {
    if (singles_a == 0 || singles_b == 0) {
        throw NormalizationError("normalize_g2: zero singles on a channel");
    }
    if (!(duration_s > 0.0)) {
        throw NormalizationError("normalize_g2: duration must be positive");
    }
    const double accidental = static_cast<double>(singles_a) *
                              static_cast<double>(singles_b) *
                              static_cast<double>(hist.bin_width_ns) /
                              (duration_s * kNsPerSecond);
    G2Curve curve;
    curve.tau_ns.reserve(hist.bins.size());
    curve.g.reserve(hist.bins.size());
    curve.stderr.reserve(hist.bins.size());
    for (std::size_t i = 0; i < hist.bins.size(); ++i) {
        const double counts = static_cast<double>(hist.bins[i]);
        curve.tau_ns.push_back(hist.bin_center_ns(i));
        curve.g.push_back(counts / accidental);
        curve.stderr.push_back(std::sqrt(counts) / accidental);
    }
    return curve;
}

std::size_t peak_index(const G2Curve& curve) {
    if (curve.g.empty()) {
        throw std::invalid_argument("peak_index: empty curve");
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < curve.g.size(); ++i) {
        if (curve.g[i] > curve.g[best]) best = i;
    }
    return best;
}

WindowedG2 windowed_g2(const TimeTagStream& stream, int ch_a, int ch_b,
                       std::int64_t center_ns, std::int64_t width_ns,
                       double duration_s) {
    if (width_ns < 1) {
        throw std::invalid_argument("windowed_g2: window width must be >= 1 ns");
    }
    const std::int64_t lo = center_ns - width_ns / 2;
    const CoincidenceHistogram hist =
        coincidence_histogram(stream, ch_a, ch_b, width_ns, lo, lo + width_ns);
    const G2Curve curve = normalize_g2(hist, stream.count_channel(ch_a),
                                       stream.count_channel(ch_b), duration_s);
    return {curve.g[0], curve.stderr[0], hist.bins[0]};
}

double histogram_fwhm(const CoincidenceHistogram& hist) {
    if (hist.bins.size() < 3) {
        throw std::invalid_argument("histogram_fwhm: too few bins");
    }
    std::size_t peak = 0;
    for (std::size_t i = 1; i < hist.bins.size(); ++i) {
        if (hist.bins[i] > hist.bins[peak]) peak = i;
    }
    const double top = static_cast<double>(hist.bins[peak]);
    if (top <= 0.0) {
        throw InsufficientStatisticsError("histogram_fwhm: empty histogram");
    }
    const double half = top / 2.0;
    const double w = static_cast<double>(hist.bin_width_ns);

    // Walk out from the peak to the first bins below half height and place
    // the crossing by linear interpolation between bin centers.
    double left = hist.bin_center_ns(0);
    bool found_left = false;
    for (std::size_t i = peak; i-- > 0;) {
        if (static_cast<double>(hist.bins[i]) < half) {
            const double y0 = static_cast<double>(hist.bins[i]);
            const double y1 = static_cast<double>(hist.bins[i + 1]);
            left = hist.bin_center_ns(i) + w * (half - y0) / (y1 - y0);
            found_left = true;
            break;
        }
    }
    double right = hist.bin_center_ns(hist.bins.size() - 1);
    bool found_right = false;
    for (std::size_t i = peak + 1; i < hist.bins.size(); ++i) {
        if (static_cast<double>(hist.bins[i]) < half) {
            const double y0 = static_cast<double>(hist.bins[i - 1]);
            const double y1 = static_cast<double>(hist.bins[i]);
            right = hist.bin_center_ns(i - 1) + w * (y0 - half) / (y0 - y1);
            found_right = true;
            break;
        }
    }
    if (!found_left || !found_right) {
        throw InsufficientStatisticsError(
            "histogram_fwhm: peak does not fall to half height inside the range");
    }
    return right - left;
}

double cauchy_schwarz_R(double g_cross_peak, double g_auto_a, double g_auto_b) {
    if (!(g_auto_a > 0.0) || !(g_auto_b > 0.0)) {
        throw std::invalid_argument("cauchy_schwarz_R: auto-correlations must be positive");
    }
    return g_cross_peak * g_cross_peak / (g_auto_a * g_auto_b);
}

double AlphaCounts::alpha() const {
    return anti_correlation_alpha(p1, p12, p13, p123);
}

double AlphaCounts::alpha_stderr() const {
    if (p12 == 0 || p13 == 0 || p123 == 0 || p1 == 0) {
        throw InsufficientStatisticsError("alpha_stderr: zero coincidence counts");
    }
    const double rel2 = 1.0 / static_cast<double>(p1) + 1.0 / static_cast<double>(p12) +
                        1.0 / static_cast<double>(p13) + 1.0 / static_cast<double>(p123);
    return alpha() * std::sqrt(rel2);
}

double anti_correlation_alpha(std::uint64_t p1, std::uint64_t p12, std::uint64_t p13,
                              std::uint64_t p123) {
    if (p12 == 0 || p13 == 0) {
        throw InsufficientStatisticsError(
            "anti_correlation_alpha: no twofold coincidences recorded");
    }
    return static_cast<double>(p1) * static_cast<double>(p123) /
           (static_cast<double>(p12) * static_cast<double>(p13));
}

AlphaCounts count_alpha_coincidences(const TimeTagStream& stream, int trigger_ch,
                                     int ch_a, int ch_b, std::int64_t window_ns,
                                     std::int64_t window_center_ns) {
    require_channel(stream, trigger_ch, "count_alpha_coincidences");
    require_channel(stream, ch_a, "count_alpha_coincidences");
    require_channel(stream, ch_b, "count_alpha_coincidences");
    if (window_ns < 1) {
        throw std::invalid_argument("count_alpha_coincidences: window must be >= 1 ns");
    }
    if (!stream.is_sorted()) {
        throw std::invalid_argument("count_alpha_coincidences: stream is not time-ordered");
    }

    const std::vector<std::int64_t> trig = channel_times(stream, trigger_ch);
    const std::vector<std::int64_t> ta = channel_times(stream, ch_a);
    const std::vector<std::int64_t> tb = channel_times(stream, ch_b);

    AlphaCounts counts;
    counts.p1 = trig.size();

    const std::int64_t lo_off = window_center_ns - window_ns / 2;
    const std::int64_t hi_off = lo_off + window_ns;
    std::size_t a_lo = 0, a_hi = 0, b_lo = 0, b_hi = 0;
    for (const std::int64_t t : trig) {
        while (a_lo < ta.size() && ta[a_lo] < t + lo_off) ++a_lo;
        if (a_hi < a_lo) a_hi = a_lo;
        while (a_hi < ta.size() && ta[a_hi] < t + hi_off) ++a_hi;
        while (b_lo < tb.size() && tb[b_lo] < t + lo_off) ++b_lo;
        if (b_hi < b_lo) b_hi = b_lo;
        while (b_hi < tb.size() && tb[b_hi] < t + hi_off) ++b_hi;
        const bool hit_a = a_hi > a_lo;
        const bool hit_b = b_hi > b_lo;
        if (hit_a) ++counts.p12;
        if (hit_b) ++counts.p13;
        if (hit_a && hit_b) ++counts.p123;
    }
    return counts;
}

double measure_alpha(const TimeTagStream& stream, int trigger_ch, int ch_a, int ch_b,
                     std::int64_t window_ns, std::int64_t window_center_ns) {
    return count_alpha_coincidences(stream, trigger_ch, ch_a, ch_b, window_ns,
                                    window_center_ns)
        .alpha();
}

double estimate_auto_g2(const TimeTagStream& stream, int channel,
                        std::int64_t window_ns, std::uint64_t seed) {
    require_channel(stream, channel, "estimate_auto_g2");
    // Pick split ids outside the declared set.
    int out_a = 0;
    while (stream.has_channel(out_a)) ++out_a;
    int out_b = out_a + 1;
    while (stream.has_channel(out_b)) ++out_b;
    const TimeTagStream split = hbt_split(stream, channel, out_a, out_b, seed);
    const double duration_s = split.duration_ns / kNsPerSecond;
    return windowed_g2(split, out_a, out_b, 0, window_ns, duration_s).g;
}

} // namespace photonmem
