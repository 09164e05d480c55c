#include "photonmem/pair_source.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "photonmem/errors.hpp"
#include "photonmem/rng.hpp"

namespace photonmem {

namespace {

constexpr double kNsPerSecond = 1e9;

// Sub-stream ids for derive_seed.
enum : std::uint64_t {
    kStreamPairs = 1,
    kStreamBackgroundTrigger = 2,
    kStreamBackgroundSignal = 3,
};

void append_poisson_tags(std::vector<TimeTag>& out, int channel, double rate_hz,
                         double duration_ns, Xoshiro256& rng) {
    if (rate_hz <= 0.0) {
        return;
    }
    const double mean_gap_ns = kNsPerSecond / rate_hz;
    double t = rng.exponential(mean_gap_ns);
    while (t < duration_ns) {
        out.push_back({channel, static_cast<std::int64_t>(std::floor(t))});
        t += rng.exponential(mean_gap_ns);
    }
}

} // namespace

bool tag_before(const TimeTag& a, const TimeTag& b) {
    return a.t_ns != b.t_ns ? a.t_ns < b.t_ns : a.channel < b.channel;
}

std::vector<TimeTag> merge_sorted_tags(std::vector<std::vector<TimeTag>> parts) {
    std::vector<TimeTag> merged;
    for (auto& part : parts) {
        if (merged.empty()) {
            merged = std::move(part);
            continue;
        }
        std::vector<TimeTag> next;
        next.reserve(merged.size() + part.size());
        std::merge(merged.begin(), merged.end(), part.begin(), part.end(),
                   std::back_inserter(next), tag_before);
        merged = std::move(next);
    }
    return merged;
}

void SourceParams::validate() const {
    if (pair_rate_hz < 0.0 || background_trigger_hz < 0.0 || background_signal_hz < 0.0) {
        throw std::invalid_argument("source rates must be non-negative");
    }
    if (det_eff_trigger < 0.0 || det_eff_trigger > 1.0 || det_eff_signal < 0.0 ||
        det_eff_signal > 1.0) {
        throw std::invalid_argument("detector efficiencies must lie in [0, 1]");
    }
    if (!(coherence_time_ns > 0.0)) {
        throw std::invalid_argument("coherence time must be positive");
    }
}

bool TimeTagStream::has_channel(int id) const {
    return std::find(channels.begin(), channels.end(), id) != channels.end();
}

std::size_t TimeTagStream::count_channel(int id) const {
    std::size_t n = 0;
    for (const auto& r : records) {
        if (r.channel == id) ++n;
    }
    return n;
}

bool TimeTagStream::is_sorted() const {
    return std::is_sorted(records.begin(), records.end(),
                          [](const TimeTag& a, const TimeTag& b) { return a.t_ns < b.t_ns; });
}

TimeTagStream simulate_timetags(const SourceParams& params, double duration_s,
                                std::uint64_t seed) {
    params.validate();
    if (!(duration_s > 0.0)) {
        throw std::invalid_argument("simulate_timetags: duration must be positive");
    }
    const double duration_ns = duration_s * kNsPerSecond;

    TimeTagStream stream;
    stream.channels = {kTriggerChannel, kSignalChannel};
    stream.duration_ns = duration_ns;

    std::vector<TimeTag> triggers;
    std::vector<TimeTag> signals;
    // Pair process. A fixed number of random draws per pair keeps the
    // sub-streams aligned regardless of which tags survive thinning.
    if (params.pair_rate_hz > 0.0) {
        Xoshiro256 rng(derive_seed(seed, kStreamPairs));
        const double mean_gap_ns = kNsPerSecond / params.pair_rate_hz;
        double t = rng.exponential(mean_gap_ns);
        while (t < duration_ns) {
            const bool keep_trigger = rng.bernoulli(params.det_eff_trigger);
            const double delay =
                params.delay_offset_ns + rng.exponential(params.coherence_time_ns);
            const bool keep_signal = rng.bernoulli(params.det_eff_signal);
            if (keep_trigger) {
                triggers.push_back(
                    {kTriggerChannel, static_cast<std::int64_t>(std::floor(t))});
            }
            const double ts = t + delay;
            if (keep_signal && ts < duration_ns) {
                signals.push_back(
                    {kSignalChannel, static_cast<std::int64_t>(std::floor(ts))});
            }
            t += rng.exponential(mean_gap_ns);
        }
    }
    // Signal tags inherit the pair ordering but carry jittered delays, so
    // they are only almost sorted.
    std::sort(signals.begin(), signals.end(), tag_before);

    std::vector<TimeTag> bg_trigger;
    {
        Xoshiro256 rng(derive_seed(seed, kStreamBackgroundTrigger));
        append_poisson_tags(bg_trigger, kTriggerChannel, params.background_trigger_hz,
                            duration_ns, rng);
    }
    std::vector<TimeTag> bg_signal;
    {
        Xoshiro256 rng(derive_seed(seed, kStreamBackgroundSignal));
        append_poisson_tags(bg_signal, kSignalChannel, params.background_signal_hz,
                            duration_ns, rng);
    }

    stream.records = merge_sorted_tags({std::move(triggers), std::move(signals),
                                        std::move(bg_trigger), std::move(bg_signal)});
    return stream;
}

double analytic_g2(double tau_ns, const SourceParams& params) {
    params.validate();
    const double r1 = params.singles_trigger_hz() / kNsPerSecond;
    const double r2 = params.singles_signal_hz() / kNsPerSecond;
    if (r1 <= 0.0 || r2 <= 0.0) {
        throw NormalizationError("analytic_g2: singles rate is zero on a channel");
    }
    const double x = tau_ns - params.delay_offset_ns;
    if (x < 0.0) {
        return 1.0;
    }
    const double density = std::exp(-x / params.coherence_time_ns) / params.coherence_time_ns;
    const double pair_rate_ns = params.pair_rate_hz / kNsPerSecond;
    return 1.0 +
           pair_rate_ns * params.det_eff_trigger * params.det_eff_signal * density / (r1 * r2);
}

SourceParams calibrate_to_peak(double target_peak, const SourceParams& fixed) {
    if (!(target_peak > 1.0)) {
        throw std::invalid_argument("calibrate_to_peak: target peak must exceed 1");
    }
    SourceParams params = fixed;
    params.pair_rate_hz = 0.0;
    params.validate();

    const double et = params.det_eff_trigger;
    const double es = params.det_eff_signal;
    if (et <= 0.0 || es <= 0.0) {
        throw NoSolutionError("calibrate_to_peak: zero detector efficiency");
    }
    const double b1 = params.background_trigger_hz / kNsPerSecond;
    const double b2 = params.background_signal_hz / kNsPerSecond;
    const double g = target_peak - 1.0;
    const double tc = params.coherence_time_ns;

    // (g)(p et + b1)(p es + b2) = p et es / tc, quadratic in the per-ns pair
    // rate p.
    const double a2 = g * et * es;
    const double a1 = g * (et * b2 + es * b1) - et * es / tc;
    const double a0 = g * b1 * b2;
    const double disc = a1 * a1 - 4.0 * a2 * a0;
    if (disc < 0.0) {
        throw NoSolutionError(
            "calibrate_to_peak: target peak unreachable with the given backgrounds");
    }
    const double root = (-a1 + std::sqrt(disc)) / (2.0 * a2);
    if (!(root > 0.0)) {
        throw NoSolutionError(
            "calibrate_to_peak: no positive pair rate reaches the target peak");
    }
    params.pair_rate_hz = root * kNsPerSecond;
    return params;
}

TimeTagStream hbt_split(const TimeTagStream& stream, int signal_channel, int out_a,
                        int out_b, std::uint64_t seed) {
    if (out_a == out_b) {
        throw std::invalid_argument("hbt_split: output channels must differ");
    }
    if (!stream.has_channel(signal_channel)) {
        throw std::invalid_argument("hbt_split: unknown signal channel " +
                                    std::to_string(signal_channel));
    }
    TimeTagStream out = stream;
    Xoshiro256 rng(seed);
    for (auto& r : out.records) {
        if (r.channel == signal_channel) {
            r.channel = rng.bernoulli(0.5) ? out_a : out_b;
        }
    }
    out.channels.erase(
        std::remove(out.channels.begin(), out.channels.end(), signal_channel),
        out.channels.end());
    for (int id : {out_a, out_b}) {
        if (!out.has_channel(id)) {
            out.channels.push_back(id);
        }
    }
    std::sort(out.channels.begin(), out.channels.end());
    return out;
}

} // namespace photonmem
