#include "photonmem/memory_channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "photonmem/rng.hpp"

namespace photonmem {

namespace {

constexpr double kNsPerSecond = 1e9;

enum : std::uint64_t {
    kStreamThinning = 11,
    kStreamNoise = 12,
};

} // namespace

void MemoryParams::validate() const {
    if (eta0 < 0.0 || eta0 > 1.0) {
        throw std::invalid_argument("memory eta0 must lie in [0, 1]");
    }
    if (!(decoherence_time_ns > 0.0)) {
        throw std::invalid_argument("memory decoherence time must be positive");
    }
    if (storage_time_ns < 0.0) {
        throw std::invalid_argument("memory storage time must be non-negative");
    }
    if (noise_rate_hz < 0.0) {
        throw std::invalid_argument("memory noise rate must be non-negative");
    }
    if (blur_sigma_mm < 0.0) {
        throw std::invalid_argument("memory blur sigma must be non-negative");
    }
}

double storage_efficiency(double t_ns, const MemoryParams& params) {
    params.validate();
    if (t_ns < 0.0) {
        throw std::invalid_argument("storage_efficiency: negative storage time");
    }
    const double x = t_ns / params.decoherence_time_ns;
    switch (params.decay_shape) {
    case DecayShape::Gaussian:
        return params.eta0 * std::exp(-x * x);
    case DecayShape::Exponential:
    default:
        return params.eta0 * std::exp(-x);
    }
}

TimeTagStream apply_storage_to_stream(const TimeTagStream& stream, int signal_channel,
                                      const MemoryParams& params, std::uint64_t seed) {
    params.validate();
    if (!stream.has_channel(signal_channel)) {
        throw std::invalid_argument("apply_storage_to_stream: unknown signal channel " +
                                    std::to_string(signal_channel));
    }
    const double eta = storage_efficiency(params.storage_time_ns, params);
    const std::int64_t shift = static_cast<std::int64_t>(std::llround(params.storage_time_ns));

    TimeTagStream out;
    out.channels = stream.channels;
    out.duration_ns = stream.duration_ns + params.storage_time_ns;

    std::vector<TimeTag> passthrough;
    std::vector<TimeTag> retrieved;
    {
        Xoshiro256 rng(derive_seed(seed, kStreamThinning));
        for (const auto& r : stream.records) {
            if (r.channel != signal_channel) {
                passthrough.push_back(r);
                continue;
            }
            if (rng.bernoulli(eta)) {
                retrieved.push_back({r.channel, r.t_ns + shift});
            }
        }
    }
    std::vector<TimeTag> noise;
    if (params.noise_rate_hz > 0.0) {
        Xoshiro256 rng(derive_seed(seed, kStreamNoise));
        const double mean_gap_ns = kNsPerSecond / params.noise_rate_hz;
        double t = rng.exponential(mean_gap_ns);
        while (t < out.duration_ns) {
            noise.push_back({signal_channel, static_cast<std::int64_t>(std::floor(t))});
            t += rng.exponential(mean_gap_ns);
        }
    }
    out.records = merge_sorted_tags(
        {std::move(passthrough), std::move(retrieved), std::move(noise)});
    return out;
}

IntensityImage apply_storage_to_image(const IntensityImage& image,
                                      const MemoryParams& params) {
    params.validate();
    image.grid.validate();
    const double eta = storage_efficiency(params.storage_time_ns, params);

    IntensityImage scaled = image;
    for (auto& p : scaled.pixels) p *= eta;
    if (params.blur_sigma_mm == 0.0) {
        return scaled;
    }

    // Separable Gaussian kernel sampled per pixel, truncated at 4 sigma and
    // renormalized to unit sum.
    const double sigma_px = params.blur_sigma_mm / image.grid.pitch_mm;
    const int radius = std::max(1, static_cast<int>(std::ceil(4.0 * sigma_px)));
    std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
    double ksum = 0.0;
    for (int k = -radius; k <= radius; ++k) {
        const double v = std::exp(-(k * k) / (2.0 * sigma_px * sigma_px));
        kernel[static_cast<std::size_t>(k + radius)] = v;
        ksum += v;
    }
    for (auto& v : kernel) v /= ksum;

    const int w = image.grid.width;
    const int h = image.grid.height;
    IntensityImage rows(image.grid);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            double acc = 0.0;
            for (int k = -radius; k <= radius; ++k) {
                const int cc = c + k;
                if (cc < 0 || cc >= w) continue;
                acc += kernel[static_cast<std::size_t>(k + radius)] * scaled.at(r, cc);
            }
            rows.at(r, c) = acc;
        }
    }
    IntensityImage out(image.grid);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            double acc = 0.0;
            for (int k = -radius; k <= radius; ++k) {
                const int rr = r + k;
                if (rr < 0 || rr >= h) continue;
                acc += kernel[static_cast<std::size_t>(k + radius)] * rows.at(rr, c);
            }
            out.at(r, c) = acc;
        }
    }
    return out;
}

} // namespace photonmem
