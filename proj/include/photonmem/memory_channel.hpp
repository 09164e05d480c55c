#pragma once

#include <cstdint>

#include "photonmem/grid.hpp"
#include "photonmem/pair_source.hpp"

namespace photonmem {

enum class DecayShape {
    Exponential, // eta0 * exp(-t/Td)
    Gaussian,    // eta0 * exp(-(t/Td)^2)
};

// Phenomenological storage channel: retrieval efficiency decaying with
// storage time, uniform-in-time noise from coupling-laser leakage, and a
// Gaussian blur standing in for atomic diffusion of stored images.
struct MemoryParams {
    double eta0 = 0.10;
    double decoherence_time_ns = 348.0;
    double storage_time_ns = 100.0;
    double noise_rate_hz = 0.0;
    double blur_sigma_mm = 0.0;
    DecayShape decay_shape = DecayShape::Exponential;

    void validate() const;
};

// Retrieval efficiency after storing for t ns.
double storage_efficiency(double t_ns, const MemoryParams& params);

// Each signal-channel tag survives with probability eta(storage_time) and is
// delayed by the storage time; Poisson noise tags are added on the signal
// channel across the (extended) observation window. Other channels pass
// through untouched. Output is sorted and deterministic under the seed.
TimeTagStream apply_storage_to_stream(const TimeTagStream& stream, int signal_channel,
                                      const MemoryParams& params, std::uint64_t seed);

// Scales the image by eta(storage_time) and convolves with a normalized
// Gaussian kernel of width blur_sigma (truncated at 4 sigma). Zero padding
// outside the frame: interior pixels of a uniform image are unchanged, and
// total power scales by exactly eta whenever the image support stays 4 sigma
// away from the border.
IntensityImage apply_storage_to_image(const IntensityImage& image,
                                      const MemoryParams& params);

} // namespace photonmem
