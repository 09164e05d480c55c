#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "photonmem/grid.hpp"
#include "photonmem/memory_channel.hpp"
#include "photonmem/pair_source.hpp"
#include "photonmem/polarization.hpp"

namespace photonmem {

// Per-experiment knobs beyond the physical parameter blocks. Defaults are
// the documented calibration that reproduces the reference data set.
struct CorrelationConfig {
    double duration_s = 2.0;
    std::vector<double> storage_times_ns = {0, 50, 100, 150, 200, 250, 300, 350, 400};
    std::int64_t window_ns = 50;
};

struct AnalysisConfig {
    std::int64_t bin_width_ns = 1;
    std::int64_t delay_min_ns = -100;
    std::int64_t delay_max_ns = 400;
    std::int64_t alpha_window_ns = 50;
};

struct ImageConfig {
    int oam_l = 1;
    double waist_mm = 0.0; // 0 = auto: ring diameter one third of the frame
    double g2_peak = 19.0;
    // Noise-to-signal ratio at the brightest scan position after storage;
    // lowers the retrieved correlation peak to 1 + (g2_peak-1)/(1+ratio).
    double noise_to_signal = 0.2273;
    bool flat_field = false;
};

struct TomographyConfig {
    std::uint64_t shots = 10000;
};

struct InterferenceConfig {
    int oam_l = 2;
    double noise_floor = 0.26;
    double azimuth0_rad = 0.0;
    std::vector<double> pattern_thetas_deg = {22.5, 67.5, 112.5, 157.5};
    double scan_step_deg = 7.5;  // fringe scan over [0, 180)
    double scan_counts = 20000.0; // mean detected counts at the fringe mean level
};

struct ExperimentConfig {
    SourceParams source;
    MemoryParams memory;
    ChannelParams channel;
    TransverseGrid grid;
    CorrelationConfig correlation;
    AnalysisConfig analysis;
    ImageConfig image;
    TomographyConfig tomography;
    InterferenceConfig interference;
    std::vector<std::uint64_t> seeds = {20250801};
    std::filesystem::path output_dir = "out";

    std::uint64_t master_seed() const { return seeds.front(); }
    void validate() const;
};

// Calibrated defaults: the pair rate is solved so the analytic correlation
// peaks at 200, the memory noise floor sets the retrieved anti-correlation
// parameter near 0.3, and the polarization channel lands the four storage
// fidelities in the mid-0.9 range.
ExperimentConfig default_config();

// Flat `section.key = value` file with `#` comments. Unknown keys and
// malformed values raise ConfigError carrying the line number.
ExperimentConfig load_config(const std::filesystem::path& path);

// Applies one `section.key=value` assignment (used by the file parser and
// by command-line overrides). line is used for error reporting only.
void apply_config_entry(ExperimentConfig& config, const std::string& key,
                        const std::string& value, std::size_t line = 0);

// Default waist for an OAM ring of winding l: the intensity ring diameter
// 2 w sqrt(|l|/2) equals one third of the frame width.
double default_waist_mm(const TransverseGrid& grid, int l, double waist_mm = 0.0);

} // namespace photonmem
