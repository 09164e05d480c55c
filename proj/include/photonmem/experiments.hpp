#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <vector>

#include "photonmem/config.hpp"
#include "photonmem/decay_fit.hpp"
#include "photonmem/oam_interference.hpp"
#include "photonmem/timetag_analysis.hpp"
#include "photonmem/tomography.hpp"

namespace photonmem {

// Orchestration of the four headline experiments plus the pure analysis
// path. Every run_* writes its result files into out_dir and also returns
// the computed values; given a fixed config and seed all output files are
// byte-identical across reruns.

struct CorrelationResult {
    std::vector<double> storage_times_ns;
    std::vector<double> g2;
    std::vector<double> g2_stderr;
    DecayFit fit;
};

// Storage-time sweep: simulate, store, window-integrate the normalized
// coincidences around the retrieved peak, fit the exponential decay.
// Writes g2_vs_storage.csv and decay_fit.json.
CorrelationResult run_correlation(const ExperimentConfig& config, double duration_s,
                                  const std::filesystem::path& out_dir);

struct ImageMemoryResult {
    double visibility_in = 0.0;
    double visibility_out = 0.0;
    double similarity_profile = 0.0; // between the scanned correlation profiles
    double similarity_image = 0.0;   // between the stored and retrieved frames
    double efficiency = 0.0;
};

// Donut-mode storage: scanned cross-correlation profiles before and after
// the memory, visibility and similarity metrics. Writes input.pgm,
// retrieved.pgm, input_profile.csv, retrieved_profile.csv, metrics.json.
ImageMemoryResult run_image_memory(const ExperimentConfig& config,
                                   const std::filesystem::path& out_dir);

struct TomographyResult {
    TomographyData data;
    ProcessMatrix process;
    std::map<StateLabel, double> fidelities; // over the four input states
};

// Polarization storage tomography: Born-rule sampling of every
// input/analyzer setting, state and process reconstruction, fidelities.
// Writes tomography_data.json, chi.json, fidelities.json.
TomographyResult run_tomography(const ExperimentConfig& config, std::uint64_t shots,
                                const std::filesystem::path& out_dir);

// Reads a tomography_data.json file back (inputs -> analyzers -> clicks/shots).
TomographyData load_tomography_data(const std::filesystem::path& path);

struct InterferenceResult {
    std::vector<double> theta_deg;
    std::vector<double> counts;
    double visibility = 0.0;
};

// Stored OAM superposition: four-spot patterns at the configured plate
// angles and the Poisson-sampled fringe scan with its fitted visibility.
// Writes pattern_theta*.pgm, fringe.csv, visibility.json.
InterferenceResult run_interference(const ExperimentConfig& config,
                                    const std::filesystem::path& out_dir);

struct AnalyzeOptions {
    int ch_a = kTriggerChannel;
    int ch_b = kSignalChannel;
    std::int64_t bin_width_ns = 1;
    std::int64_t delay_min_ns = -100;
    std::int64_t delay_max_ns = 400;
    double duration_override_s = 0.0; // 0 = infer from the stream
    // Anti-correlation measurement (enabled when trigger is set).
    std::optional<int> alpha_trigger;
    int alpha_a = kSplitChannelA;
    int alpha_b = kSplitChannelB;
    std::int64_t alpha_window_ns = 50;
    std::int64_t alpha_center_ns = 44; // window center relative to the trigger
};

struct AnalyzeResult {
    std::size_t records = 0;
    CoincidenceHistogram histogram;
    G2Curve g2;
    std::optional<AlphaCounts> alpha;
    bool empty_input = false;
};

// Analysis half without the simulator: reads a time-tag CSV, writes
// histogram.csv and g2.csv (and alpha.json when requested). An empty input
// file produces empty outputs and a warning, not an error.
AnalyzeResult analyze_timetags(const std::filesystem::path& input_csv,
                               const AnalyzeOptions& options,
                               const std::filesystem::path& out_dir);

struct SimulateOptions {
    double duration_s = 1.0;
    bool hbt_split_signal = false;
    bool apply_storage = false;
};

// Generates a stream per the config source block, optionally storing the
// signal channel and/or splitting it for heralded auto-correlation runs.
// Writes timetags.csv and returns the stream.
TimeTagStream run_simulate(const ExperimentConfig& config, const SimulateOptions& options,
                           const std::filesystem::path& out_dir);

} // namespace photonmem
