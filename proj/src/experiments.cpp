#include "photonmem/experiments.hpp"

#include <cmath>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "photonmem/errors.hpp"
#include "photonmem/io.hpp"
#include "photonmem/rng.hpp"
#include "photonmem/spatial_modes.hpp"

namespace photonmem {

namespace {

constexpr double kPi = 3.14159265358979323846;

using nlohmann::json;

// Sub-stream bases for derive_seed; keeps every experiment's randomness
// disjoint under one master seed.
enum : std::uint64_t {
    kSeedCorrelationSim = 1000,
    kSeedCorrelationStore = 2000,
    kSeedTomographyChannel = 3000,
    kSeedTomographyShots = 3100,
    kSeedInterferenceScan = 4000,
    kSeedSimulateSplit = 5001,
    kSeedSimulateStore = 5002,
};

void ensure_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw Error("cannot create output directory " + dir.string());
    }
}

void write_json(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot open " + path.string() + " for writing");
    }
    out << j.dump(2) << '\n';
}

} // namespace

CorrelationResult run_correlation(const ExperimentConfig& config, double duration_s,
                                  const std::filesystem::path& out_dir) {
    config.validate();
    if (!(duration_s > 0.0)) {
        throw std::invalid_argument("run_correlation: duration must be positive");
    }
    ensure_dir(out_dir);
    const std::uint64_t master = config.master_seed();

    CorrelationResult result;
    std::vector<DecayPoint> points;
    for (std::size_t i = 0; i < config.correlation.storage_times_ns.size(); ++i) {
        const double storage_ns = config.correlation.storage_times_ns[i];
        const TimeTagStream raw = simulate_timetags(
            config.source, duration_s, derive_seed(master, kSeedCorrelationSim + i));

        MemoryParams memory = config.memory;
        memory.storage_time_ns = storage_ns;
        const TimeTagStream stored = apply_storage_to_stream(
            raw, kSignalChannel, memory, derive_seed(master, kSeedCorrelationStore + i));

        const std::int64_t window = config.correlation.window_ns;
        const std::int64_t center = static_cast<std::int64_t>(
            std::llround(config.source.delay_offset_ns + storage_ns)) + window / 2;
        const WindowedG2 g2 = windowed_g2(stored, kTriggerChannel, kSignalChannel, center,
                                          window, stored.duration_ns / 1e9);

        result.storage_times_ns.push_back(storage_ns);
        result.g2.push_back(g2.g);
        result.g2_stderr.push_back(g2.stderr);
        points.push_back({storage_ns, g2.g, g2.stderr});
    }

    result.fit = fit_exponential_decay(points);

    {
        std::ofstream out(out_dir / "g2_vs_storage.csv");
        out << "storage_ns,g2,stderr\n";
        for (std::size_t i = 0; i < result.g2.size(); ++i) {
            out << format_double(result.storage_times_ns[i]) << ','
                << format_double(result.g2[i]) << ',' << format_double(result.g2_stderr[i])
                << '\n';
        }
    }
    write_json(out_dir / "decay_fit.json",
               json{{"A", result.fit.amplitude},
                    {"T_ns", result.fit.decay_time_ns},
                    {"g0", result.fit.offset},
                    {"residual_norm", result.fit.residual_norm}});
    return result;
}

ImageMemoryResult run_image_memory(const ExperimentConfig& config,
                                   const std::filesystem::path& out_dir) {
    config.validate();
    ensure_dir(out_dir);

    IntensityImage input(config.grid);
    if (config.image.flat_field) {
        for (auto& p : input.pixels) p = 1.0;
    } else {
        const double waist =
            default_waist_mm(config.grid, config.image.oam_l, config.image.waist_mm);
        input = intensity(lg_mode(config.image.oam_l, waist, config.grid));
    }

    const IntensityImage retrieved = apply_storage_to_image(input, config.memory);
    const double efficiency = storage_efficiency(config.memory.storage_time_ns, config.memory);

    const int row = config.grid.height / 2;
    const std::vector<double> in_cut = transverse_scan(input, row);
    const std::vector<double> out_cut = transverse_scan(retrieved, row);

    // Scanned cross-correlation model: g2(x) = 1 + (peak-1) I(x)/I_max. After
    // storage the leakage noise raises the accidental floor, lowering the
    // retrieved peak to 1 + (peak-1)/(1 + noise_to_signal).
    auto scan_profile = [](const std::vector<double>& cut, double peak) {
        double top = 0.0;
        for (double v : cut) top = std::max(top, v);
        std::vector<double> g(cut.size(), 1.0);
        if (top > 0.0) {
            for (std::size_t i = 0; i < cut.size(); ++i) {
                g[i] = 1.0 + (peak - 1.0) * cut[i] / top;
            }
        }
        return g;
    };
    const double peak_in = config.image.g2_peak;
    const double peak_out = 1.0 + (peak_in - 1.0) / (1.0 + config.image.noise_to_signal);
    const std::vector<double> profile_in = scan_profile(in_cut, peak_in);
    const std::vector<double> profile_out = scan_profile(out_cut, peak_out);

    ImageMemoryResult result;
    result.visibility_in = visibility(profile_in);
    result.visibility_out = visibility(profile_out);
    result.similarity_profile = similarity(std::span<const double>(profile_in),
                                           std::span<const double>(profile_out));
    result.similarity_image = similarity(input, retrieved);
    result.efficiency = efficiency;

    std::vector<double> positions(profile_in.size());
    for (std::size_t i = 0; i < positions.size(); ++i) {
        positions[i] = config.grid.x_mm(static_cast<int>(i));
    }
    write_pgm16(out_dir / "input.pgm", input);
    write_pgm16(out_dir / "retrieved.pgm", retrieved);
    write_profile_csv(out_dir / "input_profile.csv", positions, profile_in);
    write_profile_csv(out_dir / "retrieved_profile.csv", positions, profile_out);
    write_json(out_dir / "metrics.json",
               json{{"visibility_in", result.visibility_in},
                    {"visibility_out", result.visibility_out},
                    {"similarity", result.similarity_profile},
                    {"similarity_image", result.similarity_image},
                    {"efficiency", result.efficiency}});
    return result;
}

TomographyResult run_tomography(const ExperimentConfig& config, std::uint64_t shots,
                                const std::filesystem::path& out_dir) {
    config.validate();
    if (shots == 0) {
        throw std::invalid_argument("run_tomography: shots must be positive");
    }
    ensure_dir(out_dir);
    const std::uint64_t master = config.master_seed();

    TomographyResult result;
    for (std::size_t i = 0; i < kTomographyInputs.size(); ++i) {
        const StateLabel input = kTomographyInputs[i];
        const SagnacResult stored =
            sagnac_store(prepare_state(input), config.channel,
                         derive_seed(master, kSeedTomographyChannel + i));
        for (std::size_t j = 0; j < kTomographyAnalyzers.size(); ++j) {
            const StateLabel analyzer = kTomographyAnalyzers[j];
            result.data.records[input][analyzer] = measure_projection(
                stored.rho, prepare_state(analyzer), shots,
                derive_seed(master, kSeedTomographyShots + i * 16 + j));
        }
    }

    result.process = reconstruct_process(result.data);
    for (StateLabel input : kTomographyInputs) {
        std::map<StateLabel, double> freqs;
        for (StateLabel analyzer : kTomographyAnalyzers) {
            freqs[analyzer] = result.data.frequency(input, analyzer);
        }
        const DensityMatrix rho = reconstruct_state(freqs);
        result.fidelities[input] = state_fidelity(rho, prepare_state(input));
    }

    json data_json;
    for (StateLabel input : kTomographyInputs) {
        for (StateLabel analyzer : kTomographyAnalyzers) {
            const ClickRecord& rec = result.data.records[input][analyzer];
            data_json["inputs"][to_string(input)][to_string(analyzer)] = {
                {"clicks", rec.clicks}, {"shots", rec.shots}};
        }
    }
    write_json(out_dir / "tomography_data.json", data_json);

    json chi_json;
    for (int r = 0; r < 4; ++r) {
        json re_row = json::array();
        json im_row = json::array();
        for (int c = 0; c < 4; ++c) {
            re_row.push_back(result.process.chi(r, c).real());
            im_row.push_back(result.process.chi(r, c).imag());
        }
        chi_json["real"].push_back(re_row);
        chi_json["imag"].push_back(im_row);
    }
    chi_json["basis"] = {"I", "X", "Y", "Z"};
    chi_json["tp_residual"] = result.process.tp_residual;
    write_json(out_dir / "chi.json", chi_json);

    json fid_json;
    for (const auto& [input, f] : result.fidelities) {
        fid_json[to_string(input)] = f;
    }
    write_json(out_dir / "fidelities.json", fid_json);
    return result;
}

TomographyData load_tomography_data(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open " + path.string() + " for reading");
    }
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad tomography JSON: ") + e.what(), 1);
    }
    TomographyData data;
    if (!j.contains("inputs")) {
        throw ParseError("tomography JSON missing 'inputs'", 1);
    }
    for (const auto& [input_name, analyzers] : j["inputs"].items()) {
        const StateLabel input = parse_state_label(input_name);
        for (const auto& [analyzer_name, rec] : analyzers.items()) {
            const StateLabel analyzer = parse_state_label(analyzer_name);
            data.records[input][analyzer] = {rec.at("clicks").get<std::uint64_t>(),
                                             rec.at("shots").get<std::uint64_t>()};
        }
    }
    return data;
}

InterferenceResult run_interference(const ExperimentConfig& config,
                                    const std::filesystem::path& out_dir) {
    config.validate();
    ensure_dir(out_dir);
    const std::uint64_t master = config.master_seed();
    const InterferenceConfig& ic = config.interference;

    const HybridState state = prepare_eq1(ic.oam_l);
    const double waist = default_waist_mm(config.grid, ic.oam_l, 0.0);
    for (double theta_deg : ic.pattern_thetas_deg) {
        const IntensityImage pattern =
            project_and_pattern(state, theta_deg * kPi / 180.0, config.grid, waist);
        char name[64];
        std::snprintf(name, sizeof(name), "pattern_theta%s.pgm",
                      format_double(theta_deg).c_str());
        write_pgm16(out_dir / name, pattern);
    }

    InterferenceResult result;
    std::vector<FringeSample> samples;
    std::size_t k = 0;
    for (double deg = 0.0; deg < 180.0 - 1e-9; deg += ic.scan_step_deg, ++k) {
        const double theta = deg * kPi / 180.0;
        const double rate = spot_counts(theta, ic.azimuth0_rad, ic.noise_floor);
        Xoshiro256 rng(derive_seed(master, kSeedInterferenceScan + k));
        const double counts =
            static_cast<double>(rng.poisson(ic.scan_counts * rate));
        result.theta_deg.push_back(deg);
        result.counts.push_back(counts);
        samples.push_back({theta, counts});
    }
    result.visibility = fringe_visibility(samples);

    write_fringe_csv(out_dir / "fringe.csv", result.theta_deg, result.counts);
    write_json(out_dir / "visibility.json",
               json{{"visibility", result.visibility},
                    {"noise_floor", ic.noise_floor},
                    {"samples", result.counts.size()},
                    {"counts_scale", ic.scan_counts}});
    return result;
}

AnalyzeResult analyze_timetags(const std::filesystem::path& input_csv,
                               const AnalyzeOptions& options,
                               const std::filesystem::path& out_dir) {
    ensure_dir(out_dir);
    const TimeTagStream stream = read_timetags_csv(
        input_csv, options.duration_override_s * 1e9);

    AnalyzeResult result;
    result.records = stream.records.size();
    if (stream.records.empty()) {
        result.empty_input = true;
        std::ofstream hist_out(out_dir / "histogram.csv");
        hist_out << "tau_ns,counts\n";
        std::ofstream g2_out(out_dir / "g2.csv");
        g2_out << "tau_ns,g,stderr\n";
        std::cerr << "warning: " << input_csv.string()
                  << " contains no records; wrote empty outputs\n";
        return result;
    }

    result.histogram =
        coincidence_histogram(stream, options.ch_a, options.ch_b, options.bin_width_ns,
                              options.delay_min_ns, options.delay_max_ns);
    result.g2 = normalize_g2(result.histogram, stream.count_channel(options.ch_a),
                             stream.count_channel(options.ch_b), stream.duration_ns / 1e9);
    write_histogram_csv(out_dir / "histogram.csv", result.histogram);
    write_g2_csv(out_dir / "g2.csv", result.g2);

    if (options.alpha_trigger) {
        const AlphaCounts counts = count_alpha_coincidences(
            stream, *options.alpha_trigger, options.alpha_a, options.alpha_b,
            options.alpha_window_ns, options.alpha_center_ns);
        result.alpha = counts;
        write_json(out_dir / "alpha.json",
                   json{{"alpha", counts.alpha()},
                        {"alpha_stderr", counts.alpha_stderr()},
                        {"P1", counts.p1},
                        {"P12", counts.p12},
                        {"P13", counts.p13},
                        {"P123", counts.p123},
                        {"window_ns", options.alpha_window_ns},
                        {"window_center_ns", options.alpha_center_ns}});
    }
    return result;
}

TimeTagStream run_simulate(const ExperimentConfig& config, const SimulateOptions& options,
                           const std::filesystem::path& out_dir) {
    config.validate();
    ensure_dir(out_dir);
    const std::uint64_t master = config.master_seed();

    TimeTagStream stream = simulate_timetags(config.source, options.duration_s, master);
    if (options.apply_storage) {
        stream = apply_storage_to_stream(stream, kSignalChannel, config.memory,
                                         derive_seed(master, kSeedSimulateStore));
    }
    if (options.hbt_split_signal) {
        stream = hbt_split(stream, kSignalChannel, kSplitChannelA, kSplitChannelB,
                           derive_seed(master, kSeedSimulateSplit));
    }
    write_timetags_csv(out_dir / "timetags.csv", stream);
    return stream;
}

} // namespace photonmem
