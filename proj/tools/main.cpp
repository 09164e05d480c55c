#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "photonmem/errors.hpp"
#include "photonmem/experiments.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 2;
constexpr int kExitDataError = 3;

struct GlobalOptions {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

photonmem::ExperimentConfig make_config(const GlobalOptions& opts) {
    photonmem::ExperimentConfig config = opts.config_path.empty()
                                             ? photonmem::default_config()
                                             : photonmem::load_config(opts.config_path);
    if (opts.seed_set) {
        config.seeds = {opts.seed};
    }
    if (!opts.out_dir.empty()) {
        config.output_dir = opts.out_dir;
    }
    config.validate();
    return config;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Heralded single-photon storage simulator and time-tag analyzer"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions global;
    app.add_option("--config", global.config_path, "Configuration file (key=value)");
    app.add_option("--out", global.out_dir, "Output directory");
    auto* seed_opt = app.add_option("--seed", global.seed, "Master seed override");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Generate a time-tag stream");
    photonmem::SimulateOptions sim_opts;
    simulate->add_option("--duration", sim_opts.duration_s, "Simulated duration in seconds")
        ->capture_default_str();
    simulate->add_flag("--store", sim_opts.apply_storage,
                       "Send the signal channel through the memory");
    simulate->add_flag("--hbt-split", sim_opts.hbt_split_signal,
                       "Split the signal channel 50/50 for heralded auto-correlation");

    // analyze
    auto* analyze = app.add_subcommand("analyze", "Analyze a time-tag CSV file");
    std::string input_csv;
    photonmem::AnalyzeOptions an_opts;
    bool want_alpha = false;
    int alpha_trigger = photonmem::kTriggerChannel;
    analyze->add_option("input", input_csv, "Time-tag CSV (channel,t_ns)")->required();
    analyze->add_option("--ch-a", an_opts.ch_a, "First channel")->capture_default_str();
    analyze->add_option("--ch-b", an_opts.ch_b, "Second channel")->capture_default_str();
    analyze->add_option("--bin-width", an_opts.bin_width_ns, "Bin width in ns")
        ->capture_default_str();
    analyze->add_option("--tau-min", an_opts.delay_min_ns, "Delay range start (ns)")
        ->capture_default_str();
    analyze->add_option("--tau-max", an_opts.delay_max_ns, "Delay range end (ns)")
        ->capture_default_str();
    analyze->add_option("--duration", an_opts.duration_override_s,
                        "Acquisition duration in seconds (default: last timestamp)");
    analyze->add_flag("--alpha", want_alpha, "Also measure the anti-correlation parameter");
    analyze->add_option("--alpha-trigger", alpha_trigger, "Trigger channel for alpha")
        ->capture_default_str();
    analyze->add_option("--alpha-a", an_opts.alpha_a, "First split channel")
        ->capture_default_str();
    analyze->add_option("--alpha-b", an_opts.alpha_b, "Second split channel")
        ->capture_default_str();
    analyze->add_option("--alpha-window", an_opts.alpha_window_ns, "Window width (ns)")
        ->capture_default_str();
    analyze->add_option("--alpha-center", an_opts.alpha_center_ns,
                        "Window center relative to the trigger (ns)")
        ->capture_default_str();

    // correlation
    auto* correlation =
        app.add_subcommand("correlation", "Storage-time sweep and decay fit");
    double corr_duration = 0.0;
    correlation->add_option("--duration", corr_duration,
                            "Simulated duration per storage point in seconds");

    // image
    app.add_subcommand("image", "Donut-mode storage metrics");

    // tomography
    auto* tomography = app.add_subcommand("tomography", "Polarization process tomography");
    std::uint64_t shots = 0;
    tomography->add_option("--shots", shots, "Shots per measurement setting");

    // interference
    app.add_subcommand("interference", "Stored OAM superposition interference");

    CLI11_PARSE(app, argc, argv);
    global.seed_set = seed_opt->count() > 0;

    try {
        const photonmem::ExperimentConfig config = make_config(global);
        const std::filesystem::path out = config.output_dir;

        if (simulate->parsed()) {
            const auto stream = photonmem::run_simulate(config, sim_opts, out);
            std::cout << "wrote " << (out / "timetags.csv").string() << " ("
                      << stream.records.size() << " records)\n";
        } else if (analyze->parsed()) {
            if (want_alpha) {
                an_opts.alpha_trigger = alpha_trigger;
            }
            const auto result = photonmem::analyze_timetags(input_csv, an_opts, out);
            std::cout << "analyzed " << result.records << " records";
            if (result.alpha) {
                std::cout << "; alpha = " << result.alpha->alpha();
            }
            std::cout << '\n';
        } else if (correlation->parsed()) {
            const double duration =
                corr_duration > 0.0 ? corr_duration : config.correlation.duration_s;
            const auto result = photonmem::run_correlation(config, duration, out);
            std::cout << "decay fit: A = " << result.fit.amplitude
                      << ", T = " << result.fit.decay_time_ns
                      << " ns, g0 = " << result.fit.offset << '\n';
        } else if (app.get_subcommand("image")->parsed()) {
            const auto result = photonmem::run_image_memory(config, out);
            std::cout << "visibility in/out = " << result.visibility_in << " / "
                      << result.visibility_out
                      << ", similarity = " << result.similarity_profile << '\n';
        } else if (tomography->parsed()) {
            const std::uint64_t n = shots > 0 ? shots : config.tomography.shots;
            const auto result = photonmem::run_tomography(config, n, out);
            std::cout << "fidelities:";
            for (const auto& [input, f] : result.fidelities) {
                std::cout << ' ' << photonmem::to_string(input) << "=" << f;
            }
            std::cout << '\n';
        } else if (app.get_subcommand("interference")->parsed()) {
            const auto result = photonmem::run_interference(config, out);
            std::cout << "fringe visibility = " << result.visibility << '\n';
        }
    } catch (const photonmem::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const photonmem::Error& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kExitDataError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDataError;
    }
    return kExitOk;
}
