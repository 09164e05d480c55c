#include "photonmem/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>

#include "photonmem/errors.hpp"

namespace photonmem {

namespace {

double parse_double(const std::string& value, const std::string& key, std::size_t line) {
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0' || !std::isfinite(v)) {
        throw ConfigError("bad numeric value '" + value + "' for " + key, line);
    }
    return v;
}

std::int64_t parse_int(const std::string& value, const std::string& key, std::size_t line) {
    std::int64_t v = 0;
    auto res = std::from_chars(value.data(), value.data() + value.size(), v);
    if (res.ec != std::errc() || res.ptr != value.data() + value.size()) {
        throw ConfigError("bad integer value '" + value + "' for " + key, line);
    }
    return v;
}

bool parse_bool(const std::string& value, const std::string& key, std::size_t line) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw ConfigError("bad boolean value '" + value + "' for " + key, line);
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> items;
    std::size_t start = 0;
    while (start <= value.size()) {
        std::size_t comma = value.find(',', start);
        if (comma == std::string::npos) comma = value.size();
        std::string item = value.substr(start, comma - start);
        const auto a = item.find_first_not_of(" \t");
        const auto b = item.find_last_not_of(" \t");
        if (a != std::string::npos) {
            items.push_back(item.substr(a, b - a + 1));
        }
        start = comma + 1;
    }
    return items;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

} // namespace

void ExperimentConfig::validate() const {
    source.validate();
    memory.validate();
    channel.validate();
    grid.validate();
    if (seeds.empty()) {
        throw ConfigError("at least one seed is required");
    }
    if (correlation.storage_times_ns.empty()) {
        throw ConfigError("correlation.storage_times_ns must not be empty");
    }
    for (double t : correlation.storage_times_ns) {
        if (t < 0.0) {
            throw ConfigError("storage times must be non-negative");
        }
    }
    if (analysis.delay_max_ns <= analysis.delay_min_ns) {
        throw ConfigError("analysis delay range is empty");
    }
    if (tomography.shots == 0) {
        throw ConfigError("tomography.shots must be positive");
    }
    if (interference.noise_floor < 0.0 || interference.noise_floor >= 1.0) {
        throw ConfigError("interference.noise_floor must lie in [0, 1)");
    }
    if (!(interference.scan_step_deg > 0.0)) {
        throw ConfigError("interference.scan_step_deg must be positive");
    }
}

ExperimentConfig default_config() {
    ExperimentConfig config;
    config.source.delay_offset_ns = 19.0;
    config.source.coherence_time_ns = 32.5 / std::log(2.0);
    config.source.det_eff_trigger = 0.5;
    config.source.det_eff_signal = 0.5;
    config.source.background_trigger_hz = 0.0;
    config.source.background_signal_hz = 0.0;
    config.source = calibrate_to_peak(200.0, config.source);

    config.memory.eta0 = 0.10;
    config.memory.decoherence_time_ns = 348.0;
    config.memory.storage_time_ns = 100.0;
    config.memory.noise_rate_hz = 75000.0;
    config.memory.blur_sigma_mm = 0.03;

    config.channel.loss = 0.5;
    config.channel.phase_noise_sigma = 0.255;
    config.channel.depolarization = 0.06;

    config.grid = {128, 128, 0.05};
    return config;
}

void apply_config_entry(ExperimentConfig& c, const std::string& key,
                        const std::string& value, std::size_t line) {
    using Setter = std::function<void(ExperimentConfig&, const std::string&, std::size_t)>;
    static const std::map<std::string, Setter> setters = {
        {"source.pair_rate_hz",
         [](ExperimentConfig& c, const std::string& v, std::size_t l) {
             c.source.pair_rate_hz = parse_double(v, "source.pair_rate_hz", l);
         }},
        {"source.delay_offset_ns",
         [](ExperimentConfig& c, const std::string& v, std::size_t l) {
             c.source.delay_offset_ns = parse_double(v, "source.delay_offset_ns", l);
         }},
        {"source.coherence_time_ns",
         [](ExperimentConfig& c, const std::string& v, std::size_t l) {
             c.source.coherence_time_ns = parse_double(v, "source.coherence_time_ns", l);
         }},
        {"source.background_trigger_hz",
         [](ExperimentConfig& c, const std::string& v, std::size_t l) {
             c.source.background_trigger_hz =
                 parse_double(v, "source.background_trigger_hz", l);
         }},
        {"source.background_signal_hz",
         [](ExperimentConfig& c, const std::string& v, std::size_t l) {
             c.source.background_signal_hz =
                 parse_double(v, "source.background_signal_hz", l);
         }},
        {"source.det_eff_trigger",
         [](ExperimentConfig& c, const std::string& v, std::size_t l) {
             c.source.det_eff_trigger = parse_double(v, "source.det_eff_trigger", l);
         }},
        {"source.det_eff_signal",
         [](ExperimentConfig& c, const std::string& v, std::size_t l) {
             c.source.det_eff_signal = parse_double(v, "source.det_eff_signal", l);
         }},
        {"source.calibrate_peak",
         [](ExperimentConfig& c, const std::string& v, std::size_t l) {
             c.source = calibrate_to_peak(parse_double(v, "source.calibrate_peak", l),
                                          c.source);
         }},
        {"memory.eta0",
         [](ExperimentConfig& c, const std::string& v, std::size_t l) {
             c.memory.eta0 = parse_double(v, "memory.eta0", l);
         }},
        {"memory.decoherence_time_ns",
         [](ExperimentConfig& c, const std::string& v, std::size_t l) {
             c.memory.decoherence_time_ns =
                 parse_double(v, "memory.decoherence_time_ns", l);
         }},
        {"memory.storage_time_ns",
         [](ExperimentConfig& c, const std::string& v, std::size_t l) {
             c.memory.storage_time_ns = parse_double(v, "memory.storage_time_ns", l);
         }},
        {"memory.noise_rate_hz",
         [](ExperimentConfig& c, const std::string& v, std::size_t l) {
             c.memory.noise_rate_hz = parse_double(v, "memory.noise_rate_hz", l);
         }},
        {"memory.blur_sigma_mm",
         [](ExperimentConfig& c, const std::string& v, std::size_t l) {
             c.memory.blur_sigma_mm = parse_double(v, "memory.blur_sigma_mm", l);
         }},
        {"memory.decay_shape",
         [](ExperimentConfig& c, const std::string& v, std::size_t l) {
             if (v == "exponential") c.memory.decay_shape = DecayShape::Exponential;
             else if (v == "gaussian") c.memory.decay_shape = DecayShape::Gaussian;
             else throw ConfigError("memory.decay_shape must be exponential or gaussian", l);
         }},
        {"channel.loss",
         [](ExperimentConfig& c, const std::string& v, std::size_t l) {
             c.channel.loss = parse_double(v, "channel.loss", l);
         }},
        {"channel.phase_noise_sigma",
         [](ExperimentConfig& c, const std::string& v, std::size_t l) {
             c.channel.phase_noise_sigma = parse_double(v, "channel.phase_noise_sigma", l);
         }},
        {"channel.depolarization",
         [](ExperimentConfig& c, const std::string& v, std::size_t l) {
             c.channel.depolarization = parse_double(v, "channel.depolarization", l);
         }},
        {"grid.width",
         [](ExperimentConfig& c, const std::string& v, std::size_t l) {
             c.grid.width = static_cast<int>(parse_int(v, "grid.width", l));
         }},
        {"grid.height",
         [](ExperimentConfig& c, const std::string& v, std::size_t l) {
             c.grid.height = static_cast<int>(parse_int(v, "grid.height", l));
         }},
        {"grid.pitch_mm",
         [](ExperimentConfig& c, const std::string& v, std::size_t l) {
             c.grid.pitch_mm = parse_double(v, "grid.pitch_mm", l);
         }},
        {"correlation.duration_s",
         [](ExperimentConfig& c, const std::string& v, std::size_t l) {
             c.correlation.duration_s = parse_double(v, "correlation.duration_s", l);
         }},
        {"correlation.storage_times_ns",
         [](ExperimentConfig& c, const std::string& v, std::size_t l) {
             c.correlation.storage_times_ns.clear();
             for (const auto& item : split_list(v)) {
                 c.correlation.storage_times_ns.push_back(
                     parse_double(item, "correlation.storage_times_ns", l));
             }
         }},
        {"correlation.window_ns",
         [](ExperimentConfig& c, const std::string& v, std::size_t l) {
             c.correlation.window_ns = parse_int(v, "correlation.window_ns", l);
         }},
        {"analysis.bin_width_ns",
         [](ExperimentConfig& c, const std::string& v, std::size_t l) {
             c.analysis.bin_width_ns = parse_int(v, "analysis.bin_width_ns", l);
         }},
        {"analysis.delay_min_ns",
         [](ExperimentConfig& c, const std::string& v, std::size_t l) {
             c.analysis.delay_min_ns = parse_int(v, "analysis.delay_min_ns", l);
         }},
        {"analysis.delay_max_ns",
         [](ExperimentConfig& c, const std::string& v, std::size_t l) {
             c.analysis.delay_max_ns = parse_int(v, "analysis.delay_max_ns", l);
         }},
        {"analysis.alpha_window_ns",
         [](ExperimentConfig& c, const std::string& v, std::size_t l) {
             c.analysis.alpha_window_ns = parse_int(v, "analysis.alpha_window_ns", l);
         }},
        {"image.oam_l",
         [](ExperimentConfig& c, const std::string& v, std::size_t l) {
             c.image.oam_l = static_cast<int>(parse_int(v, "image.oam_l", l));
         }},
        {"image.waist_mm",
         [](ExperimentConfig& c, const std::string& v, std::size_t l) {
             c.image.waist_mm = parse_double(v, "image.waist_mm", l);
         }},
        {"image.g2_peak",
         [](ExperimentConfig& c, const std::string& v, std::size_t l) {
             c.image.g2_peak = parse_double(v, "image.g2_peak", l);
         }},
        {"image.noise_to_signal",
         [](ExperimentConfig& c, const std::string& v, std::size_t l) {
             c.image.noise_to_signal = parse_double(v, "image.noise_to_signal", l);
         }},
        {"image.flat_field",
         [](ExperimentConfig& c, const std::string& v, std::size_t l) {
             c.image.flat_field = parse_bool(v, "image.flat_field", l);
         }},
        {"tomography.shots",
         [](ExperimentConfig& c, const std::string& v, std::size_t l) {
             c.tomography.shots = static_cast<std::uint64_t>(
                 parse_int(v, "tomography.shots", l));
         }},
        {"interference.oam_l",
         [](ExperimentConfig& c, const std::string& v, std::size_t l) {
             c.interference.oam_l = static_cast<int>(parse_int(v, "interference.oam_l", l));
         }},
        {"interference.noise_floor",
         [](ExperimentConfig& c, const std::string& v, std::size_t l) {
             c.interference.noise_floor = parse_double(v, "interference.noise_floor", l);
         }},
        {"interference.azimuth0_rad",
         [](ExperimentConfig& c, const std::string& v, std::size_t l) {
             c.interference.azimuth0_rad = parse_double(v, "interference.azimuth0_rad", l);
         }},
        {"interference.pattern_thetas_deg",
         [](ExperimentConfig& c, const std::string& v, std::size_t l) {
             c.interference.pattern_thetas_deg.clear();
             for (const auto& item : split_list(v)) {
                 c.interference.pattern_thetas_deg.push_back(
                     parse_double(item, "interference.pattern_thetas_deg", l));
             }
         }},
        {"interference.scan_step_deg",
         [](ExperimentConfig& c, const std::string& v, std::size_t l) {
             c.interference.scan_step_deg =
                 parse_double(v, "interference.scan_step_deg", l);
         }},
        {"interference.scan_counts",
         [](ExperimentConfig& c, const std::string& v, std::size_t l) {
             c.interference.scan_counts = parse_double(v, "interference.scan_counts", l);
         }},
        {"seeds",
         [](ExperimentConfig& c, const std::string& v, std::size_t l) {
             c.seeds.clear();
             for (const auto& item : split_list(v)) {
                 c.seeds.push_back(
                     static_cast<std::uint64_t>(parse_int(item, "seeds", l)));
             }
             if (c.seeds.empty()) {
                 throw ConfigError("seeds list is empty", l);
             }
         }},
        {"output_dir",
         [](ExperimentConfig& c, const std::string& v, std::size_t) {
             c.output_dir = v;
         }},
    };

    const auto it = setters.find(key);
    if (it == setters.end()) {
        throw ConfigError("unknown configuration key '" + key + "'", line);
    }
    it->second(c, value, line);
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file " + path.string());
    }
    ExperimentConfig config = default_config();
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') {
            continue;
        }
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("expected key=value, got '" + stripped + "'", line_no);
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError("empty key", line_no);
        }
        apply_config_entry(config, key, value, line_no);
    }
    config.validate();
    return config;
}

double default_waist_mm(const TransverseGrid& grid, int l, double waist_mm) {
    if (waist_mm > 0.0) {
        return waist_mm;
    }
    const int abs_l = l < 0 ? -l : l;
    const double frame = grid.width * grid.pitch_mm;
    if (abs_l == 0) {
        return frame / 6.0;
    }
    // Ring radius w sqrt(l/2) = frame/6.
    return frame / 6.0 * std::sqrt(2.0 / abs_l);
}

} // namespace photonmem
