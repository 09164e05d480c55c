#include "photonmem/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>

#include "photonmem/errors.hpp"

namespace photonmem {

namespace {

std::ofstream open_out(const std::filesystem::path& path, bool binary = false) {
    std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
    if (!out) {
        throw Error("cannot open " + path.string() + " for writing");
    }
    return out;
}

std::ifstream open_in(const std::filesystem::path& path, bool binary = false) {
    std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
    if (!in) {
        throw Error("cannot open " + path.string() + " for reading");
    }
    return in;
}

void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
}

} // namespace

std::string format_double(double value) {
    char buf[40];
    // %.17g round-trips any double; trim to the shortest representation that
    // still parses back exactly.
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, value);
        if (std::strtod(buf, nullptr) == value) {
            break;
        }
    }
    return buf;
}

void write_timetags_csv(const std::filesystem::path& path, const TimeTagStream& stream) {
    std::ofstream out = open_out(path);
    out << "channel,t_ns\n";
    for (const auto& r : stream.records) {
        out << r.channel << ',' << r.t_ns << '\n';
    }
}

TimeTagStream read_timetags_csv(const std::filesystem::path& path,
                                double duration_override_ns) {
    std::ifstream in = open_in(path);
    TimeTagStream stream;
    std::set<int> seen;

    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    std::int64_t last_t = 0;
    while (std::getline(in, line)) {
        ++line_no;
        strip_cr(line);
        if (line.empty()) {
            continue;
        }
        if (!have_header) {
            if (line != "channel,t_ns") {
                throw ParseError("expected header 'channel,t_ns', got '" + line + "'",
                                 line_no);
            }
            have_header = true;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw ParseError("missing comma in row '" + line + "'", line_no);
        }
        int channel = 0;
        std::int64_t t = 0;
        const char* begin = line.data();
        auto r1 = std::from_chars(begin, begin + comma, channel);
        if (r1.ec != std::errc() || r1.ptr != begin + comma) {
            throw ParseError("bad channel id in row '" + line + "'", line_no);
        }
        const char* tb = begin + comma + 1;
        const char* te = begin + line.size();
        auto r2 = std::from_chars(tb, te, t);
        if (r2.ec != std::errc() || r2.ptr != te) {
            throw ParseError("bad timestamp in row '" + line + "'", line_no);
        }
        if (!stream.records.empty() && t < last_t) {
            throw UnsortedStreamError(
                "timestamps out of order at line " + std::to_string(line_no) +
                "; sort the input before analysis");
        }
        last_t = t;
        stream.records.push_back({channel, t});
        seen.insert(channel);
    }
    if (!have_header && line_no > 0) {
        throw ParseError("missing 'channel,t_ns' header", 1);
    }
    stream.channels.assign(seen.begin(), seen.end());
    if (duration_override_ns > 0.0) {
        stream.duration_ns = duration_override_ns;
    } else if (!stream.records.empty()) {
        stream.duration_ns = static_cast<double>(stream.records.back().t_ns) + 1.0;
    }
    return stream;
}

void write_histogram_csv(const std::filesystem::path& path,
                         const CoincidenceHistogram& hist) {
    std::ofstream out = open_out(path);
    out << "tau_ns,counts\n";
    for (std::size_t i = 0; i < hist.bins.size(); ++i) {
        out << format_double(hist.bin_center_ns(i)) << ',' << hist.bins[i] << '\n';
    }
}

void write_g2_csv(const std::filesystem::path& path, const G2Curve& curve) {
    std::ofstream out = open_out(path);
    out << "tau_ns,g,stderr\n";
    for (std::size_t i = 0; i < curve.g.size(); ++i) {
        out << format_double(curve.tau_ns[i]) << ',' << format_double(curve.g[i]) << ','
            << format_double(curve.stderr[i]) << '\n';
    }
}

void write_profile_csv(const std::filesystem::path& path,
                       const std::vector<double>& positions_mm,
                       const std::vector<double>& values) {
    if (positions_mm.size() != values.size()) {
        throw std::invalid_argument("write_profile_csv: length mismatch");
    }
    std::ofstream out = open_out(path);
    out << "position_mm,value\n";
    for (std::size_t i = 0; i < values.size(); ++i) {
        out << format_double(positions_mm[i]) << ',' << format_double(values[i]) << '\n';
    }
}

void write_fringe_csv(const std::filesystem::path& path,
                      const std::vector<double>& theta_deg,
                      const std::vector<double>& counts) {
    if (theta_deg.size() != counts.size()) {
        throw std::invalid_argument("write_fringe_csv: length mismatch");
    }
    std::ofstream out = open_out(path);
    out << "theta_deg,counts\n";
    for (std::size_t i = 0; i < counts.size(); ++i) {
        out << format_double(theta_deg[i]) << ',' << format_double(counts[i]) << '\n';
    }
}

void write_pgm16(const std::filesystem::path& path, const IntensityImage& image) {
    image.grid.validate();
    const double peak = image.max_pixel();
    std::ofstream out = open_out(path, true);
    out << "P5\n# scale " << format_double(peak) << "\n"
        << image.grid.width << ' ' << image.grid.height << "\n65535\n";
    const double scale = peak > 0.0 ? 65535.0 / peak : 0.0;
    for (double p : image.pixels) {
        const double clamped = std::min(std::max(p, 0.0), peak);
        const auto v = static_cast<std::uint16_t>(std::lround(clamped * scale));
        const unsigned char bytes[2] = {static_cast<unsigned char>(v >> 8),
                                        static_cast<unsigned char>(v & 0xff)};
        out.write(reinterpret_cast<const char*>(bytes), 2);
    }
}

IntensityImage read_pgm16(const std::filesystem::path& path, double pitch_mm) {
    std::ifstream in = open_in(path, true);
    std::string magic;
    in >> magic;
    if (magic != "P5") {
        throw ParseError("not a binary PGM file", 1);
    }
    double scale = 1.0;
    int width = 0, height = 0, maxval = 0;
    // Tokenize the header, honoring `#` comments (and picking up our scale
    // comment when present).
    int fields = 0;
    while (fields < 3 && in) {
        in >> std::ws;
        if (in.peek() == '#') {
            std::string comment;
            std::getline(in, comment);
            std::size_t pos = comment.find("scale");
            if (pos != std::string::npos) {
                scale = std::strtod(comment.c_str() + pos + 5, nullptr);
            }
            continue;
        }
        int value = 0;
        if (!(in >> value)) break;
        if (fields == 0) width = value;
        else if (fields == 1) height = value;
        else maxval = value;
        ++fields;
    }
    if (fields < 3 || maxval != 65535) {
        throw ParseError("unsupported PGM header", 1);
    }
    in.get(); // single whitespace before raster

    IntensityImage image({width, height, pitch_mm});
    std::vector<unsigned char> raw(image.grid.pixel_count() * 2);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (in.gcount() != static_cast<std::streamsize>(raw.size())) {
        throw ParseError("truncated PGM raster", 1);
    }
    for (std::size_t i = 0; i < image.pixels.size(); ++i) {
        const unsigned v = (static_cast<unsigned>(raw[2 * i]) << 8) | raw[2 * i + 1];
        image.pixels[i] = scale > 0.0 ? v * scale / 65535.0 : 0.0;
    }
    return image;
}

} // namespace photonmem
