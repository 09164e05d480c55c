#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "photonmem/grid.hpp"
#include "photonmem/pair_source.hpp"
#include "photonmem/timetag_analysis.hpp"

namespace photonmem {

// Time-tag wire format: CSV with header `channel,t_ns`, rows sorted by t_ns.
void write_timetags_csv(const std::filesystem::path& path, const TimeTagStream& stream);

// Reads and validates a time-tag file. Malformed rows raise ParseError with
// the row's line number; out-of-order rows raise UnsortedStreamError (the
// reader never sorts silently). The declared channel set is the set of ids
// present; duration defaults to the last timestamp unless overridden.
TimeTagStream read_timetags_csv(const std::filesystem::path& path,
                                double duration_override_ns = 0.0);

void write_histogram_csv(const std::filesystem::path& path,
                         const CoincidenceHistogram& hist);
void write_g2_csv(const std::filesystem::path& path, const G2Curve& curve);

// Profile rows: position_mm,value.
void write_profile_csv(const std::filesystem::path& path,
                       const std::vector<double>& positions_mm,
                       const std::vector<double>& values);

// Fringe rows: theta_deg,counts.
void write_fringe_csv(const std::filesystem::path& path,
                      const std::vector<double>& theta_deg,
                      const std::vector<double>& counts);

// 16-bit binary PGM (P5, maxval 65535). The peak pixel value of the image is
// recorded in a comment line (`# scale <value>`) so absolute intensities can
// be recovered from the integer data.
void write_pgm16(const std::filesystem::path& path, const IntensityImage& image);
IntensityImage read_pgm16(const std::filesystem::path& path, double pitch_mm = 1.0);

// Deterministic shortest-round-trip double formatting shared by the writers.
std::string format_double(double value);

} // namespace photonmem
