#include "photonmem/spatial_modes.hpp"

#include <cmath>
#include <stdexcept>

#include "photonmem/errors.hpp"

namespace photonmem {

SpatialField lg_mode(int l, double waist_mm, const TransverseGrid& grid) {
    grid.validate();
    if (!(waist_mm > 0.0)) {
        throw std::invalid_argument("lg_mode: waist must be positive");
    }

    SpatialField field(grid);
    const int abs_l = l < 0 ? -l : l;
    const double inv_w2 = 1.0 / (waist_mm * waist_mm);

    for (int row = 0; row < grid.height; ++row) {
        const double y = grid.y_mm(row);
        for (int col = 0; col < grid.width; ++col) {
            const double x = grid.x_mm(col);
            const double r2 = x * x + y * y;
            const double radial =
                std::pow(std::sqrt(r2), abs_l) * std::exp(-r2 * inv_w2);
            const double phi = std::atan2(y, x);
            field.at(row, col) = std::polar(radial, l * phi);
        }
    }

    const double power = field.total_power();
    if (!(power > 0.0)) {
        throw std::invalid_argument("lg_mode: mode has no support on this grid");
    }
    const double scale = 1.0 / std::sqrt(power);
    for (auto& a : field.amplitude) a *= scale;
    field.oam_label = l;
    return field;
}

SpatialField apply_spiral_phase(const SpatialField& field, int l) {
    field.grid.validate();
    SpatialField out = field;
    if (l == 0) {
        return out;
    }
    for (int row = 0; row < out.grid.height; ++row) {
        const double y = out.grid.y_mm(row);
        for (int col = 0; col < out.grid.width; ++col) {
            const double phi = std::atan2(y, out.grid.x_mm(col));
            out.at(row, col) *= std::polar(1.0, l * phi);
        }
    }
    if (out.oam_label) {
        out.oam_label = *out.oam_label + l;
    }
    return out;
}

IntensityImage intensity(const SpatialField& field) {
    IntensityImage image(field.grid);
    for (std::size_t i = 0; i < field.amplitude.size(); ++i) {
        image.pixels[i] = std::norm(field.amplitude[i]);
    }
    return image;
}

std::vector<double> transverse_scan(const IntensityImage& image, int row) {
    if (row < 0 || row >= image.grid.height) {
        throw std::invalid_argument("transverse_scan: row " + std::to_string(row) +
                                    " outside grid of height " +
                                    std::to_string(image.grid.height));
    }
    std::vector<double> profile(static_cast<std::size_t>(image.grid.width));
    for (int col = 0; col < image.grid.width; ++col) {
        profile[static_cast<std::size_t>(col)] = image.at(row, col);
    }
    return profile;
}

double visibility(std::span<const double> profile) {
    if (profile.empty()) {
        throw std::invalid_argument("visibility: empty profile");
    }
    double lo = profile[0];
    double hi = profile[0];
    for (double v : profile) {
        if (v < 0.0) {
            throw std::invalid_argument("visibility: profile entries must be non-negative");
        }
        lo = v < lo ? v : lo;
        hi = v > hi ? v : hi;
    }
    if (hi == 0.0) {
        throw UndefinedMetricError("visibility undefined for an all-zero profile");
    }
    return (hi - lo) / (hi + lo);
}

namespace {

double cosine(const double* a, const double* b, std::size_t n) {
    double ab = 0.0, aa = 0.0, bb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        ab += a[i] * b[i];
        aa += a[i] * a[i];
        bb += b[i] * b[i];
    }
    if (aa == 0.0 || bb == 0.0) {
        throw UndefinedMetricError("similarity undefined for an all-zero image");
    }
    double r = ab / std::sqrt(aa * bb);
    if (r < 0.0) r = 0.0;
    if (r > 1.0) r = 1.0;
    return r;
}

} // namespace

double similarity(const IntensityImage& a, const IntensityImage& b) {
    if (!a.grid.same_shape(b.grid)) {
        throw std::invalid_argument("similarity: image dimensions differ");
    }
    return cosine(a.pixels.data(), b.pixels.data(), a.pixels.size());
}

double similarity(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("similarity: profile lengths differ");
    }
    if (a.empty()) {
        throw std::invalid_argument("similarity: empty profiles");
    }
    return cosine(a.data(), b.data(), a.size());
}

std::complex<double> mode_overlap(const SpatialField& a, const SpatialField& b) {
    if (!a.grid.same_shape(b.grid)) {
        throw std::invalid_argument("mode_overlap: field dimensions differ");
    }
    std::complex<double> sum = 0.0;
    for (std::size_t i = 0; i < a.amplitude.size(); ++i) {
        sum += std::conj(a.amplitude[i]) * b.amplitude[i];
    }
    return sum;
}

} // namespace photonmem
