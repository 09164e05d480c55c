#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

namespace photonmem {

// Pixelated transverse plane. The geometric center sits at
// ((width-1)/2, (height-1)/2) in pixel coordinates, so even-sized grids have
// their center between pixels and no pixel coincides with r = 0.
struct TransverseGrid {
    int width = 128;
    int height = 128;
    double pitch_mm = 0.05;

    void validate() const {
        if (width < 1 || height < 1) {
            throw std::invalid_argument("grid dimensions must be at least 1x1");
        }
        if (!(pitch_mm > 0.0)) {
            throw std::invalid_argument("grid pitch must be positive");
        }
    }

    double center_col() const { return (width - 1) / 2.0; }
    double center_row() const { return (height - 1) / 2.0; }
    std::size_t pixel_count() const {
        return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    }
    bool same_shape(const TransverseGrid& other) const {
        return width == other.width && height == other.height;
    }

    // Physical offsets of a pixel from the grid center, in mm.
    double x_mm(int col) const { return (col - center_col()) * pitch_mm; }
    double y_mm(int row) const { return (row - center_row()) * pitch_mm; }
};

// Non-negative gray-scale matrix on a grid; row-major storage.
struct IntensityImage {
    TransverseGrid grid;
    std::vector<double> pixels;

    IntensityImage() = default;
    explicit IntensityImage(const TransverseGrid& g) : grid(g), pixels(g.pixel_count(), 0.0) {}

    double& at(int row, int col) {
        return pixels[static_cast<std::size_t>(row) * grid.width + col];
    }
    double at(int row, int col) const {
        return pixels[static_cast<std::size_t>(row) * grid.width + col];
    }

    double total_power() const {
        double sum = 0.0;
        for (double p : pixels) sum += p;
        return sum;
    }
    double max_pixel() const {
        double m = 0.0;
        for (double p : pixels) m = p > m ? p : m;
        return m;
    }
};

// Complex transverse amplitude; |amplitude|^2 integrates to the total power.
// oam_label records the nominal winding number when one is defined.
struct SpatialField {
    TransverseGrid grid;
    std::vector<std::complex<double>> amplitude;
    std::optional<int> oam_label;

    SpatialField() = default;
    explicit SpatialField(const TransverseGrid& g) : grid(g), amplitude(g.pixel_count()) {}

    std::complex<double>& at(int row, int col) {
        return amplitude[static_cast<std::size_t>(row) * grid.width + col];
    }
    const std::complex<double>& at(int row, int col) const {
        return amplitude[static_cast<std::size_t>(row) * grid.width + col];
    }

    double total_power() const {
        double sum = 0.0;
        for (const auto& a : amplitude) sum += std::norm(a);
        return sum;
    }
};

} // namespace photonmem
