#include <cmath>
#include <complex>
#include <vector>

#include <doctest.h>

#include "photonmem/errors.hpp"
#include "photonmem/rng.hpp"
#include "photonmem/spatial_modes.hpp"

using namespace photonmem;

namespace {

const TransverseGrid kGrid{128, 128, 0.05};
const TransverseGrid kOddGrid{129, 129, 0.05};

// Radius of the brightest pixel, in mm.
double peak_radius_mm(const IntensityImage& img) {
    double best = -1.0;
    double radius = 0.0;
    for (int r = 0; r < img.grid.height; ++r) {
        for (int c = 0; c < img.grid.width; ++c) {
            if (img.at(r, c) > best) {
                best = img.at(r, c);
                radius = std::hypot(img.grid.x_mm(c), img.grid.y_mm(r));
            }
        }
    }
    return radius;
}

} // namespace

TEST_SUITE("spatial_modes") {

TEST_CASE("gaussian mode peaks at the grid center") {
    const auto img = intensity(lg_mode(0, 1.0, kOddGrid));
    const int cr = kOddGrid.height / 2;
    const int cc = kOddGrid.width / 2;
    const double center = img.at(cr, cc);
    CHECK(center == doctest::Approx(img.max_pixel()));
    CHECK(center > 0.0);
}

TEST_CASE("l=1 mode vanishes at the exact center pixel") {
    const auto img = intensity(lg_mode(1, 1.0, kOddGrid));
    CHECK(img.at(kOddGrid.height / 2, kOddGrid.width / 2) <= 1e-12);
}

TEST_CASE("l=1 ring radius is waist/sqrt(2) within one pitch") {
    // Analytic maximum of r^2 exp(-2 r^2 / w^2) sits at r = w/sqrt(2).
    const double waist = 1.0;
    const auto img = intensity(lg_mode(1, waist, kGrid));
    CHECK(peak_radius_mm(img) == doctest::Approx(waist / std::sqrt(2.0))
                                     .epsilon(0)
                                     .scale(0)
                                     .epsilon(kGrid.pitch_mm / (waist / std::sqrt(2.0))));
}

TEST_CASE("donut center is below 1% of the ring maximum") {
    const auto img = intensity(lg_mode(1, 1.0, kGrid));
    // Even grid: the four pixels nearest the center sit half a pitch away.
    const int r = kGrid.height / 2;
    const int c = kGrid.width / 2;
    const double center = img.at(r, c);
    CHECK(center < 0.01 * img.max_pixel());
}

TEST_CASE("zero-size grid rejected") {
    CHECK_THROWS_AS(lg_mode(1, 1.0, TransverseGrid{0, 4, 0.05}), std::invalid_argument);
    CHECK_THROWS_AS(lg_mode(1, 0.0, kGrid), std::invalid_argument);
}

TEST_CASE("spiral phase preserves power and composes to identity") {
    const auto base = lg_mode(0, 1.0, kGrid);
    const auto plus = apply_spiral_phase(base, 1);
    CHECK(plus.total_power() == doctest::Approx(base.total_power()).epsilon(1e-12));
    CHECK(plus.oam_label.value() == 1);

    const auto back = apply_spiral_phase(plus, -1);
    double max_diff = 0.0;
    for (std::size_t i = 0; i < base.amplitude.size(); ++i) {
        max_diff = std::max(max_diff, std::abs(back.amplitude[i] - base.amplitude[i]));
    }
    CHECK(max_diff < 1e-12);
}

TEST_CASE("spiral phase leaves the intensity untouched pointwise") {
    const auto base = lg_mode(0, 1.0, kGrid);
    const auto wound = apply_spiral_phase(base, 1);
    const auto ib = intensity(base);
    const auto iw = intensity(wound);
    double max_diff = 0.0;
    for (std::size_t i = 0; i < ib.pixels.size(); ++i) {
        max_diff = std::max(max_diff, std::abs(ib.pixels[i] - iw.pixels[i]));
    }
    CHECK(max_diff < 1e-14);
}

TEST_CASE("spiral phase power conservation on random fields") {
    Xoshiro256 rng(42);
    for (int trial = 0; trial < 20; ++trial) {
        SpatialField field(TransverseGrid{17, 23, 0.1});
        for (auto& a : field.amplitude) {
            a = std::complex<double>(rng.normal(), rng.normal());
        }
        const int l = static_cast<int>(rng.next() % 7) - 3;
        const auto wound = apply_spiral_phase(field, l);
        CHECK(wound.total_power() ==
              doctest::Approx(field.total_power()).epsilon(1e-12));
    }
}

TEST_CASE("modes with different winding are orthogonal on the grid") {
    const std::vector<int> ls = {-1, 0, 1, 2};
    for (std::size_t i = 0; i < ls.size(); ++i) {
        for (std::size_t j = i + 1; j < ls.size(); ++j) {
            const auto a = lg_mode(ls[i], 1.0, kGrid);
            const auto b = lg_mode(ls[j], 1.0, kGrid);
            CHECK(std::abs(mode_overlap(a, b)) < 1e-6);
        }
    }
}

TEST_CASE("intensity examples") {
    SpatialField f(TransverseGrid{2, 2, 1.0});
    f.amplitude = {{1.0, 0.0}, {0.0, 1.0}, {1.0, 0.0}, {0.0, -1.0}};
    const auto img = intensity(f);
    for (double p : img.pixels) {
        CHECK(p == doctest::Approx(1.0));
    }
}

TEST_CASE("transverse scan basics") {
    IntensityImage img(TransverseGrid{4, 3, 1.0});
    for (auto& p : img.pixels) p = 2.5;
    const auto profile = transverse_scan(img, 1);
    REQUIRE(profile.size() == 4);
    for (double v : profile) CHECK(v == doctest::Approx(2.5));

    CHECK_THROWS_AS(transverse_scan(img, 3), std::invalid_argument);
    CHECK_THROWS_AS(transverse_scan(img, -1), std::invalid_argument);

    IntensityImage strip(TransverseGrid{5, 1, 1.0});
    strip.pixels = {1, 2, 3, 4, 5};
    CHECK(transverse_scan(strip, 0) == std::vector<double>{1, 2, 3, 4, 5});
}

TEST_CASE("donut center row has two lobes around a dip") {
    const auto img = intensity(lg_mode(1, 1.0, kGrid));
    const auto profile = transverse_scan(img, kGrid.height / 2);
    const std::size_t mid = profile.size() / 2;
    double left_max = 0.0, right_max = 0.0;
    for (std::size_t i = 0; i < mid; ++i) left_max = std::max(left_max, profile[i]);
    for (std::size_t i = mid; i < profile.size(); ++i)
        right_max = std::max(right_max, profile[i]);
    CHECK(profile[mid] < 0.05 * left_max);
    CHECK(profile[mid] < 0.05 * right_max);
    CHECK(left_max == doctest::Approx(right_max).epsilon(0.05));
}

TEST_CASE("visibility axioms") {
    CHECK(visibility(std::vector<double>{0.0, 1.0, 0.5}) == doctest::Approx(1.0));
    CHECK(visibility(std::vector<double>{2.0, 2.0, 2.0}) == doctest::Approx(0.0));
    CHECK_THROWS_AS(visibility(std::vector<double>{}), std::invalid_argument);
    CHECK_THROWS_AS(visibility(std::vector<double>{1.0, -0.1}), std::invalid_argument);
    CHECK_THROWS_AS(visibility(std::vector<double>{0.0, 0.0}), UndefinedMetricError);
}

TEST_CASE("visibility is 1 iff min is zero, 0 iff constant") {
    Xoshiro256 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> profile(8);
        for (auto& v : profile) v = rng.uniform() + 0.01;
        const double v0 = visibility(profile);
        CHECK(v0 < 1.0);
        profile[trial % profile.size()] = 0.0;
        CHECK(visibility(profile) == doctest::Approx(1.0));
    }
}

TEST_CASE("similarity axioms") {
    const auto a = intensity(lg_mode(1, 1.0, kGrid));
    auto b = a;
    CHECK(similarity(a, a) == doctest::Approx(1.0));
    for (auto& p : b.pixels) p *= 2.0;
    CHECK(similarity(a, b) == doctest::Approx(1.0)); // scale invariance

    const auto c = intensity(lg_mode(0, 0.3, kGrid));
    CHECK(similarity(a, c) == similarity(c, a));
    CHECK(similarity(a, c) >= 0.0);
    CHECK(similarity(a, c) <= 1.0);
}

TEST_CASE("similarity of disjoint-support images is zero") {
    IntensityImage a(TransverseGrid{4, 1, 1.0});
    IntensityImage b(TransverseGrid{4, 1, 1.0});
    a.pixels = {1, 1, 0, 0};
    b.pixels = {0, 0, 1, 1};
    CHECK(similarity(a, b) == doctest::Approx(0.0));
}

TEST_CASE("similarity error cases") {
    IntensityImage a(TransverseGrid{4, 1, 1.0});
    IntensityImage b(TransverseGrid{5, 1, 1.0});
    a.pixels = {1, 1, 0, 0};
    CHECK_THROWS_AS(similarity(a, b), std::invalid_argument);

    IntensityImage z(TransverseGrid{4, 1, 1.0});
    CHECK_THROWS_AS(similarity(a, z), UndefinedMetricError);
}

TEST_CASE("similarity random-scale property") {
    Xoshiro256 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        IntensityImage a(TransverseGrid{6, 5, 1.0});
        for (auto& p : a.pixels) p = rng.uniform();
        a.pixels[0] += 0.1; // guarantee support
        auto b = a;
        const double scale = 0.1 + 3.0 * rng.uniform();
        for (auto& p : b.pixels) p *= scale;
        CHECK(similarity(a, b) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

} // TEST_SUITE
