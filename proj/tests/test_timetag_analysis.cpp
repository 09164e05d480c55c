#include <algorithm>
#include <cmath>
#include <vector>

#include <doctest.h>

#include "photonmem/errors.hpp"
#include "photonmem/pair_source.hpp"
#include "photonmem/rng.hpp"
#include "photonmem/timetag_analysis.hpp"

using namespace photonmem;

namespace {

SourceParams calibrated_source() {
    SourceParams p;
    p.delay_offset_ns = 19.0;
    p.coherence_time_ns = 32.5 / std::log(2.0);
    p.det_eff_trigger = 0.5;
    p.det_eff_signal = 0.5;
    return calibrate_to_peak(200.0, p);
}

TimeTagStream random_stream(std::uint64_t seed, std::size_t n_per_channel,
                            std::int64_t t_max) {
    Xoshiro256 rng(seed);
    TimeTagStream stream;
    stream.channels = {0, 1};
    stream.duration_ns = static_cast<double>(t_max);
    for (std::size_t i = 0; i < n_per_channel; ++i) {
        stream.records.push_back({0, static_cast<std::int64_t>(rng.next() % t_max)});
        stream.records.push_back({1, static_cast<std::int64_t>(rng.next() % t_max)});
    }
    std::sort(stream.records.begin(), stream.records.end(), tag_before);
    return stream;
}

// O(n^2) reference count, written independently of the sliding window.
std::vector<std::uint64_t> brute_force_bins(const TimeTagStream& s, int ch_a, int ch_b,
                                            std::int64_t width, std::int64_t lo,
                                            std::int64_t hi) {
    std::vector<std::uint64_t> bins(static_cast<std::size_t>((hi - lo) / width), 0);
    for (std::size_t i = 0; i < s.records.size(); ++i) {
        if (s.records[i].channel != ch_a) continue;
        for (std::size_t j = 0; j < s.records.size(); ++j) {
            if (j == i || s.records[j].channel != ch_b) continue;
            const std::int64_t d = s.records[j].t_ns - s.records[i].t_ns;
            if (d >= lo && d < hi) {
                bins[static_cast<std::size_t>((d - lo) / width)] += 1;
            }
        }
    }
    return bins;
}

} // namespace

TEST_SUITE("timetag_analysis") {

TEST_CASE("empty stream gives an all-zero histogram") {
    TimeTagStream stream;
    stream.channels = {0, 1};
    const auto hist = coincidence_histogram(stream, 0, 1, 1, -10, 10);
    CHECK(hist.bins.size() == 20);
    CHECK(hist.total_pairs_examined == 0);
    for (auto b : hist.bins) CHECK(b == 0);
}

TEST_CASE("single simultaneous pair lands in the zero-delay bin") {
    TimeTagStream stream;
    stream.channels = {0, 1};
    stream.records = {{0, 100}, {1, 100}};
    stream.duration_ns = 200;
    const auto hist = coincidence_histogram(stream, 0, 1, 1, -5, 5);
    CHECK(hist.total_pairs_examined == 1);
    CHECK(hist.bins[5] == 1); // bin covering delay 0
}

TEST_CASE("histogram argument validation") {
    TimeTagStream stream;
    stream.channels = {0, 1};
    CHECK_THROWS_AS(coincidence_histogram(stream, 0, 7, 1, -5, 5), std::invalid_argument);
    CHECK_THROWS_AS(coincidence_histogram(stream, 0, 1, 0, -5, 5), std::invalid_argument);
    CHECK_THROWS_AS(coincidence_histogram(stream, 0, 1, 1, 5, 5), std::invalid_argument);
    CHECK_THROWS_AS(coincidence_histogram(stream, 0, 1, 3, -5, 5), std::invalid_argument);
    TimeTagStream unsorted;
    unsorted.channels = {0, 1};
    unsorted.records = {{0, 10}, {0, 5}};
    CHECK_THROWS_AS(coincidence_histogram(unsorted, 0, 1, 1, -5, 5),
                    std::invalid_argument);
}

TEST_CASE("sliding window agrees with brute force and conserves pairs") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto stream = random_stream(seed, 150, 2000);
        const auto hist = coincidence_histogram(stream, 0, 1, 2, -64, 64);
        const auto expected = brute_force_bins(stream, 0, 1, 2, -64, 64);
        REQUIRE(hist.bins.size() == expected.size());
        std::uint64_t total = 0;
        for (std::size_t i = 0; i < expected.size(); ++i) {
            CHECK(hist.bins[i] == expected[i]);
            total += hist.bins[i];
        }
        CHECK(hist.total_pairs_examined == total);
    }
}

TEST_CASE("same-channel histogram excludes self pairs") {
    TimeTagStream stream;
    stream.channels = {0};
    stream.records = {{0, 10}, {0, 12}};
    const auto hist = coincidence_histogram(stream, 0, 0, 1, -5, 5);
    // Ordered pairs: +2 and -2; the self-delays at 0 are skipped.
    CHECK(hist.total_pairs_examined == 2);
    CHECK(hist.bins[3] == 1);
    CHECK(hist.bins[7] == 1);
}

TEST_CASE("rebinning sums adjacent bins exactly") {
    const auto stream = random_stream(11, 200, 3000);
    const auto hist = coincidence_histogram(stream, 0, 1, 1, -40, 40);
    const auto coarse = rebin(hist, 2);
    REQUIRE(coarse.bins.size() == hist.bins.size() / 2);
    for (std::size_t i = 0; i < coarse.bins.size(); ++i) {
        CHECK(coarse.bins[i] == hist.bins[2 * i] + hist.bins[2 * i + 1]);
    }
    CHECK(coarse.total_pairs_examined == hist.total_pairs_examined);
    CHECK(coarse.bin_width_ns == 2);
    CHECK_THROWS_AS(rebin(hist, 3), std::invalid_argument); // 80 bins not divisible
}

TEST_CASE("normalization validation") {
    CoincidenceHistogram hist;
    hist.bins = {1, 2, 3};
    hist.bin_width_ns = 1;
    CHECK_THROWS_AS(normalize_g2(hist, 0, 10, 1.0), NormalizationError);
    CHECK_THROWS_AS(normalize_g2(hist, 10, 10, 0.0), NormalizationError);
}

TEST_CASE("background-only stream normalizes to g of one") {
    SourceParams p;
    p.background_trigger_hz = 200000.0;
    p.background_signal_hz = 200000.0;
    const double duration_s = 2.0;
    const auto stream = simulate_timetags(p, duration_s, 77);
    const auto hist =
        coincidence_histogram(stream, kTriggerChannel, kSignalChannel, 10, -200, 200);
    const auto curve = normalize_g2(hist, stream.count_channel(kTriggerChannel),
                                    stream.count_channel(kSignalChannel), duration_s);
    double mean = 0.0;
    for (double g : curve.g) mean += g;
    mean /= static_cast<double>(curve.g.size());
    CHECK(mean == doctest::Approx(1.0).epsilon(0.02));
    for (std::size_t i = 0; i < curve.g.size(); ++i) {
        CHECK(std::abs(curve.g[i] - 1.0) < 4.0 * curve.stderr[i] + 0.05);
    }
}

TEST_CASE("calibrated simulation recovers the correlation peak") {
    const SourceParams p = calibrated_source();
    const double duration_s = 10.0;
    const auto stream = simulate_timetags(p, duration_s, 404);
    const auto hist =
        coincidence_histogram(stream, kTriggerChannel, kSignalChannel, 1, 0, 150);
    const auto curve = normalize_g2(hist, stream.count_channel(kTriggerChannel),
                                    stream.count_channel(kSignalChannel), duration_s);

    const std::size_t peak = peak_index(curve);
    // 1 ns digitization smears the onset bin, so the measured peak sits within
    // a couple of percent of the calibrated 200 at the bin past the onset.
    CHECK(curve.tau_ns[peak] == doctest::Approx(20.5).epsilon(0.1));
    CHECK(curve.g[peak] > 150.0);
    CHECK(curve.g[peak] < 220.0);
    CHECK(std::abs(curve.g[peak] - 196.0) < 4.0 * curve.stderr[peak]);

    SUBCASE("histogram FWHM matches the coherence time") {
        CHECK(histogram_fwhm(hist) ==
              doctest::Approx(32.5).epsilon(2.0 / 32.5)); // +/- 2 bins
    }
    SUBCASE("normalization is invariant under a uniform time shift") {
        TimeTagStream shifted = stream;
        for (auto& r : shifted.records) r.t_ns += 12345;
        const auto hist2 =
            coincidence_histogram(shifted, kTriggerChannel, kSignalChannel, 1, 0, 150);
        const auto curve2 = normalize_g2(hist2, shifted.count_channel(kTriggerChannel),
                                         shifted.count_channel(kSignalChannel),
                                         duration_s);
        for (std::size_t i = 0; i < curve.g.size(); ++i) {
            CHECK(curve2.g[i] == curve.g[i]);
        }
    }
}

TEST_CASE("g2 does not change with acquisition length") {
    const SourceParams p = calibrated_source();
    auto peak_of = [&](double duration_s, std::uint64_t seed) {
        const auto stream = simulate_timetags(p, duration_s, seed);
        return windowed_g2(stream, kTriggerChannel, kSignalChannel, 44, 50, duration_s);
    };
    const WindowedG2 a = peak_of(2.0, 1);
    const WindowedG2 b = peak_of(4.0, 2);
    CHECK(std::abs(a.g - b.g) < 3.0 * std::hypot(a.stderr, b.stderr));
}

TEST_CASE("cauchy-schwarz factor") {
    CHECK(cauchy_schwarz_R(200.0, 2.0, 2.0) == doctest::Approx(10000.0));
    CHECK(cauchy_schwarz_R(1.0, 1.0, 1.0) == doctest::Approx(1.0));
    CHECK(cauchy_schwarz_R(2.0, 2.0, 2.0) == doctest::Approx(1.0));
    CHECK_THROWS_AS(cauchy_schwarz_R(10.0, 0.0, 2.0), std::invalid_argument);

    // Scale covariance R(c g, a, b) = c^2 R(g, a, b).
    Xoshiro256 rng(3);
    for (int i = 0; i < 20; ++i) {
        const double g = 1.0 + 100.0 * rng.uniform();
        const double a = 0.5 + rng.uniform();
        const double b = 0.5 + rng.uniform();
        const double c = 0.1 + 5.0 * rng.uniform();
        CHECK(cauchy_schwarz_R(c * g, a, b) ==
              doctest::Approx(c * c * cauchy_schwarz_R(g, a, b)).epsilon(1e-12));
    }
}

TEST_CASE("anti-correlation arithmetic") {
    CHECK(anti_correlation_alpha(100, 10, 10, 0) == doctest::Approx(0.0));
    CHECK(anti_correlation_alpha(100, 10, 10, 1) == doctest::Approx(1.0));
    CHECK_THROWS_AS(anti_correlation_alpha(100, 0, 10, 1), InsufficientStatisticsError);
    CHECK_THROWS_AS(anti_correlation_alpha(100, 10, 0, 1), InsufficientStatisticsError);

    // Invariance under common rescaling of all four counts.
    Xoshiro256 rng(9);
    for (int i = 0; i < 20; ++i) {
        const std::uint64_t p1 = 1000 + rng.next() % 1000;
        const std::uint64_t p12 = 10 + rng.next() % 100;
        const std::uint64_t p13 = 10 + rng.next() % 100;
        const std::uint64_t p123 = 1 + rng.next() % 10;
        const std::uint64_t k = 2 + rng.next() % 5;
        CHECK(anti_correlation_alpha(k * p1, k * p12, k * p13, k * p123) ==
              doctest::Approx(anti_correlation_alpha(p1, p12, p13, p123)).epsilon(1e-12));
    }
}

TEST_CASE("alpha window counting on a hand-built stream") {
    TimeTagStream stream;
    stream.channels = {0, 2, 3};
    // Four triggers; one a-coincidence, one b-coincidence, no triples.
    stream.records = {{0, 1000}, {2, 1010}, {0, 2000}, {3, 2030},
                      {0, 3000}, {0, 4000}, {2, 5000}};
    std::sort(stream.records.begin(), stream.records.end(), tag_before);
    const auto counts = count_alpha_coincidences(stream, 0, 2, 3, 50, 25);
    CHECK(counts.p1 == 4);
    CHECK(counts.p12 == 1);
    CHECK(counts.p13 == 1);
    CHECK(counts.p123 == 0);
    CHECK(counts.alpha() == doctest::Approx(0.0));
}

TEST_CASE("alpha is undefined without signal coincidences") {
    TimeTagStream stream;
    stream.channels = {0, 2, 3};
    stream.records = {{0, 1000}, {0, 2000}};
    CHECK_THROWS_AS(measure_alpha(stream, 0, 2, 3, 50, 25), InsufficientStatisticsError);
}

TEST_CASE("coherent (poissonian) light gives alpha of one") {
    SourceParams p;
    p.background_trigger_hz = 1e6;
    p.background_signal_hz = 1e6;
    const auto stream = simulate_timetags(p, 1.0, 555);
    const auto split =
        hbt_split(stream, kSignalChannel, kSplitChannelA, kSplitChannelB, 556);
    const auto counts =
        count_alpha_coincidences(split, kTriggerChannel, kSplitChannelA, kSplitChannelB,
                                 50, 0);
    CHECK(std::abs(counts.alpha() - 1.0) < 3.0 * counts.alpha_stderr());
}

TEST_CASE("hbt auto-correlation estimate is one for poissonian marks") {
    SourceParams p;
    p.background_signal_hz = 2e6;
    p.background_trigger_hz = 1000.0; // keep the channel set two-sided
    const auto stream = simulate_timetags(p, 1.0, 808);
    const double g = estimate_auto_g2(stream, kSignalChannel, 50, 809);
    CHECK(g == doctest::Approx(1.0).epsilon(0.05));
}

} // TEST_SUITE
