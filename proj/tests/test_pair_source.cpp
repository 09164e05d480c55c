#include <cmath>
#include <vector>

#include <doctest.h>

#include "photonmem/errors.hpp"
#include "photonmem/pair_source.hpp"
#include "photonmem/timetag_analysis.hpp"

using namespace photonmem;

namespace {

SourceParams default_source() {
    SourceParams p;
    p.delay_offset_ns = 19.0;
    p.coherence_time_ns = 32.5 / std::log(2.0);
    p.det_eff_trigger = 0.5;
    p.det_eff_signal = 0.5;
    return calibrate_to_peak(200.0, p);
}

// Probability mass of the integer delay bin j for floor-quantized tags:
// the continuous delay density f(s) smeared with the unit triangular kernel,
// integrated numerically (independent of the simulator's own math).
double quantized_delay_pmf(std::int64_t j, const SourceParams& p) {
    const double t0 = p.delay_offset_ns;
    const double tc = p.coherence_time_ns;
    auto f = [&](double s) {
        return s >= t0 ? std::exp(-(s - t0) / tc) / tc : 0.0;
    };
    const int steps = 4000;
    const double lo = static_cast<double>(j) - 1.0;
    const double h = 2.0 / steps;
    double sum = 0.0;
    for (int k = 0; k <= steps; ++k) {
        const double s = lo + k * h;
        const double weight = 1.0 - std::abs(s - static_cast<double>(j));
        if (weight <= 0.0) continue;
        const double w = (k == 0 || k == steps) ? 0.5 : 1.0;
        sum += w * weight * f(s);
    }
    return sum * h;
}

} // namespace

TEST_SUITE("pair_source") {

TEST_CASE("all rates zero gives an empty stream") {
    SourceParams p;
    p.pair_rate_hz = 0.0;
    const auto stream = simulate_timetags(p, 1.0, 1);
    CHECK(stream.records.empty());
    CHECK(stream.is_sorted());
    CHECK(stream.duration_ns == doctest::Approx(1e9));
}

TEST_CASE("trigger counts follow Poisson statistics") {
    SourceParams p;
    p.pair_rate_hz = 50000.0;
    p.det_eff_trigger = 1.0;
    p.det_eff_signal = 1.0;
    const double duration_s = 2.0;
    const auto stream = simulate_timetags(p, duration_s, 99);
    const double mean = p.pair_rate_hz * duration_s;
    const double n = static_cast<double>(stream.count_channel(kTriggerChannel));
    CHECK(std::abs(n - mean) < 5.0 * std::sqrt(mean));
}

TEST_CASE("identical seeds reproduce identical streams") {
    const SourceParams p = default_source();
    const auto a = simulate_timetags(p, 0.2, 12345);
    const auto b = simulate_timetags(p, 0.2, 12345);
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        CHECK(a.records[i].channel == b.records[i].channel);
        CHECK(a.records[i].t_ns == b.records[i].t_ns);
    }
    const auto c = simulate_timetags(p, 0.2, 54321);
    CHECK(c.records.size() != a.records.size());
}

TEST_CASE("streams are sorted and quantized to integer ns") {
    const auto stream = simulate_timetags(default_source(), 0.1, 7);
    CHECK(stream.is_sorted());
    CHECK(stream.records.size() > 0);
}

TEST_CASE("analytic g2 is flat before the peak and far after it") {
    const SourceParams p = default_source();
    CHECK(analytic_g2(-50.0, p) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(analytic_g2(18.9, p) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(analytic_g2(5000.0, p) == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(analytic_g2(19.0, p) == doctest::Approx(200.0).epsilon(1e-9));
}

TEST_CASE("analytic g2 never dips below one") {
    const SourceParams p = default_source();
    for (double tau = -100.0; tau < 500.0; tau += 3.7) {
        CHECK(analytic_g2(tau, p) >= 1.0);
    }
}

TEST_CASE("analytic g2 requires nonzero singles") {
    SourceParams p;
    p.pair_rate_hz = 0.0;
    CHECK_THROWS_AS(analytic_g2(25.0, p), NormalizationError);
}

TEST_CASE("calibration hits the target peak exactly") {
    SourceParams fixed;
    fixed.delay_offset_ns = 19.0;
    fixed.coherence_time_ns = 32.5 / std::log(2.0);
    fixed.det_eff_trigger = 0.5;
    fixed.det_eff_signal = 0.5;

    SUBCASE("background-free") {
        const SourceParams p = calibrate_to_peak(200.0, fixed);
        CHECK(analytic_g2(p.delay_offset_ns, p) == doctest::Approx(200.0).epsilon(1e-6));
    }
    SUBCASE("with backgrounds") {
        fixed.background_trigger_hz = 2000.0;
        fixed.background_signal_hz = 1500.0;
        const SourceParams p = calibrate_to_peak(50.0, fixed);
        CHECK(analytic_g2(p.delay_offset_ns, p) == doctest::Approx(50.0).epsilon(1e-6));
    }
    SUBCASE("near-unity target needs an enormous rate") {
        const SourceParams p = calibrate_to_peak(1.0 + 1e-3, fixed);
        CHECK(p.pair_rate_hz > 1e9);
    }
    SUBCASE("unreachable target") {
        fixed.background_trigger_hz = 1e6;
        fixed.background_signal_hz = 1e6;
        CHECK_THROWS_AS(calibrate_to_peak(200.0, fixed), NoSolutionError);
    }
    SUBCASE("target must exceed 1") {
        CHECK_THROWS_AS(calibrate_to_peak(1.0, fixed), std::invalid_argument);
        CHECK_THROWS_AS(calibrate_to_peak(0.5, fixed), std::invalid_argument);
    }
}

TEST_CASE("monte carlo histogram matches the quantized analytic curve in every bin") {
    const SourceParams p = default_source();
    const double duration_s = 10.0;
    const auto stream = simulate_timetags(p, duration_s, 2025);

    const auto hist = coincidence_histogram(stream, kTriggerChannel, kSignalChannel, 1,
                                            -50, 250);
    const double duration_ns = duration_s * 1e9;
    const double r1 = p.singles_trigger_hz() / 1e9;
    const double r2 = p.singles_signal_hz() / 1e9;
    const double pair_ns = p.pair_rate_hz / 1e9;

    for (std::size_t i = 0; i < hist.bins.size(); ++i) {
        const std::int64_t j = hist.min_delay_ns + static_cast<std::int64_t>(i);
        const double accidental = r1 * r2 * duration_ns;
        const double truth = pair_ns * duration_ns * p.det_eff_trigger *
                             p.det_eff_signal * quantized_delay_pmf(j, p);
        const double mu = accidental + truth;
        const double n = static_cast<double>(hist.bins[i]);
        CHECK(std::abs(n - mu) <= 3.0 * std::sqrt(mu) + 1e-9);
    }
}

TEST_CASE("hbt split conserves and balances counts") {
    SourceParams p;
    p.pair_rate_hz = 100000.0;
    p.det_eff_signal = 1.0;
    p.det_eff_trigger = 1.0;
    const auto stream = simulate_timetags(p, 1.0, 5);
    const std::size_t n_signal = stream.count_channel(kSignalChannel);
    REQUIRE(n_signal > 50000);

    const auto split = hbt_split(stream, kSignalChannel, kSplitChannelA, kSplitChannelB, 17);
    const std::size_t na = split.count_channel(kSplitChannelA);
    const std::size_t nb = split.count_channel(kSplitChannelB);
    CHECK(na + nb == n_signal);
    CHECK(split.count_channel(kTriggerChannel) == stream.count_channel(kTriggerChannel));
    CHECK(split.is_sorted());
    CHECK(!split.has_channel(kSignalChannel));

    const double n = static_cast<double>(n_signal);
    CHECK(std::abs(static_cast<double>(na) - n / 2.0) < 5.0 * std::sqrt(n / 4.0));

    SUBCASE("empty stream splits to empty") {
        TimeTagStream empty;
        empty.channels = {kSignalChannel};
        const auto s = hbt_split(empty, kSignalChannel, 2, 3, 1);
        CHECK(s.records.empty());
    }
    SUBCASE("deterministic under the seed") {
        const auto again =
            hbt_split(stream, kSignalChannel, kSplitChannelA, kSplitChannelB, 17);
        CHECK(again.count_channel(kSplitChannelA) == na);
    }
    SUBCASE("unknown channel rejected") {
        CHECK_THROWS_AS(hbt_split(stream, 9, 2, 3, 1), std::invalid_argument);
    }
}

TEST_CASE("heralded alpha falls with the pair rate") {
    const SourceParams base = default_source();
    std::vector<double> alphas;
    for (double scale : {4.0, 2.0, 1.0}) {
        SourceParams p = base;
        p.pair_rate_hz = base.pair_rate_hz * scale;
        const auto stream = simulate_timetags(p, 2.0, 31);
        const auto split =
            hbt_split(stream, kSignalChannel, kSplitChannelA, kSplitChannelB, 32);
        alphas.push_back(measure_alpha(split, kTriggerChannel, kSplitChannelA,
                                       kSplitChannelB, 50, 44));
    }
    CHECK(alphas[0] > alphas[1]);
    CHECK(alphas[1] > alphas[2]);
    CHECK(alphas[2] < 0.05);
}

} // TEST_SUITE
