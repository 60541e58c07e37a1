#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "s2m/datagen.hpp"
#include "s2m/error.hpp"
#include "s2m/rng.hpp"
#include "s2m/synthesis.hpp"

#include <cmath>
#include <numbers>

using namespace s2m;

TEST_CASE("mix64 is the SplitMix64 finalizer")
{
    // First output of the reference SplitMix64 generator seeded with 0.
    CHECK(mix64(0x9e3779b97f4a7c15ULL) == 0xe220a8397b1dcdafULL);
}

TEST_CASE("counter streams are frozen")
{
    // Reference values from an independent big-integer implementation.
    CounterRng a(2019, 0, 1);
    CHECK(a.next_u64() == 0x743797617d1fcbb3ULL);
    CHECK(a.next_u64() == 0x1c1faf4893e9740fULL);
    CHECK(a.next_u64() == 0xc8fbb514082e4130ULL);
    CHECK(a.counter() == 3);

    CounterRng b(2019, 5, 3);
    CHECK(b.next_unit() == 0.5983763392799787);
    CHECK(b.next_unit() == 0.33133012010202567);

    CounterRng c(0, 0, 0);
    CHECK(c.next_u64() == 0x2ce809ae01cab7d7ULL);
}

TEST_CASE("uniform_int stays in range and reaches both ends")
{
    CounterRng r(1, 2, 3);
    bool lo = false, hi = false;
    for (int k = 0; k < 2000; ++k) {
        const auto v = r.uniform_int(4, 7);
        CHECK(v >= 4);
        CHECK(v <= 7);
        lo = lo || v == 4;
        hi = hi || v == 7;
    }
    CHECK(lo);
    CHECK(hi);
}

TEST_CASE("templates are raised cosines")
{
    CounterRng r(1, 1, kJitterStream);
    const auto t3 = gen_template(3, 0.0, r);
    CHECK(t3.values[0] == doctest::Approx(0.5));
    CHECK(t3.values[1] == doctest::Approx(1.0));
    CHECK(t3.values[2] == doctest::Approx(0.5));

    const auto t5 = gen_template(5, 0.0, r);
    for (std::size_t k = 0; k < 5; ++k) CHECK(t5.values[k] == doctest::Approx(t5.values[4 - k]).epsilon(1e-15));
    CHECK(*std::max_element(t5.values.begin(), t5.values.end()) == doctest::Approx(1.0));

    CHECK_THROWS_AS(gen_template(2, 0.0, r), InvalidInput);
}

TEST_CASE("jitter scales the peak within bounds and is reproducible")
{
    CounterRng a(9, 4, kJitterStream), b(9, 4, kJitterStream);
    for (int k = 0; k < 50; ++k) {
        const auto ta = gen_template(9, 0.3, a);
        const auto tb = gen_template(9, 0.3, b);
        CHECK(ta.values == tb.values);
        CHECK(ta.values[4] >= 0.7);
        CHECK(ta.values[4] <= 1.3);
    }
}

TEST_CASE("warp map and its inverse")
{
    const double L = 1000.0;
    for (double s : {0.0, 0.1, 0.3, 0.45}) {
        for (double t = 0.0; t <= L; t += 37.5) {
            const double direct = t + s * L * std::sin(2.0 * std::numbers::pi * t / L) / (2.0 * std::numbers::pi);
            CHECK(warp_map(t, s, L) == doctest::Approx(direct).epsilon(1e-15));
            CHECK(inverse_warp_map(warp_map(t, s, L), s, L) == doctest::Approx(t).epsilon(1e-12));
        }
    }
}

TEST_CASE("clean unwarped case equals replication of its blueprint")
{
    BenchmarkConfig cfg;
    cfg.warp_strength = 0.0;
    cfg.pattern_jitter = 0.0;
    cfg.noise_rate = 0.0;
    for (std::size_t i : {0u, 7u, 150u}) {
        const GeneratedCase g = gen_case(cfg, i);
        CHECK(g.truth.markers == model_marker_samples(g.blueprint));
        CHECK(g.noise_amplitude == 0.0);
        // Each pattern is a raised cosine of its own marker width.
        std::vector<double> expected(g.series.size(), 0.0);
        for (const auto& m : g.truth.markers) {
            const auto w = static_cast<std::size_t>(m.end - m.start + 1);
            for (std::size_t k = 0; k < w; ++k) {
                expected[static_cast<std::size_t>(m.start) + k] =
                    0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(k + 1) / static_cast<double>(w + 1)));
            }
        }
        CHECK(g.series.vector() == expected);
    }
}

TEST_CASE("layout respects the configured ranges")
{
    const BenchmarkConfig cfg;
    for (std::size_t i = 0; i < 20; ++i) {
        const GeneratedCase g = gen_case(cfg, i);
        const auto markers = model_marker_samples(g.blueprint);
        REQUIRE(markers.size() == cfg.n_markers_per_series);
        CHECK(markers.front().start >= static_cast<std::int64_t>(cfg.spacing_samples.first));
        for (std::size_t m = 0; m < markers.size(); ++m) {
            const auto width = markers[m].end - markers[m].start + 1;
            CHECK(width >= static_cast<std::int64_t>(cfg.pattern_width_samples.first));
            CHECK(width <= static_cast<std::int64_t>(cfg.pattern_width_samples.second));
            if (m > 0) {
                const auto gap = markers[m].start - markers[m - 1].end - 1;
                CHECK(gap >= static_cast<std::int64_t>(cfg.spacing_samples.first));
                CHECK(gap <= static_cast<std::int64_t>(cfg.spacing_samples.second));
            }
        }
        const auto tail = static_cast<std::int64_t>(g.series.size()) - 1 - markers.back().end;
        CHECK(tail >= static_cast<std::int64_t>(cfg.spacing_samples.first));
    }
}

TEST_CASE("truth markers follow the warp map")
{
    BenchmarkConfig cfg;
    cfg.warp_strength = 0.1;
    for (std::size_t i = 0; i < 10; ++i) {
        const GeneratedCase g = gen_case(cfg, i);
        const double L = static_cast<double>(g.series.size());
        const auto blue = model_marker_samples(g.blueprint);
        const double reach = cfg.warp_strength * L / (2.0 * std::numbers::pi);
        bool moved = false;
        std::int64_t prev = -1;
        for (std::size_t m = 0; m < blue.size(); ++m) {
            for (auto [b, t] : {std::pair{blue[m].start, g.truth.markers[m].start},
                                std::pair{blue[m].end, g.truth.markers[m].end}}) {
                const double s = static_cast<double>(b);
                const double direct = s + cfg.warp_strength * L * std::sin(2.0 * std::numbers::pi * s / L) /
                                              (2.0 * std::numbers::pi);
                CHECK(t == static_cast<std::int64_t>(std::floor(direct + 0.5)));
                CHECK(static_cast<double>(std::abs(t - b)) <= std::floor(reach + 0.5));
                CHECK(t > prev);
                prev = t;
                moved = moved || t != b;
            }
        }
        CHECK(moved);
    }
}

TEST_CASE("noise is a sinusoid scaled exactly linearly by the rate")
{
    BenchmarkConfig base;
    base.noise_rate = 0.0;
    const GeneratedCase clean = gen_case(base, 3);
    double peak = 0.0;
    for (double v : clean.series.values()) peak = std::max(peak, std::abs(v));

    BenchmarkConfig full = base;
    full.noise_rate = 1.0;
    const GeneratedCase g1 = gen_case(full, 3);
    CHECK(g1.noise_amplitude == doctest::Approx(peak).epsilon(1e-9));
    CHECK(g1.truth == clean.truth);

    for (double rate : {0.1, 0.35, 0.8}) {
        BenchmarkConfig c = base;
        c.noise_rate = rate;
        const GeneratedCase g = gen_case(c, 3);
        CHECK(g.noise_amplitude == rate * peak);
        CHECK(g.noise_phase == g1.noise_phase);
        for (std::size_t k = 0; k < g.series.size(); ++k) {
            const double expected =
                rate * peak * std::sin(2.0 * std::numbers::pi * static_cast<double>(k) / c.noise_period_samples + g.noise_phase);
            CHECK(g.series[k] - clean.series[k] == doctest::Approx(expected).epsilon(1e-9).scale(peak));
        }
    }
}

TEST_CASE("benchmark shape and determinism")
{
    const BenchmarkConfig cfg;
    const auto a = gen_benchmark(cfg, 1);
    const auto b = gen_benchmark(cfg, 3);
    REQUIRE(a.size() == 198);
    CHECK(training_indices(cfg).size() == 19);
    CHECK(test_indices(cfg).size() == 179);
    CHECK(training_indices(cfg).back() + 1 == test_indices(cfg).front());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].series == b[i].series);
        CHECK(a[i].truth == b[i].truth);
    }
    // Any case regenerates alone.
    CHECK(gen_case(cfg, 100).series == a[100].series);

    BenchmarkConfig other = cfg;
    other.seed = cfg.seed + 1;
    CHECK_FALSE(gen_case(other, 0).series == a[0].series);
}

TEST_CASE("invalid configs are rejected")
{
    const auto bad = [](auto edit) {
        BenchmarkConfig c;
        edit(c);
        CHECK_THROWS_AS(validate_config(c), InvalidInput);
    };
    bad([](BenchmarkConfig& c) { c.n_series = 0; });
    bad([](BenchmarkConfig& c) { c.n_train = 500; });
    bad([](BenchmarkConfig& c) { c.pattern_width_samples = {2, 5}; });
    bad([](BenchmarkConfig& c) { c.pattern_width_samples = {9, 5}; });
    bad([](BenchmarkConfig& c) { c.spacing_samples = {3, 1}; });
    bad([](BenchmarkConfig& c) { c.noise_rate = 1.5; });
    bad([](BenchmarkConfig& c) { c.noise_period_samples = 0.0; });
    bad([](BenchmarkConfig& c) { c.warp_strength = 0.5; });
    bad([](BenchmarkConfig& c) { c.pattern_jitter = 1.0; });
    bad([](BenchmarkConfig& c) { c.samples_per_unit = -1.0; });
    CHECK_NOTHROW(validate_config(BenchmarkConfig{}));
}
