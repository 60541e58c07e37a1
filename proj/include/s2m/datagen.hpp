#pragma once

#include "s2m/core.hpp"
#include "s2m/rng.hpp"
#include "s2m/synthesis.hpp"

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace s2m {

/// Seeded synthetic stand-in for a labeled measurement campaign.
struct BenchmarkConfig {
    std::size_t n_series = 198;
    std::size_t n_train = 19;
    std::size_t n_markers_per_series = 10;
    std::pair<std::size_t, std::size_t> pattern_width_samples{24, 40};
    std::pair<std::size_t, std::size_t> spacing_samples{40, 120};
    double noise_rate = 0.0;
    double noise_period_samples = 12.0;
    double warp_strength = 0.05;
    double pattern_jitter = 0.2;
    double samples_per_unit = 1.0;
    std::uint64_t seed = 2019;
};

/// Throws InvalidInput for infeasible configurations.
void validate_config(const BenchmarkConfig& config);

struct GeneratedCase : LabeledSeries {
    double noise_amplitude = 0.0;  // rate times peak of the noise-free series
    double noise_phase = 0.0;
};

// Stream ids of the per-case generators.
inline constexpr std::uint64_t kLayoutStream = 1;
inline constexpr std::uint64_t kJitterStream = 2;
inline constexpr std::uint64_t kNoiseStream = 3;

/// Raised-cosine bump 0.5 * (1 - cos(2 pi (k + 1) / (width + 1))), strictly
/// positive on all `width` samples, scaled by (1 + jitter * u) with u drawn
/// uniformly from [-1, 1]. Requires width >= 3.
Template gen_template(std::size_t width, double jitter, CounterRng& rng);

/// t'(t) = t + strength * L * sin(2 pi t / L) / (2 pi).
double warp_map(double t, double strength, double length);

/// Inverse of warp_map on [0, length], by bisection.
double inverse_warp_map(double t_warped, double strength, double length);

/// Builds case `case_index` deterministically from (seed, case_index):
/// blueprint layout, jittered templates, monotone time warp, sine noise.
GeneratedCase gen_case(const BenchmarkConfig& config, std::size_t case_index);

std::vector<GeneratedCase> gen_benchmark(const BenchmarkConfig& config, unsigned threads = 1);

/// Indices 0 .. n_train-1.
std::vector<std::size_t> training_indices(const BenchmarkConfig& config);
/// Indices n_train .. n_series-1.
std::vector<std::size_t> test_indices(const BenchmarkConfig& config);

} // namespace s2m
