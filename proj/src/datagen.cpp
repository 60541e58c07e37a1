#include "s2m/datagen.hpp"

#include "parallel.hpp"
#include "s2m/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>

namespace s2m {

namespace {

void require(bool ok, const std::string& message)
{
    if (!ok) {
        throw InvalidInput("benchmark config: " + message);
    }
}

double interpolate(const std::vector<double>& values, double t)
{
    const double last = static_cast<double>(values.size() - 1);
    t = std::clamp(t, 0.0, last);
    const auto lo = static_cast<std::size_t>(std::floor(t));
    if (lo + 1 >= values.size()) {
        return values.back();
    }
    const double frac = t - static_cast<double>(lo);
    return (1.0 - frac) * values[lo] + frac * values[lo + 1];
}

} // namespace

void validate_config(const BenchmarkConfig& c)
{
    require(c.n_series >= 1, "n_series must be positive");
    require(c.n_train <= c.n_series, "n_train exceeds n_series");
    require(c.n_markers_per_series >= 1, "n_markers_per_series must be positive");
    require(c.pattern_width_samples.first >= 3, "pattern widths must be at least 3 samples");
    require(c.pattern_width_samples.first <= c.pattern_width_samples.second,
            "pattern_width_samples range is empty");
    require(c.spacing_samples.first >= 1, "spacings must be at least 1 sample");
    require(c.spacing_samples.first <= c.spacing_samples.second, "spacing_samples range is empty");
    require(c.noise_rate >= 0.0 && c.noise_rate <= 1.0, "noise_rate must lie in [0, 1]");
    require(c.noise_period_samples > 0.0 && std::isfinite(c.noise_period_samples),
            "noise_period_samples must be positive");
    require(c.warp_strength >= 0.0 && c.warp_strength < 0.5, "warp_strength must lie in [0, 0.5)");
    require(c.pattern_jitter >= 0.0 && c.pattern_jitter < 1.0, "pattern_jitter must lie in [0, 1)");
    require(c.samples_per_unit > 0.0 && std::isfinite(c.samples_per_unit),
            "samples_per_unit must be positive");
}

Template gen_template(std::size_t width, double jitter, CounterRng& rng)
{
    if (width < 3) {
        throw InvalidInput("template width must be at least 3 samples");
    }
    const double amplitude = 1.0 + jitter * rng.uniform(-1.0, 1.0);
    Template out;
    out.values.resize(width);
    const double denom = static_cast<double>(width + 1);
    for (std::size_t k = 0; k < width; ++k) {
        out.values[k] =
            amplitude * 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(k + 1) / denom));
    }
    return out;
}

double warp_map(double t, double strength, double length)
{
    const double two_pi = 2.0 * std::numbers::pi;
    return t + strength * length * std::sin(two_pi * t / length) / two_pi;
}

double inverse_warp_map(double t_warped, double strength, double length)
{
    const double reach = strength * length / (2.0 * std::numbers::pi);
    double lo = t_warped - reach - 1.0;
    double hi = t_warped + reach + 1.0;
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        if (warp_map(mid, strength, length) < t_warped) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

GeneratedCase gen_case(const BenchmarkConfig& config, std::size_t case_index)
{
    validate_config(config);
    CounterRng layout(config.seed, case_index, kLayoutStream);
    CounterRng jitter(config.seed, case_index, kJitterStream);
    CounterRng noise(config.seed, case_index, kNoiseStream);

    const auto draw = [&](const std::pair<std::size_t, std::size_t>& range) {
        return static_cast<std::size_t>(layout.uniform_int(range.first, range.second));
    };

    std::vector<MarkerSamples> placed;
    std::vector<Template> patterns;
    std::size_t cursor = draw(config.spacing_samples);
    for (std::size_t m = 0; m < config.n_markers_per_series; ++m) {
        const std::size_t width = draw(config.pattern_width_samples);
        placed.push_back({static_cast<std::int64_t>(cursor), static_cast<std::int64_t>(cursor + width - 1), 0});
        patterns.push_back(gen_template(width, config.pattern_jitter, jitter));
        cursor += width + draw(config.spacing_samples);
    }
    const std::size_t length = cursor;

    std::vector<double> clean(length, 0.0);
    for (std::size_t m = 0; m < placed.size(); ++m) {
        std::copy(patterns[m].values.begin(), patterns[m].values.end(),
                  clean.begin() + placed[m].start);
    }

    Model blueprint;
    blueprint.samples_per_unit = config.samples_per_unit;
    for (const MarkerSamples& m : placed) {
        blueprint.markers.push_back({static_cast<double>(m.start) / config.samples_per_unit,
                                     static_cast<double>(m.end) / config.samples_per_unit, m.class_id});
    }

    const double len = static_cast<double>(length);
    std::vector<double> warped = clean;
    AlignedModel truth;
    if (config.warp_strength > 0.0) {
        for (std::size_t k = 0; k < length; ++k) {
            warped[k] = interpolate(clean, inverse_warp_map(static_cast<double>(k), config.warp_strength, len));
        }
    }
    const auto last = static_cast<std::int64_t>(length - 1);
    for (const MarkerSamples& m : placed) {
        const auto map = [&](std::int64_t s) {
            const double t = warp_map(static_cast<double>(s), config.warp_strength, len);
            return std::clamp<std::int64_t>(round_half_up(t), 0, last);
        };
        truth.markers.push_back({map(m.start), map(m.end), m.class_id});
    }

    double peak = 0.0;
    for (double v : warped) {
        peak = std::max(peak, std::abs(v));
    }
    const double phase = noise.uniform(0.0, 2.0 * std::numbers::pi);
    const double amplitude = config.noise_rate * peak;
    std::vector<double> values = warped;
    if (amplitude > 0.0) {
        const double omega = 2.0 * std::numbers::pi / config.noise_period_samples;
        for (std::size_t k = 0; k < length; ++k) {
            values[k] += amplitude * std::sin(omega * static_cast<double>(k) + phase);
        }
    }

    GeneratedCase out{{TimeSeries(std::move(values)), std::move(truth), std::move(blueprint)}, amplitude, phase};
    return out;
}

std::vector<GeneratedCase> gen_benchmark(const BenchmarkConfig& config, unsigned threads)
{
    validate_config(config);
    std::vector<std::optional<GeneratedCase>> slots(config.n_series);
    detail::parallel_for(config.n_series, threads, [&](std::size_t i) { slots[i] = gen_case(config, i); });
    std::vector<GeneratedCase> out;
    out.reserve(slots.size());
    for (auto& slot : slots) {
        out.push_back(std::move(*slot));
    }
    return out;
}

std::vector<std::size_t> training_indices(const BenchmarkConfig& config)
{
    std::vector<std::size_t> out(config.n_train);
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = i;
    }
    return out;
}

std::vector<std::size_t> test_indices(const BenchmarkConfig& config)
{
    std::vector<std::size_t> out;
    for (std::size_t i = config.n_train; i < config.n_series; ++i) {
        out.push_back(i);
    }
    return out;
}

} // namespace s2m
