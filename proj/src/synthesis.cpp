#include "s2m/synthesis.hpp"

#include "s2m/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace s2m {

namespace {

void check_ranges(std::span<const MarkerSamples> markers, std::size_t length)
{
    if (length == 0) {
        throw InvalidInput("synthesis length must be positive");
    }
    const auto n = static_cast<std::int64_t>(length);
    for (std::size_t i = 0; i < markers.size(); ++i) {
        const MarkerSamples& m = markers[i];
        if (m.start < 0 || m.end < m.start) {
            throw InvalidInput("marker " + std::to_string(i) + " has an invalid sample range");
        }
        if (m.end >= n) {
            throw InvalidInput("marker " + std::to_string(i) + " ends at sample " +
                               std::to_string(m.end) + ", beyond length " + std::to_string(length));
        }
    }
}

} // namespace

void validate_template(const Template& tmpl)
{
    if (tmpl.values.empty()) {
        throw InvalidInput("template must contain at least one sample");
    }
    for (double v : tmpl.values) {
        if (!std::isfinite(v)) {
            throw InvalidInput("template contains a non-finite value");
        }
    }
}

std::vector<double> resample_linear(std::span<const double> values, std::size_t width)
{
    std::vector<double> out(width);
    if (values.empty() || width == 0) {
        return out;
    }
    const double last = static_cast<double>(values.size() - 1);
    const double ratio = static_cast<double>(values.size() + 1) / static_cast<double>(width + 1);
    for (std::size_t k = 0; k < width; ++k) {
        const double q = std::clamp(static_cast<double>(k + 1) * ratio - 1.0, 0.0, last);
        const auto lo = static_cast<std::size_t>(std::floor(q));
        if (lo + 1 >= values.size()) {
            out[k] = values.back();
            continue;
        }
        const double frac = q - static_cast<double>(lo);
        out[k] = (1.0 - frac) * values[lo] + frac * values[lo + 1];
    }
    return out;
}

TimeSeries synthesize_binary(std::span<const MarkerSamples> markers, std::size_t length)
{
    check_ranges(markers, length);
    std::vector<double> out(length, 0.0);
    for (const MarkerSamples& m : markers) {
        for (auto k = m.start; k <= m.end; ++k) {
            out[static_cast<std::size_t>(k)] = 1.0;
        }
    }
    return TimeSeries(std::move(out));
}

TimeSeries synthesize_binary(const Model& model, std::size_t length)
{
    return synthesize_binary(model_marker_samples(model), length);
}

TimeSeries synthesize_replication(std::span<const MarkerSamples> markers, const Template& tmpl,
                                  std::size_t length)
{
    validate_template(tmpl);
    check_ranges(markers, length);
    std::vector<double> out(length, 0.0);
    for (const MarkerSamples& m : markers) {
        const auto width = static_cast<std::size_t>(m.end - m.start + 1);
        const auto pattern = width == tmpl.values.size() ? tmpl.values : resample_linear(tmpl.values, width);
        for (std::size_t k = 0; k < width; ++k) {
            out[static_cast<std::size_t>(m.start) + k] = pattern[k];
        }
    }
    return TimeSeries(std::move(out));
}

TimeSeries synthesize_replication(const Model& model, const Template& tmpl, std::size_t length)
{
    return synthesize_replication(model_marker_samples(model), tmpl, length);
}

Template extract_template(const TimeSeries& series, const AlignedModel& aligned,
                          std::size_t marker_index)
{
    if (marker_index >= aligned.markers.size()) {
        throw InvalidInput("marker index " + std::to_string(marker_index) + " out of range");
    }
    const MarkerSamples& m = aligned.markers[marker_index];
    if (m.start < 0 || m.end < m.start || m.end >= static_cast<std::int64_t>(series.size())) {
        throw InvalidInput("marker " + std::to_string(marker_index) + " lies outside the series");
    }
    const auto values = series.values();
    return Template{std::vector<double>(values.begin() + m.start, values.begin() + m.end + 1), m.class_id};
}

} // namespace s2m
