#pragma once

#include "s2m/core.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace s2m {

/// Pattern waveform pasted by replication synthesis.
struct Template {
    std::vector<double> values;
    int class_id = 0;
};

/// Throws InvalidInput unless the template is nonempty and finite.
void validate_template(const Template& tmpl);

/// Linear interpolation onto `width` points. Sample k of an n-point pattern
/// sits at (k + 1) / (n + 1) of the support, so both ends stay open and a
/// sampled bump keeps its shape at any width. Queries past the outer samples
/// clamp to them. A width of one samples the midpoint.
std::vector<double> resample_linear(std::span<const double> values, std::size_t width);

/// 1 inside every inclusive marker range, 0 elsewhere.
TimeSeries synthesize_binary(std::span<const MarkerSamples> markers, std::size_t length);
TimeSeries synthesize_binary(const Model& model, std::size_t length);

/// Zero background with the template resampled onto every marker range.
TimeSeries synthesize_replication(std::span<const MarkerSamples> markers, const Template& tmpl,
                                  std::size_t length);
TimeSeries synthesize_replication(const Model& model, const Template& tmpl, std::size_t length);

/// Copies series[start..=end] of the chosen marker.
Template extract_template(const TimeSeries& series, const AlignedModel& aligned,
                          std::size_t marker_index);

} // namespace s2m
