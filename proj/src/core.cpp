#include "s2m/core.hpp"

#include "s2m/error.hpp"

#include <algorithm>
#include <cmath>

namespace s2m {

namespace {

void check_finite(const std::vector<double>& values)
{
    if (values.empty()) {
        throw InvalidInput("time series must contain at least one sample");
    }
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (!std::isfinite(values[k])) {
            throw InvalidInput("time series value at index " + std::to_string(k) + " is not finite");
        }
    }
}

} // namespace

TimeSeries::TimeSeries(std::vector<double> values) : values_(std::move(values))
{
    check_finite(values_);
}

TimeSeries::TimeSeries(std::initializer_list<double> values) : values_(values)
{
    check_finite(values_);
}

std::vector<ModelIssue> validate_model(const Model& model)
{
    std::vector<ModelIssue> issues;
    if (!(model.samples_per_unit > 0.0) || !std::isfinite(model.samples_per_unit)) {
        issues.push_back({ModelIssue::Kind::nonpositive_scale, 0, "nonpositive scale"});
    }
    for (std::size_t i = 0; i < model.markers.size(); ++i) {
        const Marker& m = model.markers[i];
        if (!std::isfinite(m.start) || !std::isfinite(m.end)) {
            issues.push_back({ModelIssue::Kind::non_finite, i,
                              "non-finite position at index " + std::to_string(i)});
            continue;
        }
        if (!(m.start < m.end)) {
            issues.push_back({ModelIssue::Kind::reversed, i,
                              "reversed start/end at index " + std::to_string(i)});
        }
        if (i > 0) {
            const Marker& prev = model.markers[i - 1];
            if (std::isfinite(prev.end) && m.start < prev.end) {
                issues.push_back({ModelIssue::Kind::overlap, i, "overlap at index " + std::to_string(i)});
            }
        }
    }
    return issues;
}

void require_valid(const Model& model)
{
    const auto issues = validate_model(model);
    if (issues.empty()) {
        return;
    }
    std::string message = "invalid model:";
    for (const auto& issue : issues) {
        message += " " + issue.message + ";";
    }
    message.pop_back();
    throw InvalidInput(message);
}

std::int64_t round_half_up(double x)
{
    return static_cast<std::int64_t>(std::floor(x + 0.5));
}

std::vector<MarkerSamples> model_marker_samples(const Model& model)
{
    require_valid(model);
    std::vector<MarkerSamples> out;
    out.reserve(model.markers.size());
    for (const Marker& m : model.markers) {
        out.push_back({round_half_up(m.start * model.samples_per_unit),
                       round_half_up(m.end * model.samples_per_unit), m.class_id});
    }
    return out;
}

std::size_t map_position(const Alignment& alignment, std::size_t j)
{
    if (j >= alignment.length_b()) {
        throw InvalidInput("position " + std::to_string(j) + " outside series of length " +
                           std::to_string(alignment.length_b()));
    }
    // b is nondecreasing along the path, so matches of j are contiguous and
    // their a-indices ascend.
    const auto [first, last] = std::equal_range(
        alignment.path.begin(), alignment.path.end(), PathStep{0, j},
        [](const PathStep& lhs, const PathStep& rhs) { return lhs.b < rhs.b; });
    const auto count = static_cast<std::size_t>(last - first);
    return (first + static_cast<std::ptrdiff_t>((count - 1) / 2))->a;
}

AlignedModel align_model(const Alignment& alignment, std::span<const MarkerSamples> markers_in_b)
{
    const auto length_b = static_cast<std::int64_t>(alignment.length_b());
    AlignedModel out;
    out.markers.reserve(markers_in_b.size());
    for (std::size_t i = 0; i < markers_in_b.size(); ++i) {
        const MarkerSamples& m = markers_in_b[i];
        if (m.start < 0 || m.end < 0 || m.start >= length_b || m.end >= length_b) {
            throw InvalidInput("marker " + std::to_string(i) + " lies outside the reference series");
        }
        const auto start = static_cast<std::int64_t>(map_position(alignment, static_cast<std::size_t>(m.start)));
        const auto end = static_cast<std::int64_t>(map_position(alignment, static_cast<std::size_t>(m.end)));
        out.markers.push_back({start, std::max(start, end), m.class_id});
    }
    return out;
}

bool is_valid_path(const Alignment& alignment, std::size_t length_a, std::size_t length_b)
{
    const auto& path = alignment.path;
    if (path.empty() || length_a == 0 || length_b == 0) {
        return false;
    }
    if (path.front() != PathStep{0, 0} || path.back() != PathStep{length_a - 1, length_b - 1}) {
        return false;
    }
    for (std::size_t k = 1; k < path.size(); ++k) {
        const std::size_t da = path[k].a - path[k - 1].a;
        const std::size_t db = path[k].b - path[k - 1].b;
        if (path[k].a < path[k - 1].a || path[k].b < path[k - 1].b || da > 1 || db > 1 ||
            da + db == 0) {
            return false;
        }
    }
    return true;
}

} // namespace s2m
