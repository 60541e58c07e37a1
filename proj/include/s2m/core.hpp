#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace s2m {

/// One expected event of a blueprint, in physical units (mm, seconds, ...).
struct Marker {
    double start = 0.0;
    double end = 0.0;
    int class_id = 0;
};

/// Blueprint of expected patterns plus the unit-to-sample scale.
struct Model {
    std::vector<Marker> markers;
    double samples_per_unit = 1.0;
};

/// A marker expressed in sample indices (both ends inclusive).
struct MarkerSamples {
    std::int64_t start = 0;
    std::int64_t end = 0;
    int class_id = 0;

    friend bool operator==(const MarkerSamples&, const MarkerSamples&) = default;
};

/// Markers located in a concrete series.
struct AlignedModel {
    std::vector<MarkerSamples> markers;

    friend bool operator==(const AlignedModel&, const AlignedModel&) = default;
};

/// Uniformly sampled, finite, nonempty real-valued sequence.
class TimeSeries {
public:
    TimeSeries(std::vector<double> values);
    TimeSeries(std::initializer_list<double> values);

    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t k) const { return values_[k]; }
    std::span<const double> values() const noexcept { return values_; }
    const std::vector<double>& vector() const noexcept { return values_; }

    friend bool operator==(const TimeSeries&, const TimeSeries&) = default;

private:
    std::vector<double> values_;
};

struct PathStep {
    std::size_t a = 0;
    std::size_t b = 0;

    friend bool operator==(const PathStep&, const PathStep&) = default;
};

/// Warping path between series A and series B plus its accumulated cost.
struct Alignment {
    std::vector<PathStep> path;
    double total_cost = 0.0;

    std::size_t length_a() const { return path.empty() ? 0 : path.back().a + 1; }
    std::size_t length_b() const { return path.empty() ? 0 : path.back().b + 1; }
};

/// A series together with its blueprint and the ground-truth marker samples.
struct LabeledSeries {
    TimeSeries series;
    AlignedModel truth;
    Model blueprint;
};

struct ModelIssue {
    enum class Kind { non_finite, reversed, overlap, nonpositive_scale };
    Kind kind;
    std::size_t index = 0;
    std::string message;
};

/// Every violated Model invariant, in marker order. Empty means valid.
std::vector<ModelIssue> validate_model(const Model& model);

/// Throws InvalidInput listing all issues when the model is invalid.
void require_valid(const Model& model);

/// Rounds half-up: floor(x + 0.5).
std::int64_t round_half_up(double x);

/// Converts each marker to samples by scaling and rounding half-up.
std::vector<MarkerSamples> model_marker_samples(const Model& model);

/// Lower median of the A-indices matched to B-index `j`.
std::size_t map_position(const Alignment& alignment, std::size_t j);

/// Maps markers given in B-samples onto series A through the warping path.
/// An end that lands before its start is clamped to the start.
AlignedModel align_model(const Alignment& alignment, std::span<const MarkerSamples> markers_in_b);

/// Checks boundary and unit-step constraints of a warping path.
bool is_valid_path(const Alignment& alignment, std::size_t length_a, std::size_t length_b);

} // namespace s2m
