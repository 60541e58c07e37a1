#pragma once

#include "s2m/cca.hpp"
#include "s2m/core.hpp"
#include "s2m/datagen.hpp"
#include "s2m/pipeline.hpp"
#include "s2m/synthesis.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <string_view>

namespace s2m::io {

using nlohmann::json;

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

/// Shortest round-trip decimal representation.
std::string format_double(double value);

// Series: CSV with one value per line and no header, or a JSON array.
TimeSeries parse_series(std::string_view text);
std::string series_to_csv(const TimeSeries& series);
TimeSeries read_series(const std::filesystem::path& path);

// Templates: the series formats, or JSON {"values": [...], "class": n}.
Template parse_template(std::string_view text);
Template read_template(const std::filesystem::path& path);
json to_json(const Template& tmpl);

// {"samples_per_unit": x, "markers": [{"start": s, "end": e, "class": c}, ...]}
json to_json(const Model& model);
Model model_from_json(const json& j);

// {"markers": [{"start": i, "end": j, "class": c}, ...]}, zero-based samples.
json to_json(const AlignedModel& aligned);
AlignedModel aligned_model_from_json(const json& j);

// {"cost": x, "path": [[i, j], ...]}
json to_json(const Alignment& alignment);
Alignment alignment_from_json(const json& j);

// {"past", "future", "ridge", "rho", "w_x", "w_y"}
json to_json(const LatentMap& map);
LatentMap latent_map_from_json(const json& j);

// Latent map keys plus "synthesis" and, for replication, "template".
json to_json(const TrainedModel& model);
TrainedModel trained_model_from_json(const json& j);

json to_json(const BenchmarkConfig& config);
/// Missing keys keep their defaults; unknown keys are rejected.
BenchmarkConfig benchmark_config_from_json(const json& j, BenchmarkConfig base = {});

/// Rows (noise_rate, method, series_id, error_samples): one per test series
/// and method, followed by a "mean" row per method, for every rate.
std::string sweep_to_csv(const SweepResult& result);
json sweep_summary(const SweepResult& result);

json parse_json(std::string_view text, std::string_view what);
json read_json(const std::filesystem::path& path);
/// Two-space indented, sorted keys, trailing newline.
std::string dump(const json& j);

} // namespace s2m::io
