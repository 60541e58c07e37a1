#pragma once

#include "s2m/cca.hpp"
#include "s2m/core.hpp"
#include "s2m/datagen.hpp"
#include "s2m/dtw.hpp"
#include "s2m/embedding.hpp"
#include "s2m/synthesis.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace s2m {

enum class SynthesisKind { binary, replication };

std::string_view to_string(SynthesisKind kind);
SynthesisKind parse_synthesis_kind(std::string_view text);

/// Template is present iff kind is replication.
struct SynthesisConfig {
    SynthesisKind kind = SynthesisKind::binary;
    std::optional<Template> tmpl;
};

void validate_synthesis(const SynthesisConfig& config);

TimeSeries synthesize(std::span<const MarkerSamples> markers, const SynthesisConfig& config,
                      std::size_t length);

/// Slack applied beyond the last blueprint marker when synthesizing the
/// reference for an unaligned blueprint.
inline constexpr double kSynthesisSlack = 1.05;

/// round(max end * samples_per_unit * slack), never shorter than the last
/// marker sample plus one.
std::size_t blueprint_synthesis_length(const Model& blueprint);

struct TrainConfig {
    EmbeddingConfig embedding{20, 20};
    std::optional<double> ridge;  // absent: relative default
    SynthesisConfig synthesis;
};

struct TrainedModel {
    LatentMap latent;
    TrainConfig config;
    double stationarity_residual = 0.0;
};

/// Synthesizes each training series' reference at its ground-truth markers,
/// embeds both, pools covariances, and fits CCA.
TrainedModel train(std::span<const LabeledSeries> training_set, const TrainConfig& config);

/// Covariances that `train` fits, exposed for diagnostics.
CovarianceSet training_covariances(std::span<const LabeledSeries> training_set,
                                   const TrainConfig& config);

struct Localization {
    AlignedModel markers;
    Alignment alignment;  // A: measured series, B: synthesized reference
};

/// CCA+DTW: embed and project both series, DTW in the latent space, map the
/// blueprint markers through the path.
Localization localize_cca(const TimeSeries& series, const Model& blueprint,
                          const TrainedModel& trained, const DtwConfig& dtw = {});

/// Plain DTW between the raw series and the raw synthesized reference.
Localization localize_baseline(const TimeSeries& series, const Model& blueprint,
                               const SynthesisConfig& synthesis, const DtwConfig& dtw = {});

AlignedModel align_test(const TimeSeries& series, const Model& blueprint,
                        const TrainedModel& trained);
AlignedModel align_baseline(const TimeSeries& series, const Model& blueprint,
                            const SynthesisConfig& synthesis);

/// Mean absolute start and end offset over all markers, in samples.
double localization_error(const AlignedModel& estimated, const AlignedModel& truth);

enum class Method { dtw_baseline, cca_dtw };

std::string_view to_string(Method method);

struct EvalReport {
    Method method = Method::dtw_baseline;
    std::vector<double> per_series_errors;
    double mean_error = 0.0;
};

EvalReport make_report(Method method, std::vector<double> per_series_errors);

/// Symmetric past = future in {0, 5, 10, 20, 40}.
std::vector<EmbeddingConfig> default_embedding_grid();

inline constexpr std::size_t kDefaultFolds = 5;

/// Round-robin k-fold selection of the embedding. Lowest pooled held-out
/// localization error wins; ties go to the smaller dimension, then the
/// smaller past window. `base.embedding` is ignored.
EmbeddingConfig cross_validate_embedding(std::span<const LabeledSeries> training_set,
                                         std::span<const EmbeddingConfig> candidates,
                                         std::size_t folds, const TrainConfig& base,
                                         unsigned threads = 1);

/// Baseline and CCA+DTW errors of one trained model over a test set.
struct MethodComparison {
    EvalReport baseline;
    EvalReport cca;
};

MethodComparison evaluate_methods(std::span<const LabeledSeries> test_set,
                                  const TrainedModel& trained, unsigned threads = 1);

/// Template cut from the first ground-truth marker of a labeled series.
Template template_from(const LabeledSeries& item);

struct SweepOptions {
    std::vector<EmbeddingConfig> candidates = default_embedding_grid();
    std::size_t folds = kDefaultFolds;
    std::optional<double> ridge;
    SynthesisKind synthesis = SynthesisKind::replication;
    unsigned threads = 1;
};

struct SweepEntry {
    double noise_rate = 0.0;
    EmbeddingConfig chosen;
    double rho = 0.0;
    double stationarity_residual = 0.0;
    EvalReport baseline;
    EvalReport cca;
};

struct SweepRow {
    double noise_rate = 0.0;
    Method method = Method::dtw_baseline;
    double mean_error = 0.0;
};

struct SweepResult {
    std::vector<std::size_t> test_ids;
    std::vector<SweepEntry> entries;

    std::vector<SweepRow> rows() const;
};

/// For each rate: regenerate both pools at that noise rate, pick the
/// embedding by cross-validation on the training pool, train, and score both
/// methods on the test pool. Replication synthesis uses the template of the
/// first training series.
SweepResult noise_sweep(const BenchmarkConfig& base, std::span<const std::size_t> train_ids,
                        std::span<const std::size_t> test_ids, std::span<const double> noise_rates,
                        const SweepOptions& options = {});

} // namespace s2m
