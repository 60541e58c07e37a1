#include "s2m/pipeline.hpp"

#include "parallel.hpp"
#include "s2m/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace s2m {

std::string_view to_string(SynthesisKind kind)
{
    return kind == SynthesisKind::binary ? "binary" : "replication";
}

SynthesisKind parse_synthesis_kind(std::string_view text)
{
    if (text == "binary") {
        return SynthesisKind::binary;
    }
    if (text == "replication") {
        return SynthesisKind::replication;
    }
    throw InvalidInput("unknown synthesis '" + std::string(text) + "' (expected binary or replication)");
}

std::string_view to_string(Method method)
{
    return method == Method::dtw_baseline ? "dtw" : "cca_dtw";
}

void validate_synthesis(const SynthesisConfig& config)
{
    if (config.kind == SynthesisKind::replication) {
        if (!config.tmpl) {
            throw InvalidInput("replication synthesis requires a template");
        }
        validate_template(*config.tmpl);
    } else if (config.tmpl) {
        throw InvalidInput("binary synthesis does not take a template");
    }
}

TimeSeries synthesize(std::span<const MarkerSamples> markers, const SynthesisConfig& config,
                      std::size_t length)
{
    validate_synthesis(config);
    if (config.kind == SynthesisKind::binary) {
        return synthesize_binary(markers, length);
    }
    return synthesize_replication(markers, *config.tmpl, length);
}

std::size_t blueprint_synthesis_length(const Model& blueprint)
{
    require_valid(blueprint);
    std::int64_t length = 1;
    for (const Marker& m : blueprint.markers) {
        const std::int64_t slack = round_half_up(m.end * blueprint.samples_per_unit * kSynthesisSlack);
        length = std::max({length, slack, round_half_up(m.end * blueprint.samples_per_unit) + 1});
    }
    return static_cast<std::size_t>(length);
}

CovarianceSet training_covariances(std::span<const LabeledSeries> training_set, const TrainConfig& config)
{
    if (training_set.empty()) {
        throw InvalidInput("training set is empty");
    }
    validate_synthesis(config.synthesis);
    std::vector<EmbeddedPair> pairs;
    pairs.reserve(training_set.size());
    for (const LabeledSeries& item : training_set) {
        // The reference is synthesized at the ground-truth positions, so it is
        // aligned to the measured series sample by sample.
        const TimeSeries reference = synthesize(item.truth.markers, config.synthesis, item.series.size());
        pairs.push_back({embed(item.series, config.embedding), embed(reference, config.embedding)});
    }
    return accumulate_covariances(pairs, config.ridge);
}

TrainedModel train(std::span<const LabeledSeries> training_set, const TrainConfig& config)
{
    const CovarianceSet covs = training_covariances(training_set, config);
    TrainedModel out{fit_cca(covs), config, 0.0};
    out.stationarity_residual = stationarity_residual(covs, out.latent);
    return out;
}

namespace {

TimeSeries blueprint_reference(const Model& blueprint, const SynthesisConfig& synthesis,
                               std::vector<MarkerSamples>& markers)
{
    markers = model_marker_samples(blueprint);
    return synthesize(markers, synthesis, blueprint_synthesis_length(blueprint));
}

} // namespace

Localization localize_cca(const TimeSeries& series, const Model& blueprint, const TrainedModel& trained,
                          const DtwConfig& dtw)
{
    const LatentMap& latent = trained.latent;
    const std::size_t dim = latent.embedding.dimension();
    if (static_cast<std::size_t>(latent.w_x.size()) != dim || static_cast<std::size_t>(latent.w_y.size()) != dim) {
        throw InvalidInput("trained projections do not match the embedding dimension " + std::to_string(dim));
    }
    std::vector<MarkerSamples> markers;
    const TimeSeries reference = blueprint_reference(blueprint, trained.config.synthesis, markers);

    const TimeSeries latent_x = project(embed(series, latent.embedding), latent.w_x);
    const TimeSeries latent_y = project(embed(reference, latent.embedding), latent.w_y);
    Alignment alignment = dtw_align(latent_x, latent_y, dtw);
    AlignedModel aligned = align_model(alignment, markers);
    return {std::move(aligned), std::move(alignment)};
}

Localization localize_baseline(const TimeSeries& series, const Model& blueprint,
                               const SynthesisConfig& synthesis, const DtwConfig& dtw)
{
    std::vector<MarkerSamples> markers;
    const TimeSeries reference = blueprint_reference(blueprint, synthesis, markers);
    Alignment alignment = dtw_align(series, reference, dtw);
    AlignedModel aligned = align_model(alignment, markers);
    return {std::move(aligned), std::move(alignment)};
}

AlignedModel align_test(const TimeSeries& series, const Model& blueprint, const TrainedModel& trained)
{
    return localize_cca(series, blueprint, trained).markers;
}

AlignedModel align_baseline(const TimeSeries& series, const Model& blueprint, const SynthesisConfig& synthesis)
{
    return localize_baseline(series, blueprint, synthesis).markers;
}

double localization_error(const AlignedModel& estimated, const AlignedModel& truth)
{
    if (estimated.markers.size() != truth.markers.size()) {
        throw InvalidInput("marker count mismatch: " + std::to_string(estimated.markers.size()) + " vs " +
                           std::to_string(truth.markers.size()));
    }
    if (truth.markers.empty()) {
        return 0.0;
    }
    double total = 0.0;
    for (std::size_t i = 0; i < truth.markers.size(); ++i) {
        total += static_cast<double>(std::abs(estimated.markers[i].start - truth.markers[i].start));
        total += static_cast<double>(std::abs(estimated.markers[i].end - truth.markers[i].end));
    }
    return total / static_cast<double>(2 * truth.markers.size());
}

EvalReport make_report(Method method, std::vector<double> per_series_errors)
{
    EvalReport out{method, std::move(per_series_errors), 0.0};
    if (!out.per_series_errors.empty()) {
        out.mean_error = std::accumulate(out.per_series_errors.begin(), out.per_series_errors.end(), 0.0) /
                         static_cast<double>(out.per_series_errors.size());
    }
    return out;
}

std::vector<EmbeddingConfig> default_embedding_grid()
{
    return {{0, 0}, {5, 5}, {10, 10}, {20, 20}, {40, 40}};
}

EmbeddingConfig cross_validate_embedding(std::span<const LabeledSeries> training_set,
                                         std::span<const EmbeddingConfig> candidates, std::size_t folds,
                                         const TrainConfig& base, unsigned threads)
{
    if (candidates.empty()) {
        throw InvalidInput("cross-validation needs at least one candidate embedding");
    }
    if (folds < 2) {
        throw InvalidInput("cross-validation needs at least 2 folds");
    }
    if (folds > training_set.size()) {
        throw InvalidInput("cannot split " + std::to_string(training_set.size()) + " series into " +
                           std::to_string(folds) + " folds");
    }
    if (candidates.size() == 1) {
        return candidates.front();
    }

    const std::size_t n = training_set.size();
    // errors[c * n + i]: held-out error of series i under candidate c.
    std::vector<double> errors(candidates.size() * n, 0.0);
    std::vector<char> failed(candidates.size() * folds, 0);

    detail::parallel_for(candidates.size() * folds, threads, [&](std::size_t task) {
        const std::size_t c = task / folds;
        const std::size_t fold = task % folds;
        std::vector<LabeledSeries> fit_set;
        for (std::size_t i = 0; i < n; ++i) {
            if (i % folds != fold) {
                fit_set.push_back(training_set[i]);
            }
        }
        TrainConfig config = base;
        config.embedding = candidates[c];
        try {
            const TrainedModel trained = train(fit_set, config);
            for (std::size_t i = fold; i < n; i += folds) {
                const auto estimate = align_test(training_set[i].series, training_set[i].blueprint, trained);
                errors[c * n + i] = localization_error(estimate, training_set[i].truth);
            }
        } catch (const NumericalError&) {
            failed[task] = 1;
        }
    });

    std::optional<std::size_t> best;
    double best_score = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        if (std::any_of(failed.begin() + static_cast<std::ptrdiff_t>(c * folds),
                        failed.begin() + static_cast<std::ptrdiff_t>((c + 1) * folds),
                        [](char f) { return f != 0; })) {
            continue;
        }
        const auto first = errors.begin() + static_cast<std::ptrdiff_t>(c * n);
        const double score = std::accumulate(first, first + static_cast<std::ptrdiff_t>(n), 0.0) /
                             static_cast<double>(n);
        const auto better = [&] {
            if (!best) {
                return true;
            }
            if (score != best_score) {
                return score < best_score;
            }
            const EmbeddingConfig& cur = candidates[c];
            const EmbeddingConfig& inc = candidates[*best];
            if (cur.dimension() != inc.dimension()) {
                return cur.dimension() < inc.dimension();
            }
            return cur.past < inc.past;
        };
        if (better()) {
            best = c;
            best_score = score;
        }
    }
    if (!best) {
        throw NumericalError("every candidate embedding failed to train");
    }
    return candidates[*best];
}

MethodComparison evaluate_methods(std::span<const LabeledSeries> test_set, const TrainedModel& trained,
                                  unsigned threads)
{
    std::vector<double> baseline(test_set.size());
    std::vector<double> cca(test_set.size());
    detail::parallel_for(test_set.size(), threads, [&](std::size_t i) {
        const LabeledSeries& item = test_set[i];
        baseline[i] = localization_error(align_baseline(item.series, item.blueprint, trained.config.synthesis),
                                         item.truth);
        cca[i] = localization_error(align_test(item.series, item.blueprint, trained), item.truth);
    });
    return {make_report(Method::dtw_baseline, std::move(baseline)), make_report(Method::cca_dtw, std::move(cca))};
}

Template template_from(const LabeledSeries& item)
{
    return extract_template(item.series, item.truth, 0);
}

std::vector<SweepRow> SweepResult::rows() const
{
    std::vector<SweepRow> out;
    for (const SweepEntry& e : entries) {
        out.push_back({e.noise_rate, Method::dtw_baseline, e.baseline.mean_error});
        out.push_back({e.noise_rate, Method::cca_dtw, e.cca.mean_error});
    }
    return out;
}

namespace {

std::vector<LabeledSeries> generate(const BenchmarkConfig& config, std::span<const std::size_t> ids,
                                    unsigned threads)
{
    std::vector<std::optional<LabeledSeries>> slots(ids.size());
    detail::parallel_for(ids.size(), threads, [&](std::size_t k) {
        if (ids[k] >= config.n_series) {
            throw InvalidInput("series id " + std::to_string(ids[k]) + " outside the benchmark");
        }
        slots[k] = static_cast<LabeledSeries>(gen_case(config, ids[k]));
    });
    std::vector<LabeledSeries> out;
    out.reserve(ids.size());
    for (auto& slot : slots) {
        out.push_back(std::move(*slot));
    }
    return out;
}

} // namespace

SweepResult noise_sweep(const BenchmarkConfig& base, std::span<const std::size_t> train_ids,
                        std::span<const std::size_t> test_ids, std::span<const double> noise_rates,
                        const SweepOptions& options)
{
    if (train_ids.empty() || test_ids.empty()) {
        throw InvalidInput("noise sweep needs nonempty training and test pools");
    }
    for (double rate : noise_rates) {
        if (!(rate >= 0.0 && rate <= 1.0)) {
            throw InvalidInput("noise rates must lie in [0, 1]");
        }
    }

    SweepResult out;
    out.test_ids.assign(test_ids.begin(), test_ids.end());
    for (double rate : noise_rates) {
        BenchmarkConfig config = base;
        config.noise_rate = rate;
        const auto training_set = generate(config, train_ids, options.threads);
        const auto test_set = generate(config, test_ids, options.threads);

        TrainConfig train_config;
        train_config.ridge = options.ridge;
        train_config.synthesis.kind = options.synthesis;
        if (options.synthesis == SynthesisKind::replication) {
            train_config.synthesis.tmpl = template_from(training_set.front());
        }
        train_config.embedding =
            cross_validate_embedding(training_set, options.candidates, options.folds, train_config, options.threads);
        const TrainedModel trained = train(training_set, train_config);
        MethodComparison scores = evaluate_methods(test_set, trained, options.threads);

        out.entries.push_back({rate, train_config.embedding, trained.latent.rho, trained.stationarity_residual,
                               std::move(scores.baseline), std::move(scores.cca)});
    }
    return out;
}

} // namespace s2m
