#include "s2m/cli.hpp"

#include "s2m/datagen.hpp"
#include "s2m/error.hpp"
#include "s2m/io.hpp"
#include "s2m/pipeline.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <optional>
#include <thread>

namespace s2m::cli {

namespace fs = std::filesystem;
using nlohmann::json;

std::string config_hash(const json& config)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : config.dump()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

std::vector<std::string> split(const std::string& text, char sep)
{
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        const auto next = text.find(sep, pos);
        std::string token = text.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
        token.erase(0, token.find_first_not_of(" \t"));
        token.erase(token.find_last_not_of(" \t") + 1);
        out.push_back(token);
        if (next == std::string::npos) {
            return out;
        }
        pos = next + 1;
    }
}

double to_double(const std::string& token, const char* what)
{
    double value = 0.0;
    const auto result = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || result.ec != std::errc{} || result.ptr != token.data() + token.size() ||
        !std::isfinite(value)) {
        throw InvalidInput(std::string("malformed ") + what + " '" + token + "'");
    }
    return value;
}

std::size_t to_index(const std::string& token, const char* what)
{
    std::size_t value = 0;
    const auto result = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || result.ec != std::errc{} || result.ptr != token.data() + token.size()) {
        throw InvalidInput(std::string("malformed ") + what + " '" + token + "'");
    }
    return value;
}

} // namespace

std::vector<double> parse_rate_list(const std::string& text)
{
    const auto tokens = split(text, ',');
    const auto ellipsis = std::find(tokens.begin(), tokens.end(), "...");
    if (ellipsis == tokens.end()) {
        std::vector<double> out;
        for (const auto& t : tokens) {
            out.push_back(to_double(t, "rate"));
        }
        return out;
    }
    if (tokens.size() != 4 || ellipsis != tokens.begin() + 2) {
        throw InvalidInput("rate progression must look like 'a,b,...,z'");
    }
    const double first = to_double(tokens[0], "rate");
    const double second = to_double(tokens[1], "rate");
    const double last = to_double(tokens[3], "rate");
    const double step = second - first;
    if (!(step > 0.0) || last < first) {
        throw InvalidInput("rate progression must be increasing");
    }
    std::vector<double> out;
    for (std::size_t k = 0;; ++k) {
        // Snap to 12 decimals so 0.1 steps print as 0.3, not 0.30000000000000004.
        const double value = std::round((first + static_cast<double>(k) * step) * 1e12) / 1e12;
        if (value > last + 1e-9) {
            break;
        }
        out.push_back(value);
        if (out.size() > 100000) {
            throw InvalidInput("rate progression is too long");
        }
    }
    return out;
}

std::vector<std::size_t> parse_id_list(const std::string& text)
{
    std::vector<std::size_t> out;
    for (const auto& token : split(text, ',')) {
        const auto dots = token.find("..");
        if (dots == std::string::npos) {
            out.push_back(to_index(token, "series id"));
            continue;
        }
        const std::size_t lo = to_index(token.substr(0, dots), "series id");
        const std::size_t hi = to_index(token.substr(dots + 2), "series id");
        if (hi < lo) {
            throw InvalidInput("empty id range '" + token + "'");
        }
        for (std::size_t i = lo; i <= hi; ++i) {
            out.push_back(i);
        }
    }
    return out;
}

namespace {

struct Common {
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    bool quiet = false;
    std::string config;
};

void add_common(CLI::App* sub, Common& common)
{
    sub->add_option("--threads", common.threads, "Worker threads (default: all cores)")
        ->check(CLI::PositiveNumber);
    sub->add_flag("--quiet", common.quiet, "Suppress progress messages");
    sub->add_option("--config", common.config, "JSON file with option values; flags win");
}

std::string utc_now()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Fills options not given on the command line from a flat JSON object whose
// keys are long option names ('_' and '-' are interchangeable).
void apply_json_config(CLI::App* sub, const std::string& path)
{
    if (path.empty()) {
        return;
    }
    const json config = io::read_json(path);
    if (!config.is_object()) {
        throw InvalidInput(path + ": config must be a JSON object");
    }
    for (const auto& [raw_key, value] : config.items()) {
        std::string key = raw_key;
        std::replace(key.begin(), key.end(), '_', '-');
        CLI::Option* opt = nullptr;
        try {
            opt = sub->get_option("--" + key);
        } catch (const CLI::OptionNotFound&) {
            throw InvalidInput(path + ": unknown option '" + raw_key + "'");
        }
        if (opt->count() > 0 || key == "config") {
            continue;
        }
        const auto as_text = [&](const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
        if (value.is_array()) {
            std::string joined;
            for (const auto& v : value) {
                joined += (joined.empty() ? "" : ",") + as_text(v);
            }
            opt->add_result(joined);
        } else {
            opt->add_result(as_text(value));
        }
        try {
            opt->run_callback();
        } catch (const CLI::ParseError& e) {
            throw InvalidInput(path + ": bad value for '" + raw_key + "': " + e.what());
        }
    }
}

json make_manifest(const std::string& command, const json& config, std::uint64_t seed, const std::string& started)
{
    return json{{"command", command},
                {"config", config},
                {"config_hash", config_hash(config)},
                {"seed", seed},
                {"tool_version", kToolVersion},
                {"started_at", started},
                {"finished_at", utc_now()}};
}

void require_option(const std::string& value, const char* name)
{
    if (value.empty()) {
        throw InvalidInput(std::string(name) + " is required");
    }
}

fs::path sibling(const fs::path& out, const std::string& suffix)
{
    fs::path p = out;
    p.replace_extension();
    return fs::path(p.string() + suffix);
}

std::string numbered(const char* prefix, std::size_t id, const char* ext)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s_%04zu%s", prefix, id, ext);
    return buf;
}

struct Dataset {
    fs::path dir;
    json manifest;
    BenchmarkConfig config;
};

Dataset open_dataset(const fs::path& dir)
{
    Dataset out{dir, io::read_json(dir / "manifest.json"), {}};
    if (!out.manifest.contains("config")) {
        throw InvalidInput((dir / "manifest.json").string() + ": missing 'config'");
    }
    out.config = io::benchmark_config_from_json(out.manifest.at("config"));
    return out;
}

LabeledSeries load_item(const fs::path& dir, std::size_t id)
{
    return LabeledSeries{io::read_series(dir / numbered("series", id, ".csv")),
                         io::aligned_model_from_json(io::read_json(dir / numbered("truth", id, ".json"))),
                         io::model_from_json(io::read_json(dir / numbered("blueprint", id, ".json")))};
}

std::vector<EmbeddingConfig> parse_candidates(const std::string& text)
{
    std::vector<EmbeddingConfig> out;
    for (const auto& token : split(text, ',')) {
        const auto colon = token.find(':');
        if (colon == std::string::npos) {
            const std::size_t w = to_index(token, "candidate");
            out.push_back({w, w});
        } else {
            out.push_back({to_index(token.substr(0, colon), "candidate"),
                           to_index(token.substr(colon + 1), "candidate")});
        }
    }
    return out;
}

SynthesisConfig synthesis_from(const std::string& kind, const std::string& template_path)
{
    SynthesisConfig out;
    out.kind = parse_synthesis_kind(kind);
    if (!template_path.empty()) {
        if (out.kind == SynthesisKind::binary) {
            throw InvalidInput("--template is only valid with --synthesis replication");
        }
        out.tmpl = io::read_template(template_path);
    }
    validate_synthesis(out);
    return out;
}

// ---- gen -------------------------------------------------------------------

struct GenArgs {
    Common common;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> n_series;
    std::optional<std::size_t> n_train;
    std::optional<double> noise_rate;
    std::optional<double> warp;
    std::optional<double> jitter;
    std::optional<double> noise_period;
};

int cmd_gen(const GenArgs& args, std::ostream& err)
{
    const std::string started = utc_now();
    BenchmarkConfig config;
    if (!args.common.config.empty()) {
        config = io::benchmark_config_from_json(io::read_json(args.common.config));
    }
    if (args.seed) config.seed = *args.seed;
    if (args.n_series) config.n_series = *args.n_series;
    if (args.n_train) config.n_train = *args.n_train;
    if (args.noise_rate) config.noise_rate = *args.noise_rate;
    if (args.warp) config.warp_strength = *args.warp;
    if (args.jitter) config.pattern_jitter = *args.jitter;
    if (args.noise_period) config.noise_period_samples = *args.noise_period;
    validate_config(config);

    const fs::path dir = args.out;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw IoError("cannot create output directory '" + dir.string() + "'" + (ec ? ": " + ec.message() : ""));
    }

    const auto cases = gen_benchmark(config, args.common.threads);
    for (std::size_t i = 0; i < cases.size(); ++i) {
        io::write_text(dir / numbered("series", i, ".csv"), io::series_to_csv(cases[i].series));
        io::write_text(dir / numbered("blueprint", i, ".json"), io::dump(io::to_json(cases[i].blueprint)));
        io::write_text(dir / numbered("truth", i, ".json"), io::dump(io::to_json(cases[i].truth)));
    }
    if (config.n_train > 0) {
        const Template tmpl = template_from(cases.front());
        io::write_text(dir / "template.csv", io::series_to_csv(TimeSeries(tmpl.values)));
    }

    json manifest = make_manifest("gen", io::to_json(config), config.seed, started);
    manifest["train_ids"] = training_indices(config);
    manifest["n_series"] = config.n_series;
    io::write_text(dir / "manifest.json", io::dump(manifest));
    if (!args.common.quiet) {
        err << "wrote " << cases.size() << " series to " << dir.string() << "\n";
    }
    return kOk;
}

// ---- train -----------------------------------------------------------------

struct TrainArgs {
    Common common;
    std::string data;
    std::string train_ids;
    bool cv = false;
    std::string candidates;
    std::size_t folds = kDefaultFolds;
    std::size_t past = 20;
    std::size_t future = 20;
    std::optional<double> ridge;
    std::string synthesis = "binary";
    std::string tmpl;
    std::string out;
};

int cmd_train(const TrainArgs& args, std::ostream& err)
{
    const std::string started = utc_now();
    require_option(args.data, "--data");
    require_option(args.out, "--out");
    const Dataset dataset = open_dataset(args.data);
    const auto ids = args.train_ids.empty() ? training_indices(dataset.config) : parse_id_list(args.train_ids);
    if (ids.empty()) {
        throw InvalidInput("no training series selected");
    }

    TrainConfig config;
    config.ridge = args.ridge;
    config.synthesis = synthesis_from(args.synthesis, args.tmpl);
    config.embedding = {args.past, args.future};

    std::vector<LabeledSeries> items;
    for (std::size_t id : ids) {
        items.push_back(load_item(dataset.dir, id));
    }
    if (args.cv) {
        const auto grid = args.candidates.empty() ? default_embedding_grid() : parse_candidates(args.candidates);
        config.embedding = cross_validate_embedding(items, grid, args.folds, config, args.common.threads);
    }
    const TrainedModel trained = train(items, config);
    if (!args.common.quiet) {
        err << "embedding past=" << config.embedding.past << " future=" << config.embedding.future
            << " rho=" << trained.latent.rho << "\n";
    }

    io::write_text(args.out, io::dump(io::to_json(trained)));
    json effective{{"data", args.data},   {"train_ids", ids},          {"cv", args.cv},
                   {"folds", args.folds}, {"past", config.embedding.past}, {"future", config.embedding.future},
                   {"ridge", trained.latent.ridge}, {"synthesis", args.synthesis}, {"template", args.tmpl}};
    io::write_text(sibling(args.out, ".manifest.json"),
                   io::dump(make_manifest("train", effective, dataset.config.seed, started)));
    return kOk;
}

// ---- align -----------------------------------------------------------------

struct AlignArgs {
    Common common;
    std::string method = "cca";
    std::string model;
    std::string series;
    std::string blueprint;
    std::string synthesis = "binary";
    std::string tmpl;
    std::optional<std::size_t> window;
    std::string out;
    std::string alignment_out;
};

int cmd_align(const AlignArgs& args, std::ostream& out, std::ostream& err)
{
    const std::string started = utc_now();
    require_option(args.series, "--series");
    require_option(args.blueprint, "--blueprint");
    if (args.method != "cca" && args.method != "dtw") {
        throw InvalidInput("unknown method '" + args.method + "' (expected cca or dtw)");
    }
    if (args.method == "cca" && args.model.empty()) {
        throw InvalidInput("--method cca requires --model");
    }
    const TimeSeries series = io::read_series(args.series);
    const Model blueprint = io::model_from_json(io::read_json(args.blueprint));
    DtwConfig dtw;
    dtw.window = args.window;

    Localization result = [&] {
        if (args.method == "cca") {
            const TrainedModel trained = io::trained_model_from_json(io::read_json(args.model));
            return localize_cca(series, blueprint, trained, dtw);
        }
        return localize_baseline(series, blueprint, synthesis_from(args.synthesis, args.tmpl), dtw);
    }();

    const std::string aligned = io::dump(io::to_json(result.markers));
    if (args.out.empty()) {
        out << aligned;
    } else {
        io::write_text(args.out, aligned);
    }
    fs::path path_out = args.alignment_out;
    if (path_out.empty() && !args.out.empty()) {
        path_out = sibling(args.out, ".alignment.json");
    }
    if (!path_out.empty()) {
        io::write_text(path_out, io::dump(io::to_json(result.alignment)));
    }
    if (!args.out.empty()) {
        json effective{{"method", args.method},       {"model", args.model},
                       {"series", args.series},       {"blueprint", args.blueprint},
                       {"synthesis", args.synthesis}, {"template", args.tmpl},
                       {"window", args.window ? json(*args.window) : json()}};
        io::write_text(sibling(args.out, ".manifest.json"), io::dump(make_manifest("align", effective, 0, started)));
    }
    if (!args.common.quiet) {
        err << "aligned " << result.markers.markers.size() << " markers, path cost "
            << io::format_double(result.alignment.total_cost) << "\n";
    }
    return kOk;
}

// ---- eval ------------------------------------------------------------------

struct EvalArgs {
    Common common;
    std::string data;
    std::string rates = "0,0.1,...,1";
    std::string out;
    std::string summary;
    std::optional<std::size_t> test_count;
    std::string candidates;
    std::size_t folds = kDefaultFolds;
    std::optional<double> ridge;
    std::string synthesis = "replication";
    std::optional<std::uint64_t> seed;
};

int cmd_eval(const EvalArgs& args, std::ostream& err)
{
    const std::string started = utc_now();
    require_option(args.data, "--data");
    require_option(args.out, "--out");
    const auto rates = parse_rate_list(args.rates);
    const Dataset dataset = open_dataset(args.data);
    BenchmarkConfig config = dataset.config;
    if (args.seed) {
        config.seed = *args.seed;
    }
    const auto train_ids = training_indices(config);
    auto test_ids = test_indices(config);
    if (args.test_count && *args.test_count < test_ids.size()) {
        test_ids.resize(*args.test_count);
    }

    SweepOptions options;
    if (!args.candidates.empty()) {
        options.candidates = parse_candidates(args.candidates);
    }
    options.folds = args.folds;
    options.ridge = args.ridge;
    options.synthesis = parse_synthesis_kind(args.synthesis);
    options.threads = args.common.threads;

    SweepResult result;
    result.test_ids = test_ids;
    for (double rate : rates) {
        const double one[] = {rate};
        auto part = noise_sweep(config, train_ids, test_ids, one, options);
        if (!args.common.quiet) {
            const SweepEntry& e = part.entries.front();
            err << "rate " << io::format_double(rate) << ": dtw " << e.baseline.mean_error << ", cca_dtw "
                << e.cca.mean_error << " (past=" << e.chosen.past << ", future=" << e.chosen.future << ")\n";
        }
        result.entries.push_back(std::move(part.entries.front()));
    }

    io::write_text(args.out, io::sweep_to_csv(result));
    const fs::path summary = args.summary.empty() ? sibling(args.out, ".json") : fs::path(args.summary);
    io::write_text(summary, io::dump(io::sweep_summary(result)));

    json effective{{"data", args.data},
                   {"rates", rates},
                   {"test_count", test_ids.size()},
                   {"folds", args.folds},
                   {"synthesis", args.synthesis},
                   {"candidates", args.candidates},
                   {"ridge", args.ridge ? json(*args.ridge) : json()}};
    io::write_text(sibling(args.out, ".manifest.json"),
                   io::dump(make_manifest("eval", effective, config.seed, started)));
    return kOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Signal-to-model alignment through a learned latent correlation space", "s2m"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    GenArgs gen;
    auto* gen_cmd = app.add_subcommand("gen", "Write a seeded synthetic benchmark directory");
    add_common(gen_cmd, gen.common);
    gen_cmd->add_option("--out", gen.out, "Output directory")->required();
    gen_cmd->add_option("--seed", gen.seed, "Benchmark seed");
    gen_cmd->add_option("--n-series", gen.n_series, "Number of series");
    gen_cmd->add_option("--n-train", gen.n_train, "Number of designated training series");
    gen_cmd->add_option("--noise-rate", gen.noise_rate, "Sine noise rate in [0, 1]");
    gen_cmd->add_option("--warp", gen.warp, "Temporal warp strength in [0, 0.5)");
    gen_cmd->add_option("--jitter", gen.jitter, "Pattern amplitude jitter in [0, 1)");
    gen_cmd->add_option("--noise-period", gen.noise_period, "Sine noise period in samples");

    TrainArgs tr;
    auto* train_cmd = app.add_subcommand("train", "Learn the latent map from labeled series");
    add_common(train_cmd, tr.common);
    train_cmd->add_option("--data", tr.data, "Benchmark directory");
    train_cmd->add_option("--train-ids", tr.train_ids, "Series ids, e.g. 0..18 (default: manifest)");
    train_cmd->add_flag("--cv", tr.cv, "Pick the embedding by cross-validation");
    train_cmd->add_option("--candidates", tr.candidates, "Embeddings for --cv, e.g. 0,5,10 or 3:7");
    train_cmd->add_option("--folds", tr.folds, "Cross-validation folds");
    train_cmd->add_option("--past", tr.past, "Past samples in the embedding");
    train_cmd->add_option("--future", tr.future, "Future samples in the embedding");
    train_cmd->add_option("--ridge", tr.ridge, "Absolute ridge (default: relative 1e-6)");
    train_cmd->add_option("--synthesis", tr.synthesis, "binary or replication");
    train_cmd->add_option("--template", tr.tmpl, "Template file for replication synthesis");
    train_cmd->add_option("--out", tr.out, "Model JSON to write");

    AlignArgs al;
    auto* align_cmd = app.add_subcommand("align", "Locate blueprint markers in a series");
    add_common(align_cmd, al.common);
    align_cmd->add_option("--method", al.method, "cca or dtw");
    align_cmd->add_option("--model", al.model, "Trained model JSON (cca)");
    align_cmd->add_option("--series", al.series, "Series file (CSV or JSON array)");
    align_cmd->add_option("--blueprint", al.blueprint, "Blueprint model JSON");
    align_cmd->add_option("--synthesis", al.synthesis, "binary or replication (dtw)");
    align_cmd->add_option("--template", al.tmpl, "Template file (dtw with replication)");
    align_cmd->add_option("--window", al.window, "Sakoe-Chiba half-width in samples");
    align_cmd->add_option("--out", al.out, "Aligned markers JSON (default: stdout)");
    align_cmd->add_option("--alignment-out", al.alignment_out, "Warping path JSON");

    EvalArgs ev;
    auto* eval_cmd = app.add_subcommand("eval", "Noise sweep of both methods on a benchmark");
    add_common(eval_cmd, ev.common);
    eval_cmd->add_option("--data", ev.data, "Benchmark directory");
    eval_cmd->add_option("--rates", ev.rates, "Noise rates, e.g. 0,0.1,...,1.0");
    eval_cmd->add_option("--out", ev.out, "Report CSV");
    eval_cmd->add_option("--summary", ev.summary, "Summary JSON (default: next to --out)");
    eval_cmd->add_option("--test-count", ev.test_count, "Use only the first N test series");
    eval_cmd->add_option("--candidates", ev.candidates, "Embedding grid, e.g. 0,5,10,20,40");
    eval_cmd->add_option("--folds", ev.folds, "Cross-validation folds");
    eval_cmd->add_option("--ridge", ev.ridge, "Absolute ridge (default: relative 1e-6)");
    eval_cmd->add_option("--synthesis", ev.synthesis, "binary or replication");
    eval_cmd->add_option("--seed", ev.seed, "Override the benchmark seed");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForVersion&) {
        out << kToolVersion << "\n";
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kInvalidInput;
    }

    try {
        if (gen_cmd->parsed()) {
            return cmd_gen(gen, err);
        }
        if (train_cmd->parsed()) {
            apply_json_config(train_cmd, tr.common.config);
            return cmd_train(tr, err);
        }
        if (align_cmd->parsed()) {
            apply_json_config(align_cmd, al.common.config);
            return cmd_align(al, out, err);
        }
        apply_json_config(eval_cmd, ev.common.config);
        return cmd_eval(ev, err);
    } catch (const InvalidInput& e) {
        err << "error: " << e.what() << "\n";
        return kInvalidInput;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kIoFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kIoFailure;
    }
}

} // namespace s2m::cli
