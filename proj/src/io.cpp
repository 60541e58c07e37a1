#include "s2m/io.hpp"

#include "s2m/error.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace s2m::io {

std::string read_text(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "' for reading");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) {
        throw IoError("failed reading '" + path.string() + "'");
    }
    return buffer.str();
}

void write_text(const std::filesystem::path& path, std::string_view text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.flush();
    if (!out) {
        throw IoError("failed writing '" + path.string() + "'");
    }
}

std::string format_double(double value)
{
    char buf[64];
    const auto result = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, result.ptr);
}

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

double parse_number(std::string_view token, std::size_t line)
{
    double value = 0.0;
    const auto* begin = token.data();
    const auto* end = token.data() + token.size();
    if (!token.empty() && *begin == '+') {
        ++begin;
    }
    const auto result = std::from_chars(begin, end, value);
    if (result.ec != std::errc{} || result.ptr != end) {
        throw InvalidInput("line " + std::to_string(line) + ": '" + std::string(token) + "' is not a number");
    }
    return value;
}

std::vector<double> numbers_from_json(const json& j, std::string_view what)
{
    if (!j.is_array()) {
        throw InvalidInput(std::string(what) + " must be a JSON array of numbers");
    }
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& v : j) {
        if (!v.is_number()) {
            throw InvalidInput(std::string(what) + " contains a non-numeric entry");
        }
        out.push_back(v.get<double>());
    }
    return out;
}

template <class T>
T field(const json& j, const char* key, std::string_view what)
{
    if (!j.is_object() || !j.contains(key)) {
        throw InvalidInput(std::string(what) + ": missing field '" + key + "'");
    }
    const json& v = j.at(key);
    if constexpr (std::is_same_v<T, double>) {
        if (!v.is_number()) {
            throw InvalidInput(std::string(what) + ": field '" + key + "' must be a number");
        }
    } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer()) {
            throw InvalidInput(std::string(what) + ": field '" + key + "' must be an integer");
        }
        if constexpr (std::is_unsigned_v<T>) {
            if (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0) {
                throw InvalidInput(std::string(what) + ": field '" + key + "' must be nonnegative");
            }
        }
    } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) {
            throw InvalidInput(std::string(what) + ": field '" + key + "' must be a string");
        }
    }
    return v.get<T>();
}

Eigen::VectorXd vector_from_json(const json& j, std::string_view what)
{
    const auto values = numbers_from_json(j, what);
    return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

json vector_to_json(const Eigen::VectorXd& v)
{
    return json(std::vector<double>(v.data(), v.data() + v.size()));
}

} // namespace

json parse_json(std::string_view text, std::string_view what)
{
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw InvalidInput(std::string(what) + ": malformed JSON (" + e.what() + ")");
    }
}

json read_json(const std::filesystem::path& path)
{
    return parse_json(read_text(path), path.string());
}

std::string dump(const json& j)
{
    return j.dump(2) + "\n";
}

TimeSeries parse_series(std::string_view text)
{
    const auto body = trim(text);
    if (!body.empty() && body.front() == '[') {
        return TimeSeries(numbers_from_json(parse_json(body, "series"), "series"));
    }
    std::vector<double> values;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto next = text.find('\n', pos);
        const auto line = trim(text.substr(pos, next == std::string_view::npos ? text.size() - pos : next - pos));
        ++line_no;
        if (!line.empty()) {
            values.push_back(parse_number(line, line_no));
        }
        if (next == std::string_view::npos) {
            break;
        }
        pos = next + 1;
    }
    return TimeSeries(std::move(values));
}

std::string series_to_csv(const TimeSeries& series)
{
    std::string out;
    out.reserve(series.size() * 20);
    for (double v : series.values()) {
        out += format_double(v);
        out += '\n';
    }
    return out;
}

TimeSeries read_series(const std::filesystem::path& path)
{
    try {
        return parse_series(read_text(path));
    } catch (const InvalidInput& e) {
        throw InvalidInput(path.string() + ": " + e.what());
    }
}

Template parse_template(std::string_view text)
{
    const auto body = trim(text);
    if (!body.empty() && body.front() == '{') {
        const json j = parse_json(body, "template");
        Template out{numbers_from_json(j.value("values", json()), "template values"), 0};
        if (j.contains("class")) {
            out.class_id = field<int>(j, "class", "template");
        }
        validate_template(out);
        return out;
    }
    Template out{parse_series(text).vector(), 0};
    return out;
}

Template read_template(const std::filesystem::path& path)
{
    try {
        return parse_template(read_text(path));
    } catch (const InvalidInput& e) {
        throw InvalidInput(path.string() + ": " + e.what());
    }
}

json to_json(const Template& tmpl)
{
    return json{{"values", tmpl.values}, {"class", tmpl.class_id}};
}

json to_json(const Model& model)
{
    json markers = json::array();
    for (const Marker& m : model.markers) {
        markers.push_back({{"start", m.start}, {"end", m.end}, {"class", m.class_id}});
    }
    return json{{"samples_per_unit", model.samples_per_unit}, {"markers", std::move(markers)}};
}

Model model_from_json(const json& j)
{
    Model out;
    out.samples_per_unit = field<double>(j, "samples_per_unit", "model");
    const json& markers = j.at("markers");
    if (!markers.is_array()) {
        throw InvalidInput("model: 'markers' must be an array");
    }
    for (const json& m : markers) {
        out.markers.push_back({field<double>(m, "start", "model marker"), field<double>(m, "end", "model marker"),
                               m.contains("class") ? field<int>(m, "class", "model marker") : 0});
    }
    require_valid(out);
    return out;
}

json to_json(const AlignedModel& aligned)
{
    json markers = json::array();
    for (const MarkerSamples& m : aligned.markers) {
        markers.push_back({{"start", m.start}, {"end", m.end}, {"class", m.class_id}});
    }
    return json{{"markers", std::move(markers)}};
}

AlignedModel aligned_model_from_json(const json& j)
{
    if (!j.is_object() || !j.contains("markers") || !j.at("markers").is_array()) {
        throw InvalidInput("aligned model: expected an object with a 'markers' array");
    }
    AlignedModel out;
    for (const json& m : j.at("markers")) {
        out.markers.push_back({field<std::int64_t>(m, "start", "aligned marker"),
                               field<std::int64_t>(m, "end", "aligned marker"),
                               m.contains("class") ? field<int>(m, "class", "aligned marker") : 0});
        const MarkerSamples& last = out.markers.back();
        if (last.start < 0 || last.end < last.start) {
            throw InvalidInput("aligned model: marker " + std::to_string(out.markers.size() - 1) +
                               " needs 0 <= start <= end");
        }
    }
    return out;
}

json to_json(const Alignment& alignment)
{
    json path = json::array();
    for (const PathStep& s : alignment.path) {
        path.push_back({s.a, s.b});
    }
    return json{{"cost", alignment.total_cost}, {"path", std::move(path)}};
}

Alignment alignment_from_json(const json& j)
{
    Alignment out;
    out.total_cost = field<double>(j, "cost", "alignment");
    for (const json& step : j.at("path")) {
        if (!step.is_array() || step.size() != 2) {
            throw InvalidInput("alignment: path entries must be [i, j] pairs");
        }
        out.path.push_back({step[0].get<std::size_t>(), step[1].get<std::size_t>()});
    }
    return out;
}

json to_json(const LatentMap& map)
{
    return json{{"past", map.embedding.past},   {"future", map.embedding.future}, {"ridge", map.ridge},
                {"rho", map.rho},               {"w_x", vector_to_json(map.w_x)},  {"w_y", vector_to_json(map.w_y)}};
}

LatentMap latent_map_from_json(const json& j)
{
    LatentMap out;
    out.embedding.past = field<std::size_t>(j, "past", "latent map");
    out.embedding.future = field<std::size_t>(j, "future", "latent map");
    out.ridge = field<double>(j, "ridge", "latent map");
    out.rho = field<double>(j, "rho", "latent map");
    out.w_x = vector_from_json(j.at("w_x"), "w_x");
    out.w_y = vector_from_json(j.at("w_y"), "w_y");
    const auto dim = static_cast<Eigen::Index>(out.embedding.dimension());
    if (out.w_x.size() != dim || out.w_y.size() != dim) {
        throw InvalidInput("latent map: projection length does not match past + future + 1 = " +
                           std::to_string(dim));
    }
    return out;
}

json to_json(const TrainedModel& model)
{
    json j = to_json(model.latent);
    j["synthesis"] = std::string(to_string(model.config.synthesis.kind));
    if (model.config.synthesis.tmpl) {
        j["template"] = to_json(*model.config.synthesis.tmpl);
    }
    return j;
}

TrainedModel trained_model_from_json(const json& j)
{
    TrainedModel out;
    out.latent = latent_map_from_json(j);
    out.config.embedding = out.latent.embedding;
    out.config.ridge = out.latent.ridge;
    if (j.contains("synthesis")) {
        out.config.synthesis.kind = parse_synthesis_kind(field<std::string>(j, "synthesis", "model"));
    }
    if (j.contains("template")) {
        out.config.synthesis.tmpl = parse_template(j.at("template").dump());
    }
    validate_synthesis(out.config.synthesis);
    return out;
}

json to_json(const BenchmarkConfig& c)
{
    return json{{"n_series", c.n_series},
                {"n_train", c.n_train},
                {"n_markers_per_series", c.n_markers_per_series},
                {"pattern_width_samples", {c.pattern_width_samples.first, c.pattern_width_samples.second}},
                {"spacing_samples", {c.spacing_samples.first, c.spacing_samples.second}},
                {"noise_rate", c.noise_rate},
                {"noise_period_samples", c.noise_period_samples},
                {"warp_strength", c.warp_strength},
                {"pattern_jitter", c.pattern_jitter},
                {"samples_per_unit", c.samples_per_unit},
                {"seed", c.seed}};
}

BenchmarkConfig benchmark_config_from_json(const json& j, BenchmarkConfig c)
{
    if (!j.is_object()) {
        throw InvalidInput("benchmark config must be a JSON object");
    }
    const auto range = [&](const char* key, std::pair<std::size_t, std::size_t>& target) {
        const json& v = j.at(key);
        if (!v.is_array() || v.size() != 2 || !v[0].is_number_unsigned() || !v[1].is_number_unsigned()) {
            throw InvalidInput(std::string("benchmark config: '") + key + "' must be [min, max]");
        }
        target = {v[0].get<std::size_t>(), v[1].get<std::size_t>()};
    };
    for (const auto& [key, value] : j.items()) {
        if (key == "n_series") {
            c.n_series = field<std::size_t>(j, "n_series", "benchmark config");
        } else if (key == "n_train") {
            c.n_train = field<std::size_t>(j, "n_train", "benchmark config");
        } else if (key == "n_markers_per_series") {
            c.n_markers_per_series = field<std::size_t>(j, "n_markers_per_series", "benchmark config");
        } else if (key == "pattern_width_samples") {
            range("pattern_width_samples", c.pattern_width_samples);
        } else if (key == "spacing_samples") {
            range("spacing_samples", c.spacing_samples);
        } else if (key == "noise_rate") {
            c.noise_rate = field<double>(j, "noise_rate", "benchmark config");
        } else if (key == "noise_period_samples") {
            c.noise_period_samples = field<double>(j, "noise_period_samples", "benchmark config");
        } else if (key == "warp_strength") {
            c.warp_strength = field<double>(j, "warp_strength", "benchmark config");
        } else if (key == "pattern_jitter") {
            c.pattern_jitter = field<double>(j, "pattern_jitter", "benchmark config");
        } else if (key == "samples_per_unit") {
            c.samples_per_unit = field<double>(j, "samples_per_unit", "benchmark config");
        } else if (key == "seed") {
            c.seed = field<std::uint64_t>(j, "seed", "benchmark config");
        } else {
            throw InvalidInput("benchmark config: unknown key '" + key + "'");
        }
    }
    validate_config(c);
    return c;
}

std::string sweep_to_csv(const SweepResult& result)
{
    std::string out = "noise_rate,method,series_id,error_samples\n";
    for (const SweepEntry& entry : result.entries) {
        const std::string rate = format_double(entry.noise_rate);
        for (const EvalReport* report : {&entry.baseline, &entry.cca}) {
            const std::string method(to_string(report->method));
            for (std::size_t k = 0; k < report->per_series_errors.size(); ++k) {
                const std::string id = k < result.test_ids.size() ? std::to_string(result.test_ids[k])
                                                                  : std::to_string(k);
                out += rate + "," + method + "," + id + "," + format_double(report->per_series_errors[k]) + "\n";
            }
            out += rate + "," + method + ",mean," + format_double(report->mean_error) + "\n";
        }
    }
    return out;
}

json sweep_summary(const SweepResult& result)
{
    json rows = json::array();
    for (const SweepEntry& e : result.entries) {
        rows.push_back({{"noise_rate", e.noise_rate},
                        {"past", e.chosen.past},
                        {"future", e.chosen.future},
                        {"rho", e.rho},
                        {"dtw_mean_error", e.baseline.mean_error},
                        {"cca_dtw_mean_error", e.cca.mean_error}});
    }
    return json{{"test_series", result.test_ids.size()}, {"rates", std::move(rows)}};
}

} // namespace s2m::io
