#include "contrastfs/report.hpp"

#include "contrastfs/error.hpp"

#include <fstream>

namespace contrastfs {

namespace {

void check_version(const Json& json, const char* what)
{
    if (!json.is_object() || !json.contains("version") || json.at("version").get<int>() != report_format_version) {
        throw Error(ErrorKind::Parse, std::string(what) + " document has a missing or unsupported version");
    }
}

SelectorConfig config_from_echo(const Json& config)
{
    SelectorConfig c;
    if (config.contains("cv_mode")) c.cv_mode = parse_cv_mode(config.at("cv_mode").get<std::string>());
    if (config.contains("denominator_mode"))
        c.denominator_mode = parse_denominator_mode(config.at("denominator_mode").get<std::string>());
    if (config.contains("epsilon")) c.epsilon = std::stod(config.at("epsilon").get<std::string>());
    if (config.contains("m")) c.m = std::stoul(config.at("m").get<std::string>());
    return c;
}

}  // namespace

Json to_json(const ImportanceReport& report, std::span<const FeatureIndex> selected)
{
    Json config = Json::object();
    for (const auto& [key, value] : report.config) {
        config[key] = value;
    }
    Json j;
    j["version"] = report_format_version;
    j["method"] = report.method;
    j["config"] = std::move(config);
    j["scores"] = report.scores;
    j["ranking"] = report.ranking;
    j["wall_time_seconds"] = report.wall_time_seconds;
    if (!selected.empty()) {
        j["selected"] = std::vector<FeatureIndex>(selected.begin(), selected.end());
    }
    return j;
}

ImportanceReport report_from_json(const Json& json)
{
    check_version(json, "report");
    try {
        ImportanceReport r;
        r.method = json.at("method").get<std::string>();
        for (const auto& [key, value] : json.at("config").items()) {
            r.config.emplace_back(key, value.get<std::string>());
        }
        r.scores = json.at("scores").get<std::vector<double>>();
        r.ranking = json.at("ranking").get<std::vector<FeatureIndex>>();
        r.wall_time_seconds = json.at("wall_time_seconds").get<double>();
        if (r.scores.size() != r.ranking.size()) {
            throw Error(ErrorKind::Parse, "report scores and ranking differ in length");
        }
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Parse, std::string("malformed report: ") + e.what());
    }
}

std::optional<std::vector<FeatureIndex>> selected_from_json(const Json& json)
{
    if (!json.contains("selected")) {
        return std::nullopt;
    }
    return json.at("selected").get<std::vector<FeatureIndex>>();
}

Json to_json(const SurrogateMatrix& surrogate)
{
    Json config = Json::object();
    for (const auto& [key, value] : echo(surrogate.config)) {
        config[key] = value;
    }
    Json rows = Json::array();
    for (std::size_t k = 0; k < surrogate.z.rows(); ++k) {
        const auto r = surrogate.z.row(k);
        rows.push_back(std::vector<double>(r.begin(), r.end()));
    }
    Json j;
    j["version"] = report_format_version;
    j["config"] = std::move(config);
    j["classes"] = surrogate.z.rows();
    j["features"] = surrogate.z.cols();
    j["z"] = std::move(rows);
    return j;
}

SurrogateMatrix surrogate_from_json(const Json& json)
{
    check_version(json, "surrogate");
    try {
        const auto classes = json.at("classes").get<std::size_t>();
        const auto features = json.at("features").get<std::size_t>();
        const auto& rows = json.at("z");
        if (rows.size() != classes) {
            throw Error(ErrorKind::Parse, "surrogate has wrong number of rows");
        }
        Matrix z(classes, features);
        for (std::size_t k = 0; k < classes; ++k) {
            const auto row = rows.at(k).get<std::vector<double>>();
            if (row.size() != features) {
                throw Error(ErrorKind::Parse, "surrogate row " + std::to_string(k) + " has wrong length");
            }
            std::copy(row.begin(), row.end(), z.row(k).begin());
        }
        return {std::move(z), config_from_echo(json.at("config"))};
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Parse, std::string("malformed surrogate: ") + e.what());
    }
}

Json to_json(const TimingStats& stats)
{
    Json j;
    j["method"] = stats.method;
    j["workers"] = stats.workers;
    j["repeats"] = stats.seconds.size();
    j["min_seconds"] = stats.min;
    j["mean_seconds"] = stats.mean;
    j["std_seconds"] = stats.std;
    j["seconds"] = stats.seconds;
    return j;
}

Json to_json(const CurveStudy& study)
{
    Json runs = Json::array();
    for (const auto& run : study.runs) {
        Json points = Json::array();
        for (const auto& [m, acc] : run.points) {
            points.push_back(Json{{"m", m}, {"accuracy", acc}});
        }
        runs.push_back(Json{{"method", run.method}, {"split_seed", run.split_seed}, {"points", std::move(points)}});
    }
    Json rsd = Json::array();
    for (const auto& row : study.rsd) {
        rsd.push_back(Json{{"method", row.method}, {"m", row.m}, {"mean_accuracy", row.mean},
                           {"std_accuracy", row.std}, {"rsd", row.rsd}});
    }
    return Json{{"curves", std::move(runs)}, {"rsd", std::move(rsd)}};
}

void write_json(const Json& json, const std::string& path)
{
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw Error(ErrorKind::Io, "cannot write '" + path + "'");
    }
    out << json.dump(2) << '\n';
    if (!out) {
        throw Error(ErrorKind::Io, "write to '" + path + "' failed");
    }
}

Json read_json(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::Io, "cannot open '" + path + "'");
    }
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Parse, "'" + path + "': " + e.what());
    }
}

}  // namespace contrastfs
