#include "cli.hpp"

#include "contrastfs/baselines.hpp"
#include "contrastfs/bootstrap.hpp"
#include "contrastfs/error.hpp"
#include "contrastfs/evaluation.hpp"
#include "contrastfs/ingestion.hpp"
#include "contrastfs/moments.hpp"
#include "contrastfs/parallel.hpp"
#include "contrastfs/redundancy.hpp"
#include "contrastfs/report.hpp"
#include "contrastfs/selector.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace contrastfs::cli {

namespace {

constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_data = 2;

/// Where a dataset comes from: `--input` (+ `--labels` for IDX).
struct InputOptions {
    std::string path;
    std::string format = "csv";
    std::string labels;
    std::string label_col = "0";
    bool no_header = false;
    std::string delimiter = ",";
};

void add_input_options(CLI::App& cmd, InputOptions& in, const std::string& prefix, bool required)
{
    auto* opt = cmd.add_option("--" + prefix, in.path, "Dataset path (CSV file, IDX images, or cache)");
    if (required) {
        opt->required();
    }
    cmd.add_option("--format", in.format, "Input format")
        ->check(CLI::IsMember({"csv", "idx", "cache"}))
        ->capture_default_str();
    cmd.add_option("--" + (prefix == "input" ? std::string("labels") : prefix + "-labels"), in.labels,
                   "IDX label file");
    cmd.add_option("--label-col", in.label_col, "CSV label column: header name or zero-based index")
        ->capture_default_str();
    cmd.add_flag("--no-header", in.no_header, "CSV file has no header row");
    cmd.add_option("--delimiter", in.delimiter, "CSV delimiter")->capture_default_str();
}

Dataset load(const InputOptions& in, const std::vector<std::string>& class_names = {})
{
    if (in.format == "idx") {
        if (in.labels.empty()) {
            throw CLI::ValidationError("--labels", "IDX input needs a label file");
        }
        return load_idx(in.path, in.labels);
    }
    if (in.format == "cache") {
        return load_cache(in.path);
    }
    if (in.delimiter.size() != 1) {
        throw CLI::ValidationError("--delimiter", "must be a single character");
    }
    CsvOptions options;
    options.has_header = !in.no_header;
    options.delimiter = in.delimiter.front();
    options.class_names = class_names;
    std::size_t index = 0;
    const auto* first = in.label_col.data();
    const auto* last = first + in.label_col.size();
    const auto [ptr, ec] = std::from_chars(first, last, index);
    if (ec == std::errc{} && ptr == last && in.no_header) {
        options.label_column = index;
    } else if (ec == std::errc{} && ptr == last) {
        // A numeric spelling is a header name when such a column exists.
        options.label_column = in.label_col;
        try {
            return load_csv(in.path, options);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::MissingLabelColumn) {
                throw;
            }
        }
        options.label_column = index;
    } else {
        options.label_column = in.label_col;
    }
    return load_csv(in.path, options);
}

struct SelectorOptions {
    std::string cv_mode = "unit";
    std::string denominator = "as-written";
    double epsilon = 1e-12;
};

void add_selector_options(CLI::App& cmd, SelectorOptions& opts)
{
    cmd.add_option("--cv-mode", opts.cv_mode, "Coefficient-of-variation weighting")
        ->check(CLI::IsMember({"unit", "rel-std", "inv-rel-std", "rel_std", "inv_rel_std"}))
        ->capture_default_str();
    cmd.add_option("--denominator", opts.denominator, "Surrogate denominator")
        ->check(CLI::IsMember({"as-written", "global-std", "as_written", "global_std"}))
        ->capture_default_str();
    cmd.add_option("--epsilon", opts.epsilon, "Clamp for near-zero divisors")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
}

SelectorConfig make_config(const SelectorOptions& opts, std::size_t m)
{
    SelectorConfig c;
    c.cv_mode = parse_cv_mode(opts.cv_mode);
    c.denominator_mode = parse_denominator_mode(opts.denominator);
    c.epsilon = opts.epsilon;
    c.m = m;
    return c;
}

void emit(const Json& json, const std::string& path, std::ostream& out)
{
    if (path.empty()) {
        out << json.dump(2) << '\n';
    } else {
        write_json(json, path);
    }
}

void write_indices_csv(std::span<const FeatureIndex> indices, const std::string& path)
{
    std::ofstream f(path, std::ios::trunc);
    if (!f) {
        throw Error(ErrorKind::Io, "cannot write '" + path + "'");
    }
    f << "index\n";
    for (const auto i : indices) {
        f << i << '\n';
    }
}

/// One-column CSV (optional header) or a report JSON with "selected".
std::vector<FeatureIndex> read_indices(const std::string& path)
{
    std::ifstream f(path);
    if (!f) {
        throw Error(ErrorKind::Io, "cannot open '" + path + "'");
    }
    const int first = f.peek();
    if (first == '{') {
        const auto selected = selected_from_json(read_json(path));
        if (!selected) {
            throw Error(ErrorKind::Parse, "'" + path + "' has no \"selected\" list");
        }
        return *selected;
    }
    std::vector<FeatureIndex> indices;
    std::string line;
    std::size_t row = 0;
    while (std::getline(f, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        FeatureIndex v = 0;
        const auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), v);
        if (ec != std::errc{} || ptr != line.data() + line.size()) {
            if (row == 0) {
                ++row;
                continue;  // header
            }
            throw Error(ErrorKind::Parse, "'" + path + "' line " + std::to_string(row + 1) + ": not an index");
        }
        indices.push_back(v);
        ++row;
    }
    return indices;
}

template <typename T>
std::vector<T> parse_list(const std::string& text, const std::string& flag)
{
    std::vector<T> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        T v{};
        const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (item.empty() || ec != std::errc{} || ptr != item.data() + item.size()) {
            throw CLI::ValidationError(flag, "'" + item + "' is not a non-negative integer");
        }
        values.push_back(v);
    }
    if (values.empty()) {
        throw CLI::ValidationError(flag, "list is empty");
    }
    return values;
}

std::vector<Method> parse_methods(const std::string& text, const SelectorConfig& config, std::uint64_t seed,
                                  const BootstrapOptions& bootstrap)
{
    std::vector<Method> methods;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        Method m;
        try {
            m.kind = parse_method_kind(item);
        } catch (const Error&) {
            throw CLI::ValidationError("--methods", "unknown method '" + item + "'");
        }
        m.config = config;
        m.seed = seed;
        m.bootstrap = bootstrap;
        m.bootstrap.seed = seed;
        methods.push_back(m);
    }
    if (methods.empty()) {
        throw CLI::ValidationError("--methods", "no methods given");
    }
    return methods;
}

Json dataset_json(const Dataset& d)
{
    return Json{{"samples", d.samples()}, {"features", d.features()}, {"classes", d.class_count()}};
}

bool is_usage_error(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::InvalidConfig:
    case ErrorKind::MOutOfRange:
    case ErrorKind::RemoveCountOutOfRange:
    case ErrorKind::KOutOfRange:
    case ErrorKind::InvalidReplicateCount:
    case ErrorKind::InvalidArgument:
        return true;
    default:
        return false;
    }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"ContrastFS filter feature selection"};
    app.name("contrastfs");
    app.require_subcommand(1);
    app.fallthrough();
    std::size_t threads = 0;
    app.add_option("--threads", threads, "Worker threads (default: CONTRASTFS_THREADS or all cores)")
        ->check(CLI::PositiveNumber);

    // select
    auto* select_cmd = app.add_subcommand("select", "Score every feature and keep the top m");
    InputOptions select_in;
    SelectorOptions select_opts;
    std::size_t select_m = 0;
    std::string select_output;
    std::string select_surrogate;
    bool select_no_timing = false;
    add_input_options(*select_cmd, select_in, "input", true);
    add_selector_options(*select_cmd, select_opts);
    select_cmd->add_option("--m", select_m, "Number of features to select")->required()->check(CLI::PositiveNumber);
    select_cmd->add_option("--output", select_output, "Report path; also writes <path>.indices.csv");
    select_cmd->add_option("--surrogate-out", select_surrogate, "Write the surrogate matrix (input to dedup)");
    select_cmd->add_flag("--no-timing", select_no_timing, "Write 0 as wall time for reproducible files");

    // dedup
    auto* dedup_cmd = app.add_subcommand("dedup", "Prune redundant features from a selection");
    std::string dedup_report;
    std::string dedup_surrogate;
    std::size_t dedup_remove = 0;
    std::string dedup_output;
    dedup_cmd->add_option("--report", dedup_report, "Report written by select")->required();
    dedup_cmd->add_option("--surrogate", dedup_surrogate, "Surrogate written by select --surrogate-out")->required();
    dedup_cmd->add_option("--remove", dedup_remove, "Number of features to remove")->required();
    dedup_cmd->add_option("--output", dedup_output, "Output path");

    // bootstrap
    auto* boot_cmd = app.add_subcommand("bootstrap", "Bootstrap-aggregated importance scores");
    InputOptions boot_in;
    SelectorOptions boot_opts;
    std::size_t boot_m = 0;
    std::size_t boot_replicates = 30;
    std::uint64_t boot_seed = 0;
    std::string boot_mode = "score";
    std::string boot_output;
    bool boot_no_timing = false;
    add_input_options(*boot_cmd, boot_in, "input", true);
    add_selector_options(*boot_cmd, boot_opts);
    boot_cmd->add_option("--m", boot_m, "Number of features to select (default: all)");
    boot_cmd->add_option("--replicates", boot_replicates, "Bootstrap replicates")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    boot_cmd->add_option("--seed", boot_seed, "Master seed")->capture_default_str();
    boot_cmd->add_option("--mode", boot_mode, "What to average")
        ->check(CLI::IsMember({"score", "moment"}))
        ->capture_default_str();
    boot_cmd->add_option("--output", boot_output, "Report path; also writes <path>.indices.csv");
    boot_cmd->add_flag("--no-timing", boot_no_timing, "Write 0 as wall time for reproducible files");

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "Time full-feature scoring of several methods");
    InputOptions bench_in;
    SelectorOptions bench_opts;
    std::string bench_methods = "contrastfs,fisher";
    std::size_t bench_repeats = 10;
    std::size_t bench_warmups = 2;
    std::uint64_t bench_seed = 0;
    double bench_fraction = 0.0;
    std::string bench_output;
    add_input_options(*bench_cmd, bench_in, "input", true);
    add_selector_options(*bench_cmd, bench_opts);
    bench_cmd->add_option("--methods", bench_methods, "Comma-separated methods")->capture_default_str();
    bench_cmd->add_option("--repeats", bench_repeats, "Timed runs per method")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    bench_cmd->add_option("--warmups", bench_warmups, "Untimed runs per method")->capture_default_str();
    bench_cmd->add_option("--seed", bench_seed, "Seed for the split and seeded methods")->capture_default_str();
    bench_cmd->add_option("--train-fraction", bench_fraction, "Time on a stratified train split of this size")
        ->check(CLI::Range(0.0, 1.0));
    bench_cmd->add_option("--output", bench_output, "Output path");

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "Downstream k-NN accuracy, curves and RSD tables");
    InputOptions eval_train;
    InputOptions eval_test;
    InputOptions eval_in;
    SelectorOptions eval_opts;
    std::string eval_indices;
    std::size_t eval_k = 5;
    bool eval_curve = false;
    std::string eval_sizes = "10,20,30,40,50";
    std::string eval_seeds = "0,1,2,3,4,5,6,7,8,9";
    std::string eval_methods = "contrastfs,fisher,random";
    double eval_fraction = 0.7;
    std::size_t eval_replicates = 30;
    std::string eval_output;
    eval_cmd->add_option("--train", eval_train.path, "Training set");
    eval_cmd->add_option("--test", eval_test.path, "Test set");
    eval_cmd->add_option("--train-labels", eval_train.labels, "IDX labels of the training set");
    eval_cmd->add_option("--test-labels", eval_test.labels, "IDX labels of the test set");
    add_input_options(*eval_cmd, eval_in, "input", false);
    add_selector_options(*eval_cmd, eval_opts);
    eval_cmd->add_option("--indices", eval_indices, "Selected features (one-column CSV or select report)");
    eval_cmd->add_option("--k", eval_k, "Neighbours")->check(CLI::PositiveNumber)->capture_default_str();
    eval_cmd->add_flag("--curve", eval_curve, "Run the repeated-split accuracy curve protocol on --input");
    eval_cmd->add_option("--sizes", eval_sizes, "Comma-separated subset sizes")->capture_default_str();
    eval_cmd->add_option("--seeds", eval_seeds, "Comma-separated split seeds")->capture_default_str();
    eval_cmd->add_option("--methods", eval_methods, "Comma-separated methods")->capture_default_str();
    eval_cmd->add_option("--train-fraction", eval_fraction, "Train share of each split")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    eval_cmd->add_option("--replicates", eval_replicates, "Replicates for the bootstrap method")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    eval_cmd->add_option("--output", eval_output, "Output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    if (threads > 0) {
        set_worker_count(threads);
    }

    try {
        if (select_cmd->parsed()) {
            const Dataset data = load(select_in);
            const Selection sel = select(data, make_config(select_opts, select_m));
            ImportanceReport report = sel.report;
            if (select_no_timing) {
                report.wall_time_seconds = 0.0;
            }
            emit(to_json(report, sel.indices), select_output, out);
            if (!select_output.empty()) {
                write_indices_csv(sel.indices, select_output + ".indices.csv");
            }
            if (!select_surrogate.empty()) {
                const ClassStats cs = compute_class_stats(data);
                write_json(to_json(build_surrogate(cs, compute_global_stats(cs), make_config(select_opts, select_m))),
                           select_surrogate);
            }
        } else if (dedup_cmd->parsed()) {
            const Json doc = read_json(dedup_report);
            const ImportanceReport report = report_from_json(doc);
            const auto selected = selected_from_json(doc);
            if (!selected) {
                throw Error(ErrorKind::Parse, "'" + dedup_report + "' has no \"selected\" list");
            }
            const SurrogateMatrix surrogate = surrogate_from_json(read_json(dedup_surrogate));
            if (surrogate.z.cols() != report.scores.size()) {
                throw Error(ErrorKind::ShapeMismatch, "surrogate and report describe different feature counts");
            }
            const auto profiles = discrepancy_profiles(surrogate, *selected);
            const auto survivors = prune_redundant(*selected, report, profiles, dedup_remove);
            std::vector<FeatureIndex> removed;
            for (const auto t : *selected) {
                if (std::find(survivors.begin(), survivors.end(), t) == survivors.end()) {
                    removed.push_back(t);
                }
            }
            const auto survivor_profiles = discrepancy_profiles(surrogate, survivors);
            Json j;
            j["version"] = report_format_version;
            j["input"] = *selected;
            j["removed"] = removed;
            j["selected"] = survivors;
            j["redundancy"] = survivors.size() > 1 ? Json(redundancy_scores(survivor_profiles)) : Json::array();
            emit(j, dedup_output, out);
            if (!dedup_output.empty()) {
                write_indices_csv(survivors, dedup_output + ".indices.csv");
            }
        } else if (boot_cmd->parsed()) {
            const Dataset data = load(boot_in);
            const std::size_t m = boot_m == 0 ? data.features() : boot_m;
            const SelectorConfig config = make_config(boot_opts, m);
            config.validate(data.features());
            BootstrapOptions options;
            options.replicates = boot_replicates;
            options.seed = boot_seed;
            options.mode = parse_bootstrap_mode(boot_mode);
            ImportanceReport report = bootstrap_scores(data, config, options);
            if (boot_no_timing) {
                report.wall_time_seconds = 0.0;
            }
            const auto indices = select_top_m(report, m);
            emit(to_json(report, indices), boot_output, out);
            if (!boot_output.empty()) {
                write_indices_csv(indices, boot_output + ".indices.csv");
            }
        } else if (bench_cmd->parsed()) {
            Dataset data = load(bench_in);
            if (bench_fraction > 0.0 && bench_fraction < 1.0) {
                data = split(data, {bench_seed, bench_fraction, true}).train;
            }
            const auto methods =
                parse_methods(bench_methods, make_config(bench_opts, 1), bench_seed, BootstrapOptions{});
            Json timings = Json::array();
            std::vector<TimingStats> stats;
            for (const auto& m : methods) {
                stats.push_back(time_method(m, data, bench_repeats, bench_warmups));
                timings.push_back(to_json(stats.back()));
            }
            Json speedup = Json::object();
            const auto base = std::find_if(stats.begin(), stats.end(), [](const auto& s) { return s.method == "contrastfs"; });
            if (base != stats.end()) {
                for (const auto& s : stats) {
                    speedup[s.method] = s.min / base->min;
                }
            }
            Json j;
            j["version"] = report_format_version;
            j["dataset"] = dataset_json(data);
            j["workers"] = worker_count();
            j["timings"] = std::move(timings);
            j["relative_to_contrastfs"] = std::move(speedup);
            emit(j, bench_output, out);

            err << std::left << std::setw(14) << "method" << std::right << std::setw(14) << "min [s]"
                << std::setw(14) << "mean [s]" << std::setw(12) << "relative" << '\n';
            for (const auto& s : stats) {
                err << std::left << std::setw(14) << s.method << std::right << std::setw(14) << s.min
                    << std::setw(14) << s.mean << std::setw(12)
                    << (base != stats.end() ? s.min / base->min : 0.0) << '\n';
            }
        } else if (eval_cmd->parsed()) {
            if (eval_curve) {
                if (eval_in.path.empty()) {
                    throw CLI::ValidationError("--input", "--curve needs --input");
                }
                const Dataset data = load(eval_in);
                const auto sizes = parse_list<std::size_t>(eval_sizes, "--sizes");
                const auto seeds = parse_list<std::uint64_t>(eval_seeds, "--seeds");
                BootstrapOptions boot;
                boot.replicates = eval_replicates;
                const auto methods = parse_methods(eval_methods, make_config(eval_opts, 1), 0, boot);
                const CurveStudy study = run_curve_study(data, methods, sizes, seeds, {0, eval_fraction, true}, eval_k);
                Json j;
                j["version"] = report_format_version;
                j["dataset"] = dataset_json(data);
                j["k"] = eval_k;
                j["train_fraction"] = eval_fraction;
                const Json body = to_json(study);
                j["curves"] = body.at("curves");
                j["rsd"] = body.at("rsd");
                emit(j, eval_output, out);
            } else {
                if (eval_train.path.empty() || eval_test.path.empty() || eval_indices.empty()) {
                    throw CLI::ValidationError("eval", "needs --train, --test and --indices (or --curve)");
                }
                eval_train.format = eval_test.format = eval_in.format;
                eval_train.label_col = eval_test.label_col = eval_in.label_col;
                eval_train.no_header = eval_test.no_header = eval_in.no_header;
                eval_train.delimiter = eval_test.delimiter = eval_in.delimiter;
                const Dataset train = load(eval_train);
                const Dataset test = load(eval_test, train.class_names());
                const auto indices = read_indices(eval_indices);
                const double acc = knn_accuracy(train, test, indices, eval_k);
                Json j;
                j["version"] = report_format_version;
                j["k"] = eval_k;
                j["features"] = indices;
                j["accuracy"] = acc;
                emit(j, eval_output, out);
            }
        }
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return is_usage_error(e.kind()) ? exit_usage : exit_data;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_data;
    }
    return exit_ok;
}

}  // namespace contrastfs::cli
