#ifndef DNSSQUAT_CLI_HPP
#define DNSSQUAT_CLI_HPP

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "dnssquat/analytics.hpp"
#include "dnssquat/cluster.hpp"
#include "dnssquat/config.hpp"
#include "dnssquat/evaluate.hpp"
#include "dnssquat/features.hpp"
#include "dnssquat/ingest.hpp"
#include "dnssquat/learners/ensemble.hpp"
#include "dnssquat/model_io.hpp"
#include "dnssquat/reputation.hpp"
#include "dnssquat/text_input.hpp"

namespace dnssquat::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitData = 1;
inline constexpr int kExitUsage = 2;

enum class InputKind { automatic, labeled, census };

struct RunConfig {
    std::string subcommand;
    std::string in;
    std::string out;
    std::string model;
    std::string report;
    std::string config;
    std::string suffixes;
    std::string list;
    std::string kind = "auto";
    std::optional<std::string> mode;
    std::uint64_t seed = 42;
    std::optional<double> test_fraction;
    std::size_t cv = 0;
    std::optional<std::size_t> k;
    std::size_t max_rows = 1000000;
    std::size_t sample = 3;
    unsigned threads = 1;
    std::vector<std::string> overrides;
    int verbosity = 1;
    Hyperparameters hyper;
};

class Logger {
public:
    Logger(std::ostream& err, int verbosity) : err_(err), verbosity_(verbosity) {}
    void info(const std::string& msg) const {
        if (verbosity_ >= 1) err_ << "[info] " << msg << '\n';
    }
    void debug(const std::string& msg) const {
        if (verbosity_ >= 2) err_ << "[debug] " << msg << '\n';
    }
    void warn(const std::string& msg) const { err_ << "[warn] " << msg << '\n'; }

private:
    std::ostream& err_;
    int verbosity_;
};

inline Json resolved_config_json(const RunConfig& c) {
    Json j{{"subcommand", c.subcommand},
           {"in", c.in},
           {"out", c.out},
           {"model", c.model},
           {"kind", c.kind},
           {"mode", c.mode ? *c.mode : "default"},
           {"seed", c.seed},
           {"test_fraction", c.test_fraction ? Json(*c.test_fraction) : Json("default")},
           {"cv", c.cv},
           {"max_rows", c.max_rows},
           {"threads", c.threads},
           {"config", c.config},
           {"overrides", c.overrides},
           {"hyperparameters", io_detail::to_json(c.hyper.ensemble)},
           {"kmeans", io_detail::to_json(c.hyper.kmeans)}};
    if (c.k) j["k"] = *c.k;
    return j;
}

struct Corpus {
    std::vector<DomainRecord> records;  // deduplicated
    InputKind kind = InputKind::labeled;
    NormalizeMode mode = NormalizeMode::second_level_label;
    std::string name;  // file stem, used in output names
};

inline InputKind detect_kind(const std::string& text, const std::string& requested) {
    if (requested == "labeled") return InputKind::labeled;
    if (requested == "census") return InputKind::census;
    if (requested != "auto") throw Error(ErrorKind::usage, "unknown --kind '" + requested + "' (labeled|census|auto)");
    const auto eol = text.find('\n');
    const auto first = text.substr(0, eol);
    return first.find('\t') != std::string::npos ? InputKind::census : InputKind::labeled;
}

inline Corpus read_corpus(const RunConfig& c, const Logger& log) {
    if (c.in.empty()) throw Error(ErrorKind::usage, "--in is required");
    const std::string text = read_text_file(c.in);
    Corpus corpus;
    corpus.kind = detect_kind(text, c.kind);
    corpus.name = std::filesystem::path(c.in).stem().string();
    if (auto dot = corpus.name.find('.'); dot != std::string::npos) corpus.name.erase(dot);
    corpus.mode = c.mode ? parse_normalize_mode(*c.mode)
                         : (corpus.kind == InputKind::census ? NormalizeMode::full_name : NormalizeMode::second_level_label);
    SuffixList suffixes = SuffixList::builtin();
    if (!c.suffixes.empty()) suffixes.load_file(c.suffixes);

    std::istringstream in(text);
    std::vector<DomainRecord> raw;
    if (corpus.kind == InputKind::labeled) {
        auto parsed = parse_labeled_csv(in, corpus.mode, {}, suffixes);
        for (const auto& e : parsed.errors) log.debug("line " + std::to_string(e.line) + ": " + e.message);
        if (!parsed.errors.empty()) log.warn(std::to_string(parsed.errors.size()) + " labeled rows skipped");
        log.info("labeled corpus: " + std::to_string(parsed.stats.total_rows) + " rows, " +
                 std::to_string(parsed.stats.unique_domains) + " unique domains (legit " +
                 std::to_string(parsed.stats.label_counts[0]) + ", dga " + std::to_string(parsed.stats.label_counts[1]) +
                 ")");
        raw = std::move(parsed.records);
    } else {
        auto parsed = parse_census_lines(in, c.max_rows, corpus.mode, suffixes);
        if (parsed.skipped) log.warn(std::to_string(parsed.skipped) + " malformed census lines skipped");
        log.info("census corpus: " + std::to_string(parsed.rows_consumed) + " lines read");
        raw = std::move(parsed.records);
    }
    auto deduped = dedupe(std::move(raw));
    if (!deduped.conflicts.empty())
        log.warn(std::to_string(deduped.conflicts.size()) + " domains with conflicting labels; first label kept");
    corpus.records = std::move(deduped.records);
    log.info(std::to_string(corpus.records.size()) + " unique domains, normalization mode " + to_string(corpus.mode));
    if (corpus.records.empty()) throw Error(ErrorKind::data, "no usable records in '" + c.in + "'");
    return corpus;
}

inline std::vector<int> labels_of(const std::vector<DomainRecord>& records) {
    std::vector<int> y;
    y.reserve(records.size());
    for (const auto& r : records) {
        if (!r.label) throw Error(ErrorKind::data, "corpus is not labeled");
        y.push_back(*r.label);
    }
    return y;
}

inline bool fully_labeled(const std::vector<DomainRecord>& records) {
    for (const auto& r : records)
        if (!r.label) return false;
    return true;
}

inline std::ofstream open_output(const std::string& path) {
    if (auto parent = std::filesystem::path(path).parent_path(); !parent.empty())
        std::filesystem::create_directories(parent);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::io, "cannot write '" + path + "'");
    return out;
}

inline std::string require_out(const RunConfig& c) {
    if (c.out.empty()) throw Error(ErrorKind::usage, "--out is required for '" + c.subcommand + "'");
    return c.out;
}

/// Feature CSV: reals with 6 decimals, optional trailing label column.
inline void write_features_csv(std::ostream& out, const Matrix& x, const std::vector<int>* labels) {
    for (std::size_t j = 0; j < kFeatureCount; ++j) out << (j ? "," : "") << kFeatureNames[j];
    if (labels) out << ",label";
    out << '\n' << std::fixed << std::setprecision(6);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        for (std::size_t j = 0; j < kFeatureCount; ++j) {
            if (j) out << ',';
            if (is_integer_feature(j)) out << static_cast<long long>(x(i, j));
            else out << x(i, j);
        }
        if (labels) out << ',' << (*labels)[i];
        out << '\n';
    }
}

inline int cmd_extract(const RunConfig& c, std::ostream&, const Logger& log) {
    const auto out_path = require_out(c);
    const auto corpus = read_corpus(c, log);
    const auto x = extract_batch(corpus.records, c.threads);
    auto out = open_output(out_path);
    if (fully_labeled(corpus.records)) {
        const auto y = labels_of(corpus.records);
        write_features_csv(out, x, &y);
    } else {
        write_features_csv(out, x, nullptr);
    }
    log.info("wrote " + std::to_string(x.rows()) + " feature rows to " + out_path);
    return kExitOk;
}

inline void write_histograms(const std::string& dir, const Matrix& x, const std::vector<int>& groups,
                             const std::string& corpus_name, const std::string& grouping) {
    for (std::size_t j = 0; j < kFeatureCount; ++j) {
        const auto col = x.column(j);
        const auto h = histogram_pdf(col, groups, default_binning(j, col), std::string(kFeatureNames[j]));
        auto out = open_output((std::filesystem::path(dir) / ("hist_" + std::string(kFeatureNames[j]) + "_" +
                                                              corpus_name + "_" + grouping + ".csv"))
                                   .string());
        write_histogram_csv(out, h);
    }
}

inline int cmd_analyze(const RunConfig& c, std::ostream& stdout_, const Logger& log) {
    const auto dir = require_out(c);
    const auto corpus = read_corpus(c, log);
    const auto x = extract_batch(corpus.records, c.threads);
    const bool labeled = fully_labeled(corpus.records);
    const std::vector<int> y = labeled ? labels_of(corpus.records) : std::vector<int>(x.rows(), 0);
    std::filesystem::create_directories(dir);
    const auto base = std::filesystem::path(dir);

    const auto summary = summarize(x, labeled ? std::span<const int>(y) : std::span<const int>());
    {
        auto out = open_output((base / ("summary_" + corpus.name + ".csv")).string());
        write_summary_csv(out, summary);
    }
    write_histograms(dir, x, y, corpus.name, labeled ? "by_class" : "all");
    if (labeled) {
        const auto table = correlation_table(x, y);
        auto out = open_output((base / ("correlation_" + corpus.name + ".csv")).string());
        write_correlation_csv(out, table);
        stdout_ << std::left << std::setw(48) << "Feature" << "Correlation\n";
        for (const auto& row : table) {
            stdout_ << std::left << std::setw(48) << row.feature_name;
            if (row.value) stdout_ << std::fixed << std::setprecision(3) << *row.value << '\n';
            else stdout_ << "undefined\n";
        }
    }
    log.info("analysis written to " + dir);
    return kExitOk;
}

inline Json report_to_json(const EvaluationReport& report) {
    Json rows = Json::array();
    for (const auto& r : report)
        rows.push_back({{"classifier", r.classifier},
                        {"tp", r.cm.tp},
                        {"fp", r.cm.fp},
                        {"tn", r.cm.tn},
                        {"fn", r.cm.fn},
                        {"accuracy", r.metrics.accuracy},
                        {"precision", r.metrics.precision},
                        {"recall", r.metrics.recall},
                        {"f_score", r.metrics.f_score}});
    return rows;
}

struct Prepared {
    Matrix x;
    std::vector<int> y;
    Corpus corpus;
};

inline Prepared prepare_labeled(const RunConfig& c, const Logger& log) {
    Prepared p;
    p.corpus = read_corpus(c, log);
    p.x = extract_batch(p.corpus.records, c.threads);
    p.y = labels_of(p.corpus.records);
    return p;
}

inline int cmd_train(const RunConfig& c, std::ostream& stdout_, const Logger& log) {
    const auto out_path = require_out(c);
    const auto data = prepare_labeled(c, log);
    const double fraction = c.test_fraction.value_or(0.3);
    const auto split = stratified_split(data.y, fraction, c.seed);
    const Matrix x_train = data.x.select_rows(split.train);
    const auto y_train = select<int>(data.y, split.train);
    const Matrix x_test = data.x.select_rows(split.test);
    const auto y_test = select<int>(data.y, split.test);

    const auto start = std::chrono::steady_clock::now();
    const auto model = train_ensemble(x_train, y_train, c.hyper.ensemble, c.threads);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    log.info("trained ensemble on " + std::to_string(x_train.rows()) + " rows in " + std::to_string(secs) + " s");

    const auto report = evaluate_all(model, x_test, y_test, c.threads);
    Json meta{{"split", {{"seed", c.seed}, {"test_fraction", fraction}, {"train_rows", split.train.size()},
                         {"test_rows", split.test.size()}}},
              {"corpus", {{"name", data.corpus.name}, {"mode", to_string(data.corpus.mode)}}},
              {"report", report_to_json(report)}};
    const auto info = save(model, out_path, meta);
    log.info("saved model " + out_path + " (content hash " + info.content_hash + ")");
    write_report_table(stdout_, report);
    if (!c.report.empty()) {
        auto out = open_output(c.report);
        write_report_csv(out, report);
    }
    return kExitOk;
}

inline int cmd_evaluate(const RunConfig& c, std::ostream& stdout_, const Logger& log) {
    const auto data = prepare_labeled(c, log);
    if (c.cv > 0) {
        const auto folds = stratified_folds(data.y, c.cv, c.seed);
        std::vector<EvaluationReport> reports;
        for (std::size_t f = 0; f < folds.size(); ++f) {
            const auto& s = folds[f];
            const auto model = train_ensemble(data.x.select_rows(s.train), select<int>(data.y, s.train),
                                              c.hyper.ensemble, c.threads);
            reports.push_back(evaluate_all(model, data.x.select_rows(s.test), select<int>(data.y, s.test), c.threads));
            log.info("fold " + std::to_string(f + 1) + "/" + std::to_string(folds.size()) + " done");
        }
        const auto rows = aggregate_folds(reports);
        write_cv_csv(stdout_, rows);
        if (!c.out.empty()) {
            auto out = open_output(c.out);
            write_cv_csv(out, rows);
        }
        return kExitOk;
    }

    if (c.model.empty()) throw Error(ErrorKind::usage, "--model is required unless --cv is given");
    Json meta;
    const auto model = load_ensemble(c.model, &meta);
    std::uint64_t seed = c.seed;
    double fraction = c.test_fraction.value_or(0.3);
    if (meta.contains("split")) {
        if (!c.test_fraction) fraction = meta["split"].value("test_fraction", fraction);
    }
    const auto split = stratified_split(data.y, fraction, seed);
    const auto report =
        evaluate_all(model, data.x.select_rows(split.test), select<int>(data.y, split.test), c.threads);
    write_report_table(stdout_, report);
    if (!c.out.empty()) {
        auto out = open_output(c.out);
        write_report_csv(out, report);
    }
    if (meta.contains("report") && meta.contains("split") && meta["split"].value("seed", seed + 1) == seed &&
        meta["split"].value("test_fraction", -1.0) == fraction) {
        if (meta["report"] == report_to_json(report)) log.info("metrics match those stored at training time");
        else log.warn("metrics differ from those stored at training time");
    }
    return kExitOk;
}

inline int cmd_cluster(const RunConfig& c, std::ostream& stdout_, const Logger& log) {
    const auto dir = require_out(c);
    const auto corpus = read_corpus(c, log);
    const auto x = extract_batch(corpus.records, c.threads);
    KMeansParams p = c.hyper.kmeans;
    if (c.k) p.k = *c.k;
    p.seed = c.seed;
    p.threads = c.threads;
    const auto model = kmeans_fit(x, p);
    const auto report = cluster_report(model, x, c.threads);
    std::filesystem::create_directories(dir);
    const auto base = std::filesystem::path(dir);
    {
        auto out = open_output((base / ("centroids_" + corpus.name + ".csv")).string());
        write_centroids_csv(out, report.means);
    }
    {
        auto out = open_output((base / ("sizes_" + corpus.name + ".csv")).string());
        write_sizes_csv(out, model);
    }
    const auto labels = assign(model, x, c.threads);
    write_histograms(dir, x, std::vector<int>(labels.begin(), labels.end()), corpus.name, "by_cluster");
    save(model, (base / ("cluster_" + corpus.name + ".dsmodel")).string(), fingerprint(x, {}),
         Json{{"corpus", corpus.name}, {"mode", to_string(corpus.mode)}});
    write_centroids_csv(stdout_, report.means);
    for (std::size_t k = 0; k < model.k; ++k)
        log.info("cluster " + std::to_string(k + 1) + ": " + std::to_string(model.sizes[k]) + " points");
    log.info("inertia " + std::to_string(model.inertia) + " after " + std::to_string(model.iterations_run) +
             " iterations");
    return kExitOk;
}

inline int cmd_predict(const RunConfig& c, std::ostream& stdout_, const Logger& log) {
    const auto dir = require_out(c);
    if (c.model.empty()) throw Error(ErrorKind::usage, "--model is required for 'predict'");
    const auto model = load_ensemble(c.model);
    const auto corpus = read_corpus(c, log);
    const auto x = extract_batch(corpus.records, c.threads);
    const auto preds = predict_ensemble(model, x, c.threads);
    std::filesystem::create_directories(dir);
    const auto base = std::filesystem::path(dir);
    std::vector<int> groups(preds.size());
    std::size_t flagged = 0;
    {
        auto all = open_output((base / ("predictions_" + corpus.name + ".csv")).string());
        auto bad = open_output((base / ("flagged_" + corpus.name + ".csv")).string());
        all << "domain,label,c45,knn,logreg,nb,svm\n";
        bad << "domain\n";
        for (std::size_t i = 0; i < preds.size(); ++i) {
            const auto& p = preds[i];
            groups[i] = p.label;
            all << corpus.records[i].domain_part << ',' << p.label;
            for (int v : p.votes) all << ',' << v;
            all << '\n';
            if (p.label == 1) {
                bad << corpus.records[i].domain_part << '\n';
                ++flagged;
            }
        }
    }
    write_histograms(dir, x, groups, corpus.name, "by_prediction");
    stdout_ << "domains: " << preds.size() << "\nflagged_dga: " << flagged << '\n';
    log.info(std::to_string(flagged) + " of " + std::to_string(preds.size()) + " domains flagged as DGA");
    return kExitOk;
}

inline int cmd_reputation(const RunConfig& c, std::ostream& stdout_, const Logger& log) {
    if (c.in.empty()) throw Error(ErrorKind::usage, "--in is required");
    if (c.list.empty()) throw Error(ErrorKind::usage, "--list is required for 'reputation-check'");
    const auto provider = LocalListProvider::from_file(c.list);
    std::istringstream in(read_text_file(c.in));
    std::vector<DomainRecord> flagged;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto field = detail::trim(detail::split_csv_line(line).front());
        if (first && (field == "domain" || field.empty())) {
            first = false;
            continue;
        }
        first = false;
        if (field.empty()) continue;
        flagged.push_back({field, normalize_domain(field, NormalizeMode::full_name), std::nullopt, Source::adhoc});
    }
    const std::size_t n = std::min(c.sample, flagged.size());
    const auto results = sample_and_check(flagged, n, c.seed, provider, c.threads);
    if (!c.out.empty()) {
        auto out = open_output(c.out);
        write_reputation_csv(out, results);
    }
    write_reputation_csv(stdout_, results);
    std::size_t suspicious = 0;
    for (const auto& r : results) suspicious += r.verdict == Verdict::suspicious;
    log.info(std::to_string(suspicious) + " of " + std::to_string(results.size()) + " sampled domains scored below " +
             std::to_string(kDefaultReputationThreshold));
    return kExitOk;
}

inline void add_common_options(CLI::App& sub, RunConfig& c) {
    sub.add_option("--in", c.in, "Input corpus (CSV, census TSV, optionally gzip)");
    sub.add_option("--out", c.out, "Output file or directory");
    sub.add_option("--mode", c.mode, "Normalization mode: full|sld");
    sub.add_option("--kind", c.kind, "Input kind: labeled|census|auto")->default_val("auto");
    sub.add_option("--seed", c.seed, "Seed for every random choice")->default_val(42);
    sub.add_option("--max-rows", c.max_rows, "Census lines to read")->default_val(1000000);
    sub.add_option("--threads", c.threads, "Worker cap")->default_val(1)->check(CLI::Range(1u, 1024u));
    sub.add_option("--config", c.config, "key=value hyperparameter file");
    sub.add_option("--set", c.overrides, "Hyperparameter override key=value (repeatable)");
    sub.add_option("--suffixes", c.suffixes, "Extra multi-part public suffixes, one per line");
    sub.add_flag("-v,--verbose", [&c](std::int64_t n) { c.verbosity = 1 + static_cast<int>(n); }, "More logging");
    sub.add_flag("-q,--quiet", [&c](std::int64_t) { c.verbosity = 0; }, "Only warnings and errors");
}

inline std::string usage_text(CLI::App& app) { return app.help(); }

/// Entry point for the dnssquat executable. Logs go to `err`, results to `out`.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    RunConfig c;
    CLI::App app{"dnssquat: lexical DGA / typosquatting domain detection"};
    app.require_subcommand(1, 1);
    app.set_help_all_flag("--help-all", "Help for every subcommand");

    auto* extract = app.add_subcommand("extract", "Write the eight lexical features of a corpus as CSV");
    auto* analyze = app.add_subcommand("analyze", "Feature statistics, density histograms and label correlations");
    auto* train = app.add_subcommand("train", "Train the five-member majority-vote ensemble");
    auto* evaluate = app.add_subcommand("evaluate", "Evaluate a saved ensemble (or cross-validate with --cv)");
    auto* cluster = app.add_subcommand("cluster", "K-means on an unlabeled corpus");
    auto* predict = app.add_subcommand("predict", "Apply a saved ensemble to an unlabeled corpus");
    auto* reputation = app.add_subcommand("reputation-check", "Spot-check flagged domains against a reputation list");

    for (auto* sub : {extract, analyze, train, evaluate, cluster, predict, reputation}) add_common_options(*sub, c);
    for (auto* sub : {evaluate, predict}) sub->add_option("--model", c.model, "Saved .dsmodel ensemble");
    for (auto* sub : {train, evaluate}) {
        sub->add_option("--test-fraction", c.test_fraction, "Held-out fraction for the stratified split");
        sub->add_option("--k", c.k, "Neighbours for K-NN");
    }
    train->add_option("--report", c.report, "Also write the held-out report CSV here");
    evaluate->add_option("--cv", c.cv, "Stratified k-fold cross-validation instead of a saved model");
    cluster->add_option("--k", c.k, "Number of clusters");
    reputation->add_option("--list", c.list, "Local bad-domain list, one per line");
    reputation->add_option("--n", c.sample, "Number of flagged domains to sample")->default_val(3);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error[usage]: " << e.what() << "\n\n" << usage_text(app);
        return kExitUsage;
    }
    for (auto* sub : app.get_subcommands()) c.subcommand = sub->get_name();

    const Logger log(err, c.verbosity);
    try {
        if (!c.config.empty()) load_config_file(c.hyper, c.config);
        for (const auto& o : c.overrides) apply_assignment(c.hyper, o);
        if (c.k) {
            if (c.subcommand == "cluster") c.hyper.kmeans.k = *c.k;
            else c.hyper.ensemble.knn.k = static_cast<int>(*c.k);
        }
        log.info("resolved config " + resolved_config_json(c).dump());

        if (c.subcommand == "extract") return cmd_extract(c, out, log);
        if (c.subcommand == "analyze") return cmd_analyze(c, out, log);
        if (c.subcommand == "train") return cmd_train(c, out, log);
        if (c.subcommand == "evaluate") return cmd_evaluate(c, out, log);
        if (c.subcommand == "cluster") return cmd_cluster(c, out, log);
        if (c.subcommand == "predict") return cmd_predict(c, out, log);
        if (c.subcommand == "reputation-check") return cmd_reputation(c, out, log);
    } catch (const Error& e) {
        err << "error[" << to_string(e.kind()) << "]: " << e.what() << '\n';
        return e.kind() == ErrorKind::usage ? kExitUsage : kExitData;
    } catch (const std::exception& e) {
        err << "error[internal]: " << e.what() << '\n';
        return kExitData;
    }
    err << "error[usage]: unknown subcommand\n\n" << usage_text(app);
    return kExitUsage;
}

}  // namespace dnssquat::cli

#endif  // DNSSQUAT_CLI_HPP
