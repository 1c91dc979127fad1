#ifndef DNSSQUAT_CONFIG_HPP
#define DNSSQUAT_CONFIG_HPP

#include <charconv>
#include <fstream>
#include <istream>
#include <string>
#include <string_view>

#include "dnssquat/cluster.hpp"
#include "dnssquat/common.hpp"
#include "dnssquat/ingest.hpp"
#include "dnssquat/learners/ensemble.hpp"

namespace dnssquat {

/// Every tunable of the pipeline. Settable through "key=value" lines.
struct Hyperparameters {
    EnsembleParams ensemble;
    KMeansParams kmeans;
};

namespace detail {

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
    T value{};
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end)
        throw Error(ErrorKind::usage, "bad value '" + std::string(text) + "' for '" + std::string(key) + "'");
    return value;
}

inline bool parse_bool(std::string_view key, std::string_view text) {
    const auto v = lower(std::string(text));
    if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
    if (v == "0" || v == "false" || v == "no" || v == "off") return false;
    throw Error(ErrorKind::usage, "bad boolean '" + std::string(text) + "' for '" + std::string(key) + "'");
}

}  // namespace detail

inline void apply_setting(Hyperparameters& h, std::string_view key, std::string_view value) {
    using detail::parse_bool;
    using detail::parse_number;
    auto& e = h.ensemble;
    if (key == "c45.max_depth") e.tree.max_depth = parse_number<int>(key, value);
    else if (key == "c45.min_leaf") e.tree.min_leaf = parse_number<int>(key, value);
    else if (key == "c45.prune") e.tree.prune = parse_bool(key, value);
    else if (key == "c45.confidence") e.tree.confidence = parse_number<double>(key, value);
    else if (key == "knn.k") e.knn.k = parse_number<int>(key, value);
    else if (key == "logreg.learning_rate") e.logreg.learning_rate = parse_number<double>(key, value);
    else if (key == "logreg.epochs") e.logreg.epochs = parse_number<int>(key, value);
    else if (key == "logreg.l2") e.logreg.l2 = parse_number<double>(key, value);
    else if (key == "logreg.tol") e.logreg.tol = parse_number<double>(key, value);
    else if (key == "nb.var_smoothing") e.nb.var_smoothing = parse_number<double>(key, value);
    else if (key == "svm.lambda") e.svm.lambda = parse_number<double>(key, value);
    else if (key == "svm.epochs") e.svm.epochs = parse_number<int>(key, value);
    else if (key == "svm.seed") e.svm.seed = parse_number<std::uint64_t>(key, value);
    else if (key == "kmeans.k") h.kmeans.k = parse_number<std::size_t>(key, value);
    else if (key == "kmeans.seed") h.kmeans.seed = parse_number<std::uint64_t>(key, value);
    else if (key == "kmeans.max_iter") h.kmeans.max_iter = parse_number<int>(key, value);
    else if (key == "kmeans.tol") h.kmeans.tol = parse_number<double>(key, value);
    else if (key == "kmeans.n_restarts") h.kmeans.n_restarts = parse_number<int>(key, value);
    else throw Error(ErrorKind::usage, "unknown setting '" + std::string(key) + "'");

    if (e.tree.confidence <= 0 || e.tree.confidence >= 1) throw Error(ErrorKind::usage, "c45.confidence must be in (0, 1)");
    if (e.knn.k < 1) throw Error(ErrorKind::usage, "knn.k must be positive");
}

/// "key=value" assignment as given on the command line.
inline void apply_assignment(Hyperparameters& h, std::string_view line) {
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw Error(ErrorKind::usage, "expected key=value, got '" + std::string(line) + "'");
    apply_setting(h, detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
}

/// Config file: one key=value per line, '#' comments.
inline void load_config(Hyperparameters& h, std::istream& in) {
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (detail::trim(line).empty()) continue;
        apply_assignment(h, line);
    }
}

inline void load_config_file(Hyperparameters& h, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::io, "cannot open config '" + path + "'");
    load_config(h, in);
}

}  // namespace dnssquat

#endif  // DNSSQUAT_CONFIG_HPP
