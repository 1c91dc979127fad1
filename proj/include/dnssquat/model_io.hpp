#ifndef DNSSQUAT_MODEL_IO_HPP
#define DNSSQUAT_MODEL_IO_HPP

// .dsmodel files: a JSON document
//   { "format": "dsmodel", "format_version": N, "kind": "...",
//     "params": {...}, "fingerprint": {"rows": n, "hash": "..."},
//     "metadata": {...}, "payload": {...}, "content_hash": "<fnv1a64 hex>" }
// content_hash covers the serialization of every other member.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "dnssquat/cluster.hpp"
#include "dnssquat/common.hpp"
#include "dnssquat/learners/ensemble.hpp"

namespace dnssquat {

inline constexpr int kModelFormatVersion = 1;

using Json = nlohmann::json;

struct ModelFileInfo {
    int format_version = kModelFormatVersion;
    std::string kind;
    Fingerprint fingerprint;
    std::string content_hash;
};

namespace io_detail {

inline Json to_json(const Matrix& m) {
    return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", m.data()}};
}

inline Matrix matrix_from_json(const Json& j) {
    const auto rows = j.at("rows").get<std::size_t>();
    const auto cols = j.at("cols").get<std::size_t>();
    const auto data = j.at("data").get<std::vector<double>>();
    if (data.size() != rows * cols) throw Error(ErrorKind::model_corrupt, "matrix payload has wrong size");
    Matrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = data[r * cols + c];
    return m;
}

inline Json to_json(const EnsembleParams& p) {
    return Json{
        {"c45", {{"max_depth", p.tree.max_depth}, {"min_leaf", p.tree.min_leaf}, {"prune", p.tree.prune},
                 {"confidence", p.tree.confidence}}},
        {"knn", {{"k", p.knn.k}}},
        {"logreg", {{"learning_rate", p.logreg.learning_rate}, {"epochs", p.logreg.epochs}, {"l2", p.logreg.l2},
                    {"tol", p.logreg.tol}}},
        {"nb", {{"var_smoothing", p.nb.var_smoothing}}},
        {"svm", {{"lambda", p.svm.lambda}, {"epochs", p.svm.epochs}, {"seed", p.svm.seed}}},
    };
}

inline EnsembleParams params_from_json(const Json& j) {
    EnsembleParams p;
    const auto& t = j.at("c45");
    p.tree = {t.at("max_depth").get<int>(), t.at("min_leaf").get<int>(), t.at("prune").get<bool>(),
              t.at("confidence").get<double>()};
    p.knn.k = j.at("knn").at("k").get<int>();
    const auto& l = j.at("logreg");
    p.logreg = {l.at("learning_rate").get<double>(), l.at("epochs").get<int>(), l.at("l2").get<double>(),
                l.at("tol").get<double>()};
    p.nb.var_smoothing = j.at("nb").at("var_smoothing").get<double>();
    const auto& s = j.at("svm");
    p.svm = {s.at("lambda").get<double>(), s.at("epochs").get<int>(), s.at("seed").get<std::uint64_t>()};
    return p;
}

inline Json to_json(const KMeansParams& p) {
    return Json{{"k", p.k}, {"seed", p.seed}, {"max_iter", p.max_iter}, {"tol", p.tol}, {"n_restarts", p.n_restarts}};
}

inline KMeansParams kmeans_params_from_json(const Json& j) {
    KMeansParams p;
    p.k = j.at("k").get<std::size_t>();
    p.seed = j.at("seed").get<std::uint64_t>();
    p.max_iter = j.at("max_iter").get<int>();
    p.tol = j.at("tol").get<double>();
    p.n_restarts = j.at("n_restarts").get<int>();
    return p;
}

inline Json to_json(const Standardizer& s) { return Json{{"mean", s.mean()}, {"std", s.std()}}; }

inline Standardizer standardizer_from_json(const Json& j) {
    return {j.at("mean").get<std::vector<double>>(), j.at("std").get<std::vector<double>>()};
}

inline Json to_json(const Fingerprint& f) { return Json{{"rows", f.rows}, {"hash", f.hash}}; }
inline Fingerprint fingerprint_from_json(const Json& j) {
    return {j.at("rows").get<std::size_t>(), j.at("hash").get<std::string>()};
}

inline Json impl_to_json(const BaseModel::Impl& impl) {
    struct Visitor {
        Json operator()(const DecisionTree& t) const {
            Json nodes = Json::array();
            for (const auto& n : t.nodes())
                nodes.push_back({n.feature, n.threshold, n.left, n.right, n.label, n.counts[0], n.counts[1]});
            return Json{{"nodes", nodes}};
        }
        Json operator()(const KnnModel& m) const {
            return Json{{"k", m.k()}, {"points", to_json(m.points())}, {"labels", m.labels()}};
        }
        Json operator()(const LogisticModel& m) const {
            return Json{{"weights", m.weights()}, {"bias", m.bias()}, {"epochs_run", m.epochs_run()}};
        }
        Json operator()(const NaiveBayesModel& m) const {
            Json classes = Json::array();
            for (const auto& c : m.classes()) classes.push_back({{"prior", c.prior}, {"mean", c.mean}, {"var", c.var}});
            return Json{{"var_floor", m.var_floor()}, {"classes", classes}};
        }
        Json operator()(const LinearSvmModel& m) const { return Json{{"weights", m.weights()}, {"bias", m.bias()}}; }
    };
    return std::visit(Visitor{}, impl);
}

inline BaseModel::Impl impl_from_json(ModelKind kind, const Json& j) {
    switch (kind) {
        case ModelKind::c45: {
            std::vector<DecisionTree::Node> nodes;
            for (const auto& a : j.at("nodes")) {
                DecisionTree::Node n;
                n.feature = a.at(0).get<int>();
                n.threshold = a.at(1).get<double>();
                n.left = a.at(2).get<int>();
                n.right = a.at(3).get<int>();
                n.label = a.at(4).get<int>();
                n.counts = {a.at(5).get<int>(), a.at(6).get<int>()};
                nodes.push_back(n);
            }
            const auto count = static_cast<int>(nodes.size());
            if (nodes.empty()) throw Error(ErrorKind::model_corrupt, "decision tree without nodes");
            for (const auto& n : nodes)
                if (!n.is_leaf() && (n.left <= 0 || n.right <= 0 || n.left >= count || n.right >= count))
                    throw Error(ErrorKind::model_corrupt, "decision tree with dangling child link");
            return DecisionTree(std::move(nodes));
        }
        case ModelKind::knn:
            return KnnModel::train(matrix_from_json(j.at("points")), j.at("labels").get<std::vector<int>>(),
                                   KnnParams{j.at("k").get<int>()});
        case ModelKind::logreg:
            return LogisticModel(j.at("weights").get<std::vector<double>>(), j.at("bias").get<double>(),
                                 j.at("epochs_run").get<int>());
        case ModelKind::nb: {
            std::array<NaiveBayesModel::ClassStats, 2> classes;
            const auto& cs = j.at("classes");
            if (cs.size() != 2) throw Error(ErrorKind::model_corrupt, "naive bayes needs exactly two classes");
            for (std::size_t k = 0; k < 2; ++k)
                classes[k] = {cs[k].at("prior").get<double>(), cs[k].at("mean").get<std::vector<double>>(),
                              cs[k].at("var").get<std::vector<double>>()};
            return NaiveBayesModel(std::move(classes), j.at("var_floor").get<double>());
        }
        case ModelKind::svm:
            return LinearSvmModel(j.at("weights").get<std::vector<double>>(), j.at("bias").get<double>());
    }
    throw Error(ErrorKind::model_corrupt, "unknown base model kind");
}

inline Json base_to_json(const BaseModel& m) {
    return Json{{"kind", to_string(m.kind)},
                {"model", impl_to_json(m.impl)},
                {"standardizer", m.standardizer ? to_json(*m.standardizer) : Json()},
                {"trained_on", to_json(m.trained_on)}};
}

inline BaseModel base_from_json(const Json& j) {
    BaseModel m;
    m.kind = parse_model_kind(j.at("kind").get<std::string>());
    m.impl = impl_from_json(m.kind, j.at("model"));
    if (!j.at("standardizer").is_null()) m.standardizer = standardizer_from_json(j.at("standardizer"));
    m.trained_on = fingerprint_from_json(j.at("trained_on"));
    return m;
}

inline std::string content_hash(const Json& doc) {
    Json copy = doc;
    copy.erase("content_hash");
    Fnv1a h;
    h.update(copy.dump());
    return h.hex();
}

inline Json envelope(const std::string& kind, Json params, const Fingerprint& fp, Json payload, Json metadata) {
    Json doc{{"format", "dsmodel"},
             {"format_version", kModelFormatVersion},
             {"kind", kind},
             {"params", std::move(params)},
             {"fingerprint", to_json(fp)},
             {"metadata", metadata.is_null() ? Json::object() : std::move(metadata)},
             {"payload", std::move(payload)}};
    doc["content_hash"] = content_hash(doc);
    return doc;
}

/// Parses and validates the envelope; returns the document.
inline Json open_document(const std::string& text, const std::string& expected_kind) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::exception& e) {
        throw Error(ErrorKind::model_corrupt, std::string("model file is not valid JSON (truncated or corrupt): ") + e.what());
    }
    if (!doc.is_object() || doc.value("format", "") != "dsmodel")
        throw Error(ErrorKind::model_corrupt, "not a .dsmodel document");
    if (!doc.contains("format_version") || !doc["format_version"].is_number_integer())
        throw Error(ErrorKind::model_corrupt, "model file lacks a format_version");
    const int version = doc["format_version"].get<int>();
    if (version != kModelFormatVersion)
        throw Error(ErrorKind::model_version, "model file has format version " + std::to_string(version) +
                                                  " but this build reads version " + std::to_string(kModelFormatVersion));
    const auto kind = doc.value("kind", "");
    if (kind != expected_kind)
        throw Error(ErrorKind::model_kind, "model file holds a '" + kind + "' model, expected '" + expected_kind + "'");
    if (!doc.contains("content_hash") || !doc["content_hash"].is_string() ||
        doc["content_hash"].get<std::string>() != content_hash(doc))
        throw Error(ErrorKind::model_corrupt, "model content hash mismatch (corrupt payload)");
    return doc;
}

template <typename F>
auto decode(F&& f) {
    try {
        return f();
    } catch (const Json::exception& e) {
        throw Error(ErrorKind::model_corrupt, std::string("malformed model payload: ") + e.what());
    }
}

inline ModelFileInfo info_of(const Json& doc) {
    return {doc.at("format_version").get<int>(), doc.at("kind").get<std::string>(),
            fingerprint_from_json(doc.at("fingerprint")), doc.at("content_hash").get<std::string>()};
}

}  // namespace io_detail

// In-memory encoders. Output is byte-deterministic for identical models.

inline std::string encode(const EnsembleModel& m, const Json& metadata = {}) {
    Json members = Json::array();
    for (const auto& b : m.members) {
        Json j = io_detail::base_to_json(b);
        j.erase("standardizer");  // shared
        members.push_back(std::move(j));
    }
    Json payload{{"version", m.version}, {"standardizer", io_detail::to_json(m.standardizer)}, {"members", members}};
    return io_detail::envelope("ensemble", io_detail::to_json(m.params), m.trained_on(), std::move(payload), metadata)
        .dump();
}

inline std::string encode(const BaseModel& m, const EnsembleParams& params = {}, const Json& metadata = {}) {
    return io_detail::envelope("base", io_detail::to_json(params), m.trained_on, io_detail::base_to_json(m),
                               metadata)
        .dump();
}

inline std::string encode(const Standardizer& s, const Json& metadata = {}) {
    return io_detail::envelope("standardizer", Json::object(), Fingerprint{}, io_detail::to_json(s), metadata).dump();
}

inline std::string encode(const ClusterModel& m, const Fingerprint& fp = {}, const Json& metadata = {}) {
    Json payload{{"k", m.k},
                 {"centroids", io_detail::to_json(m.centroids)},
                 {"sizes", m.sizes},
                 {"inertia", m.inertia},
                 {"seed", m.seed},
                 {"iterations_run", m.iterations_run},
                 {"inertia_trace", m.inertia_trace}};
    return io_detail::envelope("cluster", io_detail::to_json(m.params), fp, std::move(payload), metadata).dump();
}

inline EnsembleModel decode_ensemble(const std::string& text, Json* metadata = nullptr) {
    const Json doc = io_detail::open_document(text, "ensemble");
    return io_detail::decode([&] {
        EnsembleModel m;
        m.params = io_detail::params_from_json(doc.at("params"));
        const auto& p = doc.at("payload");
        m.version = p.at("version").get<int>();
        m.standardizer = io_detail::standardizer_from_json(p.at("standardizer"));
        const auto& members = p.at("members");
        if (members.size() != 5) throw Error(ErrorKind::model_corrupt, "ensemble must have exactly five members");
        for (std::size_t i = 0; i < 5; ++i) {
            Json j = members[i];
            j["standardizer"] = nullptr;
            auto b = io_detail::base_from_json(j);
            if (b.kind != kMemberKinds[i]) throw Error(ErrorKind::model_corrupt, "ensemble members out of order");
            if (uses_standardizer(b.kind)) b.standardizer = m.standardizer;
            m.members[i] = std::move(b);
        }
        if (metadata) *metadata = doc.at("metadata");
        return m;
    });
}

inline BaseModel decode_base(const std::string& text, Json* metadata = nullptr) {
    const Json doc = io_detail::open_document(text, "base");
    return io_detail::decode([&] {
        if (metadata) *metadata = doc.at("metadata");
        return io_detail::base_from_json(doc.at("payload"));
    });
}

inline Standardizer decode_standardizer(const std::string& text) {
    const Json doc = io_detail::open_document(text, "standardizer");
    return io_detail::decode([&] { return io_detail::standardizer_from_json(doc.at("payload")); });
}

inline ClusterModel decode_cluster(const std::string& text, Json* metadata = nullptr) {
    const Json doc = io_detail::open_document(text, "cluster");
    return io_detail::decode([&] {
        ClusterModel m;
        m.params = io_detail::kmeans_params_from_json(doc.at("params"));
        const auto& p = doc.at("payload");
        m.k = p.at("k").get<std::size_t>();
        m.centroids = io_detail::matrix_from_json(p.at("centroids"));
        m.sizes = p.at("sizes").get<std::vector<std::size_t>>();
        m.inertia = p.at("inertia").get<double>();
        m.seed = p.at("seed").get<std::uint64_t>();
        m.iterations_run = p.at("iterations_run").get<int>();
        m.inertia_trace = p.at("inertia_trace").get<std::vector<double>>();
        if (m.centroids.rows() != m.k || m.sizes.size() != m.k)
            throw Error(ErrorKind::model_corrupt, "cluster model dimensions disagree");
        if (metadata) *metadata = doc.at("metadata");
        return m;
    });
}

/// Reads only the envelope of a model file.
inline ModelFileInfo inspect(const std::string& text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::exception& e) {
        throw Error(ErrorKind::model_corrupt, std::string("model file is not valid JSON: ") + e.what());
    }
    const auto kind = doc.value("kind", "");
    io_detail::open_document(text, kind);
    return io_detail::info_of(doc);
}

/// Writes via a temporary file and rename, so readers never see a partial file.
inline void write_file_atomic(const std::string& path, const std::string& contents) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorKind::io, "cannot write '" + tmp.string() + "'");
        out << contents;
        out.flush();
        if (!out) throw Error(ErrorKind::io, "write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) throw Error(ErrorKind::io, "cannot rename '" + tmp.string() + "' to '" + path + "': " + ec.message());
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::io, "cannot open '" + path + "'");
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

template <typename Model, typename... Extra>
ModelFileInfo save(const Model& model, const std::string& path, const Extra&... extra) {
    const auto text = encode(model, extra...);
    write_file_atomic(path, text);
    return io_detail::info_of(Json::parse(text));
}

inline EnsembleModel load_ensemble(const std::string& path, Json* metadata = nullptr) {
    return decode_ensemble(read_file(path), metadata);
}
inline BaseModel load_base(const std::string& path, Json* metadata = nullptr) {
    return decode_base(read_file(path), metadata);
}
inline Standardizer load_standardizer(const std::string& path) { return decode_standardizer(read_file(path)); }
inline ClusterModel load_cluster(const std::string& path, Json* metadata = nullptr) {
    return decode_cluster(read_file(path), metadata);
}

}  // namespace dnssquat

#endif  // DNSSQUAT_MODEL_IO_HPP
