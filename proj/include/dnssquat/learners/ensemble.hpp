#ifndef DNSSQUAT_LEARNERS_ENSEMBLE_HPP
#define DNSSQUAT_LEARNERS_ENSEMBLE_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <future>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "dnssquat/common.hpp"
#include "dnssquat/learners/decision_tree.hpp"
#include "dnssquat/learners/knn.hpp"
#include "dnssquat/learners/linear_svm.hpp"
#include "dnssquat/learners/logistic_regression.hpp"
#include "dnssquat/learners/naive_bayes.hpp"
#include "dnssquat/learners/standardizer.hpp"

namespace dnssquat {

enum class ModelKind { c45, knn, logreg, nb, svm };

inline constexpr std::array<ModelKind, 5> kMemberKinds = {ModelKind::c45, ModelKind::knn, ModelKind::logreg,
                                                          ModelKind::nb, ModelKind::svm};

inline const char* to_string(ModelKind k) {
    switch (k) {
        case ModelKind::c45: return "c45";
        case ModelKind::knn: return "knn";
        case ModelKind::logreg: return "logreg";
        case ModelKind::nb: return "nb";
        case ModelKind::svm: return "svm";
    }
    return "unknown";
}

/// Report labels in the layout of the usual comparison table.
inline const char* display_name(ModelKind k) {
    switch (k) {
        case ModelKind::c45: return "C4.5";
        case ModelKind::knn: return "K-NN";
        case ModelKind::logreg: return "LR";
        case ModelKind::nb: return "NB";
        case ModelKind::svm: return "SVM";
    }
    return "?";
}

inline ModelKind parse_model_kind(std::string_view s) {
    for (auto k : kMemberKinds)
        if (s == to_string(k)) return k;
    throw Error(ErrorKind::model_kind, "unknown model kind '" + std::string(s) + "'");
}

/// Distance and margin learners see standardized features; the tree and naive Bayes see raw ones.
constexpr bool uses_standardizer(ModelKind k) {
    return k == ModelKind::knn || k == ModelKind::logreg || k == ModelKind::svm;
}

/// Identifies the data a model was trained on.
struct Fingerprint {
    std::size_t rows = 0;
    std::string hash;

    friend bool operator==(const Fingerprint&, const Fingerprint&) = default;
};

inline Fingerprint fingerprint(const Matrix& x, std::span<const int> y) {
    Fnv1a h;
    h.update_value(x.rows());
    h.update_value(x.cols());
    for (double v : x.data()) h.update_value(v);
    for (int v : y) h.update_value(v);
    return {x.rows(), h.hex()};
}

struct EnsembleParams {
    TreeParams tree;
    KnnParams knn;
    LogRegParams logreg;
    NaiveBayesParams nb;
    SvmParams svm;

    friend bool operator==(const EnsembleParams&, const EnsembleParams&) = default;
};

/// One trained classifier of any kind.
struct BaseModel {
    using Impl = std::variant<DecisionTree, KnnModel, LogisticModel, NaiveBayesModel, LinearSvmModel>;

    ModelKind kind = ModelKind::c45;
    Impl impl;
    Fingerprint trained_on;
    std::optional<Standardizer> standardizer;  // present iff uses_standardizer(kind)

    /// Prediction on features already in the model's input space.
    int predict_prepared(std::span<const double> x) const {
        return std::visit([&](const auto& m) { return m.predict(x); }, impl);
    }
};

namespace detail {

inline void check_finite(std::span<const double> fv) {
    for (double v : fv)
        if (!std::isfinite(v)) throw Error(ErrorKind::data, "prediction: non-finite feature value");
}

inline void check_binary_labels(const Matrix& x, std::span<const int> y) {
    if (x.empty()) throw Error(ErrorKind::data, "training: empty data");
    if (x.rows() != y.size()) throw Error(ErrorKind::data, "training: label count does not match row count");
    for (int v : y)
        if (v != 0 && v != 1) throw Error(ErrorKind::data, "training: labels must be 0 or 1");
}

}  // namespace detail

/// Prediction on raw features; standardizes internally when the model needs it.
inline int predict_base(const BaseModel& model, std::span<const double> fv) {
    detail::check_finite(fv);
    if (model.standardizer) return model.predict_prepared(model.standardizer->transform(fv));
    return model.predict_prepared(fv);
}

inline std::vector<int> predict_base(const BaseModel& model, const Matrix& x, unsigned threads = 1) {
    std::vector<int> out(x.rows());
    parallel_for(x.rows(), threads, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) out[i] = predict_base(model, x.row(i));
    });
    return out;
}

/// Trains one member. `standardized` must be `standardizer` applied to `raw`.
inline BaseModel train_member(ModelKind kind, const Matrix& raw, const Matrix& standardized, std::span<const int> y,
                              const Standardizer& standardizer, const EnsembleParams& p, const Fingerprint& fp) {
    BaseModel m;
    m.kind = kind;
    m.trained_on = fp;
    if (uses_standardizer(kind)) m.standardizer = standardizer;
    switch (kind) {
        case ModelKind::c45: m.impl = DecisionTree::train(raw, y, p.tree); break;
        case ModelKind::knn: m.impl = KnnModel::train(standardized, std::vector<int>(y.begin(), y.end()), p.knn); break;
        case ModelKind::logreg: m.impl = LogisticModel::train(standardized, y, p.logreg); break;
        case ModelKind::nb: m.impl = NaiveBayesModel::train(raw, y, p.nb); break;
        case ModelKind::svm: m.impl = LinearSvmModel::train(standardized, y, p.svm); break;
    }
    return m;
}

/// Trains a single standalone classifier (with its own standardizer when needed).
inline BaseModel train_base(ModelKind kind, const Matrix& x, std::span<const int> y, const EnsembleParams& p = {}) {
    detail::check_binary_labels(x, y);
    const auto st = Standardizer::fit(x);
    const Matrix z = uses_standardizer(kind) ? st.apply(x) : Matrix();
    return train_member(kind, x, z, y, st, p, fingerprint(x, y));
}

inline constexpr int kEnsembleVersion = 1;

struct EnsembleModel {
    std::array<BaseModel, 5> members;  // in kMemberKinds order
    Standardizer standardizer;
    EnsembleParams params;
    int version = kEnsembleVersion;

    const Fingerprint& trained_on() const { return members[0].trained_on; }
};

/// Label chosen by at least three of five votes.
inline int majority_vote(const std::array<int, 5>& votes) {
    int ones = 0;
    for (int v : votes) ones += v;
    return ones >= 3 ? 1 : 0;
}

struct EnsemblePrediction {
    int label = 0;
    std::array<int, 5> votes{};  // in kMemberKinds order
};

inline EnsemblePrediction predict_ensemble(const EnsembleModel& model, std::span<const double> fv) {
    detail::check_finite(fv);
    const auto z = model.standardizer.transform(fv);
    EnsemblePrediction out;
    for (std::size_t i = 0; i < model.members.size(); ++i) {
        const auto& m = model.members[i];
        out.votes[i] = m.predict_prepared(uses_standardizer(m.kind) ? std::span<const double>(z) : fv);
    }
    out.label = majority_vote(out.votes);
    return out;
}

inline std::vector<EnsemblePrediction> predict_ensemble(const EnsembleModel& model, const Matrix& x,
                                                        unsigned threads = 1) {
    std::vector<EnsemblePrediction> out(x.rows());
    parallel_for(x.rows(), threads, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) out[i] = predict_ensemble(model, x.row(i));
    });
    return out;
}

/// Fits the shared standardizer, then all five members on the same data.
/// A member failure is rethrown naming the member.
inline EnsembleModel train_ensemble(const Matrix& x, std::span<const int> y, const EnsembleParams& p = {},
                                    unsigned threads = 1) {
    detail::check_binary_labels(x, y);
    bool has0 = false, has1 = false;
    for (int v : y) (v == 1 ? has1 : has0) = true;
    if (!has0 || !has1) throw Error(ErrorKind::data, "ensemble: both classes must be present");

    EnsembleModel model;
    model.params = p;
    model.standardizer = Standardizer::fit(x);
    const Matrix z = model.standardizer.apply(x);
    const Fingerprint fp = fingerprint(x, y);

    auto train_one = [&](std::size_t i) {
        try {
            return train_member(kMemberKinds[i], x, z, y, model.standardizer, p, fp);
        } catch (const Error& e) {
            throw Error(e.kind(), std::string("ensemble member ") + to_string(kMemberKinds[i]) + ": " + e.what());
        }
    };
    if (threads <= 1) {
        for (std::size_t i = 0; i < 5; ++i) model.members[i] = train_one(i);
    } else {
        std::array<std::future<BaseModel>, 5> jobs;
        for (std::size_t i = 0; i < 5; ++i) jobs[i] = std::async(std::launch::async, train_one, i);
        for (std::size_t i = 0; i < 5; ++i) model.members[i] = jobs[i].get();
    }
    return model;
}

}  // namespace dnssquat

#endif  // DNSSQUAT_LEARNERS_ENSEMBLE_HPP
