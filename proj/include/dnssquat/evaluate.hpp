#ifndef DNSSQUAT_EVALUATE_HPP
#define DNSSQUAT_EVALUATE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "dnssquat/common.hpp"
#include "dnssquat/learners/ensemble.hpp"

namespace dnssquat {

/// Positive class is DGA (label 1).
struct ConfusionMatrix {
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;

    std::size_t total() const noexcept { return tp + fp + tn + fn; }
    friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

struct Metrics {
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f_score = 0.0;
    bool precision_undefined = false;  // tp + fp == 0
    bool recall_undefined = false;     // tp + fn == 0

    friend bool operator==(const Metrics&, const Metrics&) = default;
};

inline ConfusionMatrix confusion(std::span<const int> predictions, std::span<const int> truths) {
    if (predictions.empty()) throw Error(ErrorKind::data, "confusion: empty input");
    if (predictions.size() != truths.size()) throw Error(ErrorKind::data, "confusion: length mismatch");
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const bool p = predictions[i] == 1, t = truths[i] == 1;
        if (p && t) ++cm.tp;
        else if (p) ++cm.fp;
        else if (t) ++cm.fn;
        else ++cm.tn;
    }
    return cm;
}

/// Zero denominators give 0 and set the matching *_undefined flag.
inline Metrics metrics(const ConfusionMatrix& cm) {
    if (cm.total() == 0) throw Error(ErrorKind::data, "metrics: empty confusion matrix");
    Metrics m;
    m.accuracy = static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total());
    if (cm.tp + cm.fp == 0) m.precision_undefined = true;
    else m.precision = static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fp);
    if (cm.tp + cm.fn == 0) m.recall_undefined = true;
    else m.recall = static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fn);
    const double denom = m.precision + m.recall;
    m.f_score = denom > 0 ? 2.0 * m.precision * m.recall / denom : 0.0;
    return m;
}

struct Split {
    std::vector<std::size_t> train;  // ascending indices
    std::vector<std::size_t> test;   // ascending indices
};

namespace detail {

inline std::array<std::vector<std::size_t>, 2> by_class(std::span<const int> labels) {
    std::array<std::vector<std::size_t>, 2> out;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] != 0 && labels[i] != 1) throw Error(ErrorKind::data, "split: labels must be 0 or 1");
        out[static_cast<std::size_t>(labels[i])].push_back(i);
    }
    if (out[0].empty() || out[1].empty()) throw Error(ErrorKind::data, "split: both classes must be present");
    return out;
}

}  // namespace detail

/// Per class, a seeded shuffle puts floor(fraction * n_c + 0.5) samples in the test set.
inline Split stratified_split(std::span<const int> labels, double test_fraction = 0.3, std::uint64_t seed = 42) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw Error(ErrorKind::usage, "split: test fraction must be in (0, 1)");
    auto classes = detail::by_class(labels);
    Rng rng(seed);
    Split s;
    for (auto& idx : classes) {
        rng.shuffle(std::span<std::size_t>(idx));
        const auto n_test = static_cast<std::size_t>(std::floor(test_fraction * static_cast<double>(idx.size()) + 0.5));
        s.test.insert(s.test.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_test));
        s.train.insert(s.train.end(), idx.begin() + static_cast<std::ptrdiff_t>(n_test), idx.end());
    }
    std::sort(s.train.begin(), s.train.end());
    std::sort(s.test.begin(), s.test.end());
    return s;
}

/// Stratified k-fold: fold f is the test set of split f.
inline std::vector<Split> stratified_folds(std::span<const int> labels, std::size_t folds, std::uint64_t seed = 42) {
    if (folds < 2) throw Error(ErrorKind::usage, "cross-validation needs at least 2 folds");
    auto classes = detail::by_class(labels);
    if (classes[0].size() < folds || classes[1].size() < folds)
        throw Error(ErrorKind::data, "cross-validation: a class has fewer samples than folds");
    Rng rng(seed);
    std::vector<std::size_t> fold_of(labels.size());
    for (auto& idx : classes) {
        rng.shuffle(std::span<std::size_t>(idx));
        for (std::size_t i = 0; i < idx.size(); ++i) fold_of[idx[i]] = i % folds;
    }
    std::vector<Split> out(folds);
    for (std::size_t i = 0; i < labels.size(); ++i)
        for (std::size_t f = 0; f < folds; ++f) (fold_of[i] == f ? out[f].test : out[f].train).push_back(i);
    return out;
}

struct ReportRow {
    std::string classifier;
    ConfusionMatrix cm;
    Metrics metrics;

    friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

using EvaluationReport = std::vector<ReportRow>;

inline constexpr const char* kEnsembleName = "Ensemble Learning Classifier";

/// Rows for each member plus a majority-vote ensemble row computed from the member columns.
inline EvaluationReport evaluate_votes(const std::array<std::vector<int>, 5>& member_predictions,
                                       const std::array<std::string, 5>& names, std::span<const int> truths) {
    EvaluationReport report;
    for (std::size_t m = 0; m < 5; ++m) {
        const auto cm = confusion(member_predictions[m], truths);
        report.push_back({names[m], cm, metrics(cm)});
    }
    std::vector<int> ensemble(truths.size());
    for (std::size_t i = 0; i < truths.size(); ++i) {
        std::array<int, 5> votes{};
        for (std::size_t m = 0; m < 5; ++m) votes[m] = member_predictions[m].at(i);
        ensemble[i] = majority_vote(votes);
    }
    const auto cm = confusion(ensemble, truths);
    report.push_back({kEnsembleName, cm, metrics(cm)});
    return report;
}

inline std::array<std::string, 5> member_names() {
    std::array<std::string, 5> names;
    for (std::size_t i = 0; i < 5; ++i) names[i] = display_name(kMemberKinds[i]);
    return names;
}

/// Evaluates the five members and the ensemble on a held-out set (raw features).
inline EvaluationReport evaluate_all(const EnsembleModel& model, const Matrix& x_test, std::span<const int> y_test,
                                     unsigned threads = 1) {
    if (x_test.empty()) throw Error(ErrorKind::data, "evaluate: empty test set");
    std::array<std::vector<int>, 5> preds;
    for (auto& p : preds) p.resize(x_test.rows());
    parallel_for(x_test.rows(), threads, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            const auto pred = predict_ensemble(model, x_test.row(i));
            for (std::size_t m = 0; m < 5; ++m) preds[m][i] = pred.votes[m];
        }
    });
    return evaluate_votes(preds, member_names(), y_test);
}

/// classifier,accuracy,precision,recall,f_score with percentages to 1 decimal and F to 2.
inline void write_report_csv(std::ostream& out, const EvaluationReport& report) {
    out << "classifier,accuracy,precision,recall,f_score\n";
    out << std::fixed;
    for (const auto& r : report) {
        out << r.classifier << ',' << std::setprecision(1) << 100.0 * r.metrics.accuracy << ','
            << 100.0 * r.metrics.precision << ',' << 100.0 * r.metrics.recall << ',' << std::setprecision(2)
            << r.metrics.f_score << '\n';
    }
}

inline void write_report_table(std::ostream& out, const EvaluationReport& report) {
    std::ostringstream s;
    s << std::left << std::setw(30) << "Algorithm" << std::right << std::setw(14) << "Accuracy (%)" << std::setw(15)
      << "Precision (%)" << std::setw(12) << "Recall (%)" << std::setw(9) << "F-score" << '\n';
    s << std::fixed;
    for (const auto& r : report) {
        s << std::left << std::setw(30) << r.classifier << std::right << std::setprecision(1) << std::setw(14)
          << 100.0 * r.metrics.accuracy << std::setw(15) << 100.0 * r.metrics.precision << std::setw(12)
          << 100.0 * r.metrics.recall << std::setprecision(2) << std::setw(9) << r.metrics.f_score << '\n';
    }
    out << s.str();
}

struct CvRow {
    std::string classifier;
    Metrics mean;
    Metrics std;
};

/// Mean and population std of each metric across fold reports (same row order in each).
inline std::vector<CvRow> aggregate_folds(const std::vector<EvaluationReport>& folds) {
    if (folds.empty()) throw Error(ErrorKind::data, "aggregate_folds: no folds");
    std::vector<CvRow> out;
    const double n = static_cast<double>(folds.size());
    for (std::size_t r = 0; r < folds[0].size(); ++r) {
        CvRow row;
        row.classifier = folds[0][r].classifier;
        auto field = [&](auto member) {
            double mean = 0.0, sq = 0.0;
            for (const auto& f : folds) mean += f[r].metrics.*member;
            mean /= n;
            for (const auto& f : folds) sq += (f[r].metrics.*member - mean) * (f[r].metrics.*member - mean);
            return std::pair{mean, std::sqrt(sq / n)};
        };
        std::tie(row.mean.accuracy, row.std.accuracy) = field(&Metrics::accuracy);
        std::tie(row.mean.precision, row.std.precision) = field(&Metrics::precision);
        std::tie(row.mean.recall, row.std.recall) = field(&Metrics::recall);
        std::tie(row.mean.f_score, row.std.f_score) = field(&Metrics::f_score);
        out.push_back(row);
    }
    return out;
}

inline void write_cv_csv(std::ostream& out, const std::vector<CvRow>& rows) {
    out << "classifier,accuracy,accuracy_std,precision,precision_std,recall,recall_std,f_score,f_score_std\n";
    out << std::fixed;
    for (const auto& r : rows) {
        out << r.classifier << std::setprecision(1) << ',' << 100 * r.mean.accuracy << ',' << 100 * r.std.accuracy
            << ',' << 100 * r.mean.precision << ',' << 100 * r.std.precision << ',' << 100 * r.mean.recall << ','
            << 100 * r.std.recall << std::setprecision(2) << ',' << r.mean.f_score << ',' << r.std.f_score << '\n';
    }
}

}  // namespace dnssquat

#endif  // DNSSQUAT_EVALUATE_HPP
