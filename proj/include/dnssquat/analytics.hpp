#ifndef DNSSQUAT_ANALYTICS_HPP
#define DNSSQUAT_ANALYTICS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <iomanip>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dnssquat/common.hpp"
#include "dnssquat/features.hpp"

namespace dnssquat {

struct FeatureStats {
    double mean = 0.0;
    double std = 0.0;  // population (divisor n)
    double min = 0.0;
    double max = 0.0;
};

struct Summary {
    std::size_t count = 0;
    std::vector<FeatureStats> overall;
    std::map<int, std::vector<FeatureStats>> per_class;
    std::map<int, std::size_t> class_counts;
};

namespace detail {

inline std::vector<FeatureStats> column_stats(const Matrix& m, std::span<const std::size_t> rows) {
    std::vector<FeatureStats> out(m.cols());
    const double n = static_cast<double>(rows.size());
    for (std::size_t c = 0; c < m.cols(); ++c) {
        auto& s = out[c];
        s.min = std::numeric_limits<double>::infinity();
        s.max = -std::numeric_limits<double>::infinity();
        double sum = 0.0;
        for (auto r : rows) {
            const double v = m(r, c);
            sum += v;
            s.min = std::min(s.min, v);
            s.max = std::max(s.max, v);
        }
        s.mean = sum / n;
        double sq = 0.0;
        for (auto r : rows) {
            const double d = m(r, c) - s.mean;
            sq += d * d;
        }
        s.std = std::sqrt(sq / n);
    }
    return out;
}

}  // namespace detail

/// Per-feature mean/std/min/max, overall and (when labels are given) per class.
inline Summary summarize(const Matrix& m, std::span<const int> labels = {}) {
    if (m.empty()) throw Error(ErrorKind::data, "summarize: empty feature matrix");
    if (!labels.empty() && labels.size() != m.rows())
        throw Error(ErrorKind::data, "summarize: label count does not match row count");
    Summary out;
    out.count = m.rows();
    std::vector<std::size_t> all(m.rows());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    out.overall = detail::column_stats(m, all);
    std::map<int, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < labels.size(); ++i) groups[labels[i]].push_back(i);
    for (const auto& [cls, rows] : groups) {
        out.per_class[cls] = detail::column_stats(m, rows);
        out.class_counts[cls] = rows.size();
    }
    return out;
}

struct Binning {
    double origin = 0.0;  // left edge of the first bin
    double width = 1.0;
    std::size_t count = 1;

    double center(std::size_t bin) const { return origin + (static_cast<double>(bin) + 0.5) * width; }
};

/// Unit-width bins centred on integers for count features, 50 bins on [0, 1] for ratios.
inline Binning default_binning(std::size_t feature, std::span<const double> values) {
    if (!is_integer_feature(feature)) return {0.0, 1.0 / 50.0, 50};
    if (values.empty()) return {-0.5, 1.0, 1};
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    const double first = std::floor(*lo + 0.5);
    const double last = std::floor(*hi + 0.5);
    return {first - 0.5, 1.0, static_cast<std::size_t>(last - first) + 1};
}

struct Histogram {
    std::string feature_name;
    Binning binning;
    /// group id -> (bin_center, density) for every bin
    std::map<int, std::vector<std::pair<double, double>>> densities;
    std::map<int, std::size_t> group_counts;
};

/// Normalized histogram per group: density = group-relative frequency / width,
/// so each group integrates to 1. Values outside the binning fall in the edge bins.
inline Histogram histogram_pdf(std::span<const double> values, std::span<const int> groups,
                               const Binning& binning, std::string feature_name = {}) {
    if (groups.size() != values.size())
        throw Error(ErrorKind::data, "histogram_pdf: group count does not match value count");
    if (binning.count == 0 || !(binning.width > 0.0))
        throw Error(ErrorKind::data, "histogram_pdf: invalid binning");
    Histogram h;
    h.feature_name = std::move(feature_name);
    h.binning = binning;
    std::map<int, std::vector<std::size_t>> counts;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double v = values[i];
        if (!std::isfinite(v)) throw Error(ErrorKind::data, "histogram_pdf: non-finite value at index " + std::to_string(i));
        auto& bins = counts[groups[i]];
        if (bins.empty()) bins.assign(binning.count, 0);
        const double pos = std::floor((v - binning.origin) / binning.width);
        const auto bin = static_cast<std::size_t>(std::clamp(pos, 0.0, static_cast<double>(binning.count - 1)));
        ++bins[bin];
        ++h.group_counts[groups[i]];
    }
    for (const auto& [group, bins] : counts) {
        const double total = static_cast<double>(h.group_counts[group]);
        auto& dens = h.densities[group];
        dens.reserve(binning.count);
        for (std::size_t b = 0; b < binning.count; ++b)
            dens.emplace_back(binning.center(b), static_cast<double>(bins[b]) / total / binning.width);
    }
    return h;
}

/// Same, with every value in one group (id 0).
inline Histogram histogram_pdf(std::span<const double> values, const Binning& binning, std::string feature_name = {}) {
    std::vector<int> groups(values.size(), 0);
    return histogram_pdf(values, groups, binning, std::move(feature_name));
}

/// |Pearson| between a feature and binary labels (point-biserial).
/// Throws Error(data) "undefined correlation" if either side is constant.
inline double correlation(std::span<const double> x, std::span<const int> labels) {
    if (x.size() != labels.size()) throw Error(ErrorKind::data, "correlation: length mismatch");
    if (x.size() < 2) throw Error(ErrorKind::data, "correlation: need at least two samples");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += labels[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = labels[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw Error(ErrorKind::data, "undefined correlation: constant input");
    return std::min(1.0, std::abs(sxy) / std::sqrt(sxx * syy));
}

struct CorrelationRow {
    std::size_t feature_index = 0;
    std::string feature_name;
    std::optional<double> value;  // empty when undefined
};

using CorrelationTable = std::vector<CorrelationRow>;

/// One row per column, sorted by descending |r|; undefined rows last; ties keep column order.
inline CorrelationTable correlation_table(const Matrix& m, std::span<const int> labels,
                                          std::span<const std::string_view> names = kFeatureTitles) {
    if (m.rows() != labels.size()) throw Error(ErrorKind::data, "correlation_table: label count does not match row count");
    if (m.rows() < 2) throw Error(ErrorKind::data, "correlation_table: need at least two rows");
    CorrelationTable table;
    for (std::size_t c = 0; c < m.cols(); ++c) {
        CorrelationRow row;
        row.feature_index = c;
        row.feature_name = c < names.size() ? std::string(names[c]) : "feature_" + std::to_string(c);
        const auto col = m.column(c);
        try {
            row.value = correlation(col, labels);
        } catch (const Error&) {
            // constant column or constant labels: left undefined
        }
        table.push_back(std::move(row));
    }
    std::stable_sort(table.begin(), table.end(), [](const CorrelationRow& a, const CorrelationRow& b) {
        if (a.value.has_value() != b.value.has_value()) return a.value.has_value();
        return a.value && *a.value > *b.value;
    });
    return table;
}

inline void write_correlation_csv(std::ostream& out, const CorrelationTable& table) {
    out << "feature,correlation\n";
    for (const auto& row : table) {
        out << '"' << row.feature_name << "\",";
        if (row.value)
            out << std::fixed << std::setprecision(6) << *row.value;
        else
            out << "undefined";
        out << '\n';
    }
}

inline void write_histogram_csv(std::ostream& out, const Histogram& h) {
    out << "group,bin_center,density\n";
    out << std::fixed << std::setprecision(6);
    for (const auto& [group, dens] : h.densities)
        for (const auto& [center, d] : dens) out << group << ',' << center << ',' << d << '\n';
}

inline void write_summary_csv(std::ostream& out, const Summary& s, std::span<const std::string_view> names = kFeatureNames) {
    out << "group,count,feature,mean,std,min,max\n";
    out << std::fixed << std::setprecision(6);
    auto emit = [&](const std::string& group, std::size_t count, const std::vector<FeatureStats>& stats) {
        for (std::size_t c = 0; c < stats.size(); ++c) {
            const auto& st = stats[c];
            out << group << ',' << count << ',' << (c < names.size() ? std::string(names[c]) : std::to_string(c)) << ','
                << st.mean << ',' << st.std << ',' << st.min << ',' << st.max << '\n';
        }
    };
    emit("all", s.count, s.overall);
    for (const auto& [cls, stats] : s.per_class) emit("class_" + std::to_string(cls), s.class_counts.at(cls), stats);
}

}  // namespace dnssquat

#endif  // DNSSQUAT_ANALYTICS_HPP
