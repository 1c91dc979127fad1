#ifndef DNSSQUAT_LEARNERS_NAIVE_BAYES_HPP
#define DNSSQUAT_LEARNERS_NAIVE_BAYES_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "dnssquat/common.hpp"

namespace dnssquat {

struct NaiveBayesParams {
    /// Variance floor as a fraction of the largest per-feature variance.
    double var_smoothing = 1e-9;

    friend bool operator==(const NaiveBayesParams&, const NaiveBayesParams&) = default;
};

/// Gaussian naive Bayes for two classes.
class NaiveBayesModel {
public:
    struct ClassStats {
        double prior = 0.0;
        std::vector<double> mean;
        std::vector<double> var;

        friend bool operator==(const ClassStats&, const ClassStats&) = default;
    };

    NaiveBayesModel() = default;
    NaiveBayesModel(std::array<ClassStats, 2> classes, double var_floor) : classes_(std::move(classes)), floor_(var_floor) {}

    static NaiveBayesModel train(const Matrix& x, std::span<const int> y, const NaiveBayesParams& p = {}) {
        if (x.rows() != y.size()) throw Error(ErrorKind::data, "naive bayes: label count does not match row count");
        const std::size_t cols = x.cols();
        std::array<std::size_t, 2> n{0, 0};
        for (int v : y) ++n[static_cast<std::size_t>(v)];
        if (n[0] == 0 || n[1] == 0) throw Error(ErrorKind::data, "naive bayes: empty class");

        // Largest per-feature variance over all samples sets the floor.
        double max_var = 0.0;
        for (std::size_t c = 0; c < cols; ++c) {
            double mean = 0.0, sq = 0.0;
            for (std::size_t r = 0; r < x.rows(); ++r) mean += x(r, c);
            mean /= static_cast<double>(x.rows());
            for (std::size_t r = 0; r < x.rows(); ++r) sq += (x(r, c) - mean) * (x(r, c) - mean);
            max_var = std::max(max_var, sq / static_cast<double>(x.rows()));
        }
        const double floor = max_var > 0 ? p.var_smoothing * max_var : p.var_smoothing;

        NaiveBayesModel m;
        m.floor_ = floor;
        for (std::size_t k = 0; k < 2; ++k) {
            auto& cs = m.classes_[k];
            cs.prior = static_cast<double>(n[k]) / static_cast<double>(x.rows());
            cs.mean.assign(cols, 0.0);
            cs.var.assign(cols, 0.0);
        }
        for (std::size_t r = 0; r < x.rows(); ++r) {
            auto& cs = m.classes_[static_cast<std::size_t>(y[r])];
            for (std::size_t c = 0; c < cols; ++c) cs.mean[c] += x(r, c);
        }
        for (std::size_t k = 0; k < 2; ++k)
            for (auto& v : m.classes_[k].mean) v /= static_cast<double>(n[k]);
        for (std::size_t r = 0; r < x.rows(); ++r) {
            auto& cs = m.classes_[static_cast<std::size_t>(y[r])];
            for (std::size_t c = 0; c < cols; ++c) {
                const double d = x(r, c) - cs.mean[c];
                cs.var[c] += d * d;
            }
        }
        for (std::size_t k = 0; k < 2; ++k)
            for (auto& v : m.classes_[k].var) v = std::max(v / static_cast<double>(n[k]), floor);
        return m;
    }

    /// Unnormalized log posteriors: log prior + sum of Gaussian log densities.
    std::array<double, 2> log_scores(std::span<const double> x) const {
        std::array<double, 2> out{};
        for (std::size_t k = 0; k < 2; ++k) {
            const auto& cs = classes_[k];
            double s = std::log(cs.prior);
            for (std::size_t c = 0; c < cs.mean.size(); ++c) {
                const double d = x[c] - cs.mean[c];
                s += -0.5 * std::log(2.0 * std::numbers::pi * cs.var[c]) - d * d / (2.0 * cs.var[c]);
            }
            out[k] = s;
        }
        return out;
    }

    int predict(std::span<const double> x) const {
        const auto s = log_scores(x);
        return s[1] > s[0] ? 1 : 0;
    }

    const std::array<ClassStats, 2>& classes() const noexcept { return classes_; }
    double var_floor() const noexcept { return floor_; }

private:
    std::array<ClassStats, 2> classes_{};
    double floor_ = 0.0;
};

}  // namespace dnssquat

#endif  // DNSSQUAT_LEARNERS_NAIVE_BAYES_HPP
