#ifndef DNSSQUAT_LEARNERS_LINEAR_SVM_HPP
#define DNSSQUAT_LEARNERS_LINEAR_SVM_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "dnssquat/common.hpp"

namespace dnssquat {

struct SvmParams {
    double lambda = 1e-4;
    int epochs = 50;
    std::uint64_t seed = 42;  // sample order

    friend bool operator==(const SvmParams&, const SvmParams&) = default;
};

/// Linear SVM trained by stochastic subgradient descent (Pegasos) on
///   lambda/2 * (|w|^2 + b^2) + mean(max(0, 1 - y (w.x + b))),  y in {-1, +1}.
/// The bias is handled as an extra constant-1 feature, so it is regularized too.
class LinearSvmModel {
public:
    LinearSvmModel() = default;
    LinearSvmModel(std::vector<double> weights, double bias) : w_(std::move(weights)), b_(bias) {}

    static LinearSvmModel train(const Matrix& x, std::span<const int> y, const SvmParams& p = {}) {
        if (x.empty()) throw Error(ErrorKind::data, "svm: empty training data");
        if (!(p.lambda > 0)) throw Error(ErrorKind::data, "svm: lambda must be positive");
        bool has0 = false, has1 = false;
        for (int v : y) (v == 1 ? has1 : has0) = true;
        if (!has0 || !has1) throw Error(ErrorKind::data, "svm: both classes must be present");

        LinearSvmModel m;
        m.w_.assign(x.cols(), 0.0);
        std::vector<std::size_t> order(x.rows());
        std::iota(order.begin(), order.end(), 0);
        Rng rng(p.seed);
        std::uint64_t t = 0;
        for (int epoch = 0; epoch < p.epochs; ++epoch) {
            rng.shuffle(std::span<std::size_t>(order));
            for (auto i : order) {
                ++t;
                const double eta = 1.0 / (p.lambda * static_cast<double>(t));
                const double label = y[i] == 1 ? 1.0 : -1.0;
                const auto row = x.row(i);
                const double margin = label * m.decision(row);
                const double shrink = 1.0 - eta * p.lambda;
                for (auto& v : m.w_) v *= shrink;
                m.b_ *= shrink;
                if (margin < 1.0) {
                    for (std::size_t c = 0; c < m.w_.size(); ++c) m.w_[c] += eta * label * row[c];
                    m.b_ += eta * label;
                }
            }
        }
        return m;
    }

    double decision(std::span<const double> x) const {
        double s = b_;
        for (std::size_t c = 0; c < w_.size(); ++c) s += w_[c] * x[c];
        return s;
    }

    int predict(std::span<const double> x) const { return decision(x) > 0 ? 1 : 0; }

    const std::vector<double>& weights() const noexcept { return w_; }
    double bias() const noexcept { return b_; }

private:
    std::vector<double> w_;
    double b_ = 0.0;
};

/// The objective minimized by LinearSvmModel::train.
inline double svm_objective(std::span<const double> w, double b, const Matrix& x, std::span<const int> y, double lambda) {
    double hinge = 0.0;
    for (std::size_t r = 0; r < x.rows(); ++r) {
        double s = b;
        for (std::size_t c = 0; c < w.size(); ++c) s += w[c] * x(r, c);
        hinge += std::max(0.0, 1.0 - (y[r] == 1 ? 1.0 : -1.0) * s);
    }
    double reg = b * b;
    for (double v : w) reg += v * v;
    return 0.5 * lambda * reg + hinge / static_cast<double>(x.rows());
}

}  // namespace dnssquat

#endif  // DNSSQUAT_LEARNERS_LINEAR_SVM_HPP
