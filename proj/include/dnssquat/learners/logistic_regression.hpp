#ifndef DNSSQUAT_LEARNERS_LOGISTIC_REGRESSION_HPP
#define DNSSQUAT_LEARNERS_LOGISTIC_REGRESSION_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "dnssquat/common.hpp"

namespace dnssquat {

struct LogRegParams {
    double learning_rate = 0.1;
    int epochs = 500;
    double l2 = 1e-4;
    double tol = 1e-6;

    friend bool operator==(const LogRegParams&, const LogRegParams&) = default;
};

namespace detail {

inline double sigmoid(double z) {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

// log(1 + e^z) without overflow
inline double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

inline double dot(std::span<const double> w, std::span<const double> x) {
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * x[i];
    return s;
}

}  // namespace detail

/// Mean cross-entropy plus (l2/2)*|w|^2; the bias is not penalized.
inline double logreg_objective(std::span<const double> w, double b, const Matrix& x, std::span<const int> y, double l2) {
    double loss = 0.0;
    for (std::size_t r = 0; r < x.rows(); ++r) {
        const double z = detail::dot(w, x.row(r)) + b;
        loss += detail::softplus(z) - y[r] * z;
    }
    loss /= static_cast<double>(x.rows());
    double reg = 0.0;
    for (double v : w) reg += v * v;
    return loss + 0.5 * l2 * reg;
}

/// Analytic gradient of logreg_objective; the last element is d/db.
inline std::vector<double> logreg_gradient(std::span<const double> w, double b, const Matrix& x, std::span<const int> y,
                                           double l2) {
    std::vector<double> g(w.size() + 1, 0.0);
    for (std::size_t r = 0; r < x.rows(); ++r) {
        const auto row = x.row(r);
        const double err = detail::sigmoid(detail::dot(w, row) + b) - y[r];
        for (std::size_t c = 0; c < w.size(); ++c) g[c] += err * row[c];
        g.back() += err;
    }
    const double n = static_cast<double>(x.rows());
    for (std::size_t c = 0; c < w.size(); ++c) g[c] = g[c] / n + l2 * w[c];
    g.back() /= n;
    return g;
}

class LogisticModel {
public:
    LogisticModel() = default;
    LogisticModel(std::vector<double> weights, double bias, int epochs_run = 0)
        : w_(std::move(weights)), b_(bias), epochs_run_(epochs_run) {}

    /// Full-batch gradient descent from zero weights; stops after `epochs`
    /// or once the gradient norm drops below `tol`.
    static LogisticModel train(const Matrix& x, std::span<const int> y, const LogRegParams& p = {}) {
        if (x.empty()) throw Error(ErrorKind::data, "logistic regression: empty training data");
        bool has0 = false, has1 = false;
        for (int v : y) (v == 1 ? has1 : has0) = true;
        if (!has0 || !has1) throw Error(ErrorKind::data, "logistic regression: both classes must be present");

        LogisticModel m;
        m.w_.assign(x.cols(), 0.0);
        for (int epoch = 0; epoch < p.epochs; ++epoch) {
            const auto g = logreg_gradient(m.w_, m.b_, x, y, p.l2);
            double norm = 0.0;
            for (double v : g) norm += v * v;
            if (std::sqrt(norm) < p.tol) break;
            for (std::size_t c = 0; c < m.w_.size(); ++c) m.w_[c] -= p.learning_rate * g[c];
            m.b_ -= p.learning_rate * g.back();
            ++m.epochs_run_;
        }
        return m;
    }

    double probability(std::span<const double> x) const { return detail::sigmoid(detail::dot(w_, x) + b_); }
    int predict(std::span<const double> x) const { return probability(x) >= 0.5 ? 1 : 0; }

    const std::vector<double>& weights() const noexcept { return w_; }
    double bias() const noexcept { return b_; }
    int epochs_run() const noexcept { return epochs_run_; }

private:
    std::vector<double> w_;
    double b_ = 0.0;
    int epochs_run_ = 0;
};

}  // namespace dnssquat

#endif  // DNSSQUAT_LEARNERS_LOGISTIC_REGRESSION_HPP
