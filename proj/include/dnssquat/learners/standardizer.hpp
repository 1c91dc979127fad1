#ifndef DNSSQUAT_LEARNERS_STANDARDIZER_HPP
#define DNSSQUAT_LEARNERS_STANDARDIZER_HPP

#include <cmath>
#include <span>
#include <vector>

#include "dnssquat/common.hpp"

namespace dnssquat {

/// Per-column z-score transform fitted on training data.
class Standardizer {
public:
    static constexpr double kStdFloor = 1e-9;

    Standardizer() = default;
    Standardizer(std::vector<double> mean, std::vector<double> std) : mean_(std::move(mean)), std_(std::move(std)) {}

    static Standardizer fit(const Matrix& train) {
        if (train.empty()) throw Error(ErrorKind::data, "standardizer: empty training matrix");
        const std::size_t cols = train.cols();
        const double n = static_cast<double>(train.rows());
        std::vector<double> mean(cols, 0.0), sd(cols, 0.0);
        for (std::size_t r = 0; r < train.rows(); ++r)
            for (std::size_t c = 0; c < cols; ++c) mean[c] += train(r, c);
        for (auto& m : mean) m /= n;
        for (std::size_t r = 0; r < train.rows(); ++r)
            for (std::size_t c = 0; c < cols; ++c) {
                const double d = train(r, c) - mean[c];
                sd[c] += d * d;
            }
        for (auto& s : sd) s = std::sqrt(s / n);
        return {std::move(mean), std::move(sd)};
    }

    std::size_t dims() const noexcept { return mean_.size(); }
    const std::vector<double>& mean() const noexcept { return mean_; }
    const std::vector<double>& std() const noexcept { return std_; }

    /// Constant columns (std below the floor) map to 0.
    void transform(std::span<const double> in, std::span<double> out) const {
        for (std::size_t c = 0; c < mean_.size(); ++c)
            out[c] = std_[c] < kStdFloor ? 0.0 : (in[c] - mean_[c]) / std_[c];
    }

    std::vector<double> transform(std::span<const double> in) const {
        std::vector<double> out(mean_.size());
        transform(in, out);
        return out;
    }

    Matrix apply(const Matrix& m) const {
        if (m.cols() != mean_.size()) throw Error(ErrorKind::data, "standardizer: column count mismatch");
        Matrix out(m.rows(), m.cols());
        for (std::size_t r = 0; r < m.rows(); ++r) transform(m.row(r), out.row(r));
        return out;
    }

    std::vector<double> inverse(std::span<const double> z) const {
        std::vector<double> out(mean_.size());
        for (std::size_t c = 0; c < mean_.size(); ++c)
            out[c] = std_[c] < kStdFloor ? mean_[c] : z[c] * std_[c] + mean_[c];
        return out;
    }

    friend bool operator==(const Standardizer&, const Standardizer&) = default;

private:
    std::vector<double> mean_;
    std::vector<double> std_;
};

}  // namespace dnssquat

#endif  // DNSSQUAT_LEARNERS_STANDARDIZER_HPP
