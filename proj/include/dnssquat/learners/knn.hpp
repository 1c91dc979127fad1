#ifndef DNSSQUAT_LEARNERS_KNN_HPP
#define DNSSQUAT_LEARNERS_KNN_HPP

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <queue>
#include <span>
#include <utility>
#include <vector>

#include "dnssquat/common.hpp"

namespace dnssquat {

struct KnnParams {
    int k = 5;

    friend bool operator==(const KnnParams&, const KnnParams&) = default;
};

/// Exact k-nearest-neighbour vote under squared Euclidean distance.
/// Equal distances rank the lower training index first; a tied vote goes to class 0.
class KnnModel {
public:
    using Neighbour = std::pair<double, std::size_t>;  // (squared distance, training index)

    KnnModel() = default;

    static KnnModel train(Matrix x, std::vector<int> y, const KnnParams& params = {}) {
        if (params.k < 1) throw Error(ErrorKind::data, "knn: k must be positive");
        if (x.rows() != y.size()) throw Error(ErrorKind::data, "knn: label count does not match row count");
        if (x.rows() < static_cast<std::size_t>(params.k))
            throw Error(ErrorKind::data, "knn: only " + std::to_string(x.rows()) + " training samples for k=" +
                                             std::to_string(params.k) + "; use a smaller k");
        KnnModel m;
        m.params_ = params;
        m.x_ = std::move(x);
        m.y_ = std::move(y);
        m.build_index();
        return m;
    }

    int k() const noexcept { return params_.k; }
    const KnnParams& params() const noexcept { return params_; }
    const Matrix& points() const noexcept { return x_; }
    const std::vector<int>& labels() const noexcept { return y_; }

    /// The k nearest training points, closest first.
    std::vector<Neighbour> neighbours(std::span<const double> q) const {
        std::priority_queue<Neighbour> heap;  // max-heap: worst on top
        const std::size_t k = static_cast<std::size_t>(params_.k);
        if (!nodes_.empty()) search(0, q, k, heap);
        std::vector<Neighbour> out;
        out.reserve(heap.size());
        while (!heap.empty()) {
            out.push_back(heap.top());
            heap.pop();
        }
        std::reverse(out.begin(), out.end());
        return out;
    }

    int predict(std::span<const double> q) const {
        int votes = 0;
        const auto nn = neighbours(q);
        for (const auto& [d, i] : nn) votes += y_[i];
        return 2 * votes > static_cast<int>(nn.size()) ? 1 : 0;
    }

    static double squared_distance(std::span<const double> a, std::span<const double> b) {
        double d = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            const double t = a[i] - b[i];
            d += t * t;
        }
        return d;
    }

private:
    static constexpr std::size_t kLeafSize = 16;

    struct KdNode {
        std::size_t begin = 0, end = 0;  // range in order_
        int dim = -1;                    // -1 for a leaf
        double split = 0.0;
        int left = -1, right = -1;
    };

    void build_index() {
        order_.resize(x_.rows());
        std::iota(order_.begin(), order_.end(), 0);
        nodes_.clear();
        if (!order_.empty()) build(0, order_.size());
    }

    int build(std::size_t begin, std::size_t end) {
        const int id = static_cast<int>(nodes_.size());
        nodes_.push_back({begin, end});
        if (end - begin <= kLeafSize) return id;

        std::size_t dim = 0;
        double best_spread = -1.0;
        for (std::size_t d = 0; d < x_.cols(); ++d) {
            double lo = x_(order_[begin], d), hi = lo;
            for (std::size_t i = begin; i < end; ++i) {
                lo = std::min(lo, x_(order_[i], d));
                hi = std::max(hi, x_(order_[i], d));
            }
            if (hi - lo > best_spread) {
                best_spread = hi - lo;
                dim = d;
            }
        }
        if (best_spread <= 0.0) return id;  // all points identical

        const std::size_t mid = begin + (end - begin) / 2;
        auto less = [&](std::size_t a, std::size_t b) {
            const double va = x_(a, dim), vb = x_(b, dim);
            return va < vb || (va == vb && a < b);
        };
        std::nth_element(order_.begin() + static_cast<std::ptrdiff_t>(begin),
                         order_.begin() + static_cast<std::ptrdiff_t>(mid),
                         order_.begin() + static_cast<std::ptrdiff_t>(end), less);
        const double split = x_(order_[mid], dim);
        const int l = build(begin, mid);
        const int r = build(mid, end);
        auto& n = nodes_[static_cast<std::size_t>(id)];
        n.dim = static_cast<int>(dim);
        n.split = split;
        n.left = l;
        n.right = r;
        return id;
    }

    // Left subtree holds values <= split, right holds values >= split.
    void search(int id, std::span<const double> q, std::size_t k, std::priority_queue<Neighbour>& heap) const {
        const auto& n = nodes_[static_cast<std::size_t>(id)];
        if (n.dim < 0) {
            for (std::size_t i = n.begin; i < n.end; ++i) {
                const std::size_t idx = order_[i];
                const Neighbour cand{squared_distance(q, x_.row(idx)), idx};
                if (heap.size() < k) {
                    heap.push(cand);
                } else if (cand < heap.top()) {
                    heap.pop();
                    heap.push(cand);
                }
            }
            return;
        }
        const double diff = q[static_cast<std::size_t>(n.dim)] - n.split;
        const int near = diff < 0 ? n.left : n.right;
        const int far = diff < 0 ? n.right : n.left;
        search(near, q, k, heap);
        if (heap.size() < k || diff * diff <= heap.top().first) search(far, q, k, heap);
    }

    KnnParams params_;
    Matrix x_;
    std::vector<int> y_;
    std::vector<std::size_t> order_;
    std::vector<KdNode> nodes_;
};

}  // namespace dnssquat

#endif  // DNSSQUAT_LEARNERS_KNN_HPP
