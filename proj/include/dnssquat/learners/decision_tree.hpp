#ifndef DNSSQUAT_LEARNERS_DECISION_TREE_HPP
#define DNSSQUAT_LEARNERS_DECISION_TREE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

#include "dnssquat/common.hpp"

namespace dnssquat {

struct TreeParams {
    int max_depth = 25;
    int min_leaf = 5;
    bool prune = true;
    double confidence = 0.25;  // pessimistic pruning CF

    friend bool operator==(const TreeParams&, const TreeParams&) = default;
};

/// C4.5-style binary tree over continuous features.
class DecisionTree {
public:
    struct Node {
        int feature = -1;  // -1 for a leaf
        double threshold = 0.0;
        int left = -1;   // x[feature] <= threshold
        int right = -1;  // x[feature] >  threshold
        int label = 0;
        std::array<int, 2> counts{};  // training samples per class reaching the node

        bool is_leaf() const noexcept { return feature < 0; }
        friend bool operator==(const Node&, const Node&) = default;
    };

    DecisionTree() = default;
    explicit DecisionTree(std::vector<Node> nodes) : nodes_(std::move(nodes)) {}

    static DecisionTree train(const Matrix& x, std::span<const int> y, const TreeParams& params = {});

    int predict(std::span<const double> features) const {
        int i = 0;
        while (!nodes_[static_cast<std::size_t>(i)].is_leaf()) {
            const auto& n = nodes_[static_cast<std::size_t>(i)];
            i = features[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
        }
        return nodes_[static_cast<std::size_t>(i)].label;
    }

    const std::vector<Node>& nodes() const noexcept { return nodes_; }

    int depth() const { return nodes_.empty() ? 0 : depth_from(0); }

    std::size_t leaf_count() const {
        return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.is_leaf(); }));
    }

private:
    int depth_from(int i) const {
        const auto& n = nodes_[static_cast<std::size_t>(i)];
        if (n.is_leaf()) return 0;
        return 1 + std::max(depth_from(n.left), depth_from(n.right));
    }

    std::vector<Node> nodes_;
};

namespace detail {

inline double entropy2(double a, double b) {
    const double n = a + b;
    double h = 0.0;
    if (a > 0) h -= a / n * std::log2(a / n);
    if (b > 0) h -= b / n * std::log2(b / n);
    return h;
}

/// Extra errors predicted at confidence `cf` for a leaf with `e` errors out of `n`
/// (upper binomial bound, as in Quinlan's C4.5 release 8).
inline double pessimistic_extra_errors(double n, double e, double cf) {
    static constexpr std::array<double, 9> val = {0, 0.001, 0.005, 0.01, 0.05, 0.10, 0.20, 0.40, 1.00};
    static constexpr std::array<double, 9> dev = {4.0, 3.09, 2.58, 2.33, 1.65, 1.28, 0.84, 0.25, 0.00};
    std::size_t i = 0;
    while (cf > val[i]) ++i;
    const double z = dev[i - 1] + (dev[i] - dev[i - 1]) * (cf - val[i - 1]) / (val[i] - val[i - 1]);
    const double coeff = z * z;

    if (e < 1e-6) return n * (1 - std::exp(std::log(cf) / n));
    if (e < 0.9999) {
        const double v = n * (1 - std::exp(std::log(cf) / n));
        return v + e * (pessimistic_extra_errors(n, 1.0, cf) - v);
    }
    if (e + 0.5 >= n) return 0.67 * (n - e);
    const double pr = (e + 0.5 + coeff / 2 + std::sqrt(coeff * ((e + 0.5) * (1 - (e + 0.5) / n) + coeff / 4))) / (n + coeff);
    return n * pr - e;
}

class TreeBuilder {
public:
    TreeBuilder(const Matrix& x, std::span<const int> y, const TreeParams& p) : x_(x), y_(y), p_(p) {}

    std::vector<DecisionTree::Node> build() {
        std::vector<std::size_t> rows(x_.rows());
        std::iota(rows.begin(), rows.end(), 0);
        grow(rows, 0);
        if (p_.prune) prune(0);
        return compact();
    }

private:
    struct Split {
        int feature = -1;
        double threshold = 0.0;
        double gain = 0.0;
        double ratio = 0.0;
    };

    int make_node(std::span<const std::size_t> rows) {
        DecisionTree::Node n;
        for (auto r : rows) ++n.counts[static_cast<std::size_t>(y_[r])];
        n.label = n.counts[1] > n.counts[0] ? 1 : 0;
        nodes_.push_back(n);
        return static_cast<int>(nodes_.size() - 1);
    }

    // Best information-gain threshold on one feature; thresholds are midpoints
    // between consecutive distinct values, both sides need min_leaf samples.
    bool best_threshold(std::vector<std::size_t>& rows, std::size_t f, const std::array<int, 2>& total, Split& out) const {
        std::sort(rows.begin(), rows.end(), [&](std::size_t a, std::size_t b) {
            const double va = x_(a, f), vb = x_(b, f);
            return va < vb || (va == vb && a < b);
        });
        const double n = static_cast<double>(rows.size());
        const double base = entropy2(total[0], total[1]);
        const std::size_t min_leaf = static_cast<std::size_t>(std::max(1, p_.min_leaf));
        std::array<double, 2> left{0, 0};
        bool found = false;
        for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
            left[static_cast<std::size_t>(y_[rows[i]])] += 1;
            const double v = x_(rows[i], f), next = x_(rows[i + 1], f);
            if (v == next) continue;
            const std::size_t nl = i + 1, nr = rows.size() - nl;
            if (nl < min_leaf || nr < min_leaf) continue;
            const double r0 = total[0] - left[0], r1 = total[1] - left[1];
            const double gain = base - (static_cast<double>(nl) / n) * entropy2(left[0], left[1]) -
                                (static_cast<double>(nr) / n) * entropy2(r0, r1);
            if (!found || gain > out.gain + 1e-12) {
                const double split_info = entropy2(static_cast<double>(nl), static_cast<double>(nr));
                out = {static_cast<int>(f), v + (next - v) / 2.0, gain, split_info > 0 ? gain / split_info : 0.0};
                found = true;
            }
        }
        return found;
    }

    void grow(std::vector<std::size_t>& rows, int depth) {
        const int id = make_node(rows);
        const auto counts = nodes_[static_cast<std::size_t>(id)].counts;
        if (counts[0] == 0 || counts[1] == 0 || depth >= p_.max_depth) return;

        // C4.5 attribute choice: highest gain ratio among candidates whose gain
        // is at least the average gain.
        std::vector<Split> candidates;
        for (std::size_t f = 0; f < x_.cols(); ++f) {
            Split s;
            if (best_threshold(rows, f, counts, s)) candidates.push_back(s);
        }
        if (candidates.empty()) return;
        double avg = 0.0;
        for (const auto& s : candidates) avg += s.gain;
        avg /= static_cast<double>(candidates.size());
        const Split* best = nullptr;
        for (const auto& s : candidates) {
            if (s.gain + 1e-12 < avg) continue;
            if (!best || s.ratio > best->ratio + 1e-12) best = &s;
        }
        const Split chosen = *best;

        std::vector<std::size_t> left, right;
        for (auto r : rows) (x_(r, static_cast<std::size_t>(chosen.feature)) <= chosen.threshold ? left : right).push_back(r);
        rows.clear();
        rows.shrink_to_fit();

        nodes_[static_cast<std::size_t>(id)].feature = chosen.feature;
        nodes_[static_cast<std::size_t>(id)].threshold = chosen.threshold;
        const int l = static_cast<int>(nodes_.size());
        grow(left, depth + 1);
        const int r = static_cast<int>(nodes_.size());
        grow(right, depth + 1);
        nodes_[static_cast<std::size_t>(id)].left = l;
        nodes_[static_cast<std::size_t>(id)].right = r;
    }

    double leaf_estimate(const DecisionTree::Node& n) const {
        const double total = n.counts[0] + n.counts[1];
        const double errors = total - n.counts[static_cast<std::size_t>(n.label)];
        return errors + pessimistic_extra_errors(total, errors, p_.confidence);
    }

    // Bottom-up subtree replacement; returns the estimated errors of the (possibly pruned) subtree.
    double prune(int id) {
        auto& node = nodes_[static_cast<std::size_t>(id)];
        if (node.is_leaf()) return leaf_estimate(node);
        const double subtree = prune(node.left) + prune(node.right);
        auto& n = nodes_[static_cast<std::size_t>(id)];
        const double as_leaf = leaf_estimate(n);
        if (as_leaf <= subtree + 0.1) {
            n.feature = -1;
            n.left = n.right = -1;
            return as_leaf;
        }
        return subtree;
    }

    // Drops nodes orphaned by pruning; keeps pre-order numbering.
    std::vector<DecisionTree::Node> compact() const {
        std::vector<DecisionTree::Node> out;
        auto copy = [&](auto&& self, int id) -> int {
            const int at = static_cast<int>(out.size());
            out.push_back(nodes_[static_cast<std::size_t>(id)]);
            if (!out.back().is_leaf()) {
                const int l = self(self, nodes_[static_cast<std::size_t>(id)].left);
                const int r = self(self, nodes_[static_cast<std::size_t>(id)].right);
                out[static_cast<std::size_t>(at)].left = l;
                out[static_cast<std::size_t>(at)].right = r;
            }
            return at;
        };
        copy(copy, 0);
        return out;
    }

    const Matrix& x_;
    std::span<const int> y_;
    TreeParams p_;
    std::vector<DecisionTree::Node> nodes_;
};

}  // namespace detail

inline DecisionTree DecisionTree::train(const Matrix& x, std::span<const int> y, const TreeParams& params) {
    if (x.empty()) throw Error(ErrorKind::data, "decision tree: empty training data");
    if (y.size() != x.rows()) throw Error(ErrorKind::data, "decision tree: label count does not match row count");
    for (int v : y)
        if (v != 0 && v != 1) throw Error(ErrorKind::data, "decision tree: labels must be 0 or 1");
    return DecisionTree(detail::TreeBuilder(x, y, params).build());
}

}  // namespace dnssquat

#endif  // DNSSQUAT_LEARNERS_DECISION_TREE_HPP
