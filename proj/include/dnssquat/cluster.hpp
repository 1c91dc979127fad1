#ifndef DNSSQUAT_CLUSTER_HPP
#define DNSSQUAT_CLUSTER_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <numeric>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "dnssquat/analytics.hpp"
#include "dnssquat/common.hpp"
#include "dnssquat/features.hpp"

namespace dnssquat {

struct KMeansParams {
    std::size_t k = 2;
    std::uint64_t seed = 42;
    int max_iter = 300;
    double tol = 1e-4;  // max centroid displacement / (1 + |centroid|)
    int n_restarts = 1;
    unsigned threads = 1;

    friend bool operator==(const KMeansParams& a, const KMeansParams& b) {
        return a.k == b.k && a.seed == b.seed && a.max_iter == b.max_iter && a.tol == b.tol &&
               a.n_restarts == b.n_restarts;
    }
};

struct ClusterModel {
    std::size_t k = 0;
    Matrix centroids;  // k x dims, raw feature units
    std::vector<std::size_t> sizes;
    double inertia = 0.0;
    std::uint64_t seed = 0;
    int iterations_run = 0;
    std::vector<double> inertia_trace;  // inertia after each assignment step
    KMeansParams params;
};

/// Nearest centroid; equal distances go to the lower index.
inline std::size_t assign(const ClusterModel& model, std::span<const double> fv) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < model.centroids.rows(); ++c) {
        double d = 0.0;
        const auto cen = model.centroids.row(c);
        for (std::size_t j = 0; j < cen.size(); ++j) d += (fv[j] - cen[j]) * (fv[j] - cen[j]);
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    return best;
}

inline std::vector<std::size_t> assign(const ClusterModel& model, const Matrix& x, unsigned threads = 1) {
    std::vector<std::size_t> out(x.rows());
    parallel_for(x.rows(), threads, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) out[i] = assign(model, x.row(i));
    });
    return out;
}

namespace detail {

inline double sq_dist(std::span<const double> a, std::span<const double> b) {
    double d = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) d += (a[j] - b[j]) * (a[j] - b[j]);
    return d;
}

inline Matrix kmeanspp_init(const Matrix& x, std::size_t k, Rng& rng) {
    Matrix centroids(k, x.cols());
    const std::size_t first = rng.below(x.rows());
    std::copy(x.row(first).begin(), x.row(first).end(), centroids.row(0).begin());
    std::vector<double> d2(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i) d2[i] = sq_dist(x.row(i), centroids.row(0));
    for (std::size_t c = 1; c < k; ++c) {
        const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
        std::size_t pick = 0;
        if (total > 0) {
            const double target = rng.uniform() * total;
            double acc = 0.0;
            pick = x.rows() - 1;
            for (std::size_t i = 0; i < x.rows(); ++i) {
                acc += d2[i];
                if (acc > target && d2[i] > 0) {
                    pick = i;
                    break;
                }
            }
        } else {
            pick = rng.below(x.rows());
        }
        std::copy(x.row(pick).begin(), x.row(pick).end(), centroids.row(c).begin());
        for (std::size_t i = 0; i < x.rows(); ++i) d2[i] = std::min(d2[i], sq_dist(x.row(i), centroids.row(c)));
    }
    return centroids;
}

inline ClusterModel lloyd(const Matrix& x, const KMeansParams& p, std::uint64_t seed) {
    Rng rng(seed);
    ClusterModel m;
    m.k = p.k;
    m.seed = p.seed;
    m.params = p;
    m.centroids = kmeanspp_init(x, p.k, rng);
    std::vector<std::size_t> labels(x.rows());
    std::vector<double> dist(x.rows());
    const std::size_t dims = x.cols();

    for (int iter = 0; iter < std::max(1, p.max_iter); ++iter) {
        parallel_for(x.rows(), p.threads, [&](std::size_t b, std::size_t e) {
            for (std::size_t i = b; i < e; ++i) {
                labels[i] = assign(m, x.row(i));
                dist[i] = sq_dist(x.row(i), m.centroids.row(labels[i]));
            }
        });
        m.inertia_trace.push_back(std::accumulate(dist.begin(), dist.end(), 0.0));
        ++m.iterations_run;

        Matrix sums(p.k, dims);
        std::vector<std::size_t> counts(p.k, 0);
        for (std::size_t i = 0; i < x.rows(); ++i) {
            ++counts[labels[i]];
            auto s = sums.row(labels[i]);
            const auto r = x.row(i);
            for (std::size_t j = 0; j < dims; ++j) s[j] += r[j];
        }
        // An empty cluster takes the point farthest from its own centroid.
        for (std::size_t c = 0; c < p.k; ++c) {
            if (counts[c] != 0) continue;
            std::size_t far = x.rows();
            for (std::size_t i = 0; i < x.rows(); ++i) {
                if (counts[labels[i]] < 2) continue;  // never empty another cluster
                if (far == x.rows() || dist[i] > dist[far]) far = i;
            }
            const std::size_t from = labels[far];
            auto src = sums.row(from);
            auto dst = sums.row(c);
            for (std::size_t j = 0; j < dims; ++j) {
                src[j] -= x(far, j);
                dst[j] = x(far, j);
            }
            --counts[from];
            counts[c] = 1;
            labels[far] = c;
            dist[far] = 0.0;
        }
        double shift = 0.0;
        for (std::size_t c = 0; c < p.k; ++c) {
            auto cen = m.centroids.row(c);
            double move = 0.0, norm = 0.0;
            for (std::size_t j = 0; j < dims; ++j) {
                const double v = sums(c, j) / static_cast<double>(counts[c]);
                move += (v - cen[j]) * (v - cen[j]);
                norm += v * v;
                cen[j] = v;
            }
            shift = std::max(shift, std::sqrt(move) / (1.0 + std::sqrt(norm)));
        }
        if (shift < p.tol) break;
    }
    // Final statistics against the final centroids.
    m.sizes.assign(p.k, 0);
    double inertia = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const auto c = assign(m, x.row(i));
        ++m.sizes[c];
        inertia += sq_dist(x.row(i), m.centroids.row(c));
    }
    m.inertia = inertia;
    return m;
}

/// Reorders clusters by ascending centroid domain length (column 0); stable on ties.
inline void canonicalize(ClusterModel& m) {
    std::vector<std::size_t> order(m.k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return m.centroids(a, 0) < m.centroids(b, 0); });
    m.centroids = m.centroids.select_rows(order);
    std::vector<std::size_t> sizes(m.k);
    for (std::size_t i = 0; i < m.k; ++i) sizes[i] = m.sizes[order[i]];
    m.sizes = std::move(sizes);
}

}  // namespace detail

/// Lloyd's algorithm with k-means++ seeding on raw features. Clusters are
/// returned sorted by centroid domain length, so cluster index 0 ("cluster 1")
/// is the shorter-name group.
inline ClusterModel kmeans_fit(const Matrix& x, const KMeansParams& p = {}) {
    if (p.k == 0) throw Error(ErrorKind::data, "kmeans: k must be positive");
    if (x.rows() < p.k)
        throw Error(ErrorKind::data, "kmeans: " + std::to_string(x.rows()) + " points for k=" + std::to_string(p.k));
    for (double v : x.data())
        if (!std::isfinite(v)) throw Error(ErrorKind::data, "kmeans: non-finite feature value");

    ClusterModel best;
    for (int r = 0; r < std::max(1, p.n_restarts); ++r) {
        auto m = detail::lloyd(x, p, p.seed + static_cast<std::uint64_t>(r) * 0x9E3779B97F4A7C15ULL);
        if (r == 0 || m.inertia < best.inertia) best = std::move(m);
    }
    detail::canonicalize(best);
    return best;
}

struct ClusterReport {
    Matrix means;  // k x dims, mean of the points assigned to each cluster
    std::vector<std::size_t> sizes;
    std::vector<Histogram> histograms;  // one per feature, groups = cluster index
};

inline ClusterReport cluster_report(const ClusterModel& model, const Matrix& x, unsigned threads = 1) {
    ClusterReport rep;
    const auto labels = assign(model, x, threads);
    rep.means = Matrix(model.k, x.cols());
    rep.sizes.assign(model.k, 0);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        ++rep.sizes[labels[i]];
        for (std::size_t j = 0; j < x.cols(); ++j) rep.means(labels[i], j) += x(i, j);
    }
    for (std::size_t c = 0; c < model.k; ++c)
        for (std::size_t j = 0; j < x.cols(); ++j)
            rep.means(c, j) = rep.sizes[c] ? rep.means(c, j) / static_cast<double>(rep.sizes[c]) : 0.0;
    std::vector<int> groups(labels.begin(), labels.end());
    for (std::size_t j = 0; j < x.cols(); ++j) {
        const auto col = x.column(j);
        const auto name = j < kFeatureNames.size() ? std::string(kFeatureNames[j]) : "feature_" + std::to_string(j);
        rep.histograms.push_back(histogram_pdf(col, groups, default_binning(j, col), name));
    }
    return rep;
}

/// Feature rows x cluster columns.
inline void write_centroids_csv(std::ostream& out, const Matrix& means) {
    out << "feature";
    for (std::size_t c = 0; c < means.rows(); ++c) out << ",cluster_" << c + 1;
    out << '\n' << std::fixed << std::setprecision(4);
    for (std::size_t j = 0; j < means.cols(); ++j) {
        out << (j < kFeatureNames.size() ? std::string(kFeatureNames[j]) : std::to_string(j));
        for (std::size_t c = 0; c < means.rows(); ++c) out << ',' << means(c, j);
        out << '\n';
    }
}

inline void write_sizes_csv(std::ostream& out, const ClusterModel& m) {
    out << "cluster,size\n";
    for (std::size_t c = 0; c < m.sizes.size(); ++c) out << c + 1 << ',' << m.sizes[c] << '\n';
    out << std::setprecision(17) << "inertia," << m.inertia << '\n';
}

}  // namespace dnssquat

#endif  // DNSSQUAT_CLUSTER_HPP
