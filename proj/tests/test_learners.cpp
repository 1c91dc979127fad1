#include <gtest/gtest.h>

#include <algorithm>
#include <numbers>
#include <random>

#include "dnssquat/learners/ensemble.hpp"
#include "oracles.hpp"

using namespace dnssquat;

namespace {

Matrix rows_matrix(const std::vector<std::vector<double>>& rows) {
    Matrix m(0, rows[0].size());
    for (const auto& r : rows) m.push_row(r);
    return m;
}

struct Blobs {
    Matrix x;
    std::vector<int> y;
};

// Two well separated clusters in `dims` dimensions.
Blobs blobs(std::size_t per_class, std::size_t dims, std::uint64_t seed, double gap = 10.0) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    Blobs b{Matrix(0, dims), {}};
    for (std::size_t i = 0; i < 2 * per_class; ++i) {
        const int label = static_cast<int>(i % 2);
        std::vector<double> row(dims);
        for (auto& v : row) v = nd(gen) + label * gap;
        b.x.push_row(row);
        b.y.push_back(label);
    }
    return b;
}

Blobs random_labeled(std::size_t n, std::size_t dims, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    Blobs b{Matrix(0, dims), {}};
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> row(dims);
        double s = 0;
        for (std::size_t d = 0; d < dims; ++d) s += (row[d] = nd(gen) * (d + 1)) * (d % 2 ? 1 : -1);
        b.x.push_row(row);
        b.y.push_back(s + nd(gen) > 0);
    }
    b.y[0] = 0, b.y[1] = 1;
    return b;
}

double train_accuracy(const auto& model, const Matrix& x, const std::vector<int>& y) {
    double ok = 0;
    for (std::size_t i = 0; i < x.rows(); ++i) ok += model.predict(x.row(i)) == y[i];
    return ok / static_cast<double>(x.rows());
}

}  // namespace

// ---- standardizer

TEST(Standardizer, TwoPointColumn) {
    const auto m = rows_matrix({{0}, {2}});
    const auto z = Standardizer::fit(m).apply(m);
    EXPECT_DOUBLE_EQ(z(0, 0), -1.0);
    EXPECT_DOUBLE_EQ(z(1, 0), 1.0);
}

TEST(Standardizer, ConstantColumnMapsToZero) {
    const auto m = rows_matrix({{5, 1}, {5, 2}, {5, 3}});
    const auto z = Standardizer::fit(m).apply(m);
    for (std::size_t r = 0; r < 3; ++r) EXPECT_EQ(z(r, 0), 0.0);
}

TEST(Standardizer, EmptyRejected) { EXPECT_THROW(Standardizer::fit(Matrix(0, 3)), Error); }

TEST(Standardizer, OutputMomentsAndInverse) {
    const auto b = random_labeled(300, 8, 4);
    const auto st = Standardizer::fit(b.x);
    const auto z = st.apply(b.x);
    for (std::size_t c = 0; c < 8; ++c) {
        double mean = 0, sq = 0;
        for (std::size_t r = 0; r < z.rows(); ++r) mean += z(r, c);
        mean /= z.rows();
        for (std::size_t r = 0; r < z.rows(); ++r) sq += (z(r, c) - mean) * (z(r, c) - mean);
        EXPECT_NEAR(mean, 0.0, 1e-9);
        EXPECT_NEAR(std::sqrt(sq / z.rows()), 1.0, 1e-6);
    }
    for (std::size_t r = 0; r < b.x.rows(); ++r) {
        const auto back = st.inverse(z.row(r));
        for (std::size_t c = 0; c < 8; ++c) EXPECT_NEAR(back[c], b.x(r, c), 1e-6 * std::max(1.0, std::abs(b.x(r, c))));
    }
}

// ---- decision tree

TEST(DecisionTree, OneDimensionalSplitAtMidpoint) {
    const auto x = rows_matrix({{1}, {2}, {8}, {9}});
    const std::vector<int> y = {0, 0, 1, 1};
    const auto t = DecisionTree::train(x, y, {25, 1, true, 0.25});
    ASSERT_EQ(t.depth(), 1);
    EXPECT_EQ(t.nodes()[0].feature, 0);
    EXPECT_DOUBLE_EQ(t.nodes()[0].threshold, 5.0);
    EXPECT_EQ(train_accuracy(t, x, y), 1.0);
}

TEST(DecisionTree, SingleClassIsConstantLeaf) {
    const auto x = rows_matrix({{1, 2}, {3, 4}, {5, 6}});
    const std::vector<int> y = {1, 1, 1};
    const auto t = DecisionTree::train(x, y);
    EXPECT_EQ(t.depth(), 0);
    EXPECT_EQ(t.predict(std::vector<double>{100, -100}), 1);
}

TEST(DecisionTree, SingleSample) {
    const auto t = DecisionTree::train(rows_matrix({{3}}), std::vector<int>{1});
    EXPECT_EQ(t.depth(), 0);
    EXPECT_EQ(t.predict(std::vector<double>{0}), 1);
}

TEST(DecisionTree, EmptyRejected) { EXPECT_THROW(DecisionTree::train(Matrix(0, 2), std::vector<int>{}), Error); }

TEST(DecisionTree, XorNeedsDepthTwo) {
    const auto x = rows_matrix({{0, 0}, {1, 1}, {0, 1}, {1, 0}});
    const std::vector<int> y = {0, 0, 1, 1};
    const auto t = DecisionTree::train(x, y, {25, 1, false, 0.25});
    EXPECT_EQ(t.depth(), 2);
    EXPECT_EQ(train_accuracy(t, x, y), 1.0);
}

TEST(DecisionTree, LeafTieGoesToClassZero) {
    const auto x = rows_matrix({{1}, {1}});
    const std::vector<int> y = {1, 0};
    EXPECT_EQ(DecisionTree::train(x, y).predict(std::vector<double>{1}), 0);
}

TEST(DecisionTree, DepthCapHonored) {
    const auto b = random_labeled(400, 4, 12);
    for (int cap : {0, 1, 3}) EXPECT_LE(DecisionTree::train(b.x, b.y, {cap, 1, false, 0.25}).depth(), cap);
}

TEST(DecisionTree, PathsHaveConsistentIntervals) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto b = random_labeled(300, 5, seed);
        const auto t = DecisionTree::train(b.x, b.y, {25, 2, seed % 2 == 0, 0.25});
        const auto& nodes = t.nodes();
        std::vector<double> lo(5, -INFINITY), hi(5, INFINITY);
        std::function<void(int)> walk = [&](int i) {
            const auto& n = nodes[static_cast<std::size_t>(i)];
            if (n.is_leaf()) return;
            const auto f = static_cast<std::size_t>(n.feature);
            ASSERT_GT(n.threshold, lo[f]);
            ASSERT_LT(n.threshold, hi[f]);
            const double saved_hi = hi[f], saved_lo = lo[f];
            hi[f] = n.threshold;
            walk(n.left);
            hi[f] = saved_hi;
            lo[f] = n.threshold;
            walk(n.right);
            lo[f] = saved_lo;
        };
        walk(0);
    }
}

TEST(DecisionTree, PruningShrinksNoisyTree) {
    const auto b = random_labeled(600, 3, 99);
    const auto grown = DecisionTree::train(b.x, b.y, {25, 2, false, 0.25});
    const auto pruned = DecisionTree::train(b.x, b.y, {25, 2, true, 0.25});
    EXPECT_LT(pruned.leaf_count(), grown.leaf_count());
}

TEST(DecisionTree, PessimisticErrorsMatchReferenceValues) {
    // Upper confidence bound at CF 0.25 for small leaves (values from the C4.5 error formula).
    EXPECT_NEAR(detail::pessimistic_extra_errors(1, 0, 0.25), 0.75, 1e-9);
    EXPECT_NEAR(detail::pessimistic_extra_errors(2, 0, 0.25), 2 * (1 - std::pow(0.25, 0.5)), 1e-9);
    EXPECT_GT(detail::pessimistic_extra_errors(10, 2, 0.25), 0.0);
}

// ---- knn

TEST(Knn, KOneReturnsOwnLabel) {
    const auto b = random_labeled(200, 4, 3);
    const auto m = KnnModel::train(b.x, b.y, {1});
    EXPECT_EQ(train_accuracy(m, b.x, b.y), 1.0);
}

TEST(Knn, EquidistantTieUsesLowerIndex) {
    const auto x = rows_matrix({{1, 0}, {-1, 0}, {0, 1}, {0, -1}});
    const auto m = KnnModel::train(x, {1, 1, 0, 0}, {3});
    const auto nb = m.neighbours(std::vector<double>{0, 0});
    ASSERT_EQ(nb.size(), 3u);
    EXPECT_EQ(nb[0].second, 0u);
    EXPECT_EQ(nb[1].second, 1u);
    EXPECT_EQ(nb[2].second, 2u);
    EXPECT_EQ(m.predict(std::vector<double>{0, 0}), 1);
}

TEST(Knn, KEqualsNIsMajorityConstant) {
    const auto b = random_labeled(21, 3, 8);
    int ones = 0;
    for (int v : b.y) ones += v;
    const int majority = 2 * ones > 21 ? 1 : 0;
    const auto m = KnnModel::train(b.x, b.y, {21});
    std::mt19937_64 gen(1);
    std::normal_distribution<double> nd(0, 10);
    for (int i = 0; i < 50; ++i) EXPECT_EQ(m.predict(std::vector<double>{nd(gen), nd(gen), nd(gen)}), majority);
}

TEST(Knn, TooFewSamplesSuggestsSmallerK) {
    try {
        KnnModel::train(rows_matrix({{1}, {2}}), {0, 1}, {5});
        FAIL();
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("k"), std::string::npos);
    }
}

TEST(Knn, KdTreeMatchesBruteForce) {
    std::mt19937_64 gen(17);
    std::uniform_int_distribution<int> coarse(0, 6);  // many exact distance ties
    for (int trial = 0; trial < 5; ++trial) {
        Matrix x(0, 3);
        std::vector<int> y;
        for (int i = 0; i < 400; ++i) {
            x.push_row(std::vector<double>{double(coarse(gen)), double(coarse(gen)), double(coarse(gen))});
            y.push_back(coarse(gen) % 2);
        }
        const auto m = KnnModel::train(x, y, {7});
        for (int q = 0; q < 100; ++q) {
            const std::vector<double> query = {coarse(gen) + 0.5 * (q % 2), double(coarse(gen)), double(coarse(gen))};
            std::vector<std::pair<double, std::size_t>> all;
            for (std::size_t i = 0; i < x.rows(); ++i) {
                double d = 0;
                for (int c = 0; c < 3; ++c) d += (x(i, c) - query[c]) * (x(i, c) - query[c]);
                all.emplace_back(d, i);
            }
            std::sort(all.begin(), all.end());
            all.resize(7);
            const auto got = m.neighbours(query);
            ASSERT_EQ(got.size(), 7u);
            for (std::size_t k = 0; k < 7; ++k) {
                ASSERT_EQ(got[k].second, all[k].second);
                ASSERT_DOUBLE_EQ(got[k].first, all[k].first);
            }
        }
    }
}

// ---- logistic regression

TEST(LogReg, SeparableFixture) {
    const auto x = rows_matrix({{-2}, {-1}, {1}, {2}});
    const std::vector<int> y = {0, 0, 1, 1};
    EXPECT_EQ(train_accuracy(LogisticModel::train(x, y), x, y), 1.0);
}

TEST(LogReg, GradientMatchesCentralDifferences) {
    std::mt19937_64 gen(31);
    std::normal_distribution<double> nd(0, 1);
    for (int trial = 0; trial < 50; ++trial) {
        const auto b = random_labeled(20, 8, 100 + trial);
        std::vector<double> w(8);
        for (auto& v : w) v = nd(gen);
        const double bias = nd(gen), l2 = 0.01 * (trial % 5);
        const auto g = logreg_gradient(w, bias, b.x, b.y, l2);
        const double h = 1e-6;
        double worst = 0;
        for (std::size_t c = 0; c <= 8; ++c) {
            auto wp = w, wm = w;
            double bp = bias, bm = bias;
            if (c < 8) wp[c] += h, wm[c] -= h;
            else bp += h, bm -= h;
            const double fd = (logreg_objective(wp, bp, b.x, b.y, l2) - logreg_objective(wm, bm, b.x, b.y, l2)) / (2 * h);
            worst = std::max(worst, std::abs(fd - g[c]));
        }
        EXPECT_LT(worst, 1e-5);
    }
}

TEST(LogReg, MirroredDataGivesZeroBias) {
    std::mt19937_64 gen(2);
    std::normal_distribution<double> nd(0, 1);
    Matrix x(0, 3);
    std::vector<int> y;
    for (int i = 0; i < 50; ++i) {
        std::vector<double> row = {nd(gen), nd(gen), nd(gen)};
        const int label = row[0] + 0.3 * nd(gen) > 0;
        x.push_row(row);
        y.push_back(label);
        for (auto& v : row) v = -v;
        x.push_row(row);
        y.push_back(1 - label);
    }
    EXPECT_LT(std::abs(LogisticModel::train(x, y).bias()), 1e-3);
}

TEST(LogReg, SingleClassRejected) {
    EXPECT_THROW(LogisticModel::train(rows_matrix({{1}, {2}}), std::vector<int>{1, 1}), Error);
}

TEST(LogReg, StopsOnSmallGradient) {
    const auto x = rows_matrix({{-1}, {1}});
    LogRegParams p;
    p.tol = 10.0;
    EXPECT_EQ(LogisticModel::train(x, std::vector<int>{0, 1}, p).epochs_run(), 0);
}

// ---- naive bayes

TEST(NaiveBayes, SeparatedClusters) {
    const auto b = blobs(50, 1, 5);
    EXPECT_EQ(train_accuracy(NaiveBayesModel::train(b.x, b.y), b.x, b.y), 1.0);
}

TEST(NaiveBayes, IdenticalStatisticsFollowPrior) {
    // Both classes have mean 1.5 and variance 0.25; class 0 holds 4 of 6 rows.
    const auto x = rows_matrix({{1}, {2}, {1}, {2}, {1}, {2}});
    const std::vector<int> y = {0, 0, 0, 0, 1, 1};
    const auto m = NaiveBayesModel::train(x, y);
    for (double q : {-10.0, 0.0, 1.5, 3.0, 50.0}) EXPECT_EQ(m.predict(std::vector<double>{q}), 0);
    const auto y2 = std::vector<int>{1, 1, 1, 1, 0, 0};
    const auto m2 = NaiveBayesModel::train(x, y2);
    for (double q : {-10.0, 0.0, 1.5, 3.0, 50.0}) EXPECT_EQ(m2.predict(std::vector<double>{q}), 1);
}

TEST(NaiveBayes, ScoresMatchHandLogDensity) {
    // class 0: {0, 2} -> mean 1, var 1; class 1: {4, 8} -> mean 6, var 4; priors 1/2.
    const auto x = rows_matrix({{0}, {2}, {4}, {8}});
    const std::vector<int> y = {0, 0, 1, 1};
    const auto m = NaiveBayesModel::train(x, y);
    const double q = 3.0;
    const double want0 = std::log(0.5) - 0.5 * std::log(2 * std::numbers::pi * 1.0) - (q - 1) * (q - 1) / 2.0;
    const double want1 = std::log(0.5) - 0.5 * std::log(2 * std::numbers::pi * 4.0) - (q - 6) * (q - 6) / 8.0;
    const auto s = m.log_scores(std::vector<double>{q});
    EXPECT_NEAR(s[0], want0, 1e-9);
    EXPECT_NEAR(s[1], want1, 1e-9);
}

TEST(NaiveBayes, VarianceFloor) {
    const auto x = rows_matrix({{1, 0}, {1, 10}, {3, 0}, {3, 10}});
    const std::vector<int> y = {0, 0, 1, 1};
    const auto m = NaiveBayesModel::train(x, y);
    EXPECT_DOUBLE_EQ(m.var_floor(), 1e-9 * 25.0);
    for (const auto& cs : m.classes())
        for (double v : cs.var) EXPECT_GE(v, m.var_floor());
}

TEST(NaiveBayes, EmptyClassRejected) {
    EXPECT_THROW(NaiveBayesModel::train(rows_matrix({{1}, {2}}), std::vector<int>{0, 0}), Error);
}

// ---- linear svm

TEST(Svm, SeparableFixture) {
    const auto x = rows_matrix({{-2}, {-1}, {1}, {2}});
    const std::vector<int> y = {0, 0, 1, 1};
    EXPECT_EQ(train_accuracy(LinearSvmModel::train(x, y), x, y), 1.0);
}

TEST(Svm, LabelFlipFlipsOutputs) {
    const auto b = random_labeled(200, 4, 6);
    std::vector<int> flipped;
    for (int v : b.y) flipped.push_back(1 - v);
    const auto m = LinearSvmModel::train(b.x, b.y);
    const auto mf = LinearSvmModel::train(b.x, flipped);
    for (std::size_t i = 0; i < b.x.rows(); ++i) {
        if (m.decision(b.x.row(i)) == 0.0) continue;
        EXPECT_EQ(m.predict(b.x.row(i)), 1 - mf.predict(b.x.row(i)));
    }
}

TEST(Svm, ObjectiveBelowStartingPoint) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto b = random_labeled(150, 8, seed);
        const auto z = Standardizer::fit(b.x).apply(b.x);
        SvmParams p;
        p.seed = seed;
        const auto m = LinearSvmModel::train(z, b.y, p);
        const std::vector<double> zero(8, 0.0);
        EXPECT_LT(svm_objective(m.weights(), m.bias(), z, b.y, p.lambda), svm_objective(zero, 0.0, z, b.y, p.lambda));
    }
}

TEST(Svm, SingleClassRejected) {
    EXPECT_THROW(LinearSvmModel::train(rows_matrix({{1}, {2}}), std::vector<int>{0, 0}), Error);
}

// ---- base models and ensemble

TEST(PredictBase, ConstantTreeAndBatch) {
    const auto x = rows_matrix({{1}, {2}, {3}});
    const auto m = train_base(ModelKind::c45, x, std::vector<int>{1, 1, 1});
    EXPECT_EQ(predict_base(m, std::vector<double>{-5}), 1);
    const auto b = random_labeled(100, 8, 9);
    for (auto kind : kMemberKinds) {
        const auto model = train_base(kind, b.x, b.y);
        const auto batch = predict_base(model, b.x, 3);
        for (std::size_t i = 0; i < b.x.rows(); ++i) ASSERT_EQ(batch[i], predict_base(model, b.x.row(i)));
        EXPECT_EQ(model.standardizer.has_value(), uses_standardizer(kind));
    }
}

TEST(PredictBase, KnnKOneOnTrainingPoint) {
    const auto b = random_labeled(60, 8, 10);
    EnsembleParams p;
    p.knn.k = 1;
    const auto m = train_base(ModelKind::knn, b.x, b.y, p);
    for (std::size_t i = 0; i < b.x.rows(); ++i) EXPECT_EQ(predict_base(m, b.x.row(i)), b.y[i]);
}

TEST(PredictBase, NonFiniteRejected) {
    const auto b = random_labeled(60, 2, 10);
    const auto m = train_base(ModelKind::nb, b.x, b.y);
    EXPECT_THROW(predict_base(m, std::vector<double>{1.0, std::nan("")}), Error);
    EXPECT_THROW(predict_base(m, std::vector<double>{INFINITY, 0.0}), Error);
}

TEST(Ensemble, SeparableFixtureAllPerfect) {
    const auto b = blobs(40, 8, 3);
    const auto model = train_ensemble(b.x, b.y);
    ASSERT_EQ(model.members.size(), 5u);
    for (const auto& m : model.members) {
        EXPECT_EQ(m.trained_on, model.trained_on());
        std::size_t ok = 0;
        for (std::size_t i = 0; i < b.x.rows(); ++i) ok += predict_base(m, b.x.row(i)) == b.y[i];
        EXPECT_EQ(ok, b.x.rows()) << to_string(m.kind);
    }
    const auto preds = predict_ensemble(model, b.x);
    for (std::size_t i = 0; i < b.x.rows(); ++i) EXPECT_EQ(preds[i].label, b.y[i]);
}

TEST(Ensemble, MemberKindsInOrder) {
    const auto b = blobs(10, 2, 4);
    const auto model = train_ensemble(b.x, b.y);
    for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(model.members[i].kind, kMemberKinds[i]);
}

TEST(Ensemble, MemberFailureNamesMember) {
    const auto b = blobs(2, 2, 4);  // 4 rows, knn k=5 cannot train
    try {
        train_ensemble(b.x, b.y);
        FAIL();
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("knn"), std::string::npos) << e.what();
    }
}

TEST(Ensemble, SingleClassRejected) {
    EXPECT_THROW(train_ensemble(rows_matrix({{1}, {2}}), std::vector<int>{1, 1}), Error);
}

TEST(MajorityVote, AllPatterns) {
    for (unsigned p = 0; p < 32; ++p) {
        std::array<int, 5> votes{};
        for (int b = 0; b < 5; ++b) votes[b] = (p >> b) & 1u;
        EXPECT_EQ(majority_vote(votes), oracle::popcount_vote(p)) << p;
    }
    EXPECT_EQ(majority_vote({1, 1, 1, 0, 0}), 1);
    EXPECT_EQ(majority_vote({0, 0, 0, 0, 0}), 0);
}

TEST(Ensemble, PredictionEqualsModeOfMembers) {
    const auto b = random_labeled(300, 8, 44);
    const auto model = train_ensemble(b.x, b.y);
    for (std::size_t i = 0; i < b.x.rows(); ++i) {
        const auto p = predict_ensemble(model, b.x.row(i));
        int ones = 0;
        for (std::size_t k = 0; k < 5; ++k) {
            EXPECT_EQ(p.votes[k], predict_base(model.members[k], b.x.row(i)));
            ones += p.votes[k];
        }
        EXPECT_EQ(p.label, ones >= 3);
    }
}

TEST(Ensemble, DeterministicAcrossRunsAndThreads) {
    const auto b = random_labeled(300, 8, 45);
    const auto a = train_ensemble(b.x, b.y, {}, 1);
    const auto c = train_ensemble(b.x, b.y, {}, 4);
    EXPECT_EQ(std::get<DecisionTree>(a.members[0].impl).nodes(), std::get<DecisionTree>(c.members[0].impl).nodes());
    EXPECT_EQ(std::get<LogisticModel>(a.members[2].impl).weights(), std::get<LogisticModel>(c.members[2].impl).weights());
    EXPECT_EQ(std::get<NaiveBayesModel>(a.members[3].impl).classes(), std::get<NaiveBayesModel>(c.members[3].impl).classes());
    EXPECT_EQ(std::get<LinearSvmModel>(a.members[4].impl).weights(), std::get<LinearSvmModel>(c.members[4].impl).weights());
    const auto pa = predict_ensemble(a, b.x), pc = predict_ensemble(c, b.x, 3);
    for (std::size_t i = 0; i < pa.size(); ++i) EXPECT_EQ(pa[i].votes, pc[i].votes);
}

TEST(Standardization, ColumnScalingLeavesPredictionsUnchanged) {
    std::mt19937_64 gen(46);
    std::uniform_real_distribution<double> scale(0.5, 40.0);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto train = random_labeled(200, 8, seed);
        const auto test = random_labeled(100, 8, seed + 1000);
        Matrix train_s = train.x, test_s = test.x;
        for (std::size_t c = 0; c < 8; ++c) {
            const double s = scale(gen);
            for (std::size_t r = 0; r < train_s.rows(); ++r) train_s(r, c) *= s;
            for (std::size_t r = 0; r < test_s.rows(); ++r) test_s(r, c) *= s;
        }
        for (auto kind : {ModelKind::knn, ModelKind::logreg, ModelKind::svm}) {
            const auto a = predict_base(train_base(kind, train.x, train.y), test.x);
            const auto b = predict_base(train_base(kind, train_s, train.y), test_s);
            EXPECT_EQ(a, b) << to_string(kind) << " seed " << seed;
        }
    }
}
