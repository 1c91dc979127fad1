#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "dnssquat/cluster.hpp"
#include "dnssquat/model_io.hpp"
#include "dnssquat/synthetic.hpp"

using namespace dnssquat;

namespace {

struct Data {
    Matrix x;
    std::vector<int> y;
};

const Data& corpus() {
    static const Data d = [] {
        const auto recs = generate_labeled({600, 400, 3});
        Data out{extract_batch(recs), {}};
        for (const auto& r : recs) out.y.push_back(*r.label);
        return out;
    }();
    return d;
}

Matrix random_vectors(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_int_distribution<int> len(3, 30);
    std::uniform_real_distribution<double> u(0, 1);
    Matrix m(n, kFeatureCount);
    for (std::size_t i = 0; i < n; ++i) {
        const int l = len(gen);
        const int uc = 1 + static_cast<int>(u(gen) * (l - 1));
        const int ul = static_cast<int>(u(gen) * uc), un = uc - ul;
        const double rl = u(gen);
        const double row[] = {double(l), double(uc), double(ul), double(un), rl, 1 - rl, double(ul) / uc, double(un) / uc};
        std::copy(std::begin(row), std::end(row), m.row(i).begin());
    }
    return m;
}

std::filesystem::path temp_dir() {
    auto dir = std::filesystem::temp_directory_path() / ("dnssquat_io_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    return dir;
}

template <typename F>
ErrorKind error_kind_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::usage;  // sentinel: no error
}

}  // namespace

TEST(ModelIo, EnsembleRoundTripPredictionsIdentical) {
    const auto model = train_ensemble(corpus().x, corpus().y);
    const auto path = (temp_dir() / "ens.dsmodel").string();
    const auto info = save(model, path, Json{{"note", "test"}});
    EXPECT_EQ(info.kind, "ensemble");
    EXPECT_EQ(info.format_version, kModelFormatVersion);
    EXPECT_EQ(info.fingerprint, model.trained_on());
    EXPECT_FALSE(std::filesystem::exists(path + ".tmp"));

    Json meta;
    const auto loaded = load_ensemble(path, &meta);
    EXPECT_EQ(meta["note"], "test");
    EXPECT_EQ(loaded.params, model.params);
    const auto q = random_vectors(1000, 5);
    const auto a = predict_ensemble(model, q), b = predict_ensemble(loaded, q);
    for (std::size_t i = 0; i < a.size(); ++i) {
        ASSERT_EQ(a[i].label, b[i].label);
        ASSERT_EQ(a[i].votes, b[i].votes);
    }
    EXPECT_EQ(encode(loaded, meta), encode(model, meta));
}

TEST(ModelIo, EveryBaseKindRoundTrips) {
    const auto q = random_vectors(1000, 6);
    for (auto kind : kMemberKinds) {
        const auto m = train_base(kind, corpus().x, corpus().y);
        const auto text = encode(m);
        const auto back = decode_base(text);
        EXPECT_EQ(back.kind, kind);
        EXPECT_EQ(back.trained_on, m.trained_on);
        EXPECT_EQ(predict_base(back, q), predict_base(m, q)) << to_string(kind);
        EXPECT_EQ(encode(back), text);
    }
}

TEST(ModelIo, StandardizerAndClusterRoundTrip) {
    const auto st = Standardizer::fit(corpus().x);
    EXPECT_EQ(decode_standardizer(encode(st)), st);

    const auto cm = kmeans_fit(corpus().x, {});
    const auto fp = fingerprint(corpus().x, {});
    Json meta;
    const auto back = decode_cluster(encode(cm, fp, Json{{"a", 1}}), &meta);
    EXPECT_EQ(back.centroids, cm.centroids);
    EXPECT_EQ(back.sizes, cm.sizes);
    EXPECT_EQ(back.inertia, cm.inertia);
    EXPECT_EQ(back.inertia_trace, cm.inertia_trace);
    EXPECT_EQ(back.params, cm.params);
    EXPECT_EQ(meta["a"], 1);
    EXPECT_EQ(assign(back, corpus().x), assign(cm, corpus().x));
}

TEST(ModelIo, ByteDeterministic) {
    const auto a = train_ensemble(corpus().x, corpus().y);
    const auto b = train_ensemble(corpus().x, corpus().y, {}, 4);
    EXPECT_EQ(encode(a), encode(b));
}

TEST(ModelIo, TruncatedFileIsCorrupt) {
    const auto text = encode(train_base(ModelKind::nb, corpus().x, corpus().y));
    for (std::size_t keep : {std::size_t(0), std::size_t(10), text.size() / 2, text.size() - 1}) {
        EXPECT_EQ(error_kind_of([&] { decode_base(text.substr(0, keep)); }), ErrorKind::model_corrupt) << keep;
    }
}

TEST(ModelIo, TamperedPayloadFailsHash) {
    auto doc = Json::parse(encode(train_base(ModelKind::logreg, corpus().x, corpus().y)));
    doc["payload"]["model"]["bias"] = 12.5;
    EXPECT_EQ(error_kind_of([&] { decode_base(doc.dump()); }), ErrorKind::model_corrupt);
}

TEST(ModelIo, VersionBumpNamesBothVersions) {
    auto doc = Json::parse(encode(Standardizer::fit(corpus().x)));
    doc["format_version"] = 7;
    try {
        decode_standardizer(doc.dump());
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::model_version);
        const std::string msg = e.what();
        EXPECT_NE(msg.find('7'), std::string::npos);
        EXPECT_NE(msg.find(std::to_string(kModelFormatVersion)), std::string::npos);
    }
}

TEST(ModelIo, KindMismatch) {
    const auto text = encode(Standardizer::fit(corpus().x));
    EXPECT_EQ(error_kind_of([&] { decode_ensemble(text); }), ErrorKind::model_kind);
    EXPECT_EQ(inspect(text).kind, "standardizer");
}

TEST(ModelIo, MissingFileIsIoError) {
    EXPECT_EQ(error_kind_of([] { load_ensemble("/nonexistent/dir/model.dsmodel"); }), ErrorKind::io);
}
