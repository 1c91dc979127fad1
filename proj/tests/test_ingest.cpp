#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "dnssquat/ingest.hpp"
#include "oracles.hpp"

using namespace dnssquat;

namespace {

DomainRecord rec(std::string d, std::optional<int> label = std::nullopt) {
    return {d, d, label, Source::adhoc};
}

std::vector<std::string> parts(const std::vector<DomainRecord>& rs) {
    std::vector<std::string> out;
    for (const auto& r : rs) out.push_back(r.domain_part);
    return out;
}

}  // namespace

TEST(Normalize, SecondLevelLabelUsesMultiPartSuffix) {
    EXPECT_EQ(normalize_domain("www.mydaily.co.uk", NormalizeMode::second_level_label), "mydaily");
}

TEST(Normalize, FullNameLowercasesAndDropsTrailingDot) {
    EXPECT_EQ(normalize_domain("EXAMPLE.COM.", NormalizeMode::full_name), "example.com");
}

TEST(Normalize, SchemeAndWwwStripped) {
    EXPECT_EQ(normalize_domain("https://www.paypa1.com", NormalizeMode::second_level_label), "paypa1");
    EXPECT_EQ(normalize_domain("http://www.paypa1.com/login?x=1", NormalizeMode::full_name), "paypa1.com");
    EXPECT_EQ(normalize_domain("user@shop.example.org:8080", NormalizeMode::full_name), "shop.example.org");
}

TEST(Normalize, DegenerateInputsRejected) {
    for (const char* bad : {"", "   ", "www.", "...", "http://", "a b.com"}) {
        try {
            normalize_domain(bad, NormalizeMode::full_name);
            ADD_FAILURE() << "accepted '" << bad << "'";
        } catch (const Error& e) {
            EXPECT_EQ(e.kind(), ErrorKind::data);
            EXPECT_NE(std::string(e.what()).find("degenerate domain"), std::string::npos);
        }
    }
}

TEST(Normalize, UserSuffixExtendsList) {
    SuffixList s = SuffixList::builtin();
    EXPECT_EQ(normalize_domain("shop.example.gov.zz", NormalizeMode::second_level_label, s), "gov");
    std::istringstream in("# extra\ngov.zz\n");
    s.load(in);
    EXPECT_EQ(normalize_domain("shop.example.gov.zz", NormalizeMode::second_level_label, s), "example");
}

TEST(Normalize, IdempotentOnOwnOutput) {
    std::mt19937_64 gen(11);
    const std::string alphabet = "abcXYZ019-.";
    const std::vector<std::string> prefixes = {"", "www.", "http://", "https://www.", "WWW.", " "};
    int checked = 0;
    for (int i = 0; i < 5000; ++i) {
        std::string raw = prefixes[i % prefixes.size()] + oracle::random_string(gen, alphabet, 1, 20);
        if (i % 3 == 0) raw += ".co.uk.";
        for (auto mode : {NormalizeMode::full_name, NormalizeMode::second_level_label}) {
            std::string once;
            try {
                once = normalize_domain(raw, mode);
            } catch (const Error&) {
                continue;
            }
            ASSERT_EQ(normalize_domain(once, mode), once) << raw;
            ++checked;
        }
    }
    EXPECT_GT(checked, 5000);
}

TEST(Dedupe, KeepsFirstOccurrence) {
    auto out = dedupe({rec("a"), rec("b"), rec("a")});
    EXPECT_EQ(parts(out.records), (std::vector<std::string>{"a", "b"}));
    EXPECT_TRUE(out.conflicts.empty());
}

TEST(Dedupe, ConflictReportedFirstKept) {
    auto out = dedupe({rec("a", 0), rec("a", 1)});
    ASSERT_EQ(out.records.size(), 1u);
    EXPECT_EQ(out.records[0].label, 0);
    ASSERT_EQ(out.conflicts.size(), 1u);
    EXPECT_EQ(out.conflicts[0].kept_label, 0);
    EXPECT_EQ(out.conflicts[0].dropped_label, 1);
}

TEST(Dedupe, EmptyIsEmpty) { EXPECT_TRUE(dedupe({}).records.empty()); }

TEST(Dedupe, Idempotent) {
    std::mt19937_64 gen(3);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<DomainRecord> in;
        const std::size_t n = gen() % 40;
        for (std::size_t i = 0; i < n; ++i) in.push_back(rec(oracle::random_string(gen, "abc", 1, 2), int(gen() % 2)));
        const auto once = dedupe(in).records;
        EXPECT_EQ(dedupe(once).records, once);
    }
}

TEST(LabeledCsv, MultiPartSuffixRow) {
    std::istringstream in("host,domain,class\nwww.mydaily.co.uk,mydaily,legit\n");
    auto r = parse_labeled_csv(in);
    ASSERT_EQ(r.records.size(), 1u);
    EXPECT_EQ(r.records[0].domain_part, "mydaily");
    EXPECT_EQ(r.records[0].label, 0);
    EXPECT_EQ(r.records[0].source, Source::labeled_corpus);
    EXPECT_EQ(r.stats.total_rows, 1u);
    EXPECT_EQ(r.stats.unique_domains, 1u);
}

TEST(LabeledCsv, HeaderOnlyGivesZeroStats) {
    std::istringstream in("host,domain,class\n");
    auto r = parse_labeled_csv(in);
    EXPECT_TRUE(r.records.empty());
    EXPECT_EQ(r.stats, CorpusStats{});
}

TEST(LabeledCsv, ClassSpellings) {
    const std::vector<std::pair<std::string, std::optional<int>>> table = {
        {"dga", 1}, {"DGA", 1}, {"Dga", 1}, {"dGa", 1}, {" dga ", 1},
        {"legit", 0}, {"LEGIT", 0}, {"Legit", 0},
        {"malware", std::nullopt}, {"", std::nullopt}, {"1", std::nullopt}, {"dgax", std::nullopt}};
    for (const auto& [spelling, expected] : table) {
        std::istringstream in("host,domain,class\nwww.x.com,x,\"" + spelling + "\"\n");
        auto r = parse_labeled_csv(in);
        if (expected) {
            ASSERT_EQ(r.records.size(), 1u) << spelling;
            EXPECT_EQ(r.records[0].label, *expected) << spelling;
        } else {
            EXPECT_TRUE(r.records.empty()) << spelling;
            EXPECT_EQ(r.errors.size(), 1u) << spelling;
        }
    }
}

TEST(LabeledCsv, BadRowsCollectedAndSkipped) {
    std::istringstream in("host,domain,class\na.com,a,legit\nb.com,b,weird\nc.com,c,dga\n");
    auto r = parse_labeled_csv(in);
    EXPECT_EQ(r.records.size(), 2u);
    ASSERT_EQ(r.errors.size(), 1u);
    EXPECT_EQ(r.errors[0].line, 3u);
    EXPECT_EQ(r.stats.label_counts.at(0), 1u);
    EXPECT_EQ(r.stats.label_counts.at(1), 1u);
}

TEST(LabeledCsv, MissingColumnIsFatal) {
    std::istringstream in("host,class\na.com,legit\n");
    try {
        parse_labeled_csv(in);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::parse);
        EXPECT_NE(std::string(e.what()).find("domain"), std::string::npos);
    }
}

TEST(LabeledCsv, StatsInvariants) {
    std::istringstream in("host,domain,class\na.com,a,legit\na.com,a,legit\nb.com,b,dga\n");
    auto r = parse_labeled_csv(in);
    EXPECT_LE(r.stats.unique_domains, r.stats.total_rows);
    std::size_t sum = 0;
    for (auto [k, v] : r.stats.label_counts) sum += v;
    EXPECT_EQ(sum, r.stats.unique_domains);
}

TEST(Census, OneLine) {
    std::istringstream in("example.com\t93.184.216.34\n");
    auto r = parse_census_lines(in, 10);
    ASSERT_EQ(r.records.size(), 1u);
    EXPECT_EQ(r.records[0].domain_part, "example.com");
    EXPECT_FALSE(r.records[0].label.has_value());
    EXPECT_EQ(r.records[0].source, Source::census_corpus);
    std::istringstream in2("www.example.com\t93.184.216.34\n");
    EXPECT_EQ(parse_census_lines(in2, 10, NormalizeMode::second_level_label).records[0].domain_part, "example");
}

TEST(Census, ZeroLimit) {
    std::istringstream in("example.com\t93.184.216.34\n");
    auto r = parse_census_lines(in, 0);
    EXPECT_TRUE(r.records.empty());
    EXPECT_EQ(r.rows_consumed, 0u);
}

TEST(Census, MalformedLineSkipped) {
    std::istringstream in("a.com\t1.2.3.4\nno tab here\nb.com\t5.6.7.8\n");
    auto r = parse_census_lines(in, 100);
    EXPECT_EQ(r.records.size(), 2u);
    EXPECT_EQ(r.skipped, 1u);
}

TEST(Census, MaxRowsHonored) {
    std::istringstream in("a.com\t1.2.3.4\nb.com\t1.2.3.4\nc.com\t1.2.3.4\n");
    auto r = parse_census_lines(in, 2);
    EXPECT_EQ(r.records.size(), 2u);
    EXPECT_EQ(r.rows_consumed, 2u);
}

TEST(Parsers, FuzzedLinesYieldValidRecords) {
    std::mt19937_64 gen(99);
    const std::string alphabet = "aZ09.-_ \t:/@wW,\"";
    std::string labeled = "host,domain,class\n", census;
    for (int i = 0; i < 3000; ++i) {
        const auto host = oracle::random_string(gen, alphabet, 0, 25);
        const auto dom = oracle::random_string(gen, alphabet, 0, 10);
        labeled += host + "," + dom + "," + (gen() % 3 == 0 ? "dga" : gen() % 2 ? "legit" : "?") + "\n";
        census += oracle::random_string(gen, alphabet, 0, 25) + "\t" + (gen() % 4 ? "10.0.0.1" : "x") + "\n";
    }
    for (auto mode : {NormalizeMode::full_name, NormalizeMode::second_level_label}) {
        std::istringstream a(labeled), b(census);
        for (const auto& r : parse_labeled_csv(a, mode).records) ASSERT_FALSE(validate(r)) << *validate(r);
        for (const auto& r : parse_census_lines(b, 1u << 20, mode).records) ASSERT_FALSE(validate(r)) << *validate(r);
    }
}
