#ifndef DNSSQUAT_FEATURES_HPP
#define DNSSQUAT_FEATURES_HPP

#include <array>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dnssquat/common.hpp"
#include "dnssquat/ingest.hpp"

namespace dnssquat {

inline constexpr std::size_t kFeatureCount = 8;

/// Column identifiers, in matrix order.
inline constexpr std::array<std::string_view, kFeatureCount> kFeatureNames = {
    "len",           "uniq_chars",    "uniq_letters",       "uniq_numbers",
    "ratio_letters", "ratio_numbers", "ratio_uniq_letters", "ratio_uniq_numbers",
};

/// Human-readable titles for reports.
inline constexpr std::array<std::string_view, kFeatureCount> kFeatureTitles = {
    "Length of Domain Name",
    "Number of Unique Characters",
    "Number of Unique Letters",
    "Number of Unique Numbers",
    "Ratio of Letters to Domain Length",
    "Ratio of Numbers to Domain Length",
    "Ratio of Unique Letters to Unique Characters",
    "Ratio of Unique Numbers to Unique Characters",
};

enum FeatureIndex : std::size_t {
    kLen = 0,
    kUniqChars,
    kUniqLetters,
    kUniqNumbers,
    kRatioLetters,
    kRatioNumbers,
    kRatioUniqLetters,
    kRatioUniqNumbers,
};

/// The first four features are counts; the rest are ratios in [0, 1].
constexpr bool is_integer_feature(std::size_t index) { return index < 4; }

struct FeatureVector {
    int len = 0;
    int uniq_chars = 0;
    int uniq_letters = 0;
    int uniq_numbers = 0;
    double ratio_letters = 0.0;
    double ratio_numbers = 0.0;
    double ratio_uniq_letters = 0.0;
    double ratio_uniq_numbers = 0.0;

    std::array<double, kFeatureCount> values() const {
        return {static_cast<double>(len), static_cast<double>(uniq_chars),
                static_cast<double>(uniq_letters), static_cast<double>(uniq_numbers),
                ratio_letters, ratio_numbers, ratio_uniq_letters, ratio_uniq_numbers};
    }

    friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

/// Letters are a-z, numbers 0-9; anything else (hyphen, dot, ...) counts only
/// toward len and uniq_chars. Input is expected to be lowercase already.
inline FeatureVector extract(std::string_view domain) {
    if (domain.empty()) throw Error(ErrorKind::data, "cannot extract features from an empty domain");
    std::array<bool, 256> seen{};
    int letters = 0, digits = 0;
    FeatureVector fv;
    fv.len = static_cast<int>(domain.size());
    for (unsigned char c : domain) {
        const bool letter = c >= 'a' && c <= 'z';
        const bool digit = c >= '0' && c <= '9';
        letters += letter;
        digits += digit;
        if (seen[c]) continue;
        seen[c] = true;
        ++fv.uniq_chars;
        fv.uniq_letters += letter;
        fv.uniq_numbers += digit;
    }
    const double len = fv.len;
    const double uniq = fv.uniq_chars;
    fv.ratio_letters = letters / len;
    fv.ratio_numbers = digits / len;
    fv.ratio_uniq_letters = fv.uniq_letters / uniq;
    fv.ratio_uniq_numbers = fv.uniq_numbers / uniq;
    return fv;
}

/// One row per record, in record order.
inline Matrix extract_batch(std::span<const DomainRecord> records, unsigned threads = 1) {
    Matrix out(records.size(), kFeatureCount);
    constexpr auto none = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> first_bad(threads == 0 ? 1 : threads, none);
    std::vector<std::string> messages(first_bad.size());
    const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(first_bad.size(), records.size()));
    const std::size_t chunk = records.empty() ? 0 : (records.size() + workers - 1) / workers;
    parallel_for(records.size(), static_cast<unsigned>(workers), [&](std::size_t begin, std::size_t end) {
        const std::size_t slot = chunk ? begin / chunk : 0;
        for (std::size_t i = begin; i < end; ++i) {
            try {
                const auto v = extract(records[i].domain_part).values();
                std::copy(v.begin(), v.end(), out.row(i).begin());
            } catch (const Error& e) {
                first_bad[slot] = i;
                messages[slot] = e.what();
                return;
            }
        }
    });
    for (std::size_t s = 0; s < first_bad.size(); ++s) {
        if (first_bad[s] != none)
            throw Error(ErrorKind::data, "row " + std::to_string(first_bad[s]) + ": " + messages[s]);
    }
    return out;
}

}  // namespace dnssquat

#endif  // DNSSQUAT_FEATURES_HPP
