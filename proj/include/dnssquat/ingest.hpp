#ifndef DNSSQUAT_INGEST_HPP
#define DNSSQUAT_INGEST_HPP

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "dnssquat/common.hpp"

namespace dnssquat {

enum class Source { labeled_corpus, census_corpus, adhoc };

inline const char* to_string(Source s) {
    switch (s) {
        case Source::labeled_corpus: return "labeled_corpus";
        case Source::census_corpus: return "census_corpus";
        case Source::adhoc: return "adhoc";
    }
    return "unknown";
}

/// How much of a host name is kept for feature extraction.
enum class NormalizeMode {
    full_name,           // every label after stripping scheme / www / trailing dot
    second_level_label,  // only the label left of the public suffix
};

inline const char* to_string(NormalizeMode m) {
    return m == NormalizeMode::full_name ? "full" : "sld";
}

inline NormalizeMode parse_normalize_mode(std::string_view s) {
    if (s == "full" || s == "full_name") return NormalizeMode::full_name;
    if (s == "sld" || s == "second_level_label") return NormalizeMode::second_level_label;
    throw Error(ErrorKind::usage, "unknown normalization mode '" + std::string(s) + "' (expected full|sld)");
}

struct DomainRecord {
    std::string raw_host;
    std::string domain_part;
    std::optional<int> label;  // 1 = DGA, 0 = legitimate
    Source source = Source::adhoc;

    friend bool operator==(const DomainRecord&, const DomainRecord&) = default;
};

struct CorpusStats {
    std::size_t total_rows = 0;
    std::size_t unique_domains = 0;
    std::map<int, std::size_t> label_counts;

    friend bool operator==(const CorpusStats&, const CorpusStats&) = default;
};

struct RowError {
    std::size_t line = 0;  // 1-based, header is line 1
    std::string message;
};

/// Multi-part public suffixes ("co.uk"). Single-label TLDs need no entry:
/// the last label is always treated as a suffix.
class SuffixList {
public:
    static SuffixList builtin() {
        SuffixList list;
        for (const char* s : {"co.uk", "org.uk", "ac.uk", "gov.uk", "ltd.uk", "plc.uk", "me.uk", "net.uk",
                              "com.au", "net.au", "org.au", "edu.au", "gov.au", "co.nz", "org.nz", "net.nz",
                              "co.jp", "ne.jp", "or.jp", "ac.jp", "co.kr", "or.kr", "com.br", "net.br",
                              "org.br", "com.cn", "net.cn", "org.cn", "gov.cn", "com.tw", "com.hk", "com.sg",
                              "com.my", "co.in", "net.in", "org.in", "co.za", "co.il", "com.mx", "com.ar",
                              "com.tr", "com.ua", "co.id", "or.id", "com.vn", "com.pl", "com.ru", "co.th"}) {
            list.add(s);
        }
        return list;
    }

    void add(std::string_view suffix) {
        std::string s;
        for (char c : suffix) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        while (!s.empty() && s.front() == '.') s.erase(s.begin());
        while (!s.empty() && s.back() == '.') s.pop_back();
        if (s.empty()) return;
        const auto labels = static_cast<std::size_t>(std::count(s.begin(), s.end(), '.')) + 1;
        max_labels_ = std::max(max_labels_, labels);
        suffixes_.insert(std::move(s));
    }

    /// One suffix per line; '#' starts a comment.
    void load(std::istream& in) {
        std::string line;
        while (std::getline(in, line)) {
            if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
            auto first = line.find_first_not_of(" \t\r");
            if (first == std::string::npos) continue;
            auto last = line.find_last_not_of(" \t\r");
            add(std::string_view(line).substr(first, last - first + 1));
        }
    }

    void load_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw Error(ErrorKind::io, "cannot open suffix list '" + path + "'");
        load(in);
    }

    bool contains(std::string_view s) const { return suffixes_.count(std::string(s)) != 0; }
    std::size_t max_labels() const noexcept { return max_labels_; }
    std::size_t size() const noexcept { return suffixes_.size(); }

private:
    std::set<std::string> suffixes_;
    std::size_t max_labels_ = 1;
};

namespace detail {

inline std::vector<std::string_view> split_labels(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto dot = s.find('.', start);
        out.push_back(s.substr(start, dot - start));
        if (dot == std::string_view::npos) break;
        start = dot + 1;
    }
    return out;
}

inline bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

}  // namespace detail

/// Lowercases and strips scheme, path, port, leading "www." labels and trailing
/// dots; in second_level_label mode keeps only the label left of the suffix.
/// Throws Error(data) when nothing usable remains.
inline std::string normalize_domain(std::string_view raw, NormalizeMode mode,
                                    const SuffixList& suffixes = SuffixList::builtin()) {
    auto first = std::find_if_not(raw.begin(), raw.end(), detail::is_space);
    auto last = std::find_if_not(raw.rbegin(), raw.rend(), detail::is_space).base();
    if (first >= last) throw Error(ErrorKind::data, "degenerate domain: empty input");
    std::string s(first, last);
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });

    if (auto scheme = s.find("://"); scheme != std::string::npos) s.erase(0, scheme + 3);
    if (auto path = s.find_first_of("/?#"); path != std::string::npos) s.erase(path);
    if (auto at = s.rfind('@'); at != std::string::npos) s.erase(0, at + 1);
    if (auto colon = s.find(':'); colon != std::string::npos) s.erase(colon);
    if (std::any_of(s.begin(), s.end(), detail::is_space))
        throw Error(ErrorKind::data, "degenerate domain: whitespace inside '" + std::string(raw) + "'");

    for (bool changed = true; changed;) {
        changed = false;
        while (!s.empty() && s.back() == '.') s.pop_back(), changed = true;
        while (!s.empty() && s.front() == '.') s.erase(s.begin()), changed = true;
        while (s.rfind("www.", 0) == 0) s.erase(0, 4), changed = true;
    }
    if (s.empty() || s == "www") throw Error(ErrorKind::data, "degenerate domain: '" + std::string(raw) + "'");

    if (mode == NormalizeMode::full_name) return s;

    auto labels = detail::split_labels(s);
    labels.erase(std::remove_if(labels.begin(), labels.end(), [](auto l) { return l.empty(); }), labels.end());
    if (labels.size() == 1) return std::string(labels[0]);

    // Longest multi-part suffix that still leaves a label on its left.
    std::size_t suffix_labels = 1;
    for (std::size_t n = std::min(suffixes.max_labels(), labels.size() - 1); n >= 2; --n) {
        std::string candidate;
        for (std::size_t i = labels.size() - n; i < labels.size(); ++i) {
            if (!candidate.empty()) candidate.push_back('.');
            candidate.append(labels[i]);
        }
        if (suffixes.contains(candidate)) {
            suffix_labels = n;
            break;
        }
    }
    std::string sld(labels[labels.size() - suffix_labels - 1]);
    if (sld == "www") throw Error(ErrorKind::data, "degenerate domain: '" + std::string(raw) + "'");
    return sld;
}

struct LabelConflict {
    std::string domain_part;
    int kept_label = 0;
    int dropped_label = 0;
};

struct DedupeResult {
    std::vector<DomainRecord> records;
    std::vector<LabelConflict> conflicts;
};

/// Keeps the first record per domain_part, in input order.
inline DedupeResult dedupe(std::vector<DomainRecord> records) {
    DedupeResult out;
    std::unordered_map<std::string, std::size_t> seen;
    seen.reserve(records.size());
    for (auto& r : records) {
        auto [it, inserted] = seen.try_emplace(r.domain_part, out.records.size());
        if (inserted) {
            out.records.push_back(std::move(r));
            continue;
        }
        const auto& kept = out.records[it->second];
        if (kept.label && r.label && *kept.label != *r.label)
            out.conflicts.push_back({r.domain_part, *kept.label, *r.label});
    }
    return out;
}

inline CorpusStats compute_stats(std::size_t total_rows, const std::vector<DomainRecord>& records) {
    CorpusStats stats;
    stats.total_rows = total_rows;
    std::unordered_set<std::string_view> seen;
    seen.reserve(records.size());
    for (const auto& r : records) {
        if (!seen.insert(r.domain_part).second) continue;
        ++stats.unique_domains;
        if (r.label) ++stats.label_counts[*r.label];
    }
    return stats;
}

/// Column names of the labeled CSV.
struct LabeledSchema {
    std::string host = "host";
    std::string domain = "domain";
    std::string label = "class";
};

struct LabeledParseResult {
    std::vector<DomainRecord> records;
    CorpusStats stats;
    std::vector<RowError> errors;
};

namespace detail {

/// Splits one CSV line (RFC 4180 quoting, no embedded newlines).
inline std::vector<std::string> split_csv_line(std::string_view line, char delim = ',') {
    std::vector<std::string> fields(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    fields.back().push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                fields.back().push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == delim) {
            fields.emplace_back();
        } else {
            fields.back().push_back(c);
        }
    }
    return fields;
}

inline std::string trim(std::string_view s) {
    auto first = std::find_if_not(s.begin(), s.end(), is_space);
    auto last = std::find_if_not(s.rbegin(), s.rend(), is_space).base();
    return first < last ? std::string(first, last) : std::string();
}

inline std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

}  // namespace detail

/// Maps a class string to its label; accepts "legit"/"dga" in any case.
inline std::optional<int> parse_class(std::string_view s) {
    const auto v = detail::lower(detail::trim(s));
    if (v == "dga") return 1;
    if (v == "legit") return 0;
    return std::nullopt;
}

/// Reads the labeled corpus. In second_level_label mode the domain column is
/// used directly (it already holds the reduced name); full_name mode normalizes
/// the host column. Bad rows are collected in `errors` and skipped.
inline LabeledParseResult parse_labeled_csv(std::istream& in,
                                            NormalizeMode mode = NormalizeMode::second_level_label,
                                            const LabeledSchema& schema = {},
                                            const SuffixList& suffixes = SuffixList::builtin()) {
    if (in.bad()) throw Error(ErrorKind::io, "labeled corpus: unreadable stream");
    LabeledParseResult out;
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorKind::parse, "labeled corpus: missing header row");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);

    const auto header = detail::split_csv_line(line);
    auto find_column = [&](const std::string& name) {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (detail::lower(detail::trim(header[i])) == detail::lower(name)) return i;
        throw Error(ErrorKind::parse, "labeled corpus: missing required column '" + name + "'");
    };
    const std::size_t host_col = find_column(schema.host);
    const std::size_t domain_col = find_column(schema.domain);
    const std::size_t class_col = find_column(schema.label);
    const std::size_t needed = std::max({host_col, domain_col, class_col}) + 1;

    std::size_t line_no = 1;
    std::size_t total = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (detail::trim(line).empty()) continue;
        ++total;
        auto fields = detail::split_csv_line(line);
        if (fields.size() < needed) {
            out.errors.push_back({line_no, "expected at least " + std::to_string(needed) + " fields"});
            continue;
        }
        auto label = parse_class(fields[class_col]);
        if (!label) {
            out.errors.push_back({line_no, "unknown class '" + fields[class_col] + "'"});
            continue;
        }
        DomainRecord rec;
        rec.raw_host = fields[host_col];
        rec.label = label;
        rec.source = Source::labeled_corpus;
        try {
            const bool use_domain_col =
                mode == NormalizeMode::second_level_label && !detail::trim(fields[domain_col]).empty();
            rec.domain_part = use_domain_col ? normalize_domain(fields[domain_col], mode, suffixes)
                                             : normalize_domain(fields[host_col], mode, suffixes);
        } catch (const Error& e) {
            out.errors.push_back({line_no, e.what()});
            continue;
        }
        out.records.push_back(std::move(rec));
    }
    if (in.bad()) throw Error(ErrorKind::io, "labeled corpus: read failure");
    out.stats = compute_stats(total, out.records);
    return out;
}

struct CensusParseResult {
    std::vector<DomainRecord> records;
    std::size_t rows_consumed = 0;
    std::size_t skipped = 0;
};

namespace detail {

inline bool is_ipv4(std::string_view s) {
    int parts = 0;
    std::size_t i = 0;
    while (i <= s.size()) {
        std::size_t j = i;
        int value = 0;
        while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) {
            value = value * 10 + (s[j] - '0');
            if (value > 255 || j - i >= 3) return false;
            ++j;
        }
        if (j == i) return false;
        ++parts;
        if (j == s.size()) break;
        if (s[j] != '.') return false;
        i = j + 1;
    }
    return parts == 4;
}

}  // namespace detail

/// Reads "domain<TAB>ipv4" lines, consuming at most `max_rows` lines.
inline CensusParseResult parse_census_lines(std::istream& in, std::size_t max_rows,
                                            NormalizeMode mode = NormalizeMode::full_name,
                                            const SuffixList& suffixes = SuffixList::builtin()) {
    if (in.bad()) throw Error(ErrorKind::io, "census corpus: unreadable stream");
    CensusParseResult out;
    std::string line;
    while (out.rows_consumed < max_rows && std::getline(in, line)) {
        ++out.rows_consumed;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto tab = line.find('\t');
        if (tab == std::string::npos || tab == 0 ||
            !detail::is_ipv4(detail::trim(std::string_view(line).substr(tab + 1)))) {
            ++out.skipped;
            continue;
        }
        DomainRecord rec;
        rec.raw_host = line.substr(0, tab);
        rec.source = Source::census_corpus;
        try {
            rec.domain_part = normalize_domain(rec.raw_host, mode, suffixes);
        } catch (const Error&) {
            ++out.skipped;
            continue;
        }
        out.records.push_back(std::move(rec));
    }
    if (in.bad()) throw Error(ErrorKind::io, "census corpus: read failure");
    return out;
}

/// Checks the DomainRecord invariants; returns a description of the first violation.
inline std::optional<std::string> validate(const DomainRecord& r) {
    const auto& d = r.domain_part;
    if (d.empty()) return "empty domain_part";
    for (char c : d) {
        if (std::isspace(static_cast<unsigned char>(c))) return "whitespace in domain_part";
        if (std::isupper(static_cast<unsigned char>(c))) return "uppercase in domain_part";
    }
    if (d.find("://") != std::string::npos) return "scheme in domain_part";
    if (d.rfind("www.", 0) == 0) return "leading www label";
    if (d.back() == '.') return "trailing dot";
    if (r.label && *r.label != 0 && *r.label != 1) return "label outside {0,1}";
    return std::nullopt;
}

}  // namespace dnssquat

#endif  // DNSSQUAT_INGEST_HPP
