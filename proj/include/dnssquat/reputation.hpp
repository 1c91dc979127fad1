#ifndef DNSSQUAT_REPUTATION_HPP
#define DNSSQUAT_REPUTATION_HPP

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "dnssquat/common.hpp"
#include "dnssquat/ingest.hpp"

namespace dnssquat {

enum class Verdict { suspicious, benign, unknown };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::suspicious: return "suspicious";
        case Verdict::benign: return "benign";
        case Verdict::unknown: return "unknown";
    }
    return "unknown";
}

inline constexpr int kDefaultReputationThreshold = 50;

struct ReputationResult {
    std::string domain;
    std::optional<int> score;  // 0..100
    Verdict verdict = Verdict::unknown;
    std::string provider;
    std::string note;  // provider error, if any
};

/// A source of 0-100 reputation scores. `score` returns nullopt when the
/// domain is unknown to the provider and throws when the provider fails.
class ReputationProvider {
public:
    virtual ~ReputationProvider() = default;
    virtual std::string id() const = 0;
    virtual std::optional<int> score(std::string_view domain) const = 0;
};

/// Scores 0 for every listed domain; everything else is unknown.
class LocalListProvider : public ReputationProvider {
public:
    LocalListProvider() = default;
    explicit LocalListProvider(std::vector<std::string> domains) {
        for (auto& d : domains) add(d);
    }

    void add(std::string_view domain) { bad_.insert(detail::lower(detail::trim(domain))); }

    /// One domain per line; '#' comments and blank lines ignored.
    void load(std::istream& in) {
        std::string line;
        while (std::getline(in, line)) {
            if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
            const auto t = detail::trim(line);
            if (!t.empty()) add(t);
        }
    }

    static LocalListProvider from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw Error(ErrorKind::io, "cannot open reputation list '" + path + "'");
        LocalListProvider p;
        p.load(in);
        return p;
    }

    std::string id() const override { return "local-list"; }
    std::optional<int> score(std::string_view domain) const override {
        if (bad_.count(detail::lower(std::string(domain)))) return 0;
        return std::nullopt;
    }
    std::size_t size() const noexcept { return bad_.size(); }

private:
    std::unordered_set<std::string> bad_;
};

/// HTTP-backed provider. The transport is injected: it receives the request URL
/// and returns the response body (nullopt for "not found"). The body must be a
/// bare integer score. No vendor client ships with the library.
class HttpReputationProvider : public ReputationProvider {
public:
    using Transport = std::function<std::optional<std::string>(const std::string& url)>;

    HttpReputationProvider(std::string url_template, Transport transport, std::string provider_id = "http")
        : url_template_(std::move(url_template)), transport_(std::move(transport)), id_(std::move(provider_id)) {}

    std::string id() const override { return id_; }

    std::optional<int> score(std::string_view domain) const override {
        std::string url = url_template_;
        if (auto at = url.find("{domain}"); at != std::string::npos) url.replace(at, 8, domain);
        const auto body = transport_(url);
        if (!body) return std::nullopt;
        const auto text = detail::trim(*body);
        int value = 0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc() || ptr != text.data() + text.size())
            throw Error(ErrorKind::data, "reputation provider returned a non-numeric body");
        return value;
    }

private:
    std::string url_template_;
    Transport transport_;
    std::string id_;
};

/// Consults the provider; failures become an unknown verdict with a note.
inline ReputationResult check(std::string_view domain, const ReputationProvider& provider,
                              int threshold = kDefaultReputationThreshold) {
    ReputationResult r;
    r.domain = std::string(domain);
    r.provider = provider.id();
    try {
        r.score = provider.score(domain);
        if (r.score && (*r.score < 0 || *r.score > 100)) {
            r.note = "score out of range: " + std::to_string(*r.score);
            r.score.reset();
        }
    } catch (const std::exception& e) {
        r.note = e.what();
        r.score.reset();
    }
    if (r.score) r.verdict = *r.score < threshold ? Verdict::suspicious : Verdict::benign;
    return r;
}

/// Seeded uniform sample of n flagged domains (without replacement), checked
/// with at most `parallelism` concurrent provider calls. Results follow the
/// order of the sampled records in `flagged`.
inline std::vector<ReputationResult> sample_and_check(std::span<const DomainRecord> flagged, std::size_t n,
                                                      std::uint64_t seed, const ReputationProvider& provider,
                                                      unsigned parallelism = 1,
                                                      int threshold = kDefaultReputationThreshold) {
    if (n > flagged.size())
        throw Error(ErrorKind::usage, "cannot sample " + std::to_string(n) + " of " + std::to_string(flagged.size()) +
                                          " flagged domains");
    std::vector<std::size_t> idx(flagged.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    Rng rng(seed);
    for (std::size_t i = 0; i < n; ++i) std::swap(idx[i], idx[i + rng.below(idx.size() - i)]);
    idx.resize(n);
    std::sort(idx.begin(), idx.end());

    std::vector<ReputationResult> out(n);
    parallel_for(n, parallelism, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) out[i] = check(flagged[idx[i]].domain_part, provider, threshold);
    });
    return out;
}

inline void write_reputation_csv(std::ostream& out, std::span<const ReputationResult> results) {
    out << "domain,score,verdict,provider\n";
    for (const auto& r : results) {
        out << r.domain << ',';
        if (r.score) out << *r.score;
        out << ',' << to_string(r.verdict) << ',' << r.provider << '\n';
    }
}

}  // namespace dnssquat

#endif  // DNSSQUAT_REPUTATION_HPP
