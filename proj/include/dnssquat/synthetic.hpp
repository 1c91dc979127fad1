#ifndef DNSSQUAT_SYNTHETIC_HPP
#define DNSSQUAT_SYNTHETIC_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

#include "dnssquat/common.hpp"
#include "dnssquat/detail/wordlist.hpp"
#include "dnssquat/ingest.hpp"

namespace dnssquat {

/// Labeled stand-in corpus: legit names are 2-3 concatenated dictionary words,
/// DGA names are uniform random [a-z0-9] strings of length 12-25.
struct SyntheticSpec {
    std::size_t legit = 20000;
    std::size_t dga = 13000;
    std::uint64_t seed = 7;
};

namespace detail {

inline std::string legit_name(Rng& rng) {
    std::string s;
    const std::size_t words = rng.between(2, 3);
    for (std::size_t i = 0; i < words; ++i) s += kWordlist[rng.below(kWordlist.size())];
    return s;
}

inline std::string dga_name(Rng& rng) {
    static constexpr std::string_view alphabet = "abcdefghijklmnopqrstuvwxyz0123456789";
    std::string s(rng.between(12, 25), ' ');
    for (auto& c : s) c = alphabet[rng.below(alphabet.size())];
    return s;
}

inline constexpr std::array<std::string_view, 6> kSyntheticTlds = {"com", "net", "org", "info", "co.uk", "de"};

/// Draws names until `count` distinct ones (not in `taken`) exist.
template <typename Gen>
std::vector<std::string> distinct_names(std::size_t count, Rng& rng, std::unordered_set<std::string>& taken, Gen gen) {
    std::vector<std::string> out;
    out.reserve(count);
    while (out.size() < count) {
        auto s = gen(rng);
        if (taken.insert(s).second) out.push_back(std::move(s));
    }
    return out;
}

}  // namespace detail

/// Distinct names, legit first then DGA; domain_part holds the bare name.
inline std::vector<DomainRecord> generate_labeled(const SyntheticSpec& spec = {}) {
    Rng rng(spec.seed);
    std::unordered_set<std::string> taken;
    const auto legit = detail::distinct_names(spec.legit, rng, taken, detail::legit_name);
    const auto dga = detail::distinct_names(spec.dga, rng, taken, detail::dga_name);
    std::vector<DomainRecord> out;
    out.reserve(legit.size() + dga.size());
    auto add = [&](const std::string& name, int label) {
        const auto tld = detail::kSyntheticTlds[rng.below(detail::kSyntheticTlds.size())];
        out.push_back({"www." + name + "." + std::string(tld), name, label, Source::adhoc});
    };
    for (const auto& n : legit) add(n, 0);
    for (const auto& n : dga) add(n, 1);
    return out;
}

struct UnlabeledMix {
    std::vector<DomainRecord> records;  // label absent
    std::vector<int> planted;           // ground truth, aligned with records
};

/// Unlabeled corpus with a planted fraction of DGA names, shuffled.
inline UnlabeledMix generate_unlabeled(std::size_t n, double dga_fraction, std::uint64_t seed,
                                       NormalizeMode mode = NormalizeMode::second_level_label) {
    Rng rng(seed);
    const auto n_dga = static_cast<std::size_t>(static_cast<double>(n) * dga_fraction + 0.5);
    std::unordered_set<std::string> taken;
    auto legit = detail::distinct_names(n - n_dga, rng, taken, detail::legit_name);
    auto dga = detail::distinct_names(n_dga, rng, taken, detail::dga_name);
    std::vector<std::pair<std::string, int>> all;
    all.reserve(n);
    for (auto& s : legit) all.emplace_back(std::move(s), 0);
    for (auto& s : dga) all.emplace_back(std::move(s), 1);
    rng.shuffle(std::span(all));
    UnlabeledMix mix;
    for (auto& [name, label] : all) {
        const auto tld = detail::kSyntheticTlds[rng.below(detail::kSyntheticTlds.size())];
        std::string host = name + "." + std::string(tld);
        mix.records.push_back({host, normalize_domain(host, mode), std::nullopt, Source::adhoc});
        mix.planted.push_back(label);
    }
    return mix;
}

}  // namespace dnssquat

#endif  // DNSSQUAT_SYNTHETIC_HPP
