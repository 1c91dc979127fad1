// Independent reference implementations used by the tests. Deliberately naive.
#ifndef DNSSQUAT_TEST_ORACLES_HPP
#define DNSSQUAT_TEST_ORACLES_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace oracle {

// Character tally: counts each class by scanning, collects distinct chars in sets.
inline std::array<double, 8> features(const std::string& s) {
    std::set<char> all, letters, digits;
    double n_letters = 0, n_digits = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const char c = s[i];
        all.insert(c);
        if (c >= 'a' && c <= 'z') {
            letters.insert(c);
            n_letters += 1;
        } else if (c >= '0' && c <= '9') {
            digits.insert(c);
            n_digits += 1;
        }
    }
    const double len = static_cast<double>(s.size());
    const double uc = static_cast<double>(all.size());
    return {len,
            uc,
            static_cast<double>(letters.size()),
            static_cast<double>(digits.size()),
            n_letters / len,
            n_digits / len,
            static_cast<double>(letters.size()) / uc,
            static_cast<double>(digits.size()) / uc};
}

struct Counts {
    long tp = 0, fp = 0, tn = 0, fn = 0;
};

inline Counts recount(const std::vector<int>& pred, const std::vector<int>& truth) {
    Counts c;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (pred[i] == 1 && truth[i] == 1) c.tp++;
        if (pred[i] == 1 && truth[i] == 0) c.fp++;
        if (pred[i] == 0 && truth[i] == 0) c.tn++;
        if (pred[i] == 0 && truth[i] == 1) c.fn++;
    }
    return c;
}

inline int popcount_vote(unsigned pattern) {
    int ones = 0;
    for (int b = 0; b < 5; ++b) ones += (pattern >> b) & 1u;
    return ones >= 3 ? 1 : 0;
}

// Pearson coefficient from textbook sums, absolute value.
inline double abs_pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        syy += y[i] * y[i];
        sxy += x[i] * y[i];
    }
    const double num = n * sxy - sx * sy;
    const double den = std::sqrt(n * sxx - sx * sx) * std::sqrt(n * syy - sy * sy);
    return std::abs(num / den);
}

inline std::string random_string(std::mt19937_64& gen, const std::string& alphabet, std::size_t lo, std::size_t hi) {
    std::uniform_int_distribution<std::size_t> len(lo, hi), pick(0, alphabet.size() - 1);
    std::string s(len(gen), ' ');
    for (auto& c : s) c = alphabet[pick(gen)];
    return s;
}

}  // namespace oracle

#endif
