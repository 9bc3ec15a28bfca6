#pragma once

#include "jetvar/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace jetvar {

// Symmetric multi-index: sorted list of base-coordinate indices (0-based),
// with multiplicity.
using MultiIndex = std::vector<std::uint32_t>;

inline MultiIndex mi_plus(const MultiIndex& j, std::uint32_t i) {
    MultiIndex out = j;
    out.insert(std::upper_bound(out.begin(), out.end(), i), i);
    return out;
}

inline std::string mi_str(const MultiIndex& j) {
    std::string s;
    for (auto i : j) s += std::to_string(i + 1);
    return s;
}

inline mpz_class mi_factorial(const MultiIndex& j) {
    // product of multiplicities' factorials
    mpz_class f = 1;
    std::size_t i = 0;
    while (i < j.size()) {
        std::size_t run = 1;
        while (i + run < j.size() && j[i + run] == j[i]) ++run;
        for (std::size_t m = 2; m <= run; ++m) f *= static_cast<unsigned long>(m);
        i += run;
    }
    return f;
}

// Ordered splittings J = K + L of a multiset with multiplicities: calls
// fn(K, L, count) where count is the number of ways to realize the split.
template <typename Fn>
void mi_splittings(const MultiIndex& j, Fn&& fn) {
    // distinct values and multiplicities
    std::vector<std::pair<std::uint32_t, std::uint32_t>> runs;
    for (auto v : j) {
        if (!runs.empty() && runs.back().first == v)
            ++runs.back().second;
        else
            runs.emplace_back(v, 1);
    }
    std::vector<std::uint32_t> take(runs.size(), 0);
    auto binom = [](std::uint32_t n, std::uint32_t k) {
        mpz_class b;
        mpz_bin_uiui(b.get_mpz_t(), n, k);
        return b;
    };
    while (true) {
        MultiIndex k, l;
        mpz_class count = 1;
        for (std::size_t r = 0; r < runs.size(); ++r) {
            for (std::uint32_t t = 0; t < take[r]; ++t) k.push_back(runs[r].first);
            for (std::uint32_t t = take[r]; t < runs[r].second; ++t) l.push_back(runs[r].first);
            count *= binom(runs[r].second, take[r]);
        }
        fn(k, l, Rational::from_mpz(count));
        // increment the mixed-radix counter
        std::size_t pos = 0;
        while (pos < runs.size()) {
            if (take[pos] < runs[pos].second) {
                ++take[pos];
                break;
            }
            take[pos] = 0;
            ++pos;
        }
        if (pos == runs.size()) break;
    }
}

// All multi-indices of the given order over n base coordinates.
inline std::vector<MultiIndex> mi_all(std::uint32_t n, std::uint32_t order) {
    std::vector<MultiIndex> out;
    MultiIndex cur;
    std::function<void(std::uint32_t, std::uint32_t)> rec = [&](std::uint32_t from,
                                                                std::uint32_t left) {
        if (left == 0) {
            out.push_back(cur);
            return;
        }
        for (std::uint32_t i = from; i < n; ++i) {
            cur.push_back(i);
            rec(i, left - 1);
            cur.pop_back();
        }
    };
    rec(0, order);
    return out;
}

}  // namespace jetvar
