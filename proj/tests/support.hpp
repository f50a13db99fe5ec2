#pragma once

// Generators and small brute-force oracles shared by the unit tests.

#include "qpw/quiver.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

namespace qpw::testing {

inline ExchangeMatrix random_exchange_matrix(std::mt19937_64& rng, int n, int max_entry) {
    std::uniform_int_distribution<int> entry(-max_entry, max_entry);
    ExchangeMatrix m(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            m(i, j) = entry(rng);
            m(j, i) = -m(i, j);
        }
    return m;
}

inline std::vector<int> random_permutation(std::mt19937_64& rng, int n) {
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    std::shuffle(p.begin(), p.end(), rng);
    return p;
}

// Mutation in the max(., 0) form, written independently of the library.
inline ExchangeMatrix oracle_mutate(const ExchangeMatrix& b, int k) {
    const int n = b.size();
    ExchangeMatrix out(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == k || j == k) {
                out(i, j) = -b(i, j);
                continue;
            }
            int bik = b(i, k), bkj = b(k, j);
            int sign = (bik > 0) - (bik < 0);
            out(i, j) = b(i, j) + sign * std::max(bik * bkj, 0);
        }
    return out;
}

// Lexicographically least relabeled matrix over all permutations.
inline ExchangeMatrix oracle_canonical(const ExchangeMatrix& m) {
    const int n = m.size();
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    ExchangeMatrix best;
    bool first = true;
    do {
        ExchangeMatrix r(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) r(i, j) = m(p[i], p[j]);
        if (first || r.data() < best.data()) {
            best = r;
            first = false;
        }
    } while (std::next_permutation(p.begin(), p.end()));
    return best;
}

// Random acyclic orientation of a symmetric diagram.
inline ExchangeMatrix random_orientation(std::mt19937_64& rng, const ExchangeMatrix& diagram) {
    const int n = diagram.size();
    auto order = random_permutation(rng, n);
    std::vector<int> pos(n);
    for (int i = 0; i < n; ++i) pos[order[i]] = i;
    ExchangeMatrix b(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (diagram(i, j) > 0) b(i, j) = pos[i] < pos[j] ? diagram(i, j) : -diagram(i, j);
    return b;
}

} // namespace qpw::testing
