#pragma once

// Minimum chain partition of a subset family via the split-graph construction
// (number of chains = |family| - maximum matching), and the normalized
// matching inequality used as a test oracle.

#include <cstdint>
#include <unordered_set>
#include <vector>

#include "chainlat/chain.hpp"
#include "chainlat/errors.hpp"
#include "chainlat/matching.hpp"
#include "chainlat/subset.hpp"

namespace chainlat {

namespace detail {

// Supersets of `base` at `extra` more elements, drawn from `pool`, visited in
// increasing mask order.
template <class F>
void enumerate_completions(Mask base, Mask pool, int extra, F&& visit) {
    if (extra == 0) {
        visit(base);
        return;
    }
    const int avail = popcount(pool);
    if (avail < extra) return;
    std::vector<int> poolbits;
    poolbits.reserve(avail);
    Mask rest = pool;
    while (rest) {
        poolbits.push_back(std::countr_zero(rest));
        rest &= rest - 1;
    }
    // Gosper over compressed indices; expansion preserves order.
    const Mask last = full_mask(extra) << (avail - extra);
    Mask comb = full_mask(extra);
    for (;;) {
        Mask add = 0, c = comb;
        while (c) {
            add |= Mask{1} << poolbits[std::countr_zero(c)];
            c &= c - 1;
        }
        visit(base | add);
        if (comb == last) break;
        comb = next_same_popcount(comb);
    }
}

} // namespace detail

// Partition `family` into the minimum number of chains under strict
// containment. Chains are maximal under the matching's successor map and are
// returned sorted by their minimum element.
inline std::vector<Chain> min_chain_partition(const Family& family) {
    if (family.size() > 10'000'000)
        throw CapabilityError("min_chain_partition: family exceeds the 1e7 size guard");
    const auto& all = family.masks();
    const int n = family.n();
    const std::size_t total = all.size();
    if (total == 0) return {};

    // bucket by level, preserving global sorted order inside buckets
    std::vector<std::vector<std::uint32_t>> by_level(n + 1);
    for (std::size_t i = 0; i < total; ++i)
        by_level[popcount(all[i])].push_back(static_cast<std::uint32_t>(i));
    std::vector<int> levels;
    for (int l = 0; l <= n; ++l)
        if (!by_level[l].empty()) levels.push_back(l);

    std::vector<std::unordered_set<Mask>> level_index(n + 1);
    for (int l : levels)
        for (std::uint32_t ui : by_level[l]) level_index[l].insert(all[ui]);

    // adjacency: u -> all strict supersets, per level pair choose the cheaper
    // of scanning the upper level or generating completions
    std::vector<std::vector<int>> adjacency(total);
    std::vector<std::uint32_t> index_of(total);
    for (std::size_t i = 0; i < total; ++i) index_of[i] = static_cast<std::uint32_t>(i);

    for (std::size_t li = 0; li + 1 < levels.size(); ++li) {
        const int l1 = levels[li];
        for (std::size_t lj = li + 1; lj < levels.size(); ++lj) {
            const int l2 = levels[lj];
            const double gen_cost = static_cast<double>(binomial(n - l1, l2 - l1));
            const double scan_cost = static_cast<double>(by_level[l2].size());
            if (gen_cost <= scan_cost) {
                for (std::uint32_t ui : by_level[l1]) {
                    const Mask u = all[ui];
                    detail::enumerate_completions(u, full_mask(n) & ~u, l2 - l1, [&](Mask v) {
                        auto it = level_index[l2].find(v);
                        if (it != level_index[l2].end()) {
                            auto pos = std::lower_bound(all.begin(), all.end(), v) - all.begin();
                            adjacency[ui].push_back(static_cast<int>(pos));
                        }
                    });
                }
            } else {
                for (std::uint32_t ui : by_level[l1]) {
                    const Mask u = all[ui];
                    for (std::uint32_t vi : by_level[l2])
                        if (subset_of(u, all[vi])) adjacency[ui].push_back(static_cast<int>(vi));
                }
            }
        }
    }
    for (auto& nb : adjacency) std::sort(nb.begin(), nb.end());

    MatchingEngine<detail::ExplicitAdj> eng(static_cast<int>(total), static_cast<int>(total),
                                            detail::ExplicitAdj{&adjacency});
    eng.run();
    const auto& succ = eng.pair_left();
    const auto& pred = eng.pair_right();

    std::vector<Chain> chains;
    for (std::size_t i = 0; i < total; ++i) {
        if (pred[i] >= 0) continue; // not a chain head
        Chain c;
        int cur = static_cast<int>(i);
        while (cur >= 0) {
            c.elems.push_back(all[cur]);
            cur = succ[cur];
        }
        chains.push_back(std::move(c));
    }
    // heads are visited in increasing mask order already, but keep the
    // contract explicit
    std::sort(chains.begin(), chains.end(),
              [](const Chain& a, const Chain& b) { return a.min() < b.min(); });
    return chains;
}

// Normalized matching (LYM) inequality |X|/|A_i| <= |N(X)|/|A_j| for
// X inside level A_i against level A_j; used as an always-true oracle.
inline bool lym_check(const std::vector<Mask>& x, int i, int j, int n) {
    const int m = (n + 1) / 2;
    if (i == j || i < 0 || j < 0 || i > n - m || j > n - m)
        throw DomainError("lym_check: invalid level indices");
    for (Mask v : x)
        if (popcount(v) != m + i) throw DomainError("lym_check: X not inside A_i");
    if (x.empty()) return true;

    std::unordered_set<Mask> neighborhood;
    const int li = m + i, lj = m + j;
    for (Mask v : x) {
        if (lj > li) {
            detail::enumerate_completions(v, full_mask(n) & ~v, lj - li,
                                          [&](Mask w) { neighborhood.insert(w); });
        } else {
            // subsets of v at level lj: choose bits of v to keep
            detail::enumerate_completions(0, v, lj, [&](Mask w) { neighborhood.insert(w); });
        }
    }
    const auto ai = static_cast<unsigned __int128>(binomial(n, li));
    const auto aj = static_cast<unsigned __int128>(binomial(n, lj));
    return static_cast<unsigned __int128>(x.size()) * aj <=
           static_cast<unsigned __int128>(neighborhood.size()) * ai;
}

} // namespace chainlat
