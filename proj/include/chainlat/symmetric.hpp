#pragma once

// Symmetric chain decomposition by the bracket-matching rule, the sigma size
// profile it induces, and the upper-shadow chain cover of the top levels.

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "chainlat/chain.hpp"
#include "chainlat/errors.hpp"
#include "chainlat/matching.hpp"
#include "chainlat/subset.hpp"

namespace chainlat {

struct SymmetricProfile {
    SizeProfile sigma;       // chain sizes over 2^[n]
    SizeProfile sigma_prime; // ceil(sigma/2): the restriction to the upper half
};

// Computed directly from binomials: C(n,k)-C(n,k-1) chains of size n-2k+1.
inline SymmetricProfile sigma_profile(int n) {
    if (n < 1) throw DomainError("sigma_profile: n must be positive");
    std::vector<std::uint64_t> sigma, sigma_prime;
    for (int k = 0; k <= n / 2; ++k) {
        const std::uint64_t count = binomial(n, k) - (k ? binomial(n, k - 1) : 0);
        const std::uint64_t size = static_cast<std::uint64_t>(n - 2 * k + 1);
        for (std::uint64_t c = 0; c < count; ++c) {
            sigma.push_back(size);
            sigma_prime.push_back((size + 1) / 2);
        }
    }
    return {SizeProfile(std::move(sigma)), SizeProfile(std::move(sigma_prime))};
}

namespace detail {

// Bracket matching: read bits 0..n-1, a set bit opens, a clear bit closes the
// most recent unmatched open. Returns the mask of unmatched positions.
inline Mask unmatched_positions(Mask x, int n) {
    Mask unmatched = 0;
    int open[kMaxGroundSize];
    int top = 0;
    for (int i = 0; i < n; ++i) {
        if (x & (Mask{1} << i)) {
            open[top++] = i;
            unmatched |= Mask{1} << i;
        } else if (top > 0) {
            unmatched &= ~(Mask{1} << open[--top]);
        } else {
            unmatched |= Mask{1} << i;
        }
    }
    return unmatched;
}

} // namespace detail

// Partition of 2^[n] into symmetric chains: chain heads are the masks whose
// unmatched positions are all clear; the chain sets unmatched positions from
// the last one backwards, which keeps the bracket matching stable.
inline ChainDecomposition symmetric_decomposition(int n) {
    if (n < 1 || n > 24) throw CapabilityError("symmetric_decomposition: supported for 1 <= n <= 24");
    ChainDecomposition d;
    d.n = n;
    d.ground = Ground::full();
    d.chains.reserve(binomial(n, n / 2));
    const Mask full = full_mask(n);
    for (Mask x = 0;; ++x) {
        const Mask unmatched = detail::unmatched_positions(x, n);
        if ((x & unmatched) == 0) { // head: no unmatched set bit
            Chain c;
            c.elems.push_back(x);
            Mask cur = x, rest = unmatched;
            while (rest) {
                const int b = 63 - std::countl_zero(rest);
                rest &= ~(Mask{1} << b);
                cur |= Mask{1} << b;
                c.elems.push_back(cur);
            }
            d.chains.push_back(std::move(c));
        }
        if (x == full) break;
    }
    return d;
}

// Partition of [n]^(>= m+k) into C(n, m+k) chains, each starting at a
// distinct element of A_k, by composing the complete level matchings upward.
inline ChainDecomposition upper_shadow_chain_cover(int n, int k) {
    const int m = (n + 1) / 2;
    if (k < 0 || k > n - m) throw DomainError("upper_shadow_chain_cover: k out of range");

    // successor along the complete matching of each level pair
    std::unordered_map<Mask, Mask> successor;
    for (int i = k; i < n - m; ++i) {
        const Matching mi = complete_level_matching(n, i);
        for (auto [upper, lower] : mi.pairs) successor.emplace(lower, upper);
    }

    ChainDecomposition d;
    d.n = n;
    std::vector<Mask> ground;
    for (int l = m + k; l <= n; ++l) {
        auto lv = level_masks(n, l);
        ground.insert(ground.end(), lv.begin(), lv.end());
    }
    std::sort(ground.begin(), ground.end());
    d.ground = Ground::explicit_family(Family(n, ground));

    for (Mask x : level_masks(n, m + k)) {
        Chain c;
        Mask cur = x;
        c.elems.push_back(cur);
        for (auto it = successor.find(cur); it != successor.end(); it = successor.find(cur)) {
            cur = it->second;
            c.elems.push_back(cur);
        }
        d.chains.push_back(std::move(c));
    }
    return d;
}

} // namespace chainlat
