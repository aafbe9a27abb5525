#pragma once

// Subsets of [n] = {1,...,n} as n-bit masks: element i is bit i-1.
// All families are kept as sorted vectors of masks; a level [n]^(l) is
// enumerated in increasing numeric (= colex) order.

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <unordered_set>
#include <vector>

#include "chainlat/errors.hpp"

namespace chainlat {

using Mask = std::uint64_t;

constexpr int kMaxGroundSize = 63;

inline int popcount(Mask x) { return std::popcount(x); }

inline Mask full_mask(int n) {
    return n == 64 ? ~Mask{0} : ((Mask{1} << n) - 1);
}

inline bool subset_of(Mask x, Mask y) { return (x & ~y) == 0; }
inline bool proper_subset_of(Mask x, Mask y) { return x != y && subset_of(x, y); }

// x-or-y contained in the other; equal masks count as comparable.
inline bool comparable(Mask x, Mask y) { return subset_of(x, y) || subset_of(y, x); }

// A subset together with its ground-set size. Operations that combine two
// subsets require matching n.
struct Subset {
    Mask bits = 0;
    int n = 0;

    Subset() = default;
    Subset(Mask bits_, int n_) : bits(bits_), n(n_) {
        if (n < 1 || n > kMaxGroundSize) throw DomainError("subset: ground size out of range");
        if ((bits & ~full_mask(n)) != 0) throw DomainError("subset: bits above ground size");
    }
    int size() const { return popcount(bits); }
    friend bool operator==(const Subset& a, const Subset& b) = default;
};

inline bool is_comparable(const Subset& x, const Subset& y) {
    if (x.n != y.n) throw DomainError("is_comparable: mismatched ground sizes");
    return comparable(x.bits, y.bits);
}

// Exact binomial coefficients; C(63,31) still fits in 64 bits.
inline std::uint64_t binomial(int n, int k) {
    static const auto table = [] {
        std::array<std::array<std::uint64_t, kMaxGroundSize + 2>, kMaxGroundSize + 2> t{};
        for (int i = 0; i <= kMaxGroundSize + 1; ++i) {
            t[i][0] = 1;
            for (int j = 1; j <= i; ++j)
                t[i][j] = t[i - 1][j - 1] + (j <= i - 1 ? t[i - 1][j] : 0);
        }
        return t;
    }();
    if (k < 0 || k > n) return 0;
    if (n < 0 || n > kMaxGroundSize + 1) throw CapabilityError("binomial: n out of table range");
    return table[n][k];
}

// Next mask with the same popcount (Gosper); masks of a level in increasing order.
inline Mask next_same_popcount(Mask v) {
    Mask c = v & -v;
    Mask r = v + c;
    return (((r ^ v) >> 2) / c) | r;
}

inline std::vector<Mask> level_masks(int n, int l) {
    if (l < 0 || l > n) throw DomainError("level_masks: level out of range");
    std::vector<Mask> out;
    out.reserve(binomial(n, l));
    if (l == 0) { out.push_back(0); return out; }
    Mask v = full_mask(l);
    Mask last = v << (n - l);
    for (;;) {
        out.push_back(v);
        if (v == last) break;
        v = next_same_popcount(v);
    }
    return out;
}

// Rank of `v` within its level in increasing-mask order.
inline std::uint64_t level_rank(Mask v) {
    std::uint64_t r = 0;
    int seen = 0;
    while (v) {
        int b = std::countr_zero(v);
        v &= v - 1;
        r += binomial(b, ++seen);
    }
    return r;
}

// A family of subsets of [n]: sorted, duplicate-free masks. Membership uses
// binary search, or a hash index once the family passes the size threshold.
class Family {
public:
    static constexpr std::size_t kHashThreshold = 1'000'000;

    Family() = default;
    explicit Family(int n) : n_(n) {}
    Family(int n, std::vector<Mask> masks) : n_(n), masks_(std::move(masks)) {
        normalize();
    }

    int n() const { return n_; }
    const std::vector<Mask>& masks() const { return masks_; }
    std::size_t size() const { return masks_.size(); }
    bool empty() const { return masks_.empty(); }

    bool contains(Mask m) const {
        if (masks_.size() >= kHashThreshold) {
            build_index();
            return index_.count(m) > 0;
        }
        return std::binary_search(masks_.begin(), masks_.end(), m);
    }

    friend bool operator==(const Family& a, const Family& b) {
        return a.n_ == b.n_ && a.masks_ == b.masks_;
    }

private:
    void normalize() {
        std::sort(masks_.begin(), masks_.end());
        masks_.erase(std::unique(masks_.begin(), masks_.end()), masks_.end());
        for (Mask m : masks_)
            if ((m & ~full_mask(n_)) != 0)
                throw DomainError("family: mask above ground size");
    }
    void build_index() const {
        if (index_.empty() && !masks_.empty())
            index_.insert(masks_.begin(), masks_.end());
    }

    int n_ = 0;
    std::vector<Mask> masks_;
    mutable std::unordered_set<Mask> index_;
};

} // namespace chainlat
