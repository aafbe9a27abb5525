#pragma once

// Chains, chain decompositions and their exact structural verifiers, plus the
// size-profile order used to compare decompositions.

#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "chainlat/errors.hpp"
#include "chainlat/subset.hpp"

namespace chainlat {

// Strictly nested subsets, smallest first. Gaps are allowed: consecutive
// elements need u ⊊ v, not saturation.
struct Chain {
    std::vector<Mask> elems;

    Chain() = default;
    explicit Chain(std::vector<Mask> e) : elems(std::move(e)) {}

    std::size_t size() const { return elems.size(); }
    Mask min() const { return elems.front(); }
    Mask max() const { return elems.back(); }

    bool valid(int n) const {
        if (elems.empty()) return false;
        const Mask full = full_mask(n);
        if ((elems.front() & ~full) != 0) return false;
        for (std::size_t i = 1; i < elems.size(); ++i) {
            if ((elems[i] & ~full) != 0) return false;
            if (!proper_subset_of(elems[i - 1], elems[i])) return false;
        }
        return true;
    }
};

enum class GroundKind { FullLattice, UpperHalf, Explicit };

// The family a decomposition must cover: all of 2^[n], the upper half
// [n]^(>= ceil(n/2)), or an explicit family.
struct Ground {
    GroundKind kind = GroundKind::FullLattice;
    Family family; // used when kind == Explicit

    static Ground full() { return {GroundKind::FullLattice, {}}; }
    static Ground upper_half() { return {GroundKind::UpperHalf, {}}; }
    static Ground explicit_family(Family f) { return {GroundKind::Explicit, std::move(f)}; }

    std::vector<Mask> materialize(int n) const {
        switch (kind) {
            case GroundKind::Explicit:
                return family.masks();
            case GroundKind::UpperHalf: {
                std::vector<Mask> out;
                const int m = (n + 1) / 2;
                for (int l = m; l <= n; ++l) {
                    auto lv = level_masks(n, l);
                    out.insert(out.end(), lv.begin(), lv.end());
                }
                std::sort(out.begin(), out.end());
                return out;
            }
            case GroundKind::FullLattice: {
                std::vector<Mask> out(std::size_t{1} << n);
                std::iota(out.begin(), out.end(), Mask{0});
                return out;
            }
        }
        return {};
    }
};

struct ChainDecomposition {
    int n = 0;
    Ground ground;
    std::vector<Chain> chains;

    std::size_t chain_count() const { return chains.size(); }
    std::size_t element_count() const {
        std::size_t s = 0;
        for (const auto& c : chains) s += c.size();
        return s;
    }
};

// ---------------------------------------------------------------- verifier

struct VerificationReport {
    bool chains_ok = true;       // (i) each part is a chain
    bool disjoint = true;        // (ii) parts pairwise disjoint
    bool covers_ground = true;   // (iii) union equals the ground family
    std::size_t chain_count = 0; // (iv)
    long long first_bad_chain = -1;
    std::size_t ground_size = 0;
    std::size_t element_count = 0;

    bool pass() const { return chains_ok && disjoint && covers_ground; }
    std::string describe() const {
        if (pass()) return "pass";
        std::string s = "fail:";
        if (!chains_ok) s += " chain-structure(" + std::to_string(first_bad_chain) + ")";
        if (!disjoint) s += " disjointness";
        if (!covers_ground) s += " coverage";
        return s;
    }
};

// Failures are reported, never thrown.
inline VerificationReport verify_chain_decomposition(const ChainDecomposition& d) {
    VerificationReport rep;
    rep.chain_count = d.chains.size();
    for (std::size_t i = 0; i < d.chains.size(); ++i) {
        if (!d.chains[i].valid(d.n)) {
            rep.chains_ok = false;
            rep.first_bad_chain = static_cast<long long>(i);
            break;
        }
    }
    std::vector<Mask> all;
    all.reserve(d.element_count());
    for (const auto& c : d.chains) all.insert(all.end(), c.elems.begin(), c.elems.end());
    rep.element_count = all.size();
    std::sort(all.begin(), all.end());
    for (std::size_t i = 1; i < all.size(); ++i)
        if (all[i] == all[i - 1]) { rep.disjoint = false; break; }

    std::vector<Mask> want = d.ground.materialize(d.n);
    rep.ground_size = want.size();
    if (!rep.disjoint) {
        all.erase(std::unique(all.begin(), all.end()), all.end());
    }
    rep.covers_ground = (all == want);
    return rep;
}

// ------------------------------------------------------------ size profiles

// Multiset of chain sizes, sorted descending.
struct SizeProfile {
    std::vector<std::uint64_t> sizes;

    explicit SizeProfile(std::vector<std::uint64_t> s = {}) : sizes(std::move(s)) {
        std::sort(sizes.begin(), sizes.end(), std::greater<>());
    }
    std::uint64_t total() const {
        return std::accumulate(sizes.begin(), sizes.end(), std::uint64_t{0});
    }
};

inline SizeProfile profile_of(const ChainDecomposition& d) {
    std::vector<std::uint64_t> s;
    s.reserve(d.chains.size());
    for (const auto& c : d.chains) s.push_back(c.size());
    return SizeProfile(std::move(s));
}

// True iff every prefix sum of `reference` is >= the one of `candidate`.
// Profiles must have equal totals; the shorter one is padded with zeros.
inline bool dominance_check(const SizeProfile& candidate, const SizeProfile& reference) {
    if (candidate.total() != reference.total())
        throw DomainError("dominance_check: profiles have unequal totals");
    const std::size_t len = std::max(candidate.sizes.size(), reference.sizes.size());
    std::uint64_t pc = 0, pr = 0;
    for (std::size_t i = 0; i < len; ++i) {
        pc += i < candidate.sizes.size() ? candidate.sizes[i] : 0;
        pr += i < reference.sizes.size() ? reference.sizes[i] : 0;
        if (pr < pc) return false;
    }
    return true;
}

// ------------------------------------------------------- mass and edge count

// Lubell mass: sum over the family of 1/C(n,|x|), exact integer binomials and
// one division per level.
inline double lubell_mass(const Family& f, int n) {
    if (f.n() != n) throw DomainError("lubell_mass: mismatched ground size");
    std::vector<std::uint64_t> per_level(n + 1, 0);
    for (Mask m : f.masks()) ++per_level[popcount(m)];
    double mass = 0.0;
    for (int l = 0; l <= n; ++l)
        if (per_level[l])
            mass += static_cast<double>(per_level[l]) / static_cast<double>(binomial(n, l));
    return mass;
}

inline double lubell_mass(const std::vector<Mask>& masks, int n) {
    std::vector<std::uint64_t> per_level(n + 1, 0);
    for (Mask m : masks) ++per_level[popcount(m)];
    double mass = 0.0;
    for (int l = 0; l <= n; ++l)
        if (per_level[l])
            mass += static_cast<double>(per_level[l]) / static_cast<double>(binomial(n, l));
    return mass;
}

// Strictly comparable unordered pairs of 2^[n], counted one by one; must come
// out as 3^n - 2^n.
inline std::uint64_t comparability_edge_count(int n) {
    if (n < 1 || n > 20) throw CapabilityError("comparability_edge_count: exhaustive mode needs 1 <= n <= 20");
    const Mask full = full_mask(n);
    std::uint64_t count = 0;
    for (Mask x = 0; x <= full; ++x) {
        const Mask comp = full & ~x;
        // walk all non-empty s of comp; x | s is a proper superset of x
        for (Mask s = comp; s != 0; s = (s - 1) & comp) ++count;
        if (x == full) break;
    }
    return count;
}

// --------------------------------------------------------- uniformity stats

struct UniformityStats {
    double mean_chain_size = 0.0;                    // s = 2^n / C(n, floor(n/2))
    double epsilon = 0.0;
    double near_uniform_fraction = 0.0;              // chains with |size - s| <= eps*s
    double coverage_fraction = 0.0;                  // elements covered by such chains
    std::vector<std::pair<std::uint64_t, std::uint64_t>> histogram; // (size, count)
};

inline UniformityStats uniformity_stats(const ChainDecomposition& d, double epsilon) {
    if (epsilon <= 0) throw DomainError("uniformity_stats: epsilon must be positive");
    UniformityStats st;
    st.epsilon = epsilon;
    const double pow2n = std::ldexp(1.0, d.n);
    st.mean_chain_size = pow2n / static_cast<double>(binomial(d.n, d.n / 2));
    const double lo = st.mean_chain_size * (1 - epsilon);
    const double hi = st.mean_chain_size * (1 + epsilon);

    std::map<std::uint64_t, std::uint64_t> hist;
    std::uint64_t near = 0, covered = 0, elements = 0;
    for (const auto& c : d.chains) {
        const auto sz = static_cast<std::uint64_t>(c.size());
        ++hist[sz];
        elements += sz;
        if (static_cast<double>(sz) >= lo && static_cast<double>(sz) <= hi) {
            ++near;
            covered += sz;
        }
    }
    st.histogram.assign(hist.begin(), hist.end());
    if (!d.chains.empty())
        st.near_uniform_fraction = static_cast<double>(near) / static_cast<double>(d.chains.size());
    if (elements > 0)
        st.coverage_fraction = static_cast<double>(covered) / static_cast<double>(elements);
    return st;
}

} // namespace chainlat
