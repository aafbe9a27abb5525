#pragma once

// The randomized near-uniform chain decomposition, end to end:
//
//   1. shuffle the levels above A_k and cut them into interval blocks, one
//      per rectangle cell (row a, column b), sized |A_{a-1}| - |A_a|;
//   2. dump degenerate material (top levels, the unassigned tail, small rows,
//      shattered rows and blocks) into the leftover set;
//   3. chain-decompose each surviving row by Dilworth and filter the chains
//      that cannot be glued (short / irrelevant / sad);
//   4. match each level A_a plus the row's first-diagonal block against
//      A_{a-1}, walk the matchings up from the middle level, glue surviving
//      row chains on top, and attach leftovers along the upper-shadow cover;
//   5. mirror the upper-half decomposition to the full lattice.
//
// Output validity is deterministic for every seed; only the uniformity of
// the resulting chain sizes is random.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "chainlat/chain.hpp"
#include "chainlat/dilworth.hpp"
#include "chainlat/errors.hpp"
#include "chainlat/matching.hpp"
#include "chainlat/rng.hpp"
#include "chainlat/subset.hpp"
#include "chainlat/symmetric.hpp"

namespace chainlat {

// ----------------------------------------------------------------- constants

struct PipelineConstants {
    int n = 0;
    int middle_level = 0;               // m = ceil(n/2)
    std::uint64_t min_chain_count = 0;  // M = C(n, floor(n/2))
    std::uint64_t upper_half_size = 0;  // |B| = |[n]^(>= m)|
    double mean_chain_size = 0.0;       // s = 2^n / M
    int half_height = 0;                // k = ceil(s / 2)
    int top_offset = 0;                 // C0 = min(ceil(sqrt(n ln n / 3)), n - m)
    double size_tolerance = 0.0;        // lambda = n^(-1/16)
    double short_slack = 0.0;           // max(lambda * k, 1)
    int small_row_threshold = 0;        // floor(n^0.1)
    int dump_offset = 0;                // max(C0, k + 1); levels >= m + dump_offset start as leftovers

    int t_level_lo() const { return half_height + 1; }
    int t_level_hi() const { return top_offset; } // empty range if C0 <= k
    std::uint64_t level_size(int offset) const { return binomial(n, middle_level + offset); }
};

inline PipelineConstants compute_constants(int n) {
    if (n < 6 || n > 24) throw CapabilityError("compute_constants: full runs support 6 <= n <= 24");
    PipelineConstants c;
    c.n = n;
    c.middle_level = (n + 1) / 2;
    c.min_chain_count = binomial(n, n / 2);
    c.upper_half_size = 0;
    for (int l = c.middle_level; l <= n; ++l) c.upper_half_size += binomial(n, l);
    const double pow2n = std::ldexp(1.0, n);
    c.mean_chain_size = pow2n / static_cast<double>(c.min_chain_count);
    const std::uint64_t half = std::uint64_t{1} << (n - 1);
    c.half_height = static_cast<int>((half + c.min_chain_count - 1) / c.min_chain_count);
    c.top_offset = std::min(static_cast<int>(std::ceil(std::sqrt(n * std::log(n) / 3.0))),
                            n - c.middle_level);
    c.size_tolerance = std::pow(n, -1.0 / 16.0);
    c.short_slack = std::max(c.size_tolerance * c.half_height, 1.0);
    c.small_row_threshold = static_cast<int>(std::floor(std::pow(n, 0.1)));
    c.dump_offset = std::max(c.top_offset, c.half_height + 1);

    const auto m128 = static_cast<unsigned __int128>(c.min_chain_count);
    const auto b128 = static_cast<unsigned __int128>(c.upper_half_size);
    if (!(m128 * (c.half_height - 1) < b128 && b128 < m128 * (c.half_height + 1)))
        throw InternalError("compute_constants: (k-1)M < |B| < (k+1)M failed");
    if (c.top_offset < 1) throw InternalError("compute_constants: C0 < 1");
    return c;
}

// ------------------------------------------------------------ interval cut

struct Block {
    int row = 0, col = 0;            // (a, b), 1 <= a <= b <= k
    std::size_t begin = 0, end = 0;  // interval of the shuffled top-level order
    int level_lo = 0, level_hi = 0;  // touched level offsets (contiguous)
    bool repaired = false;           // reflagged shattered by the row-disjointness repair

    std::size_t size() const { return end - begin; }
    bool single_level() const { return level_lo == level_hi; }
    bool effectively_shattered() const { return !single_level() || repaired; }
};

struct IntervalAssignment {
    int n = 0;
    std::vector<Mask> order;                   // levels A_{k+1}..A_{C0}, each shuffled
    std::vector<std::size_t> level_start;      // order offset of each level, plus sentinel
    std::vector<Block> blocks;                 // in assignment order
    std::vector<std::vector<int>> row_blocks;  // row a -> indices into blocks, b ascending
    std::size_t assigned_prefix = 0;           // unassigned tail = order[assigned_prefix..)
    int incomplete_gap = 0;                    // k minus the first incomplete diagonal
    std::vector<std::pair<int, int>> repair_events;
    int diagonal_in_two_levels = -1;           // 1/0 diagnostic; -1 when no (a,a) block exists

    const Block* block_at(int a, int b) const {
        for (int idx : row_blocks[a])
            if (blocks[idx].col == b) return &blocks[idx];
        return nullptr;
    }
    bool diagonal_complete(int gap, int k) const {
        return block_at(k - gap, k) != nullptr;
    }
};

inline IntervalAssignment cut_intervals(const PipelineConstants& c, std::uint64_t seed) {
    IntervalAssignment ia;
    ia.n = c.n;
    ia.row_blocks.assign(c.half_height + 1, {});

    // the total order: per-level seeded shuffles, levels laid out bottom-up
    for (int l = c.t_level_lo(); l <= c.t_level_hi(); ++l) {
        ia.level_start.push_back(ia.order.size());
        auto masks = level_masks(c.n, c.middle_level + l);
        auto rng = child_rng(seed, static_cast<std::uint64_t>(l));
        deterministic_shuffle(masks, rng);
        ia.order.insert(ia.order.end(), masks.begin(), masks.end());
    }
    ia.level_start.push_back(ia.order.size());

    auto level_of_position = [&](std::size_t pos) {
        int lo = 0, hi = static_cast<int>(ia.level_start.size()) - 2;
        while (lo < hi) {
            const int mid = (lo + hi + 1) / 2;
            if (ia.level_start[mid] <= pos) lo = mid; else hi = mid - 1;
        }
        return c.t_level_lo() + lo;
    };

    // assign blocks in the (b-a, then a) order until one no longer fits
    std::size_t cursor = 0;
    bool stopped = false;
    for (int gap = 0; gap < c.half_height && !stopped; ++gap) {
        for (int a = 1; a + gap <= c.half_height; ++a) {
            const std::uint64_t need = c.level_size(a - 1) - c.level_size(a);
            if (ia.order.size() - cursor < need) { stopped = true; break; }
            Block blk;
            blk.row = a;
            blk.col = a + gap;
            blk.begin = cursor;
            blk.end = cursor + need;
            blk.level_lo = level_of_position(blk.begin);
            blk.level_hi = level_of_position(blk.end - 1);
            cursor = blk.end;
            ia.row_blocks[a].push_back(static_cast<int>(ia.blocks.size()));
            ia.blocks.push_back(blk);
        }
    }
    ia.assigned_prefix = cursor;

    // mu: k minus the smallest incomplete diagonal index (0 when all complete)
    ia.incomplete_gap = 0;
    for (int gap = 0; gap < c.half_height; ++gap) {
        if (!ia.diagonal_complete(gap, c.half_height)) {
            ia.incomplete_gap = c.half_height - gap;
            break;
        }
    }

    // same-row whole blocks must sit in pairwise distinct levels; at small n
    // this can fail, in which case the later block is reflagged shattered
    for (int a = 1; a <= c.half_height; ++a) {
        std::uint64_t used_levels = 0;
        for (int idx : ia.row_blocks[a]) {
            Block& blk = ia.blocks[idx];
            if (!blk.single_level()) continue;
            const std::uint64_t bit = std::uint64_t{1} << blk.level_lo;
            if (used_levels & bit) {
                blk.repaired = true;
                ia.repair_events.emplace_back(a, blk.col);
            } else {
                used_levels |= bit;
            }
        }
    }

    // diagnostic: first-diagonal blocks inside A_{k+1} u A_{k+2}
    ia.diagonal_in_two_levels = -1;
    for (int a = 1; a <= c.half_height; ++a) {
        if (const Block* blk = ia.block_at(a, a)) {
            const bool ok = blk->level_lo >= c.half_height + 1 && blk->level_hi <= c.half_height + 2;
            if (ia.diagonal_in_two_levels == -1) ia.diagonal_in_two_levels = 1;
            if (!ok) ia.diagonal_in_two_levels = 0;
        }
    }
    return ia;
}

// ------------------------------------------------------------- leftovers

struct LeftoverCollection {
    int n = 0;
    std::vector<Mask> elems; // sorted once finalized
    std::vector<bool> row_dumped;
    std::uint64_t from_levels = 0, from_tail = 0, from_dumped_blocks = 0, from_filtered_chains = 0;
    std::uint64_t shattered_blocks = 0;
    bool finalized = false;

    void finalize() {
        std::sort(elems.begin(), elems.end());
        finalized = true;
    }
    bool contains(Mask m) const {
        return std::binary_search(elems.begin(), elems.end(), m);
    }
};

// True iff the block's elements are excluded from row chains: shattered or
// repaired, wholly inside the dumped top level, or in a dumped row.
inline bool block_dumped(const Block& blk, const LeftoverCollection& lo,
                         const PipelineConstants& c) {
    if (lo.row_dumped[blk.row]) return true;
    if (blk.effectively_shattered()) return true;
    return blk.level_lo >= c.dump_offset;
}

inline LeftoverCollection collect_leftovers(const IntervalAssignment& ia,
                                            const PipelineConstants& c) {
    LeftoverCollection lo;
    lo.n = c.n;
    lo.row_dumped.assign(c.half_height + 1, false);

    // rows dumped wholesale: tiny rows, and rows with too many shattered blocks
    for (int a = 1; a <= c.half_height; ++a) {
        std::uint64_t shattered = 0;
        for (int idx : ia.row_blocks[a])
            if (ia.blocks[idx].effectively_shattered()) ++shattered;
        lo.shattered_blocks += shattered;
        if (a <= c.small_row_threshold ||
            static_cast<double>(shattered) >= c.short_slack)
            lo.row_dumped[a] = true;
    }

    // everything at or above the dump level (the top of T and beyond)
    for (int l = c.middle_level + c.dump_offset; l <= c.n; ++l) {
        auto lv = level_masks(c.n, l);
        lo.elems.insert(lo.elems.end(), lv.begin(), lv.end());
        lo.from_levels += lv.size();
    }
    // the unassigned tail of the shuffled order
    for (std::size_t i = ia.assigned_prefix; i < ia.order.size(); ++i) {
        if (popcount(ia.order[i]) < c.middle_level + c.dump_offset) {
            lo.elems.push_back(ia.order[i]);
            ++lo.from_tail;
        }
    }
    // dumped blocks
    for (const Block& blk : ia.blocks) {
        if (!block_dumped(blk, lo, c)) continue;
        for (std::size_t i = blk.begin; i < blk.end; ++i) {
            if (popcount(ia.order[i]) < c.middle_level + c.dump_offset) {
                lo.elems.push_back(ia.order[i]);
                ++lo.from_dumped_blocks;
            }
        }
    }
    return lo;
}

// ------------------------------------------------------- per-row machinery

struct BlockMatching {
    Matching matching;  // pairs (z in A_a u X_{a,a}, y in A_{a-1})
    bool diagonal_used = false;
    std::uint64_t uncovered_diagonal = 0;
};

namespace detail {

// Left = A_a followed by the diagonal block; right = A_{a-1} addressed by
// combinatorial rank. A_a neighbors drop one element; block elements list all
// of their subsets at the lower level.
struct RowGraphAdj {
    const std::vector<Mask>* level_left;
    const std::vector<Mask>* diag_elems;
    int lower_level = 0;

    template <class F>
    void operator()(int u, F&& visit) const {
        const auto level_count = static_cast<int>(level_left->size());
        if (u < level_count) {
            const Mask x = (*level_left)[u];
            Mask rest = x;
            while (rest) {
                const int b = 63 - std::countl_zero(rest);
                rest &= ~(Mask{1} << b);
                visit(static_cast<int>(level_rank(x & ~(Mask{1} << b))));
            }
        } else {
            const Mask z = (*diag_elems)[u - level_count];
            enumerate_completions(0, z, lower_level,
                                  [&](Mask w) { visit(static_cast<int>(level_rank(w))); });
        }
    }
};

} // namespace detail

// The matching of row a: covers every element of A_a, and when the row's
// first-diagonal block is usable, extends a complete level matching to a
// maximum one so the block is covered up to a small uncovered remainder.
inline BlockMatching build_block_matching(int a, const IntervalAssignment& ia,
                                          const LeftoverCollection& lo,
                                          const PipelineConstants& c) {
    if (a < 1 || a > c.half_height) throw DomainError("build_block_matching: row out of range");
    BlockMatching out;

    std::vector<Mask> diag;
    if (const Block* blk = ia.block_at(a, a)) {
        if (!block_dumped(*blk, lo, c)) {
            diag.assign(ia.order.begin() + blk->begin, ia.order.begin() + blk->end);
            std::sort(diag.begin(), diag.end());
        }
    }
    out.diagonal_used = !diag.empty();

    const auto left_level = level_masks(c.n, c.middle_level + a);
    const auto right_level = level_masks(c.n, c.middle_level + a - 1);
    const int nl = static_cast<int>(left_level.size() + diag.size());
    detail::RowGraphAdj adj{&left_level, &diag, c.middle_level + a - 1};
    MatchingEngine<detail::RowGraphAdj> eng(nl, static_cast<int>(right_level.size()), adj);

    // seed with a complete matching of A_a, then grow: augmentation never
    // uncovers a covered vertex
    const Matching base = adjacent_level_matching(c.n, c.middle_level + a);
    for (auto [upper, lower] : base.pairs)
        eng.seed(static_cast<int>(level_rank(upper)), static_cast<int>(level_rank(lower)));
    eng.run();

    const auto& pair_left = eng.pair_left();
    for (std::size_t u = 0; u < left_level.size(); ++u)
        if (pair_left[u] < 0)
            throw InternalError("build_block_matching: A_a not fully covered");
    for (int u = 0; u < nl; ++u) {
        const Mask z = u < static_cast<int>(left_level.size())
                           ? left_level[u]
                           : diag[u - left_level.size()];
        if (pair_left[u] >= 0)
            out.matching.pairs.emplace_back(z, right_level[pair_left[u]]);
        else
            ++out.uncovered_diagonal;
    }
    return out;
}

struct RowChains {
    std::vector<Chain> kept;          // survivors, glued later
    std::vector<Mask> filtered_elems; // short / irrelevant / sad chains
    std::uint64_t short_count = 0, irrelevant_count = 0, sad_count = 0;
    std::uint64_t chain_count = 0;
    int whole_block_count = 0; // r
};

// Dilworth-decomposes the union of the row's surviving whole blocks and
// filters chains that cannot take part in the gluing.
inline RowChains decompose_block(int a, const IntervalAssignment& ia,
                                 const LeftoverCollection& lo, const PipelineConstants& c,
                                 const BlockMatching& row_matching) {
    if (a < 1 || a > c.half_height) throw DomainError("decompose_block: row out of range");
    RowChains out;
    if (lo.row_dumped[a]) return out;

    std::vector<Mask> elems;
    std::unordered_set<Mask> diag_set;
    for (int idx : ia.row_blocks[a]) {
        const Block& blk = ia.blocks[idx];
        if (block_dumped(blk, lo, c)) continue;
        ++out.whole_block_count;
        for (std::size_t i = blk.begin; i < blk.end; ++i) {
            elems.push_back(ia.order[i]);
            if (blk.col == a) diag_set.insert(ia.order[i]);
        }
    }
    if (elems.empty()) return out;

    const auto chains = min_chain_partition(Family(c.n, std::move(elems)));
    out.chain_count = chains.size();

    std::unordered_set<Mask> covered_left;
    covered_left.reserve(row_matching.matching.pairs.size() * 2);
    for (auto [l, r] : row_matching.matching.pairs) covered_left.insert(l);

    const double short_bound = static_cast<double>(out.whole_block_count) - c.short_slack;
    for (const auto& ch : chains) {
        if (static_cast<double>(ch.size()) <= short_bound) {
            ++out.short_count;
        } else if (!diag_set.count(ch.min())) {
            ++out.irrelevant_count;
        } else if (!covered_left.count(ch.min())) {
            ++out.sad_count;
        } else {
            out.kept.push_back(ch);
            continue;
        }
        out.filtered_elems.insert(out.filtered_elems.end(), ch.elems.begin(), ch.elems.end());
    }
    return out;
}

// ----------------------------------------------------------------- assembly

struct AssemblyCounts {
    std::uint64_t incompatible_chains = 0;
    std::uint64_t glued_chains = 0;
    std::uint64_t chains_reaching_top = 0;
    std::uint64_t attached_leftovers = 0;
};

// Builds the chain partition of the upper half: walk the row matchings up
// from the middle level, glue surviving row chains where the walk exits into
// a first-diagonal block, and attach leftovers along the upper-shadow cover.
inline std::pair<ChainDecomposition, AssemblyCounts> assemble_half_decomposition(
    const std::vector<BlockMatching>& row_matchings, const std::vector<RowChains>& row_chains,
    const LeftoverCollection& lo, const PipelineConstants& c) {
    if (!lo.finalized) throw DomainError("assemble_half_decomposition: leftovers not finalized");
    const int k = c.half_height;

    // per-row: partner of y in A_{a-1}, and chain index by minimum element
    std::vector<std::unordered_map<Mask, Mask>> partner_of(k + 1);
    std::vector<std::unordered_map<Mask, int>> chain_of_min(k + 1);
    for (int a = 1; a <= k; ++a) {
        partner_of[a] = row_matchings[a].matching.right_to_left();
        for (std::size_t i = 0; i < row_chains[a].kept.size(); ++i) {
            auto [it, fresh] =
                chain_of_min[a].emplace(row_chains[a].kept[i].min(), static_cast<int>(i));
            if (!fresh) throw InternalError("assemble: duplicate chain minimum in a row");
        }
    }

    const ChainDecomposition shadow = upper_shadow_chain_cover(c.n, k);
    std::unordered_map<Mask, const Chain*> shadow_of;
    shadow_of.reserve(shadow.chains.size() * 2);
    for (const auto& s : shadow.chains) shadow_of.emplace(s.min(), &s);

    AssemblyCounts counts;
    ChainDecomposition d;
    d.n = c.n;
    d.ground = Ground::upper_half();
    d.chains.reserve(c.min_chain_count);

    for (Mask x : level_masks(c.n, c.middle_level)) {
        Chain chain;
        chain.elems.push_back(x);
        Mask cur = x;
        bool reached_top = true;
        for (int a = 1; a <= k; ++a) {
            auto it = partner_of[a].find(cur);
            if (it == partner_of[a].end()) { // walk ends below A_k unmatched
                ++counts.incompatible_chains;
                reached_top = false;
                break;
            }
            const Mask z = it->second;
            if (popcount(z) == c.middle_level + a) { // stayed inside the levels
                chain.elems.push_back(z);
                cur = z;
                continue;
            }
            // exited into the row's first-diagonal block: glue if z heads a
            // surviving chain
            reached_top = false;
            auto ci = chain_of_min[a].find(z);
            if (ci == chain_of_min[a].end()) {
                ++counts.incompatible_chains;
            } else {
                const Chain& glue = row_chains[a].kept[ci->second];
                if (!proper_subset_of(chain.elems.back(), glue.min()))
                    throw InternalError("assemble: glue does not extend the chain");
                chain.elems.insert(chain.elems.end(), glue.elems.begin(), glue.elems.end());
                ++counts.glued_chains;
            }
            break;
        }
        if (reached_top) {
            ++counts.chains_reaching_top;
            auto si = shadow_of.find(chain.elems.back());
            if (si == shadow_of.end())
                throw InternalError("assemble: top element missing from the shadow cover");
            for (Mask e : si->second->elems)
                if (lo.contains(e)) {
                    chain.elems.push_back(e);
                    ++counts.attached_leftovers;
                }
        }
        d.chains.push_back(std::move(chain));
    }

    if (d.chains.size() != c.min_chain_count)
        throw InternalError("assemble: chain count is not C(n, floor(n/2))");
    if (counts.attached_leftovers != lo.elems.size())
        throw InternalError("assemble: leftover elements not attached exactly once");
    return {std::move(d), counts};
}

// ------------------------------------------------------------------ mirror

// Upper-half partition -> full-lattice partition. Even n pairs each middle
// element with its complement; odd n pairs through a perfect matching onto
// the level below the middle.
inline ChainDecomposition mirror_to_full_lattice(const ChainDecomposition& half, int n) {
    const int m = (n + 1) / 2;
    std::unordered_map<Mask, const Chain*> by_min;
    by_min.reserve(half.chains.size() * 2);
    for (const auto& ch : half.chains) {
        if (popcount(ch.min()) != m)
            throw DomainError("mirror_to_full_lattice: a chain does not start at the middle level");
        by_min.emplace(ch.min(), &ch);
    }
    if (by_min.size() != binomial(n, m))
        throw DomainError("mirror_to_full_lattice: chain minima do not exhaust the middle level");

    std::unordered_map<Mask, Mask> tau; // odd n only: x -> matched subset one level down
    if (n % 2 == 1) {
        const Matching mm = adjacent_level_matching(n, m);
        if (mm.size() != binomial(n, m))
            throw InternalError("mirror_to_full_lattice: middle matching not perfect");
        for (auto [upper, lower] : mm.pairs) tau.emplace(upper, lower);
    }

    const Mask full = full_mask(n);
    ChainDecomposition out;
    out.n = n;
    out.ground = Ground::full();
    out.chains.reserve(half.chains.size());
    for (const auto& ch : half.chains) {
        const Mask x = ch.min();
        const Mask partner_min = n % 2 == 0 ? (full & ~x) : (full & ~tau.at(x));
        const Chain* partner = by_min.at(partner_min);
        Chain merged;
        merged.elems.reserve(partner->size() + ch.size());
        for (auto it = partner->elems.rbegin(); it != partner->elems.rend(); ++it)
            merged.elems.push_back(full & ~*it);
        // even n: the mirrored image ends at x itself; skip the duplicate
        const std::size_t skip = merged.elems.back() == x ? 1 : 0;
        if (skip == 0 && !proper_subset_of(merged.elems.back(), ch.elems.front()))
            throw InternalError("mirror_to_full_lattice: halves do not concatenate");
        merged.elems.insert(merged.elems.end(), ch.elems.begin() + skip, ch.elems.end());
        out.chains.push_back(std::move(merged));
    }
    return out;
}

// ---------------------------------------------------------------- full run

struct PipelineTrace {
    int n = 0;
    std::uint64_t seed = 0;
    std::uint64_t short_chains = 0, irrelevant_chains = 0, sad_chains = 0;
    std::uint64_t incompatible_chains = 0;
    std::uint64_t leftover_size = 0;
    std::uint64_t shattered_blocks = 0;
    std::uint64_t repair_events = 0;
    std::uint64_t uncovered_diagonal = 0;
    std::uint64_t tail_size = 0;
    int incomplete_gap = 0;
    double ms_cut = 0, ms_rows = 0, ms_assemble = 0, ms_mirror = 0;
};

struct PipelineResult {
    ChainDecomposition decomposition; // of the full lattice
    PipelineTrace trace;
};

inline PipelineResult run_pipeline(int n, std::uint64_t seed) {
    using clock = std::chrono::steady_clock;
    const auto ms_since = [](clock::time_point t0) {
        return std::chrono::duration<double, std::milli>(clock::now() - t0).count();
    };

    const PipelineConstants c = compute_constants(n);
    PipelineTrace trace;
    trace.n = n;
    trace.seed = seed;

    auto t0 = clock::now();
    const IntervalAssignment ia = cut_intervals(c, seed);
    LeftoverCollection lo = collect_leftovers(ia, c);
    trace.ms_cut = ms_since(t0);
    trace.incomplete_gap = ia.incomplete_gap;
    trace.repair_events = ia.repair_events.size();
    trace.shattered_blocks = lo.shattered_blocks;
    trace.tail_size = ia.order.size() - ia.assigned_prefix;

    t0 = clock::now();
    std::vector<BlockMatching> matchings(c.half_height + 1);
    std::vector<RowChains> rows(c.half_height + 1);
    for (int a = 1; a <= c.half_height; ++a) {
        matchings[a] = build_block_matching(a, ia, lo, c);
        rows[a] = decompose_block(a, ia, lo, c, matchings[a]);
        trace.short_chains += rows[a].short_count;
        trace.irrelevant_chains += rows[a].irrelevant_count;
        trace.sad_chains += rows[a].sad_count;
        trace.uncovered_diagonal += matchings[a].uncovered_diagonal;
        lo.elems.insert(lo.elems.end(), rows[a].filtered_elems.begin(),
                        rows[a].filtered_elems.end());
        lo.from_filtered_chains += rows[a].filtered_elems.size();
    }
    lo.finalize();
    trace.leftover_size = lo.elems.size();
    trace.ms_rows = ms_since(t0);

    t0 = clock::now();
    auto [half, counts] = assemble_half_decomposition(matchings, rows, lo, c);
    trace.incompatible_chains = counts.incompatible_chains;
    trace.ms_assemble = ms_since(t0);

    t0 = clock::now();
    PipelineResult res;
    res.decomposition = mirror_to_full_lattice(half, n);
    trace.ms_mirror = ms_since(t0);
    res.trace = trace;
    return res;
}

} // namespace chainlat
