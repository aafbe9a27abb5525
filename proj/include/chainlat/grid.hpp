#pragma once

// Grids with coordinatewise order, containment search and the exact avoiding-
// family oracle, the subgrid sampling inequality, grid partitions of 2^[n]
// from chain decompositions of the factors, and the resulting density bound.

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "chainlat/affine.hpp"
#include "chainlat/chain.hpp"
#include "chainlat/errors.hpp"
#include "chainlat/pipeline.hpp"
#include "chainlat/rng.hpp"
#include "chainlat/subset.hpp"
#include "chainlat/symmetric.hpp"

namespace chainlat {

constexpr int kMaxGridDim = 6;

// [k_1] x ... x [k_d] with coordinatewise order; meet/join are coordinatewise
// min/max. Points are mixed-radix indices.
struct Grid {
    using Point = std::uint32_t;
    std::array<std::uint16_t, kMaxGridDim> dims{};
    int d = 0;

    Grid() = default;
    explicit Grid(const std::vector<int>& sizes) {
        if (sizes.empty() || sizes.size() > kMaxGridDim)
            throw DomainError("grid: dimension must be between 1 and 6");
        d = static_cast<int>(sizes.size());
        for (int i = 0; i < d; ++i) {
            if (sizes[i] < 1 || sizes[i] > 65535) throw DomainError("grid: bad axis size");
            dims[i] = static_cast<std::uint16_t>(sizes[i]);
        }
    }

    std::uint64_t size() const {
        std::uint64_t s = 1;
        for (int i = 0; i < d; ++i) s *= dims[i];
        return s;
    }
    void decode(Point p, int* coords) const {
        for (int i = 0; i < d; ++i) {
            coords[i] = static_cast<int>(p % dims[i]);
            p /= dims[i];
        }
    }
    Point encode(const int* coords) const {
        Point p = 0;
        for (int i = d - 1; i >= 0; --i) p = p * dims[i] + static_cast<Point>(coords[i]);
        return p;
    }
    bool leq(Point a, Point b) const {
        int ca[kMaxGridDim], cb[kMaxGridDim];
        decode(a, ca);
        decode(b, cb);
        for (int i = 0; i < d; ++i)
            if (ca[i] > cb[i]) return false;
        return true;
    }
    Point meet(Point a, Point b) const {
        int ca[kMaxGridDim], cb[kMaxGridDim], cc[kMaxGridDim];
        decode(a, ca);
        decode(b, cb);
        for (int i = 0; i < d; ++i) cc[i] = std::min(ca[i], cb[i]);
        return encode(cc);
    }
    Point join(Point a, Point b) const {
        int ca[kMaxGridDim], cb[kMaxGridDim], cc[kMaxGridDim];
        decode(a, ca);
        decode(b, cb);
        for (int i = 0; i < d; ++i) cc[i] = std::max(ca[i], cb[i]);
        return encode(cc);
    }
    std::vector<Point> all_points() const {
        std::vector<Point> out(size());
        for (std::uint64_t i = 0; i < out.size(); ++i) out[i] = static_cast<Point>(i);
        return out;
    }
};

// 2^[n] with the same interface; points are masks.
struct BooleanLatticeAmbient {
    using Point = Mask;
    int n = 0;
    explicit BooleanLatticeAmbient(int n_) : n(n_) {}
    std::uint64_t size() const { return std::uint64_t{1} << n; }
    bool leq(Point a, Point b) const { return subset_of(a, b); }
    Point meet(Point a, Point b) const { return a & b; }
    Point join(Point a, Point b) const { return a | b; }
    std::vector<Point> all_points() const {
        std::vector<Point> out(size());
        for (std::uint64_t i = 0; i < out.size(); ++i) out[i] = static_cast<Point>(i);
        return out;
    }
};

// --------------------------------------------------------- containment search

namespace detail {

// Backtracking over assignments of distinct members of H. Bodies that flatten
// to a conjunction of literals are pruned per partial assignment; general
// bodies are evaluated once complete. `forced` (when set) must be used by the
// assignment; slots before `forced_slot` may not hold it.
template <class Ambient>
bool assignment_search(const Ambient& amb, const AffineConfiguration& cfg,
                       const std::vector<typename Ambient::Point>& pool,
                       const std::vector<std::pair<int, bool>>& literals, bool conjunctive,
                       std::vector<typename Ambient::Point>& assignment, int slot,
                       const std::optional<typename Ambient::Point>& forced, bool forced_used,
                       std::vector<typename Ambient::Point>* witness) {
    const int k = cfg.num_vars;
    if (slot == k) {
        if (forced && !forced_used) return false;
        if (!conjunctive && !cfg.satisfied(amb, assignment)) return false;
        if (witness) *witness = assignment;
        return true;
    }
    for (const auto& cand : pool) {
        bool dup = false;
        for (int i = 0; i < slot; ++i)
            if (assignment[i] == cand) { dup = true; break; }
        if (dup) continue;
        assignment[slot] = cand;
        const bool now_forced = forced_used || (forced && cand == *forced);
        // remaining slots must fit the forced point somewhere
        if (forced && !now_forced && slot + 1 == k) continue;
        if (conjunctive) {
            bool fail = false;
            for (auto [si, sign] : literals) {
                const int mv =
                    std::max(cfg.statements[si].lhs.max_var(), cfg.statements[si].rhs.max_var());
                if (mv != slot) continue; // became checkable exactly now
                if (cfg.statements[si].holds(amb, assignment) != sign) { fail = true; break; }
            }
            if (fail) continue;
        }
        if (assignment_search(amb, cfg, pool, literals, conjunctive, assignment, slot + 1, forced,
                              now_forced, witness))
            return true;
    }
    return false;
}

template <class Ambient>
bool contains_impl(const Ambient& amb, const AffineConfiguration& cfg,
                   const std::vector<typename Ambient::Point>& family,
                   const std::optional<typename Ambient::Point>& forced,
                   std::vector<typename Ambient::Point>* witness) {
    if (cfg.num_vars > 6) throw CapabilityError("contains_configuration: at most 6 variables");
    if (static_cast<int>(family.size()) < cfg.num_vars) return false;
    auto literals = cfg.body.conjunction_literals();
    const bool conjunctive = !literals.empty();
    std::vector<typename Ambient::Point> assignment(cfg.num_vars);
    return assignment_search(amb, cfg, family, literals, conjunctive, assignment, 0, forced,
                             false, witness);
}

} // namespace detail

// True iff some assignment of pairwise-distinct members of `family` satisfies
// the configuration; fills `witness` when given.
template <class Ambient>
bool contains_configuration(const std::vector<typename Ambient::Point>& family,
                            const AffineConfiguration& cfg, const Ambient& amb,
                            std::vector<typename Ambient::Point>* witness = nullptr) {
    return detail::contains_impl(amb, cfg, family, std::nullopt, witness);
}

// ------------------------------------------------------------------ ex oracle

namespace detail {

// All point sets that realize the configuration inside the ambient, as bit
// masks over point indices. Enumerates ordered distinct assignments with the
// same conjunctive pruning as the containment search.
template <class Ambient>
std::vector<std::uint64_t> forbidden_point_sets(const Ambient& amb,
                                                const AffineConfiguration& cfg) {
    using Point = typename Ambient::Point;
    const std::vector<Point> points = amb.all_points();
    const int total = static_cast<int>(points.size());
    std::unordered_map<Point, int> index;
    index.reserve(points.size() * 2);
    for (int i = 0; i < total; ++i) index.emplace(points[i], i);

    const auto literals = cfg.body.conjunction_literals();
    const bool conjunctive = !literals.empty();
    const int k = cfg.num_vars;
    std::vector<Point> assignment(k);
    std::vector<int> slots(k);
    std::unordered_set<std::uint64_t> sets;

    auto rec = [&](auto&& self, int slot) -> void {
        if (slot == k) {
            if (!conjunctive && !cfg.satisfied(amb, assignment)) return;
            std::uint64_t mask = 0;
            for (int i = 0; i < k; ++i) mask |= std::uint64_t{1} << slots[i];
            sets.insert(mask);
            return;
        }
        for (int pi = 0; pi < total; ++pi) {
            bool dup = false;
            for (int i = 0; i < slot; ++i)
                if (slots[i] == pi) { dup = true; break; }
            if (dup) continue;
            assignment[slot] = points[pi];
            slots[slot] = pi;
            if (conjunctive) {
                bool fail = false;
                for (auto [si, sign] : literals) {
                    const int mv = std::max(cfg.statements[si].lhs.max_var(),
                                            cfg.statements[si].rhs.max_var());
                    if (mv != slot) continue;
                    if (cfg.statements[si].holds(amb, assignment) != sign) { fail = true; break; }
                }
                if (fail) continue;
            }
            self(self, slot + 1);
        }
    };
    rec(rec, 0);
    return {sets.begin(), sets.end()};
}

} // namespace detail

// Exact maximum size of a configuration-avoiding subfamily. All realizations
// of the configuration are collected up front as point-set constraints; the
// branch and bound walks the points in index order, admits a point only when
// it completes no constraint, and kills branches once size + remaining points
// cannot beat the incumbent.
template <class Ambient>
std::pair<std::uint64_t, std::vector<typename Ambient::Point>> ex_oracle_with_witness(
    const Ambient& amb, const AffineConfiguration& cfg) {
    if (amb.size() > 36) throw CapabilityError("ex_oracle: ambient larger than 36 points");
    using Point = typename Ambient::Point;
    const std::vector<Point> points = amb.all_points();
    const int total = static_cast<int>(points.size());

    std::vector<std::uint64_t> constraints = detail::forbidden_point_sets(amb, cfg);
    std::sort(constraints.begin(), constraints.end());
    std::vector<std::vector<std::uint64_t>> per_point(total);
    for (std::uint64_t c : constraints) {
        std::uint64_t bits = c;
        while (bits) {
            per_point[std::countr_zero(bits)].push_back(c);
            bits &= bits - 1;
        }
    }
    auto legal_with = [&](std::uint64_t chosen_mask, int pi) {
        const std::uint64_t next = chosen_mask | (std::uint64_t{1} << pi);
        for (std::uint64_t c : per_point[pi])
            if ((c & ~next) == 0) return false;
        return true;
    };

    // greedy incumbents over a few deterministic orders; a single fixed order
    // can start arbitrarily badly (e.g. one point dominating the rest)
    std::uint64_t best_mask = 0;
    int best_size = 0;
    auto greedy = [&](const std::vector<int>& order) {
        std::uint64_t mask = 0;
        int size = 0;
        for (int pi : order) {
            if (legal_with(mask, pi)) {
                mask |= std::uint64_t{1} << pi;
                ++size;
            }
        }
        if (size > best_size) {
            best_size = size;
            best_mask = mask;
        }
    };
    std::vector<int> order(total);
    std::iota(order.begin(), order.end(), 0);
    greedy(order);
    for (std::uint64_t pass = 0; pass < 6; ++pass) {
        auto rng = child_rng(0x9e1c, pass);
        deterministic_shuffle(order, rng);
        greedy(order);
    }

    std::uint64_t chosen_mask = 0;
    auto rec = [&](auto&& self, int idx, int size) -> void {
        if (size + (total - idx) <= best_size) return;
        if (idx == total) {
            best_size = size;
            best_mask = chosen_mask;
            return;
        }
        if (legal_with(chosen_mask, idx)) {
            chosen_mask |= std::uint64_t{1} << idx;
            self(self, idx + 1, size + 1);
            chosen_mask &= ~(std::uint64_t{1} << idx);
        }
        self(self, idx + 1, size);
    };
    rec(rec, 0, 0);

    std::vector<Point> witness;
    for (int i = 0; i < total; ++i)
        if (best_mask & (std::uint64_t{1} << i)) witness.push_back(points[i]);
    return {static_cast<std::uint64_t>(best_size), witness};
}

template <class Ambient>
std::uint64_t ex_oracle(const Ambient& amb, const AffineConfiguration& cfg) {
    return ex_oracle_with_witness(amb, cfg).first;
}

// The deletion argument for corners: dropping the leftmost point of every row
// and the lowest point of every column of any subset leaves a corner vertex,
// so an avoiding family has at most k1 + k2 points. Independent of the oracle.
inline std::uint64_t corner_deletion_bound(const Grid& g) {
    if (g.d != 2) throw DomainError("corner_deletion_bound: two-dimensional grids only");
    return static_cast<std::uint64_t>(g.dims[0]) + g.dims[1];
}

// ------------------------------------------------------ subgrid sampling check

struct SubgridSamplingReport {
    std::uint64_t ex_full = 0;    // ex(F, C)
    std::uint64_t ex_small = 0;   // ex(k, d, C)
    bool ratio_holds = false;     // ex(F,C)/|F| <= ex(k,d,C)/k^d, exact
    double mean_hits = 0.0;       // mean |F' cap H*| over the trials
    double expected_hits = 0.0;   // |H*| k^d / (k_1...k_d)
    double standard_error = 0.0;
    bool mean_within_3se = false;
};

// Verifies the ratio inequality exactly and reruns the sampling argument on
// an optimal avoiding family.
inline SubgridSamplingReport subgrid_sampling_check(const Grid& grid,
                                                    const AffineConfiguration& cfg, int k,
                                                    std::uint64_t trials, std::uint64_t seed) {
    for (int i = 0; i < grid.d; ++i)
        if (grid.dims[i] < k) throw DomainError("subgrid_sampling_check: k exceeds an axis");
    SubgridSamplingReport rep;
    auto [full_val, opt_family] = ex_oracle_with_witness(grid, cfg);
    rep.ex_full = full_val;
    Grid small(std::vector<int>(grid.d, k));
    rep.ex_small = ex_oracle(small, cfg);

    // ex(F,C) * k^d <= ex(k,d,C) * k_1...k_d
    unsigned __int128 lhs = rep.ex_full, rhs = rep.ex_small;
    for (int i = 0; i < grid.d; ++i) {
        lhs *= static_cast<unsigned>(k);
        rhs *= grid.dims[i];
    }
    rep.ratio_holds = lhs <= rhs;

    std::vector<bool> in_opt(grid.size(), false);
    for (auto p : opt_family) in_opt[p] = true;
    if (trials == 0) { // exact part only
        rep.mean_within_3se = true;
        return rep;
    }
    double sum = 0, sumsq = 0;
    auto rng = child_rng(seed, 0x5b5);
    for (std::uint64_t tr = 0; tr < trials; ++tr) {
        std::array<std::vector<int>, kMaxGridDim> axes;
        for (int i = 0; i < grid.d; ++i) {
            std::vector<int> axis(grid.dims[i]);
            for (int j = 0; j < grid.dims[i]; ++j) axis[j] = j;
            deterministic_shuffle(axis, rng);
            axis.resize(k);
            axes[i] = std::move(axis);
        }
        std::uint64_t hits = 0;
        int coords[kMaxGridDim] = {};
        std::uint64_t combos = 1;
        for (int i = 0; i < grid.d; ++i) combos *= static_cast<std::uint64_t>(k);
        for (std::uint64_t c = 0; c < combos; ++c) {
            std::uint64_t rest = c;
            for (int i = 0; i < grid.d; ++i) {
                coords[i] = axes[i][rest % k];
                rest /= k;
            }
            if (in_opt[grid.encode(coords)]) ++hits;
        }
        sum += static_cast<double>(hits);
        sumsq += static_cast<double>(hits) * static_cast<double>(hits);
    }
    const double tN = static_cast<double>(trials);
    rep.mean_hits = sum / tN;
    double kd = 1, full = 1;
    for (int i = 0; i < grid.d; ++i) {
        kd *= k;
        full *= grid.dims[i];
    }
    rep.expected_hits = static_cast<double>(opt_family.size()) * kd / full;
    const double var = std::max(0.0, sumsq / tN - rep.mean_hits * rep.mean_hits);
    rep.standard_error = std::sqrt(var / tN);
    rep.mean_within_3se =
        std::abs(rep.mean_hits - rep.expected_hits) <= 3 * rep.standard_error + 1e-9;
    return rep;
}

// -------------------------------------------------------------- grid partition

enum class FactorMethod { Symmetric, Uniform };

// 2^[n] as a product of d factor lattices, each partitioned into chains; the
// cells (one chain per factor) partition 2^[n] and each cell is isomorphic to
// a grid through per-factor chain positions.
struct GridPartition {
    int n = 0, d = 0;
    std::vector<int> factor_bits;                   // n_i
    std::vector<int> factor_offset;                 // first bit of each factor
    std::vector<std::vector<std::vector<Mask>>> factor_chains; // [factor][chain][elem], local masks

    std::uint64_t cell_count() const {
        std::uint64_t c = 1;
        for (const auto& fc : factor_chains) c *= fc.size();
        return c;
    }
    // cell index decomposed per factor in mixed radix
    std::vector<int> cell_coords(std::uint64_t cell) const {
        std::vector<int> out(d);
        for (int i = 0; i < d; ++i) {
            out[i] = static_cast<int>(cell % factor_chains[i].size());
            cell /= factor_chains[i].size();
        }
        return out;
    }
    Grid cell_grid(std::uint64_t cell) const {
        const auto coords = cell_coords(cell);
        std::vector<int> dims(d);
        for (int i = 0; i < d; ++i)
            dims[i] = static_cast<int>(factor_chains[i][coords[i]].size());
        return Grid(dims);
    }
    // all masks of the cell, indexed exactly as the cell grid's points
    std::vector<Mask> cell_masks(std::uint64_t cell) const {
        const auto coords = cell_coords(cell);
        const Grid g = cell_grid(cell);
        std::vector<Mask> out(g.size());
        int pos[kMaxGridDim];
        for (Grid::Point p = 0; p < out.size(); ++p) {
            g.decode(p, pos);
            Mask m = 0;
            for (int i = 0; i < d; ++i)
                m |= factor_chains[i][coords[i]][pos[i]] << factor_offset[i];
            out[p] = m;
        }
        return out;
    }
};

inline GridPartition grid_partition(int n, int d, FactorMethod method, std::uint64_t seed) {
    if (d < 1 || d > 3 || n < 2 * d || n > 24)
        throw CapabilityError("grid_partition: need d <= 3 and 2d <= n <= 24");
    GridPartition gp;
    gp.n = n;
    gp.d = d;
    int used = 0;
    for (int i = 0; i < d; ++i) {
        const int ni = (n + i) / d; // floor/ceil split summing to n
        gp.factor_bits.push_back(ni);
        gp.factor_offset.push_back(used);
        used += ni;
    }

    const double split_threshold_scale = 1 + std::pow(static_cast<double>(n), -1.0 / 20.0);
    for (int i = 0; i < d; ++i) {
        const int ni = gp.factor_bits[i];
        ChainDecomposition dec;
        if (method == FactorMethod::Uniform) {
            dec = run_pipeline(ni, splitmix64(seed) ^ static_cast<std::uint64_t>(i)).decomposition;
        } else {
            dec = symmetric_decomposition(ni);
        }
        const double s = std::ldexp(1.0, ni) / static_cast<double>(binomial(ni, ni / 2));
        const double threshold = s * split_threshold_scale;
        const auto piece = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(s)));
        std::vector<std::vector<Mask>> chains;
        for (const auto& c : dec.chains) {
            if (static_cast<double>(c.size()) <= threshold) {
                chains.push_back(c.elems);
                continue;
            }
            for (std::size_t at = 0; at < c.elems.size(); at += piece) {
                const std::size_t end = std::min(c.elems.size(), at + piece);
                chains.emplace_back(c.elems.begin() + at, c.elems.begin() + end);
            }
        }
        gp.factor_chains.push_back(std::move(chains));
    }
    return gp;
}

// ------------------------------------------------------------- density bound

// c * (2d / (pi n))^(alpha/2) * 2^n.
inline double theorem_grid_bound(int n, int d, double c, double alpha) {
    if (c <= 0 || alpha <= 0 || alpha > d) throw DomainError("theorem_grid_bound: need c > 0, 0 < alpha <= d");
    return c * std::pow(2.0 * d / (M_PI * n), alpha / 2.0) * std::ldexp(1.0, n);
}

// The sharper two-factor variant for 2-dimensional Boolean algebras, from the
// lopsided split n_1 ~ n^(2/3): (2 / (pi n))^(1/4) * 2^n.
inline double boolean_algebra_refined_bound(int n) {
    return std::pow(2.0 / (M_PI * n), 0.25) * std::ldexp(1.0, n);
}

} // namespace chainlat
