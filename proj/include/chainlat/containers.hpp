#pragma once

// Graph-container machinery on comparability graphs: the max-degree
// fingerprint algorithm, and the comparable-degree lower bound it relies on.

#include <cstdint>
#include <queue>
#include <unordered_map>
#include <vector>

#include "chainlat/chain.hpp"
#include "chainlat/errors.hpp"
#include "chainlat/pipeline.hpp"
#include "chainlat/rng.hpp"
#include "chainlat/subset.hpp"

namespace chainlat {

// ------------------------------------------------- comparable-degree bound

struct ComparableDegreeWitness {
    Mask element = 0;
    std::uint64_t degree = 0; // comparable with this many others in the family
    double bound = 0.0;       // delta / ((r+delta) r!) * (n/2)^r
    double delta = 0.0;
};

// Element of F comparable with the most others, with the mass-based lower
// bound on that count. Requires F inside the upper half and l(F) > r.
inline ComparableDegreeWitness max_comparable_degree(const std::vector<Mask>& family, int n,
                                                     int r) {
    if (r != 1 && r != 2) throw DomainError("max_comparable_degree: r must be 1 or 2");
    const int m = (n + 1) / 2;
    for (Mask x : family)
        if (popcount(x) < m) throw DomainError("max_comparable_degree: family not inside the upper half");
    const double mass = lubell_mass(family, n);
    if (mass <= static_cast<double>(r))
        throw DomainError("max_comparable_degree: Lubell mass must exceed r");

    ComparableDegreeWitness w;
    w.delta = mass - r;
    const double rfact = r == 1 ? 1.0 : 2.0;
    w.bound = w.delta / (mass * rfact) * std::pow(n / 2.0, r);

    std::vector<std::uint32_t> degree(family.size(), 0);
    for (std::size_t i = 0; i < family.size(); ++i)
        for (std::size_t j = i + 1; j < family.size(); ++j)
            if (comparable(family[i], family[j])) {
                ++degree[i];
                ++degree[j];
            }
    std::size_t best = 0;
    for (std::size_t i = 1; i < family.size(); ++i)
        if (degree[i] > degree[best]) best = i;
    w.element = family[best];
    w.degree = degree[best];
    return w;
}

// ------------------------------------------------------ container algorithm

struct ContainerResult {
    std::vector<Mask> fingerprint;  // S, in removal order
    std::vector<Mask> body;          // f(S): vertices surviving at termination
    std::vector<Mask> container;     // C = S u f(S), sorted
    std::uint64_t steps = 0;
    bool mass_monotone = true;       // Lubell mass strictly decreased at every step
    std::vector<std::uint64_t> phase_removals; // S-removals per mass phase (-1, 0, 1..)
};

// Runs the fingerprint algorithm: repeatedly pick the max-degree vertex of
// the surviving comparability graph (ties by the given total order), remove
// it alone if outside I, or with its closed neighborhood into S if inside I,
// until the surviving Lubell mass drops below 1 + n^{-1/2}.
inline ContainerResult kw_container(const std::vector<Mask>& antichain,
                                    const std::vector<Mask>& universe,
                                    const std::vector<Mask>& order, int n) {
    const std::size_t t = universe.size();
    if (order.size() != t) throw DomainError("kw_container: order must enumerate the universe");
    for (std::size_t i = 0; i < antichain.size(); ++i)
        for (std::size_t j = i + 1; j < antichain.size(); ++j)
            if (comparable(antichain[i], antichain[j]))
                throw DomainError("kw_container: I is not an antichain");

    std::unordered_map<Mask, int> pos; // position in the tie-break order
    pos.reserve(t * 2);
    for (std::size_t i = 0; i < order.size(); ++i)
        if (!pos.emplace(order[i], static_cast<int>(i)).second)
            throw DomainError("kw_container: order has duplicates");
    std::vector<int> id_of(t);
    for (std::size_t i = 0; i < t; ++i) {
        auto it = pos.find(universe[i]);
        if (it == pos.end()) throw DomainError("kw_container: order must enumerate the universe");
        id_of[i] = it->second;
    }
    std::vector<bool> in_antichain(t, false);
    {
        std::unordered_map<Mask, std::size_t> index;
        index.reserve(t * 2);
        for (std::size_t i = 0; i < t; ++i) index.emplace(universe[i], i);
        for (Mask x : antichain) {
            auto it = index.find(x);
            if (it == index.end()) throw DomainError("kw_container: I must lie inside the universe");
            in_antichain[it->second] = true;
        }
    }

    // adjacency as packed bit rows
    const std::size_t words = (t + 63) / 64;
    std::vector<std::uint64_t> adj(t * words, 0);
    auto set_edge = [&](std::size_t i, std::size_t j) {
        adj[i * words + j / 64] |= std::uint64_t{1} << (j % 64);
        adj[j * words + i / 64] |= std::uint64_t{1} << (i % 64);
    };
    for (std::size_t i = 0; i < t; ++i)
        for (std::size_t j = i + 1; j < t; ++j)
            if (comparable(universe[i], universe[j])) set_edge(i, j);

    std::vector<bool> alive(t, true);
    std::vector<std::uint32_t> degree(t, 0);
    for (std::size_t i = 0; i < t; ++i) {
        std::uint32_t d = 0;
        for (std::size_t w = 0; w < words; ++w) d += std::popcount(adj[i * words + w]);
        degree[i] = d;
    }

    // bucketed degree structure with lazy entries; per bucket a min-heap on
    // the tie-break order
    using Entry = std::pair<int, std::size_t>; // (order position, vertex)
    std::vector<std::priority_queue<Entry, std::vector<Entry>, std::greater<>>> buckets(t + 1);
    for (std::size_t i = 0; i < t; ++i) buckets[degree[i]].emplace(id_of[i], i);
    int top = static_cast<int>(t);

    std::vector<std::uint64_t> level_count(n + 1, 0);
    for (std::size_t i = 0; i < t; ++i) ++level_count[popcount(universe[i])];
    auto current_mass = [&] {
        double mass = 0;
        for (int l = 0; l <= n; ++l)
            if (level_count[l])
                mass += static_cast<double>(level_count[l]) / static_cast<double>(binomial(n, l));
        return mass;
    };
    auto remove_vertex = [&](std::size_t v) {
        alive[v] = false;
        --level_count[popcount(universe[v])];
        for (std::size_t w = 0; w < words; ++w) {
            std::uint64_t bits = adj[v * words + w];
            while (bits) {
                const std::size_t u = w * 64 + std::countr_zero(bits);
                bits &= bits - 1;
                adj[u * words + v / 64] &= ~(std::uint64_t{1} << (v % 64));
                if (alive[u]) buckets[--degree[u]].emplace(id_of[u], u);
            }
        }
    };
    auto phase_of = [&](double mass) {
        if (mass >= 3) return 0;                       // phase -1
        if (mass >= 2) return 1;                       // phase 0
        int p = 1;
        while (mass < 1 + 1.0 / (1 << p)) ++p;         // phase r: 1+2^-r <= mass < 1+2^-(r-1)
        return p + 1;
    };

    ContainerResult res;
    res.phase_removals.assign(2 + 32, 0);
    const double threshold = 1 + 1.0 / std::sqrt(static_cast<double>(n));
    double mass = current_mass();
    while (mass >= threshold) {
        // pop the max-degree vertex, smallest order position first
        while (top > 0 && buckets[top].empty()) --top;
        std::size_t v = t;
        while (true) {
            while (top > 0 && buckets[top].empty()) --top;
            if (buckets[top].empty()) break;
            auto [o, cand] = buckets[top].top();
            buckets[top].pop();
            if (alive[cand] && degree[cand] == static_cast<std::uint32_t>(top)) {
                v = cand;
                break;
            }
        }
        if (v == t) throw InternalError("kw_container: no vertex to pick");
        ++res.steps;
        const int phase = phase_of(mass);
        if (in_antichain[v]) {
            res.fingerprint.push_back(universe[v]);
            if (static_cast<std::size_t>(phase) < res.phase_removals.size())
                ++res.phase_removals[phase];
            // remove the closed neighborhood
            std::vector<std::size_t> nb;
            for (std::size_t w = 0; w < words; ++w) {
                std::uint64_t bits = adj[v * words + w];
                while (bits) {
                    nb.push_back(w * 64 + std::countr_zero(bits));
                    bits &= bits - 1;
                }
            }
            remove_vertex(v);
            for (std::size_t u : nb)
                if (alive[u]) remove_vertex(u);
        } else {
            remove_vertex(v);
        }
        const double next = current_mass();
        if (next >= mass) res.mass_monotone = false;
        mass = next;
    }
    for (std::size_t i = 0; i < t; ++i)
        if (alive[i]) res.body.push_back(universe[i]);
    res.container = res.body;
    res.container.insert(res.container.end(), res.fingerprint.begin(), res.fingerprint.end());
    std::sort(res.container.begin(), res.container.end());
    return res;
}

// -------------------------------------------------------------- statistics

struct ContainerStats {
    int n = 0;
    std::uint64_t samples = 0;
    double max_mass = 0.0, mean_mass = 0.0;
    std::uint64_t max_fingerprint = 0;
    std::uint64_t distinct_fingerprints = 0;
    std::uint64_t containment_failures = 0;
    double fingerprint_budget = 0.0; // 3 * 2^n * log2(n) / n^1.5
    std::uint64_t universe_size = 0;
};

// Random greedy antichains of the pipeline's top-level universe, each run
// through the container algorithm.
inline ContainerStats container_stats(int n, std::uint64_t seed, std::uint64_t samples) {
    if (n > 16) throw CapabilityError("container_stats: supported for n <= 16");
    const PipelineConstants c = compute_constants(n);
    std::vector<Mask> universe;
    for (int l = c.t_level_lo(); l <= c.t_level_hi(); ++l) {
        auto lv = level_masks(n, c.middle_level + l);
        universe.insert(universe.end(), lv.begin(), lv.end());
    }
    std::sort(universe.begin(), universe.end());

    ContainerStats st;
    st.n = n;
    st.samples = samples;
    st.universe_size = universe.size();
    st.fingerprint_budget = 3.0 * std::ldexp(1.0, n) * std::log2(static_cast<double>(n)) /
                            std::pow(static_cast<double>(n), 1.5);
    if (universe.empty()) return st;

    std::unordered_set<std::string> fingerprints;
    double mass_sum = 0;
    for (std::uint64_t i = 0; i < samples; ++i) {
        auto rng = child_rng(seed, i);
        std::vector<Mask> shuffled = universe;
        deterministic_shuffle(shuffled, rng);
        std::vector<Mask> antichain;
        for (Mask x : shuffled) {
            bool ok = true;
            for (Mask y : antichain)
                if (comparable(x, y)) { ok = false; break; }
            if (ok) antichain.push_back(x);
        }
        const ContainerResult res = kw_container(antichain, universe, universe, n);
        Family cont(n, res.container);
        for (Mask x : antichain)
            if (!cont.contains(x)) ++st.containment_failures;
        const double mass = lubell_mass(res.container, n);
        mass_sum += mass;
        st.max_mass = std::max(st.max_mass, mass);
        st.max_fingerprint = std::max<std::uint64_t>(st.max_fingerprint, res.fingerprint.size());
        std::string key;
        std::vector<Mask> fp = res.fingerprint;
        std::sort(fp.begin(), fp.end());
        for (Mask x : fp) key += std::to_string(x) + ",";
        fingerprints.insert(key);
    }
    st.mean_mass = mass_sum / static_cast<double>(samples);
    st.distinct_fingerprints = fingerprints.size();
    return st;
}

} // namespace chainlat
