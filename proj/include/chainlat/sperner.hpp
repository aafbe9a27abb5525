#pragma once

// The sparse comparability subgraph induced by a minimum chain decomposition:
// cliques along chains, certified independence number, and the Turan floor on
// its edge count. Edges are derived statistics, never materialized for large
// n; an explicit iterator exists for small-n tests.

#include <cmath>
#include <cstdint>
#include <vector>

#include "chainlat/chain.hpp"
#include "chainlat/errors.hpp"
#include "chainlat/subset.hpp"

namespace chainlat {

struct SpernerGraph {
    int n = 0;
    std::uint64_t edge_count = 0;                 // sum over chains of C(|C|,2)
    std::vector<std::uint64_t> clique_sizes;      // chain sizes, descending
    // partial sums of |C|^2 over the three size classes of the edge analysis:
    // |C| >= sqrt(n) ln n; strictly between s + n^(9/20) and sqrt(n) ln n; rest
    double class_square_sums[3] = {0, 0, 0};
    const ChainDecomposition* source = nullptr;   // the defining decomposition
};

inline SpernerGraph build_sperner_graph(const ChainDecomposition& d) {
    const auto rep = verify_chain_decomposition(d);
    if (!rep.pass() || d.ground.kind != GroundKind::FullLattice)
        throw DomainError("build_sperner_graph: input must be a verified decomposition of 2^[n]");
    if (d.chain_count() != binomial(d.n, d.n / 2))
        throw DomainError("build_sperner_graph: chain count must be C(n, floor(n/2))");

    SpernerGraph g;
    g.n = d.n;
    g.source = &d;
    const double s = std::ldexp(1.0, d.n) / static_cast<double>(binomial(d.n, d.n / 2));
    const double big = std::sqrt(static_cast<double>(d.n)) * std::log(static_cast<double>(d.n));
    const double mid = s + std::pow(static_cast<double>(d.n), 0.5 - 0.05);
    for (const auto& c : d.chains) {
        const auto sz = static_cast<std::uint64_t>(c.size());
        g.clique_sizes.push_back(sz);
        g.edge_count += sz * (sz - 1) / 2;
        const double szd = static_cast<double>(sz);
        const double sq = szd * szd;
        if (szd >= big)
            g.class_square_sums[0] += sq;
        else if (szd > mid)
            g.class_square_sums[1] += sq;
        else
            g.class_square_sums[2] += sq;
    }
    std::sort(g.clique_sizes.begin(), g.clique_sizes.end(), std::greater<>());
    return g;
}

// All edges, for small-n tests only.
template <class F>
void for_each_sperner_edge(const SpernerGraph& g, F&& fn) {
    if (g.n > 12) throw CapabilityError("for_each_sperner_edge: explicit edges only for n <= 12");
    for (const auto& c : g.source->chains)
        for (std::size_t i = 0; i < c.elems.size(); ++i)
            for (std::size_t j = i + 1; j < c.elems.size(); ++j)
                fn(c.elems[i], c.elems[j]);
}

// ------------------------------------------------------------- certificates

struct AlphaCertificate {
    std::uint64_t alpha = 0;            // certified independence number
    std::uint64_t upper_bound = 0;      // chain-cover bound: one vertex per clique
    std::uint64_t lower_bound = 0;      // explicit middle-level independent set
    bool witness_checked = false;       // middle level scanned pairwise incomparable
};

// Two-sided certificate: the chain cover caps any independent set at the
// number of chains; the middle level is an explicit independent set of that
// size (pairwise incomparable, hence no two share a chain edge).
inline AlphaCertificate certify_alpha(const SpernerGraph& g) {
    AlphaCertificate cert;
    cert.upper_bound = g.clique_sizes.size();
    const auto middle = level_masks(g.n, g.n / 2);
    cert.lower_bound = middle.size();
    bool ok = true;
    for (std::size_t i = 0; i < middle.size() && ok; ++i)
        for (std::size_t j = i + 1; j < middle.size(); ++j)
            if (comparable(middle[i], middle[j])) { ok = false; break; }
    cert.witness_checked = ok;
    if (!ok || cert.upper_bound != cert.lower_bound)
        throw InternalError("certify_alpha: certificate sides disagree");
    cert.alpha = cert.upper_bound;
    return cert;
}

// ------------------------------------------------------------- Turan bound

// 2^(2n) / (2 C(n, floor(n/2))) - 2^n / 2, evaluated exactly.
inline double turan_lower_bound(int n) {
    if (n < 1) throw DomainError("turan_lower_bound: n must be positive");
    const auto m = static_cast<unsigned __int128>(binomial(n, n / 2));
    const auto v = static_cast<unsigned __int128>(1) << n;
    return (static_cast<double>(v) * static_cast<double>(v) / static_cast<double>(m) -
            static_cast<double>(v)) /
           2.0;
}

// Exact integer comparison |E| >= 2^(2n)/(2M) - 2^n/2.
inline bool meets_turan_bound(int n, std::uint64_t edge_count) {
    const auto m = static_cast<unsigned __int128>(binomial(n, n / 2));
    const auto v = static_cast<unsigned __int128>(1) << n;
    return static_cast<unsigned __int128>(edge_count) * 2 * m >= v * v - v * m;
}

} // namespace chainlat
