#pragma once

// Maximum bipartite matching (layered augmenting-path search with global
// phases) and the level-to-level complete matchings built on top of it.
// Determinism: left vertices are processed in index order and neighbor lists
// are generated in increasing mask order, so identical inputs give identical
// matchings on every run.

#include <cstdint>
#include <limits>
#include <unordered_map>
#include <vector>

#include "chainlat/errors.hpp"
#include "chainlat/subset.hpp"

namespace chainlat {

// ------------------------------------------------------------------ engine

// Adj: callable template `void adj(int u, F&& visit)` yielding right-side
// neighbor indices of left vertex u in a fixed order.
template <class Adj>
class MatchingEngine {
public:
    MatchingEngine(int n_left, int n_right, Adj adj)
        : nl_(n_left), nr_(n_right), adj_(std::move(adj)),
          pair_left_(n_left, kFree), pair_right_(n_right, kFree), dist_(n_left) {}

    // Optional warm start; augmenting phases never uncover a covered vertex.
    void seed(int left, int right) {
        pair_left_[left] = right;
        pair_right_[right] = left;
    }

    int run() {
        int matched = 0;
        for (int u = 0; u < nl_; ++u)
            if (pair_left_[u] != kFree) ++matched;
        while (bfs_phase()) {
            for (int u = 0; u < nl_; ++u)
                if (pair_left_[u] == kFree && dfs_augment(u)) ++matched;
        }
        return matched;
    }

    const std::vector<int>& pair_left() const { return pair_left_; }
    const std::vector<int>& pair_right() const { return pair_right_; }

private:
    static constexpr int kFree = -1;
    static constexpr int kInf = std::numeric_limits<int>::max();

    bool bfs_phase() {
        std::vector<int> queue;
        queue.reserve(nl_);
        for (int u = 0; u < nl_; ++u) {
            dist_[u] = pair_left_[u] == kFree ? 0 : kInf;
            if (dist_[u] == 0) queue.push_back(u);
        }
        bool reachable_free_right = false;
        for (std::size_t qi = 0; qi < queue.size(); ++qi) {
            const int u = queue[qi];
            adj_(u, [&](int v) {
                const int w = pair_right_[v];
                if (w == kFree) {
                    reachable_free_right = true;
                } else if (dist_[w] == kInf) {
                    dist_[w] = dist_[u] + 1;
                    queue.push_back(w);
                }
            });
        }
        return reachable_free_right;
    }

    bool dfs_augment(int u) {
        bool found = false;
        adj_(u, [&](int v) {
            if (found) return;
            const int w = pair_right_[v];
            if (w == kFree || (dist_[w] == dist_[u] + 1 && dfs_augment(w))) {
                pair_left_[u] = v;
                pair_right_[v] = u;
                found = true;
            }
        });
        if (!found) dist_[u] = kInf;
        return found;
    }

    int nl_, nr_;
    Adj adj_;
    std::vector<int> pair_left_, pair_right_;
    std::vector<int> dist_;
};

// ------------------------------------------------------------ public types

// Explicit bipartite graph over subset node ids. Neighbor lists are stored
// sorted and duplicate-free.
struct BipartiteGraph {
    std::vector<Mask> left;
    std::vector<Mask> right;
    std::vector<std::vector<int>> adjacency; // per left index, right indices

    BipartiteGraph() = default;
    BipartiteGraph(std::vector<Mask> l, std::vector<Mask> r)
        : left(std::move(l)), right(std::move(r)), adjacency(left.size()) {}

    void add_edge(int u, int v) {
        if (u < 0 || u >= static_cast<int>(left.size()) || v < 0 ||
            v >= static_cast<int>(right.size()))
            throw DomainError("bipartite graph: edge endpoint out of range");
        adjacency[u].push_back(v);
    }
    void finalize() {
        for (auto& nb : adjacency) {
            std::sort(nb.begin(), nb.end(),
                      [&](int a, int b) { return right[a] < right[b]; });
            nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
        }
    }
    bool has_edge(int u, int v) const {
        for (int w : adjacency[u])
            if (w == v) return true;
        return false;
    }
};

// Injective left -> right assignment along edges of the host graph.
struct Matching {
    std::vector<std::pair<Mask, Mask>> pairs; // (left mask, right mask)

    std::size_t size() const { return pairs.size(); }

    std::unordered_map<Mask, Mask> left_to_right() const {
        std::unordered_map<Mask, Mask> m;
        m.reserve(pairs.size() * 2);
        for (auto [l, r] : pairs) m.emplace(l, r);
        return m;
    }
    std::unordered_map<Mask, Mask> right_to_left() const {
        std::unordered_map<Mask, Mask> m;
        m.reserve(pairs.size() * 2);
        for (auto [l, r] : pairs) m.emplace(r, l);
        return m;
    }
};

namespace detail {

struct ExplicitAdj {
    const std::vector<std::vector<int>>* adjacency;
    template <class F>
    void operator()(int u, F&& visit) const {
        for (int v : (*adjacency)[u]) visit(v);
    }
};

inline Matching matching_from_engine(const std::vector<Mask>& left,
                                     const std::vector<Mask>& right,
                                     const std::vector<int>& pair_left) {
    Matching m;
    for (std::size_t u = 0; u < pair_left.size(); ++u)
        if (pair_left[u] >= 0) m.pairs.emplace_back(left[u], right[pair_left[u]]);
    return m;
}

} // namespace detail

// Maximum-cardinality matching of an explicit graph.
inline Matching maximum_matching(const BipartiteGraph& g) {
    MatchingEngine<detail::ExplicitAdj> eng(static_cast<int>(g.left.size()),
                                            static_cast<int>(g.right.size()),
                                            detail::ExplicitAdj{&g.adjacency});
    eng.run();
    return detail::matching_from_engine(g.left, g.right, eng.pair_left());
}

// Grows a valid matching to maximum cardinality; the covered vertex set of
// the input is contained in the covered set of the result.
inline Matching extend_to_maximum_covering(const BipartiteGraph& g, const Matching& m) {
    std::unordered_map<Mask, int> left_index, right_index;
    for (std::size_t i = 0; i < g.left.size(); ++i) left_index.emplace(g.left[i], static_cast<int>(i));
    for (std::size_t i = 0; i < g.right.size(); ++i) right_index.emplace(g.right[i], static_cast<int>(i));

    MatchingEngine<detail::ExplicitAdj> eng(static_cast<int>(g.left.size()),
                                            static_cast<int>(g.right.size()),
                                            detail::ExplicitAdj{&g.adjacency});
    std::vector<bool> left_used(g.left.size(), false), right_used(g.right.size(), false);
    for (auto [l, r] : m.pairs) {
        auto li = left_index.find(l);
        auto ri = right_index.find(r);
        if (li == left_index.end() || ri == right_index.end() || !g.has_edge(li->second, ri->second))
            throw DomainError("extend_to_maximum_covering: pair is not an edge of the graph");
        if (left_used[li->second] || right_used[ri->second])
            throw DomainError("extend_to_maximum_covering: input is not a matching");
        left_used[li->second] = right_used[ri->second] = true;
        eng.seed(li->second, ri->second);
    }
    eng.run();
    return detail::matching_from_engine(g.left, g.right, eng.pair_left());
}

// --------------------------------------------------- level-to-level matching

namespace detail {

// Left = level l, right = level l-1; neighbors drop one element. Right
// vertices are addressed by combinatorial rank, so no neighbor list is stored.
struct DropOneAdj {
    const std::vector<Mask>* left;
    template <class F>
    void operator()(int u, F&& visit) const {
        const Mask x = (*left)[u];
        // remove bits from high to low: resulting masks ascend
        Mask rest = x;
        while (rest) {
            const int b = 63 - std::countl_zero(rest);
            rest &= ~(Mask{1} << b);
            visit(static_cast<int>(level_rank(x & ~(Mask{1} << b))));
        }
    }
};

} // namespace detail

// Matching between level `l_left` and level `l_left - 1` of 2^[n] that covers
// the smaller side entirely (exists by the normalized matching property).
inline Matching adjacent_level_matching(int n, int l_left) {
    if (l_left < 1 || l_left > n) throw DomainError("adjacent_level_matching: level out of range");
    auto left = level_masks(n, l_left);
    auto right = level_masks(n, l_left - 1);
    MatchingEngine<detail::DropOneAdj> eng(static_cast<int>(left.size()),
                                           static_cast<int>(right.size()),
                                           detail::DropOneAdj{&left});
    const int matched = eng.run();
    const std::size_t smaller = std::min(left.size(), right.size());
    if (static_cast<std::size_t>(matched) != smaller)
        throw InternalError("adjacent_level_matching: complete matching missing");
    return detail::matching_from_engine(left, right, eng.pair_left());
}

// Complete matching from A_{i+1} = [n]^(m+i+1) onto A_i, m = ceil(n/2);
// covers every element of A_{i+1}.
inline Matching complete_level_matching(int n, int i) {
    const int m = (n + 1) / 2;
    if (i < 0 || i >= n - m) throw DomainError("complete_level_matching: index out of range");
    return adjacent_level_matching(n, m + i + 1);
}

} // namespace chainlat
