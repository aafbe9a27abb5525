#pragma once

// Independent oracles used only by tests: a Dinic max-flow matcher, a
// branch-and-bound maximum antichain, and small enumeration utilities. These
// deliberately share no code with the matching engine they check.

#include <algorithm>
#include <cstdint>
#include <queue>
#include <vector>

#include "chainlat/subset.hpp"

namespace testutil {

using chainlat::Mask;

// Maximum bipartite matching by Dinic max-flow on a unit network.
class DinicMatcher {
public:
    DinicMatcher(int n_left, int n_right)
        : nl_(n_left), nr_(n_right), head_(n_left + n_right + 2, -1) {}

    void add_pair(int u, int v) { add_edge(1 + u, 1 + nl_ + v, 1); }

    int solve() {
        const int src = 0, dst = 1 + nl_ + nr_;
        for (int u = 0; u < nl_; ++u) add_edge(src, 1 + u, 1);
        for (int v = 0; v < nr_; ++v) add_edge(1 + nl_ + v, dst, 1);
        int flow = 0;
        while (bfs(src, dst)) {
            iter_ = head_;
            while (int pushed = dfs(src, dst, 1)) flow += pushed;
        }
        return flow;
    }

private:
    struct Edge {
        int to, next, cap;
    };
    void add_edge(int a, int b, int cap) {
        edges_.push_back({b, head_[a], cap});
        head_[a] = static_cast<int>(edges_.size()) - 1;
        edges_.push_back({a, head_[b], 0});
        head_[b] = static_cast<int>(edges_.size()) - 1;
    }
    bool bfs(int src, int dst) {
        level_.assign(head_.size(), -1);
        std::queue<int> q;
        q.push(src);
        level_[src] = 0;
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (int e = head_[u]; e >= 0; e = edges_[e].next)
                if (edges_[e].cap > 0 && level_[edges_[e].to] < 0) {
                    level_[edges_[e].to] = level_[u] + 1;
                    q.push(edges_[e].to);
                }
        }
        return level_[dst] >= 0;
    }
    int dfs(int u, int dst, int limit) {
        if (u == dst) return limit;
        for (int& e = iter_[u]; e >= 0; e = edges_[e].next) {
            Edge& ed = edges_[e];
            if (ed.cap > 0 && level_[ed.to] == level_[u] + 1) {
                if (int pushed = dfs(ed.to, dst, std::min(limit, ed.cap))) {
                    ed.cap -= pushed;
                    edges_[e ^ 1].cap += pushed;
                    return pushed;
                }
            }
        }
        return 0;
    }

    int nl_, nr_;
    std::vector<Edge> edges_;
    std::vector<int> head_, level_, iter_;
};

// Exact maximum antichain size by branch and bound over the comparability
// graph; fine up to a few dozen elements.
inline std::size_t max_antichain_size(const std::vector<Mask>& family) {
    const int n = static_cast<int>(family.size());
    std::vector<std::uint64_t> incomp(n, 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && !chainlat::comparable(family[i], family[j]))
                incomp[i] |= std::uint64_t{1} << j;
    std::size_t best = 0;
    auto rec = [&](auto&& self, std::uint64_t candidates, std::size_t size) -> void {
        if (size + static_cast<std::size_t>(std::popcount(candidates)) <= best) return;
        if (!candidates) {
            best = std::max(best, size);
            return;
        }
        const int v = std::countr_zero(candidates);
        self(self, (candidates & ~(std::uint64_t{1} << v)) & incomp[v], size + 1);
        self(self, candidates & ~(std::uint64_t{1} << v), size);
    };
    if (n > 63) return 0;
    rec(rec, n == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1), 0);
    return best;
}

// All antichains of 2^[n] (tiny n), by element-ordered DFS.
template <class F>
void for_each_antichain(int n, F&& fn) {
    const Mask full = chainlat::full_mask(n);
    std::vector<Mask> current;
    auto rec = [&](auto&& self, Mask next) -> void {
        fn(current);
        for (Mask x = next; x <= full; ++x) {
            bool ok = true;
            for (Mask y : current)
                if (chainlat::comparable(x, y)) { ok = false; break; }
            if (ok) {
                current.push_back(x);
                self(self, x + 1);
                current.pop_back();
            }
            if (x == full) break;
        }
    };
    rec(rec, 0);
}

} // namespace testutil
