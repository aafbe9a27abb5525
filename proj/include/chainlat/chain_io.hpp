#pragma once

// The chain-dump interchange format: a header line `n=<n> chains=<count>`,
// then one chain per line as lowercase hex bitmasks separated by single
// spaces, lines sorted by their first element.

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "chainlat/chain.hpp"
#include "chainlat/errors.hpp"

namespace chainlat {

inline void write_chain_dump(std::ostream& out, const ChainDecomposition& d) {
    std::vector<const Chain*> order;
    order.reserve(d.chains.size());
    for (const auto& c : d.chains) order.push_back(&c);
    std::sort(order.begin(), order.end(),
              [](const Chain* a, const Chain* b) { return a->min() < b->min(); });
    out << "n=" << d.n << " chains=" << d.chains.size() << "\n";
    char buf[20];
    for (const Chain* c : order) {
        bool first = true;
        for (Mask m : c->elems) {
            auto [end, ec] = std::to_chars(buf, buf + sizeof buf, m, 16);
            if (!first) out << ' ';
            out.write(buf, end - buf);
            first = false;
        }
        out << "\n";
    }
}

// Parses a dump. The ground is inferred: the full lattice when the union has
// 2^n elements, the upper half at its cardinality, otherwise the explicit
// union itself.
inline ChainDecomposition read_chain_dump(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw DomainError("chain dump: empty input");
    int n = 0;
    std::uint64_t declared = 0;
    if (std::sscanf(line.c_str(), "n=%d chains=%llu", &n,
                    reinterpret_cast<unsigned long long*>(&declared)) != 2)
        throw DomainError("chain dump: bad header line");
    if (n < 1 || n > kMaxGroundSize) throw DomainError("chain dump: n out of range");

    ChainDecomposition d;
    d.n = n;
    std::uint64_t elements = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        Chain c;
        const char* p = line.data();
        const char* end = p + line.size();
        while (p < end) {
            while (p < end && *p == ' ') ++p;
            if (p >= end) break;
            Mask value = 0;
            auto [next, ec] = std::from_chars(p, end, value, 16);
            if (ec != std::errc() || next == p)
                throw DomainError("chain dump: bad hex token");
            c.elems.push_back(value);
            p = next;
        }
        if (c.elems.empty()) throw DomainError("chain dump: empty chain line");
        elements += c.elems.size();
        d.chains.push_back(std::move(c));
    }
    if (d.chains.size() != declared)
        throw DomainError("chain dump: header count does not match the line count");

    const std::uint64_t full = std::uint64_t{1} << n;
    std::uint64_t upper = 0;
    for (int l = (n + 1) / 2; l <= n; ++l) upper += binomial(n, l);
    if (elements == full) {
        d.ground = Ground::full();
    } else if (elements == upper) {
        d.ground = Ground::upper_half();
    } else {
        std::vector<Mask> all;
        all.reserve(elements);
        for (const auto& c : d.chains) all.insert(all.end(), c.elems.begin(), c.elems.end());
        std::sort(all.begin(), all.end());
        all.erase(std::unique(all.begin(), all.end()), all.end());
        d.ground = Ground::explicit_family(Family(n, std::move(all)));
    }
    return d;
}

} // namespace chainlat
