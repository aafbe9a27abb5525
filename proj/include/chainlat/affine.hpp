#pragma once

// Affine formulas (variables combined by meet/join), statements (f <= g or
// f = g), and configurations (boolean combinations of statements over k
// variables). A family contains a configuration when k pairwise-distinct
// members satisfy the body; distinctness is part of the semantics.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chainlat/errors.hpp"
#include "chainlat/subset.hpp"

namespace chainlat {

// ------------------------------------------------------------------ formulas

class AffineFormula {
public:
    enum class Op : std::uint8_t { Var, Meet, Join };
    struct Node {
        Op op = Op::Var;
        int var = -1;
        int lhs = -1, rhs = -1;
    };

    static AffineFormula var(int index) {
        AffineFormula f;
        f.root_ = f.add({Op::Var, index, -1, -1});
        return f;
    }
    friend AffineFormula meet(const AffineFormula& a, const AffineFormula& b) {
        return combine(Op::Meet, a, b);
    }
    friend AffineFormula join(const AffineFormula& a, const AffineFormula& b) {
        return combine(Op::Join, a, b);
    }

    int max_var() const {
        int mv = -1;
        for (const Node& nd : nodes_)
            if (nd.op == Op::Var) mv = std::max(mv, nd.var);
        return mv;
    }

    template <class Ambient>
    typename Ambient::Point eval(const Ambient& amb,
                                 const std::vector<typename Ambient::Point>& assignment) const {
        return eval_node(amb, assignment, root_);
    }

private:
    int add(Node nd) {
        nodes_.push_back(nd);
        return static_cast<int>(nodes_.size()) - 1;
    }
    static AffineFormula combine(Op op, const AffineFormula& a, const AffineFormula& b) {
        AffineFormula f;
        f.nodes_ = a.nodes_;
        const int shift = static_cast<int>(f.nodes_.size());
        for (Node nd : b.nodes_) {
            if (nd.lhs >= 0) nd.lhs += shift;
            if (nd.rhs >= 0) nd.rhs += shift;
            f.nodes_.push_back(nd);
        }
        f.root_ = f.add({op, -1, a.root_, b.root_ + shift});
        return f;
    }
    template <class Ambient>
    typename Ambient::Point eval_node(const Ambient& amb,
                                      const std::vector<typename Ambient::Point>& assignment,
                                      int at) const {
        const Node& nd = nodes_[at];
        switch (nd.op) {
            case Op::Var: return assignment[nd.var];
            case Op::Meet:
                return amb.meet(eval_node(amb, assignment, nd.lhs),
                                eval_node(amb, assignment, nd.rhs));
            case Op::Join:
            default:
                return amb.join(eval_node(amb, assignment, nd.lhs),
                                eval_node(amb, assignment, nd.rhs));
        }
    }

    std::vector<Node> nodes_;
    int root_ = -1;
};

struct AffineStatement {
    AffineFormula lhs, rhs;
    bool equality = false; // false: lhs <= rhs in the ambient order

    template <class Ambient>
    bool holds(const Ambient& amb,
               const std::vector<typename Ambient::Point>& assignment) const {
        const auto a = lhs.eval(amb, assignment);
        const auto b = rhs.eval(amb, assignment);
        return equality ? a == b : amb.leq(a, b);
    }
};

// -------------------------------------------------------------- boolean body

class BoolExpr {
public:
    enum class Kind : std::uint8_t { Leaf, And, Or, Not };
    struct Node {
        Kind kind = Kind::Leaf;
        int stmt = -1;
        int lhs = -1, rhs = -1;
    };

    static BoolExpr leaf(int statement_index) {
        BoolExpr e;
        e.root_ = e.add({Kind::Leaf, statement_index, -1, -1});
        return e;
    }
    friend BoolExpr operator&&(const BoolExpr& a, const BoolExpr& b) {
        return combine(Kind::And, a, b);
    }
    friend BoolExpr operator||(const BoolExpr& a, const BoolExpr& b) {
        return combine(Kind::Or, a, b);
    }
    friend BoolExpr operator!(const BoolExpr& a) {
        BoolExpr e;
        e.nodes_ = a.nodes_;
        e.root_ = e.add({Kind::Not, -1, a.root_, -1});
        return e;
    }

    template <class Pred>
    bool eval(Pred&& statement_value) const {
        return eval_node(statement_value, root_);
    }

    // Flattens an and-of-literals body into (statement index, sign) pairs;
    // empty when the body has a richer shape.
    std::vector<std::pair<int, bool>> conjunction_literals() const {
        std::vector<std::pair<int, bool>> out;
        if (!flatten(root_, true, out)) out.clear();
        return out;
    }

private:
    int add(Node nd) {
        nodes_.push_back(nd);
        return static_cast<int>(nodes_.size()) - 1;
    }
    static BoolExpr combine(Kind kind, const BoolExpr& a, const BoolExpr& b) {
        BoolExpr e;
        e.nodes_ = a.nodes_;
        const int shift = static_cast<int>(e.nodes_.size());
        for (Node nd : b.nodes_) {
            if (nd.lhs >= 0) nd.lhs += shift;
            if (nd.rhs >= 0) nd.rhs += shift;
            e.nodes_.push_back(nd);
        }
        e.root_ = e.add({kind, -1, a.root_, b.root_ + shift});
        return e;
    }
    template <class Pred>
    bool eval_node(Pred&& p, int at) const {
        const Node& nd = nodes_[at];
        switch (nd.kind) {
            case Kind::Leaf: return p(nd.stmt);
            case Kind::And: return eval_node(p, nd.lhs) && eval_node(p, nd.rhs);
            case Kind::Or: return eval_node(p, nd.lhs) || eval_node(p, nd.rhs);
            case Kind::Not:
            default: return !eval_node(p, nd.lhs);
        }
    }
    bool flatten(int at, bool sign, std::vector<std::pair<int, bool>>& out) const {
        const Node& nd = nodes_[at];
        switch (nd.kind) {
            case Kind::Leaf:
                out.emplace_back(nd.stmt, sign);
                return true;
            case Kind::Not:
                if (nodes_[nd.lhs].kind != Kind::Leaf) return false;
                out.emplace_back(nodes_[nd.lhs].stmt, !sign);
                return true;
            case Kind::And:
                return sign && flatten(nd.lhs, true, out) && flatten(nd.rhs, true, out);
            case Kind::Or:
            default:
                return false;
        }
    }

    std::vector<Node> nodes_;
    int root_ = -1;
};

// ------------------------------------------------------------- configuration

struct AffineConfiguration {
    std::string name;
    int num_vars = 0;
    std::vector<AffineStatement> statements;
    BoolExpr body;

    template <class Ambient>
    bool satisfied(const Ambient& amb,
                   const std::vector<typename Ambient::Point>& assignment) const {
        return body.eval([&](int si) { return statements[si].holds(amb, assignment); });
    }
};

// ------------------------------------------------------------ catalog

inline AffineConfiguration comparable_pair_configuration() {
    AffineConfiguration c;
    c.name = "comparable";
    c.num_vars = 2;
    c.statements.push_back({AffineFormula::var(0), AffineFormula::var(1), false});
    c.body = BoolExpr::leaf(0);
    return c;
}

// Three distinct points with z = x u y.
inline AffineConfiguration corner_configuration() {
    AffineConfiguration c;
    c.name = "corner";
    c.num_vars = 3;
    c.statements.push_back(
        {AffineFormula::var(2), join(AffineFormula::var(0), AffineFormula::var(1)), true});
    c.body = BoolExpr::leaf(0);
    return c;
}

// 2^d distinct points indexed by subsets of [d]: the bottom is every pairwise
// meet of the singleton generators, and each non-singleton index is the join
// of its generators.
inline AffineConfiguration boolean_algebra_configuration(int d) {
    if (d < 1 || d > 4) throw CapabilityError("boolean_algebra_configuration: 1 <= d <= 4");
    AffineConfiguration c;
    c.name = "boolean" + std::to_string(d);
    c.num_vars = 1 << d;
    auto var_of = [&](int subset) { return AffineFormula::var(subset); };
    std::optional<BoolExpr> body;
    auto add_stmt = [&](AffineStatement st) {
        c.statements.push_back(std::move(st));
        BoolExpr leaf = BoolExpr::leaf(static_cast<int>(c.statements.size()) - 1);
        body = body ? (*body && leaf) : leaf;
    };
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j)
            add_stmt({var_of(0), meet(var_of(1 << i), var_of(1 << j)), true});
    for (int mask = 1; mask < (1 << d); ++mask) {
        if (popcount(static_cast<Mask>(mask)) < 2) continue;
        std::optional<AffineFormula> u;
        for (int i = 0; i < d; ++i)
            if (mask & (1 << i)) u = u ? join(*u, var_of(1 << i)) : var_of(1 << i);
        add_stmt({var_of(mask), *u, true});
    }
    c.body = *body;
    return c;
}

// Strict-order relation on up to 5 points, closed transitively.
struct Poset {
    int size = 0;
    bool less[5][5] = {};

    void close() {
        for (int k = 0; k < size; ++k)
            for (int i = 0; i < size; ++i)
                for (int j = 0; j < size; ++j)
                    if (less[i][k] && less[k][j]) less[i][j] = true;
        for (int i = 0; i < size; ++i)
            if (less[i][i]) throw DomainError("poset: relation has a cycle");
    }
};

// Weak containment: one statement per related pair.
inline AffineConfiguration weak_poset_configuration(const Poset& p) {
    if (p.size < 1 || p.size > 5) throw CapabilityError("weak_poset_configuration: |P| <= 5");
    AffineConfiguration c;
    c.name = "poset-weak";
    c.num_vars = p.size;
    std::optional<BoolExpr> body;
    for (int i = 0; i < p.size; ++i)
        for (int j = 0; j < p.size; ++j)
            if (p.less[i][j]) {
                c.statements.push_back({AffineFormula::var(i), AffineFormula::var(j), false});
                BoolExpr leaf = BoolExpr::leaf(static_cast<int>(c.statements.size()) - 1);
                body = body ? (*body && leaf) : leaf;
            }
    if (!body) { // an antichain poset forbids nothing in the weak sense
        c.statements.push_back({AffineFormula::var(0), AffineFormula::var(0), false});
        body = BoolExpr::leaf(0);
    }
    c.body = *body;
    return c;
}

// Induced copy: related pairs contained, unrelated pairs incomparable.
inline AffineConfiguration induced_poset_configuration(const Poset& p) {
    if (p.size < 1 || p.size > 5) throw CapabilityError("induced_poset_configuration: |P| <= 5");
    AffineConfiguration c;
    c.name = "poset-induced";
    c.num_vars = p.size;
    std::optional<BoolExpr> body;
    auto push = [&](BoolExpr e) { body = body ? (*body && e) : e; };
    auto stmt_leq = [&](int i, int j) {
        c.statements.push_back({AffineFormula::var(i), AffineFormula::var(j), false});
        return BoolExpr::leaf(static_cast<int>(c.statements.size()) - 1);
    };
    for (int i = 0; i < p.size; ++i)
        for (int j = 0; j < p.size; ++j) {
            if (i == j) continue;
            if (p.less[i][j])
                push(stmt_leq(i, j));
            else if (!p.less[j][i] && i < j) {
                push(!stmt_leq(i, j));
                push(!stmt_leq(j, i));
            }
        }
    if (!body) push(stmt_leq(0, 0)); // |P| = 1: reflexive statement, always true
    c.body = *body;
    return c;
}

} // namespace chainlat
