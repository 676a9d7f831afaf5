#pragma once

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "partial_bijection.hpp"
#include "point_space.hpp"
#include "rational.hpp"

namespace ergrel {

/// Finite measured equivalence relation. Classes are the orbits of the
/// groupoid generated by the partial bijections (connected components of the
/// union of generator graphs); class ids are canonical: the smallest atom
/// index in the class, so all outputs are deterministic.
template <class R>
struct Relation {
    PointSpace<R> space;
    std::vector<PartialBijection> generators;
    std::vector<int> class_id;                 // atom -> canonical class id
    std::vector<std::vector<int>> class_atoms;  // class -> sorted members, indexed by position
    std::vector<int> class_pos;                // class id (atom index) -> position in class_atoms

    int size() const { return space.size(); }
    int class_count() const { return int(class_atoms.size()); }
    const std::vector<int>& class_of(int atom) const {
        return class_atoms[std::size_t(class_pos[std::size_t(class_id[std::size_t(atom)])])];
    }
    bool same_class(int a, int b) const { return class_id[std::size_t(a)] == class_id[std::size_t(b)]; }
};

namespace detail {
struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(std::size_t(n)) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int x) {
        while (parent[std::size_t(x)] != x) {
            parent[std::size_t(x)] = parent[std::size_t(parent[std::size_t(x)])];
            x = parent[std::size_t(x)];
        }
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (a > b) std::swap(a, b);  // keep smallest index as root
        parent[std::size_t(b)] = a;
    }
};
}  // namespace detail

template <class R>
Relation<R> build_relation(PointSpace<R> space, std::vector<PartialBijection> generators) {
    const int n = space.size();
    for (const auto& g : generators)
        require(g.size() == n, "build_relation: generator " + g.label + " on wrong atom set");
    detail::UnionFind uf(n);
    for (const auto& g : generators)
        for (int x = 0; x < n; ++x)
            if (g.defined_at(x)) uf.unite(x, g(x));

    Relation<R> rel;
    rel.space = std::move(space);
    rel.generators = std::move(generators);
    rel.class_id.resize(std::size_t(n));
    rel.class_pos.assign(std::size_t(n), -1);
    for (int x = 0; x < n; ++x) rel.class_id[std::size_t(x)] = uf.find(x);
    for (int x = 0; x < n; ++x) {
        int cid = rel.class_id[std::size_t(x)];
        if (rel.class_pos[std::size_t(cid)] < 0) {
            rel.class_pos[std::size_t(cid)] = int(rel.class_atoms.size());
            rel.class_atoms.emplace_back();
        }
        rel.class_atoms[std::size_t(rel.class_pos[std::size_t(cid)])].push_back(x);
    }
    return rel;
}

template <class R>
struct InvarianceViolation {
    std::string generator;
    int atom;
    R weight_from;
    R weight_to;
};

template <class R>
struct InvarianceReport {
    bool ok = true;
    std::vector<InvarianceViolation<R>> violations;
};

/// mu x c = c x mu on the relation, checked edge by edge: every generator must
/// carry each atom of its domain to an atom of equal weight. For total
/// permutations this is exactly R-invariance of mu; for partial bijections it
/// checks the restricted relation.
template <class R>
InvarianceReport<R> check_measure_invariance(const Relation<R>& rel) {
    InvarianceReport<R> rep;
    for (const auto& g : rel.generators)
        for (int x = 0; x < rel.size(); ++x)
            if (g.defined_at(x)) {
                const R& wf = rel.space.weight[std::size_t(x)];
                const R& wt = rel.space.weight[std::size_t(g(x))];
                if (!scalar_traits<R>::eq(wf, wt)) {
                    rep.ok = false;
                    rep.violations.push_back({g.label, x, wf, wt});
                }
            }
    return rep;
}

/// E[f | I(R)]: on each class the weighted mean sum w(y)f(y) / sum w(y).
/// Integral-preserving and idempotent (exactly, in rational mode).
template <class R>
MeasurableFunction<R> conditional_expectation(const MeasurableFunction<R>& f, const Relation<R>& rel) {
    require(f.size() == rel.size(), "conditional_expectation: size mismatch");
    MeasurableFunction<R> out = MeasurableFunction<R>::constant(rel.size(), R(0));
    for (const auto& cls : rel.class_atoms) {
        R mass(0), acc(0);
        for (int y : cls) {
            mass += rel.space.weight[std::size_t(y)];
            acc += rel.space.weight[std::size_t(y)] * f[y];
        }
        R mean = acc / mass;  // mass > 0: weights are positive
        for (int y : cls) out[y] = mean;
    }
    return out;
}

/// A set is R-saturated when it is a union of classes.
template <class R>
bool is_saturated(const Relation<R>& rel, const std::vector<bool>& member) {
    require(int(member.size()) == rel.size(), "is_saturated: size mismatch");
    for (const auto& cls : rel.class_atoms) {
        bool first = member[std::size_t(cls.front())];
        for (int y : cls)
            if (member[std::size_t(y)] != first) return false;
    }
    return true;
}

/// Smallest saturated superset.
template <class R>
std::vector<bool> saturation(const Relation<R>& rel, const std::vector<bool>& member) {
    require(int(member.size()) == rel.size(), "saturation: size mismatch");
    std::vector<bool> out(member.size(), false);
    for (const auto& cls : rel.class_atoms) {
        bool any = false;
        for (int y : cls) any = any || member[std::size_t(y)];
        if (any)
            for (int y : cls) out[std::size_t(y)] = true;
    }
    return out;
}

}  // namespace ergrel
