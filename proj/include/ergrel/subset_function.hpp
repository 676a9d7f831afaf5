#pragma once

#include <algorithm>
#include <vector>

#include "relation.hpp"

namespace ergrel {

/// A map x -> U(x) with U(x) contained in the class of x. Sets are kept as
/// sorted atom vectors so unions, differences and equality are canonical.
template <class R>
struct SubsetFunction {
    const Relation<R>* rel = nullptr;
    std::vector<std::vector<int>> sets;  // atom -> sorted subset of its class

    SubsetFunction() = default;
    SubsetFunction(const Relation<R>& r, std::vector<std::vector<int>> sets_)
        : rel(&r), sets(std::move(sets_)) {
        require(int(sets.size()) == r.size(), "SubsetFunction: size mismatch");
        for (int x = 0; x < r.size(); ++x) {
            auto& s = sets[std::size_t(x)];
            std::sort(s.begin(), s.end());
            s.erase(std::unique(s.begin(), s.end()), s.end());
            for (int y : s)
                require(r.same_class(x, y), "SubsetFunction: set at atom " + std::to_string(x) +
                                                " leaves its class (atom " + std::to_string(y) + ")");
        }
    }

    static SubsetFunction identity(const Relation<R>& r) {
        std::vector<std::vector<int>> s(std::size_t(r.size()));
        for (int x = 0; x < r.size(); ++x) s[std::size_t(x)] = {x};
        return SubsetFunction(r, std::move(s));
    }

    static SubsetFunction empty(const Relation<R>& r) {
        return SubsetFunction(r, std::vector<std::vector<int>>(std::size_t(r.size())));
    }

    int size() const { return int(sets.size()); }
    const std::vector<int>& at(int x) const { return sets[std::size_t(x)]; }
    bool contains(int x, int y) const {
        const auto& s = at(x);
        return std::binary_search(s.begin(), s.end(), y);
    }
    bool operator==(const SubsetFunction& o) const { return sets == o.sets; }
};

/// U^{-1}(y) := { x : y in U(x) }. Involution.
template <class R>
SubsetFunction<R> inverse(const SubsetFunction<R>& U) {
    std::vector<std::vector<int>> inv(U.sets.size());
    for (int x = 0; x < U.size(); ++x)
        for (int y : U.at(x)) inv[std::size_t(y)].push_back(x);
    return SubsetFunction<R>(*U.rel, std::move(inv));
}

/// (U1 U2)(x) := union of U1(y) over y in U2(x). Associative.
template <class R>
SubsetFunction<R> product(const SubsetFunction<R>& U1, const SubsetFunction<R>& U2) {
    require(U1.rel == U2.rel, "product: different relations");
    std::vector<std::vector<int>> out(U1.sets.size());
    for (int x = 0; x < U2.size(); ++x) {
        auto& s = out[std::size_t(x)];
        for (int y : U2.at(x)) s.insert(s.end(), U1.at(y).begin(), U1.at(y).end());
    }
    return SubsetFunction<R>(*U1.rel, std::move(out));
}

template <class R>
SubsetFunction<R> union_over(const std::vector<SubsetFunction<R>>& Us) {
    require(!Us.empty(), "union_over: empty list");
    std::vector<std::vector<int>> out(Us.front().sets.size());
    for (const auto& U : Us) {
        require(U.rel == Us.front().rel, "union_over: different relations");
        for (int x = 0; x < U.size(); ++x)
            out[std::size_t(x)].insert(out[std::size_t(x)].end(), U.at(x).begin(), U.at(x).end());
    }
    return SubsetFunction<R>(*Us.front().rel, std::move(out));
}

template <class R>
SubsetFunction<R> difference(const SubsetFunction<R>& U1, const SubsetFunction<R>& U2) {
    require(U1.rel == U2.rel, "difference: different relations");
    std::vector<std::vector<int>> out(U1.sets.size());
    for (int x = 0; x < U1.size(); ++x) {
        std::set_difference(U1.at(x).begin(), U1.at(x).end(), U2.at(x).begin(), U2.at(x).end(),
                            std::back_inserter(out[std::size_t(x)]));
    }
    return SubsetFunction<R>(*U1.rel, std::move(out));
}

/// Pointwise application of an inner automorphism candidate psi; atoms where
/// psi is undefined are dropped (the defect computation accounts for them).
inline std::vector<int> apply_partial(const PartialBijection& psi, const std::vector<int>& set) {
    std::vector<int> out;
    out.reserve(set.size());
    for (int y : set)
        if (psi.defined_at(y)) out.push_back(psi(y));
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace ergrel
