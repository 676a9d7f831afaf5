#pragma once

#include <optional>
#include <vector>

#include "subset_function.hpp"

namespace ergrel {

/// Indexed family {F_r}, r = 1..index_max, with the standing assumption
/// |F_r(x)| >= 1 enforced at construction.
template <class R>
struct SubsetFamily {
    const Relation<R>* rel = nullptr;
    std::vector<SubsetFunction<R>> levels;  // levels[r-1] = F_r

    SubsetFamily() = default;
    SubsetFamily(const Relation<R>& r, std::vector<SubsetFunction<R>> levels_)
        : rel(&r), levels(std::move(levels_)) {
        require(!levels.empty(), "SubsetFamily: empty index set");
        for (const auto& F : levels) {
            require(F.rel == &r, "SubsetFamily: level on wrong relation");
            for (int x = 0; x < F.size(); ++x)
                require(!F.at(x).empty(),
                        "SubsetFamily: empty F_r(x) at atom " + std::to_string(x));
        }
    }

    int index_max() const { return int(levels.size()); }
    const SubsetFunction<R>& level(int r) const {
        require(r >= 1 && r <= index_max(), "SubsetFamily: index out of range");
        return levels[std::size_t(r - 1)];
    }
    const std::vector<int>& at(int r, int x) const { return level(r).at(x); }
};

/// Balls of the relation graph: F_r(x) = atoms reachable from x within r
/// generator edges (edges taken both ways). Monotone by construction.
template <class R>
SubsetFamily<R> graph_ball_family(const Relation<R>& rel, int index_max) {
    require(index_max >= 1, "graph_ball_family: index_max must be >= 1");
    std::vector<std::vector<int>> nbr(std::size_t(rel.size()));
    for (const auto& g : rel.generators)
        for (int x = 0; x < rel.size(); ++x)
            if (g.defined_at(x)) {
                nbr[std::size_t(x)].push_back(g(x));
                nbr[std::size_t(g(x))].push_back(x);
            }
    std::vector<SubsetFunction<R>> levels;
    std::vector<std::vector<int>> prev(std::size_t(rel.size()));
    for (int x = 0; x < rel.size(); ++x) prev[std::size_t(x)] = {x};
    for (int r = 1; r <= index_max; ++r) {
        std::vector<std::vector<int>> cur(std::size_t(rel.size()));
        for (int x = 0; x < rel.size(); ++x) {
            auto s = prev[std::size_t(x)];
            for (int y : prev[std::size_t(x)])
                s.insert(s.end(), nbr[std::size_t(y)].begin(), nbr[std::size_t(y)].end());
            std::sort(s.begin(), s.end());
            s.erase(std::unique(s.begin(), s.end()), s.end());
            cur[std::size_t(x)] = std::move(s);
        }
        levels.emplace_back(rel, cur);
        prev = std::move(cur);
    }
    return SubsetFamily<R>(rel, std::move(levels));
}

/// The family constants of the subset-function calculus. C_u is reported as
/// undefined (uniform_ok = false) when some inverse set is empty.
template <class R>
struct FamilyConstants {
    std::vector<long> a, b;  // per-index min / max of |F_r| and |F_r^{-1}|
    bool uniform_ok = true;
    R C_u{1};
    R C_reg{1};
    R C_t{1};
    R C_d{1};
    bool monotone = true;
};

template <class R>
std::pair<std::vector<long>, std::vector<long>> uniformity_bounds(const SubsetFamily<R>& F) {
    std::vector<long> a, b;
    for (int r = 1; r <= F.index_max(); ++r) {
        const auto& Fr = F.level(r);
        auto Fri = inverse(Fr);
        long lo = -1, hi = 0;
        for (int x = 0; x < Fr.size(); ++x) {
            for (long c : {long(Fr.at(x).size()), long(Fri.at(x).size())}) {
                if (lo < 0 || c < lo) lo = c;
                if (c > hi) hi = c;
            }
        }
        a.push_back(lo);
        b.push_back(hi);
    }
    return {a, b};
}

/// a_r <= |F_r(x)|, |F_r^{-1}(x)| <= b_r and C_u = max_r b_r / a_r.
template <class R>
void uniformity(const SubsetFamily<R>& F, FamilyConstants<R>& out) {
    auto [a, b] = uniformity_bounds(F);
    out.a = a;
    out.b = b;
    out.uniform_ok = true;
    out.C_u = R(1);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) {
            out.uniform_ok = false;
            continue;
        }
        R ratio = scalar_traits<R>::from_fraction(b[i], a[i]);
        if (ratio > out.C_u) out.C_u = ratio;
    }
}

/// C_reg = max over x, r of |union_{t<=r} F_t^{-1} F_r (x)| / |F_r(x)|.
template <class R>
R regularity(const SubsetFamily<R>& F) {
    R best(1);
    std::vector<SubsetFunction<R>> inverses;
    for (int t = 1; t <= F.index_max(); ++t) inverses.push_back(inverse(F.level(t)));
    for (int r = 1; r <= F.index_max(); ++r) {
        std::vector<SubsetFunction<R>> parts;
        for (int t = 1; t <= r; ++t) parts.push_back(product(inverses[std::size_t(t - 1)], F.level(r)));
        auto u = union_over(parts);
        for (int x = 0; x < u.size(); ++x) {
            R ratio = scalar_traits<R>::from_fraction(long(u.at(x).size()), long(F.at(r, x).size()));
            if (ratio > best) best = ratio;
        }
    }
    return best;
}

/// C_t = max over x, n >= 2 of |union_{m<=n-1} F_m^{-1} F_n (x)| / |F_n(x)|.
/// Reported as 1 when index_max == 1 (the condition is vacuous).
template <class R>
R temperedness(const SubsetFamily<R>& F) {
    R best(1);
    std::vector<SubsetFunction<R>> inverses;
    for (int t = 1; t <= F.index_max(); ++t) inverses.push_back(inverse(F.level(t)));
    for (int n = 2; n <= F.index_max(); ++n) {
        std::vector<SubsetFunction<R>> parts;
        for (int m = 1; m <= n - 1; ++m)
            parts.push_back(product(inverses[std::size_t(m - 1)], F.level(n)));
        auto u = union_over(parts);
        for (int x = 0; x < u.size(); ++x) {
            R ratio = scalar_traits<R>::from_fraction(long(u.at(x).size()), long(F.at(n, x).size()));
            if (ratio > best) best = ratio;
        }
    }
    return best;
}

/// monotone <=> F_s(x) subset of F_r(x) for s < r; C_d = max |F_r^{-1}F_r| / |F_r|.
template <class R>
std::pair<bool, R> doubling(const SubsetFamily<R>& F) {
    bool monotone = true;
    for (int r = 2; r <= F.index_max() && monotone; ++r)
        for (int x = 0; x < F.rel->size() && monotone; ++x) {
            const auto& lo = F.at(r - 1, x);
            const auto& hi = F.at(r, x);
            monotone = std::includes(hi.begin(), hi.end(), lo.begin(), lo.end());
        }
    R best(1);
    for (int r = 1; r <= F.index_max(); ++r) {
        auto sq = product(inverse(F.level(r)), F.level(r));
        for (int x = 0; x < sq.size(); ++x) {
            R ratio = scalar_traits<R>::from_fraction(long(sq.at(x).size()), long(F.at(r, x).size()));
            if (ratio > best) best = ratio;
        }
    }
    return {monotone, best};
}

template <class R>
FamilyConstants<R> compute_constants(const SubsetFamily<R>& F) {
    FamilyConstants<R> c;
    uniformity(F, c);
    c.C_reg = regularity(F);
    c.C_t = temperedness(F);
    auto [mono, cd] = doubling(F);
    c.monotone = mono;
    c.C_d = cd;
    return c;
}

/// |F_r(x) delta psi(F_r(x))| / |F_r(x)| per atom. Atoms where psi is
/// undefined contribute their full mass to the symmetric difference, a
/// conservative upper bound. This is a diagnostic: finite families cannot
/// attain the r -> infinity limit.
template <class R>
struct DefectProfile {
    std::vector<std::vector<R>> per_atom;  // [psi][atom]
    std::vector<R> max_defect;             // [psi]
};

template <class R>
DefectProfile<R> asymptotic_invariance_defect(const SubsetFamily<R>& F,
                                              const std::vector<PartialBijection>& Psi, int r) {
    const auto& rel = *F.rel;
    for (const auto& psi : Psi)
        for (int x = 0; x < rel.size(); ++x)
            if (psi.defined_at(x))
                require(rel.same_class(x, psi(x)),
                        "defect: psi " + psi.label + " graph not in relation at atom " + std::to_string(x));
    DefectProfile<R> out;
    for (const auto& psi : Psi) {
        std::vector<R> row;
        R mx(0);
        for (int x = 0; x < rel.size(); ++x) {
            const auto& A = F.at(r, x);
            std::vector<int> B = apply_partial(psi, A);
            long undefined = long(A.size()) - long(B.size());
            std::vector<int> sym;
            std::set_symmetric_difference(A.begin(), A.end(), B.begin(), B.end(),
                                          std::back_inserter(sym));
            R d = scalar_traits<R>::from_fraction(long(sym.size()) + undefined, long(A.size()));
            if (d > mx) mx = d;
            row.push_back(d);
        }
        out.per_atom.push_back(std::move(row));
        out.max_defect.push_back(mx);
    }
    return out;
}

/// Max defect over Psi at each index, plus the threshold flag at index_max
/// (default threshold 0.1). "Asymptotically invariant" is only ever reported
/// this way, never claimed as a limit.
template <class R>
struct FolnerDiagnostic {
    std::vector<R> max_defect_by_r;
    R threshold;
    bool below_threshold_at_top;
};

template <class R>
FolnerDiagnostic<R> folner_diagnostic(const SubsetFamily<R>& F,
                                      const std::vector<PartialBijection>& Psi,
                                      R threshold = scalar_traits<R>::from_fraction(1, 10)) {
    FolnerDiagnostic<R> d;
    d.threshold = threshold;
    for (int r = 1; r <= F.index_max(); ++r) {
        auto prof = asymptotic_invariance_defect(F, Psi, r);
        R mx(0);
        for (const R& v : prof.max_defect)
            if (v > mx) mx = v;
        d.max_defect_by_r.push_back(mx);
    }
    d.below_threshold_at_top = scalar_traits<R>::leq(d.max_defect_by_r.back(), threshold);
    return d;
}

}  // namespace ergrel
