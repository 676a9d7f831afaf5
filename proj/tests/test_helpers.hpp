#pragma once

#include <string>
#include <vector>

#include "ergrel/extension.hpp"
#include "ergrel/prng.hpp"
#include "ergrel/relation.hpp"
#include "ergrel/subset_family.hpp"

namespace th {

using ergrel::PartialBijection;
using ergrel::PointSpace;
using ergrel::Rat;
using ergrel::Relation;

inline PointSpace<Rat> uniform_space(int n, const Rat& total = Rat(1), std::string prefix = "a") {
    std::vector<std::string> ids;
    std::vector<Rat> w;
    for (int i = 0; i < n; ++i) {
        ids.push_back(prefix + std::to_string(i));
        w.push_back(total / n);
    }
    return PointSpace<Rat>(std::move(ids), std::move(w));
}

inline PartialBijection rotation(int n, int step = 1, std::string label = "T") {
    std::vector<int> img(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) img[std::size_t(i)] = ((i + step) % n + n) % n;
    return PartialBijection(std::move(label), std::move(img));
}

inline PartialBijection swap01(int n, std::string label = "s") {
    std::vector<int> img(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) img[std::size_t(i)] = i;
    img[0] = 1;
    img[1] = 0;
    return PartialBijection(std::move(label), std::move(img));
}

/// Full cycle relation on n uniform atoms under one rotation generator.
inline Relation<Rat> cycle_relation(int n) {
    return ergrel::build_relation(uniform_space(n), {rotation(n)});
}

/// Independent orbit-closure oracle: transitive closure of the undirected
/// generator graph by iterated squaring of the reachability matrix. Used to
/// check build_relation's union-find classes.
inline std::vector<std::vector<int>> orbit_closure_oracle(int n,
                                                          const std::vector<PartialBijection>& gens) {
    std::vector<std::vector<bool>> reach(std::size_t(n), std::vector<bool>(std::size_t(n), false));
    for (int i = 0; i < n; ++i) reach[std::size_t(i)][std::size_t(i)] = true;
    for (const auto& g : gens)
        for (int x = 0; x < n; ++x)
            if (g.defined_at(x)) {
                reach[std::size_t(x)][std::size_t(g(x))] = true;
                reach[std::size_t(g(x))][std::size_t(x)] = true;
            }
    for (bool changed = true; changed;) {
        changed = false;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (reach[std::size_t(i)][std::size_t(j)])
                    for (int k = 0; k < n; ++k)
                        if (reach[std::size_t(j)][std::size_t(k)] && !reach[std::size_t(i)][std::size_t(k)]) {
                            reach[std::size_t(i)][std::size_t(k)] = true;
                            changed = true;
                        }
    }
    std::vector<std::vector<int>> classes;
    std::vector<bool> seen(std::size_t(n), false);
    for (int i = 0; i < n; ++i) {
        if (seen[std::size_t(i)]) continue;
        std::vector<int> cls;
        for (int j = 0; j < n; ++j)
            if (reach[std::size_t(i)][std::size_t(j)]) {
                cls.push_back(j);
                seen[std::size_t(j)] = true;
            }
        classes.push_back(cls);
    }
    return classes;
}

inline ergrel::MeasurableFunction<Rat> random_function(ergrel::Prng& rng, int n, long max_num = 9) {
    std::vector<Rat> v;
    for (int i = 0; i < n; ++i) v.push_back(rng.signed_rational(max_num, 6));
    return ergrel::MeasurableFunction<Rat>(std::move(v));
}

inline ergrel::MeasurableFunction<Rat> random_nonneg(ergrel::Prng& rng, int n, long max_num = 9) {
    std::vector<Rat> v;
    for (int i = 0; i < n; ++i) v.push_back(Rat(rng.uniform(0, max_num), rng.uniform(1, 6)));
    return ergrel::MeasurableFunction<Rat>(std::move(v));
}

/// Random family of subsets of each atom's class, always containing the atom
/// itself so |F_r(x)| >= 1.
inline ergrel::SubsetFamily<Rat> random_family(ergrel::Prng& rng, const Relation<Rat>& rel,
                                               int index_max) {
    std::vector<ergrel::SubsetFunction<Rat>> levels;
    for (int r = 1; r <= index_max; ++r) {
        std::vector<std::vector<int>> sets(std::size_t(rel.size()));
        for (int x = 0; x < rel.size(); ++x) {
            sets[std::size_t(x)].push_back(x);
            for (int y : rel.class_of(x))
                if (y != x && rng.uniform(0, 2) == 0) sets[std::size_t(x)].push_back(y);
        }
        levels.emplace_back(rel, std::move(sets));
    }
    return ergrel::SubsetFamily<Rat>(rel, std::move(levels));
}

}  // namespace th
