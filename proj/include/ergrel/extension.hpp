#pragma once

#include <string>
#include <vector>

#include "subset_family.hpp"

namespace ergrel {

/// Total-permutation action with invariant weights (a p.m.p. action on a
/// finite space), keyed by generator labels.
template <class R>
struct GroupAction {
    PointSpace<R> space;
    std::vector<PartialBijection> perms;

    void validate() const {
        for (const auto& g : perms) {
            require(g.size() == space.size(), "GroupAction: permutation on wrong atom set");
            require(g.is_total(), "GroupAction: " + g.label + " is not a total permutation");
            for (int x = 0; x < space.size(); ++x)
                require(scalar_traits<R>::eq(space.weight[std::size_t(x)],
                                             space.weight[std::size_t(g(x))]),
                        "GroupAction: " + g.label + " does not preserve the measure at atom " +
                            std::to_string(x));
        }
    }

    const PartialBijection& perm(const std::string& label) const {
        for (const auto& g : perms)
            if (g.label == label) return g;
        throw std::invalid_argument("GroupAction: no permutation labeled " + label);
    }
};

template <class R>
struct ClassBijectiveExtension {
    Relation<R> upstairs;
    Relation<R> downstairs;
    std::vector<int> projection;  // upstairs atom -> downstairs atom

    /// Invariants: the projection pushes the measure forward, maps classes
    /// into classes, and restricts to a bijection class-by-class. The last
    /// condition can genuinely fail for diagonal products (orbits grow by
    /// lcm); callers that need lifting must check.
    bool is_class_bijective(std::string* why = nullptr) const {
        for (const auto& cls : upstairs.class_atoms) {
            int down_cid = downstairs.class_id[std::size_t(projection[std::size_t(cls.front())])];
            std::vector<int> image;
            for (int u : cls) {
                int d = projection[std::size_t(u)];
                if (downstairs.class_id[std::size_t(d)] != down_cid) {
                    if (why) *why = "class image spans several downstairs classes";
                    return false;
                }
                image.push_back(d);
            }
            std::sort(image.begin(), image.end());
            const auto& down_cls =
                downstairs.class_atoms[std::size_t(downstairs.class_pos[std::size_t(down_cid)])];
            if (image != down_cls) {
                if (why)
                    *why = "projection of a class of size " + std::to_string(cls.size()) +
                           " is not a bijection onto its downstairs class (size " +
                           std::to_string(down_cls.size()) + ")";
                return false;
            }
        }
        return true;
    }

    void validate_measures() const {
        std::vector<R> push(std::size_t(downstairs.size()), R(0));
        for (int u = 0; u < upstairs.size(); ++u)
            push[std::size_t(projection[std::size_t(u)])] += upstairs.space.weight[std::size_t(u)];
        for (int d = 0; d < downstairs.size(); ++d)
            require(scalar_traits<R>::eq(push[std::size_t(d)], downstairs.space.weight[std::size_t(d)]),
                    "extension: projection does not push the measure forward at atom " +
                        std::to_string(d));
    }
};

/// Diagonal product with a p.m.p. action carrying the same generator labels.
/// Upstairs atoms are (downstairs atom, pmp atom) with product weights, each
/// generator acts diagonally and the projection is the first coordinate.
template <class R>
ClassBijectiveExtension<R> product_extension(const Relation<R>& rel, const GroupAction<R>& pmp) {
    pmp.validate();
    require(pmp.perms.size() == rel.generators.size(), "product_extension: generator label sets differ");
    for (std::size_t i = 0; i < rel.generators.size(); ++i)
        require(pmp.perms[i].label == rel.generators[i].label,
                "product_extension: generator label sets differ (" + rel.generators[i].label +
                    " vs " + pmp.perms[i].label + ")");

    const int nD = rel.size(), nX = pmp.space.size();
    std::vector<std::string> ids;
    std::vector<R> w;
    ids.reserve(std::size_t(nD * nX));
    for (int d = 0; d < nD; ++d)
        for (int x = 0; x < nX; ++x) {
            ids.push_back(rel.space.ids[std::size_t(d)] + "|" + pmp.space.ids[std::size_t(x)]);
            w.push_back(rel.space.weight[std::size_t(d)] * pmp.space.weight[std::size_t(x)]);
        }
    PointSpace<R> up_space(std::move(ids), std::move(w));

    std::vector<PartialBijection> gens;
    for (std::size_t i = 0; i < rel.generators.size(); ++i) {
        const auto& gd = rel.generators[i];
        const auto& gx = pmp.perms[i];
        std::vector<int> img(std::size_t(nD * nX), -1);
        for (int d = 0; d < nD; ++d)
            if (gd.defined_at(d))
                for (int x = 0; x < nX; ++x)
                    img[std::size_t(d * nX + x)] = gd(d) * nX + gx(x);
        gens.emplace_back(gd.label, std::move(img));
    }

    ClassBijectiveExtension<R> ext;
    ext.upstairs = build_relation(std::move(up_space), std::move(gens));
    ext.downstairs = rel;
    ext.projection.resize(std::size_t(nD * nX));
    for (int d = 0; d < nD; ++d)
        for (int x = 0; x < nX; ++x) ext.projection[std::size_t(d * nX + x)] = d;
    ext.validate_measures();
    return ext;
}

/// F~_r(x) := pi^{-1}(F_r(pi(x))) intersect [x]. Preserves |F_r| exactly; a
/// cardinality mismatch means the extension is not class-bijective and the
/// lift is rejected.
template <class R>
SubsetFamily<R> lift_family(const ClassBijectiveExtension<R>& ext, const SubsetFamily<R>& F) {
    require(F.rel->size() == ext.downstairs.size(), "lift_family: family not on the downstairs relation");
    std::vector<SubsetFunction<R>> levels;
    for (int r = 1; r <= F.index_max(); ++r) {
        std::vector<std::vector<int>> sets(std::size_t(ext.upstairs.size()));
        for (int u = 0; u < ext.upstairs.size(); ++u) {
            const auto& target = F.at(r, ext.projection[std::size_t(u)]);
            for (int v : ext.upstairs.class_of(u))
                if (std::binary_search(target.begin(), target.end(), int(ext.projection[std::size_t(v)])))
                    sets[std::size_t(u)].push_back(v);
            require(sets[std::size_t(u)].size() == target.size(),
                    "lift_family: projection not class-bijective at upstairs atom " +
                        std::to_string(u) + " (|lift| = " + std::to_string(sets[std::size_t(u)].size()) +
                        ", |F_r| = " + std::to_string(target.size()) + ")");
        }
        levels.emplace_back(ext.upstairs, std::move(sets));
    }
    return SubsetFamily<R>(ext.upstairs, std::move(levels));
}

}  // namespace ergrel
