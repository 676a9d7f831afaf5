#pragma once

#include <string>
#include <vector>

#include "covering.hpp"
#include "examples.hpp"
#include "prng.hpp"

namespace ergrel {

/// Seeded instance generators for the verification suites. Instances satisfy
/// the hypotheses of the statements they feed BY CONSTRUCTION (metric balls
/// on cycles, derived constants); rejected-instance sampling is not used.

inline PointSpace<Rat> uniform_cycle_space(int n) {
    std::vector<std::string> ids;
    std::vector<Rat> w;
    for (int i = 0; i < n; ++i) {
        ids.push_back("a" + std::to_string(i));
        w.push_back(Rat(1, n));
    }
    return PointSpace<Rat>(std::move(ids), std::move(w));
}

inline PartialBijection cycle_rotation(int n, int step = 1, std::string label = "T") {
    std::vector<int> img(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) img[std::size_t(i)] = ((i + step) % n + n) % n;
    return PartialBijection(std::move(label), std::move(img));
}

struct FamilyInstance {
    Relation<Rat> rel;
    SubsetFamily<Rat> family;
    FamilyConstants<Rat> constants;
};

/// Ball family on a uniform cycle (or a disjoint pair of cycles) with random
/// length and depth.
inline FamilyInstance random_ball_family(Prng& rng, int min_len = 8, int max_len = 40,
                                         int max_index = 3) {
    FamilyInstance inst;
    int L = int(rng.uniform(min_len, max_len));
    if (rng.uniform(0, 3) == 0) {
        // two components: the rotation fixes nothing across them
        int L2 = int(rng.uniform(min_len, max_len));
        std::vector<int> img(static_cast<std::size_t>(L + L2));
        for (int i = 0; i < L; ++i) img[std::size_t(i)] = (i + 1) % L;
        for (int i = 0; i < L2; ++i) img[std::size_t(L + i)] = L + (i + 1) % L2;
        inst.rel = build_relation(uniform_cycle_space(L + L2),
                                  {PartialBijection("T", std::move(img))});
    } else {
        inst.rel = build_relation(uniform_cycle_space(L), {cycle_rotation(L)});
    }
    int im = int(rng.uniform(1, max_index));
    inst.family = graph_ball_family(inst.rel, im);
    inst.constants = compute_constants(inst.family);
    return inst;
}

/// Random nonempty subsets of each class, always containing the atom, over a
/// random cycle. Uniform when every inverse set stays nonempty (the atom's
/// own membership guarantees it).
inline FamilyInstance random_subset_family(Prng& rng) {
    FamilyInstance inst;
    int L = int(rng.uniform(6, 16));
    inst.rel = build_relation(uniform_cycle_space(L), {cycle_rotation(L)});
    int im = int(rng.uniform(2, 3));
    std::vector<SubsetFunction<Rat>> levels;
    for (int r = 1; r <= im; ++r) {
        std::vector<std::vector<int>> sets(static_cast<std::size_t>(L));
        for (int x = 0; x < L; ++x) {
            sets[std::size_t(x)].push_back(x);
            for (int y = 0; y < L; ++y)
                if (y != x && rng.uniform(0, 2) == 0) sets[std::size_t(x)].push_back(y);
        }
        levels.emplace_back(inst.rel, std::move(sets));
    }
    inst.family = SubsetFamily<Rat>(inst.rel, std::move(levels));
    inst.constants = compute_constants(inst.family);
    return inst;
}

inline VitaliInput<Rat> random_vitali_input(Prng& rng, const SubsetFamily<Rat>& F) {
    VitaliInput<Rat> in;
    in.F = &F;
    for (int y = 0; y < F.rel->size(); ++y)
        if (rng.uniform(0, 1) == 0) {
            in.Y.push_back(y);
            in.rho.push_back(int(rng.uniform(1, F.index_max())));
        }
    if (in.Y.empty()) {
        in.Y.push_back(int(rng.uniform(0, F.rel->size() - 1)));
        in.rho.push_back(1);
    }
    return in;
}

struct BasicLemmaInstance {
    std::vector<std::vector<int>> V;
    std::vector<Rat> kappa;
    Rat C_u, lambda;
};

/// Constant-radius balls on a cycle: hypothesis 1 is trivial, lambda is set
/// to min kappa(V_i)/|V_i| and C_u covers the multiplicity bound.
inline BasicLemmaInstance random_basic_lemma_instance(Prng& rng) {
    BasicLemmaInstance ins;
    int L = int(rng.uniform(8, 30));
    int radius = int(rng.uniform(0, 2));
    long ball = 2 * radius + 1;
    int m = int(rng.uniform(1, std::max<long>(2, L / ball)));
    for (int i = 0; i < m; ++i) {
        int c = int(rng.uniform(0, L - 1));
        std::vector<int> s;
        for (int d = -radius; d <= radius; ++d) s.push_back(((c + d) % L + L) % L);
        std::sort(s.begin(), s.end());
        ins.V.push_back(std::move(s));
    }
    for (int w = 0; w < L; ++w) ins.kappa.push_back(rng.positive_rational(6, 4));
    Rat lam(-1);
    for (const auto& s : ins.V) {
        Rat mass(0);
        for (int w : s) mass += ins.kappa[std::size_t(w)];
        Rat cand = mass / Rat(long(s.size()));
        if (lam < 0 || cand < lam) lam = cand;
    }
    ins.lambda = lam;
    long worst = 0;
    std::vector<long> cnt(std::size_t(L), 0);
    for (const auto& s : ins.V)
        for (int w : s) worst = std::max(worst, ++cnt[std::size_t(w)]);
    ins.C_u = Rat(std::max<long>(1, (worst + ball - 1) / ball));
    return ins;
}

/// Nondecreasing-radius balls on a cycle with disjoint random blocks; C_u = 1
/// per index, C_t from the ball-overlap bound.
inline BlockSelectionInstance<Rat> random_block_selection_instance(Prng& rng) {
    BlockSelectionInstance<Rat> inst;
    int L = int(rng.uniform(12, 36));
    int N = int(rng.uniform(1, 4));
    std::vector<int> radius;
    int r = int(rng.uniform(0, 1));
    for (int i = 0; i < N; ++i) {
        radius.push_back(r);
        if (2 * (r + 1) + 1 < L / 2 && rng.uniform(0, 1) == 0) ++r;
    }
    inst.omega_size = L;
    inst.C_u = Rat(1);
    inst.V.resize(std::size_t(N));
    for (int i = 0; i < N; ++i) {
        inst.V[std::size_t(i)].resize(std::size_t(L));
        for (int w = 0; w < L; ++w) {
            std::vector<int> ball;
            for (int d = -radius[std::size_t(i)]; d <= radius[std::size_t(i)]; ++d)
                ball.push_back(((w + d) % L + L) % L);
            std::sort(ball.begin(), ball.end());
            inst.V[std::size_t(i)][std::size_t(w)] = std::move(ball);
        }
    }
    Rat ct(1);
    for (int j = 1; j < N; ++j) {
        long num = 2 * (radius[std::size_t(j - 1)] + radius[std::size_t(j)]) + 1;
        long den = 2 * radius[std::size_t(j)] + 1;
        Rat cand(std::min(num, long(L)), den);
        if (cand > ct) ct = cand;
    }
    inst.C_t = ct;
    std::vector<int> pool;
    for (int w = 0; w < L; ++w) pool.push_back(w);
    inst.I_blocks.resize(std::size_t(N));
    for (int i = 0; i < N; ++i)
        for (int k = 0; k < 3 && !pool.empty(); ++k) {
            std::size_t pick = std::size_t(rng.uniform(0, long(pool.size()) - 1));
            inst.I_blocks[std::size_t(i)].push_back(pool[pick]);
            pool.erase(pool.begin() + long(pick));
        }
    for (auto& blk : inst.I_blocks) std::sort(blk.begin(), blk.end());
    for (int w = 0; w < L; ++w) inst.kappa.push_back(rng.positive_rational(5, 3));
    Rat lam(-1);
    for (int i = 0; i < N; ++i)
        for (int w : inst.I_blocks[std::size_t(i)]) {
            Rat mass(0);
            for (int y : inst.V[std::size_t(i)][std::size_t(w)]) mass += inst.kappa[std::size_t(y)];
            Rat cand = mass / Rat(long(inst.V[std::size_t(i)][std::size_t(w)].size()));
            if (lam < 0 || cand < lam) lam = cand;
        }
    inst.lambda = lam < 0 ? Rat(1) : lam;
    return inst;
}

struct ProductInstance {
    Relation<Rat> rel;
    GroupAction<Rat> pmp;
};

/// Class-bijective product data: a cycle of length L paired with an X
/// permutation whose order divides L (identity, or a rotation on m | L
/// atoms), so diagonal orbits project bijectively.
inline ProductInstance random_class_bijective_product(Prng& rng) {
    ProductInstance ins;
    int L = int(rng.uniform(4, 24));
    ins.rel = build_relation(uniform_cycle_space(L), {cycle_rotation(L)});
    std::vector<int> divisors;
    for (int m = 2; m <= L && m <= 6; ++m)
        if (L % m == 0) divisors.push_back(m);
    if (divisors.empty() || rng.uniform(0, 2) == 0) {
        int m = int(rng.uniform(2, 5));
        GroupAction<Rat> act;
        act.space = uniform_cycle_space(m);
        act.perms = {PartialBijection::identity(m, "T")};
        ins.pmp = std::move(act);
    } else {
        int m = divisors[std::size_t(rng.uniform(0, long(divisors.size()) - 1))];
        GroupAction<Rat> act;
        act.space = uniform_cycle_space(m);
        act.perms = {cycle_rotation(m, 1, "T")};
        ins.pmp = std::move(act);
    }
    return ins;
}

}  // namespace ergrel
