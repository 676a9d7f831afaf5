#pragma once

#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "extension.hpp"
#include "relation.hpp"
#include "subset_family.hpp"

namespace ergrel {

/// Measure-class-preserving action with integer-valued Radon-Nikodym cocycle:
/// for every generator g and atom b in its domain, nu(gb)/nu(b) must be an
/// integer power of lambda. Generators are usually total permutations;
/// truncated examples (free group boundary cut at a depth) carry partial
/// ones, and every identity below is checked on the domains. This machinery
/// is exact-rational only.
struct MeasureClassAction {
    PointSpace<Rat> B;
    std::vector<PartialBijection> generators;
    Rat lambda;  // in (0,1)

    void validate() const {
        require(lambda > 0 && lambda < 1, "MeasureClassAction: lambda must lie in (0,1)");
        for (const auto& g : generators) {
            require(g.size() == B.size(), "MeasureClassAction: generator on wrong atom set");
            for (int b = 0; b < B.size(); ++b)
                if (g.defined_at(b)) {
                    long k;
                    Rat ratio = B.weight[std::size_t(g(b))] / B.weight[std::size_t(b)];
                    if (!log_power_of(ratio, lambda, k))
                        throw std::invalid_argument(
                            "MeasureClassAction: weight ratio at (" + g.label + ", " +
                            B.ids[std::size_t(b)] + ") is not an integer power of lambda");
                }
        }
    }

    const PartialBijection& generator(const std::string& label) const {
        for (const auto& g : generators)
            if (g.label == label) return g;
        throw std::invalid_argument("MeasureClassAction: no generator labeled " + label);
    }
};

/// R_lambda(g, b) = log_lambda( nu(gb) / nu(b) ), the integer level shift that
/// makes (b, n) -> (gb, n + R(g,b)) preserve nu x theta_lambda with
/// theta_lambda({n}) = lambda^{-n}. Satisfies the cocycle identity
/// R(gh, b) = R(g, hb) + R(h, b) exactly.
struct CocycleTable {
    std::vector<std::vector<long>> values;  // [generator][atom], 0 where undefined

    long at(std::size_t gen, int atom) const { return values[gen][std::size_t(atom)]; }
};

inline CocycleTable cocycle_table(const MeasureClassAction& action) {
    action.validate();
    CocycleTable table;
    for (const auto& g : action.generators) {
        std::vector<long> row(std::size_t(action.B.size()), 0);
        for (int b = 0; b < action.B.size(); ++b)
            if (g.defined_at(b)) {
                Rat ratio = action.B.weight[std::size_t(g(b))] / action.B.weight[std::size_t(b)];
                long k;
                bool ok = log_power_of(ratio, action.lambda, k);
                ensure(ok, "cocycle_table: ratio not a lambda power after validation");
                // log_power_of solves ratio = lambda^{-k}; R = log_lambda(ratio) = -k
                row[std::size_t(b)] = -k;
            }
        table.values.push_back(std::move(row));
    }

    // cocycle identity on generator words up to length 3: the accumulated sum
    // along the word must match the direct log-ratio of the composed map
    const int n = action.B.size();
    using Word = std::pair<PartialBijection, std::vector<long>>;
    std::vector<Word> frontier;
    for (std::size_t i = 0; i < action.generators.size(); ++i)
        frontier.emplace_back(action.generators[i], table.values[i]);
    for (int len = 2; len <= 3; ++len) {
        std::vector<Word> next;
        for (const auto& w : frontier)
            for (std::size_t gi = 0; gi < action.generators.size(); ++gi) {
                const auto& g = action.generators[gi];
                PartialBijection comp = g.compose_after(w.first);
                std::vector<long> acc(std::size_t(n), 0);
                for (int b = 0; b < n; ++b)
                    if (comp.defined_at(b)) {
                        acc[std::size_t(b)] =
                            w.second[std::size_t(b)] + table.values[gi][std::size_t(w.first(b))];
                        Rat ratio = action.B.weight[std::size_t(comp(b))] /
                                    action.B.weight[std::size_t(b)];
                        long k;
                        ensure(log_power_of(ratio, action.lambda, k) && -k == acc[std::size_t(b)],
                               "cocycle_table: cocycle identity failed on a word of length " +
                                   std::to_string(len));
                    }
                next.emplace_back(std::move(comp), std::move(acc));
            }
        frontier = std::move(next);
    }
    return table;
}

/// The discrete Maharam extension restricted to the window I = {0..N-1}:
/// atoms (b, n) with weight nu(b) lambda^{-n}, generators the partial maps
/// (b, n) -> (gb, n + R(g,b)) clipped to the window. The unrestricted map
/// preserves nu x theta_lambda; that identity is asserted atom by atom.
struct MaharamWindow {
    MeasureClassAction action;
    int N = 1;
    CocycleTable cocycle;
    Relation<Rat> relation;  // on the window atoms

    int atom(int b, int n) const { return b * N + n; }
    int b_of(int a) const { return a / N; }
    int n_of(int a) const { return a % N; }

    /// theta_{lambda,I}({n}) = lambda^{-n} / (1 + ... + lambda^{-(N-1)}).
    Rat theta_normalized(int n) const {
        Rat z(0);
        for (int j = 0; j < N; ++j) z += pow_int(Rat(1) / action.lambda, j);
        return pow_int(Rat(1) / action.lambda, n) / z;
    }
};

inline MaharamWindow maharam_extend(const MeasureClassAction& action, int N) {
    require(N >= 1, "maharam_extend: N must be >= 1");
    MaharamWindow win;
    win.action = action;
    win.N = N;
    win.cocycle = cocycle_table(action);

    const int nB = action.B.size();

    // preservation of nu x theta_lambda on the unrestricted extension:
    // nu(gb) lambda^{-(n+R)} == nu(b) lambda^{-n}, i.e. nu(gb) == nu(b) lambda^R
    for (std::size_t gi = 0; gi < action.generators.size(); ++gi) {
        const auto& g = action.generators[gi];
        for (int b = 0; b < nB; ++b)
            if (g.defined_at(b)) {
                long Rv = win.cocycle.at(gi, b);
                Rat lhs = action.B.weight[std::size_t(g(b))];
                Rat rhs = action.B.weight[std::size_t(b)] * pow_int(action.lambda, Rv);
                if (lhs != rhs)
                    throw std::invalid_argument(
                        "maharam_extend: nu x theta_lambda preservation fails at (" + g.label +
                        ", " + action.B.ids[std::size_t(b)] + ")");
            }
    }

    std::vector<std::string> ids;
    std::vector<Rat> w;
    for (int b = 0; b < nB; ++b)
        for (int n = 0; n < N; ++n) {
            ids.push_back(action.B.ids[std::size_t(b)] + "@" + std::to_string(n));
            w.push_back(action.B.weight[std::size_t(b)] * pow_int(Rat(1) / action.lambda, n));
        }
    PointSpace<Rat> space(std::move(ids), std::move(w));

    std::vector<PartialBijection> gens;
    for (std::size_t gi = 0; gi < action.generators.size(); ++gi) {
        const auto& g = action.generators[gi];
        std::vector<int> img(std::size_t(nB * N), -1);
        for (int b = 0; b < nB; ++b)
            if (g.defined_at(b)) {
                long Rv = win.cocycle.at(gi, b);
                for (int n = 0; n < N; ++n) {
                    long target = n + Rv;
                    if (0 <= target && target < N)
                        img[std::size_t(win.atom(b, n))] = g(b) * N + int(target);
                }
            }
        gens.emplace_back(g.label, std::move(img));
    }
    win.relation = build_relation(std::move(space), std::move(gens));
    return win;
}

/// F_n(x) = { T^i x : |i| <= n } with powers truncated to T's domain. T must
/// generate the relation's classes.
template <class R>
SubsetFamily<R> folner_from_generator(const Relation<R>& rel, const PartialBijection& T,
                                      int index_max) {
    require(index_max >= 1, "folner_from_generator: index_max must be >= 1");
    require(T.size() == rel.size(), "folner_from_generator: generator on wrong atom set");
    {
        auto gen_rel = build_relation(rel.space, {T});
        for (int x = 0; x < rel.size(); ++x)
            require(gen_rel.class_id[std::size_t(x)] == rel.class_id[std::size_t(x)],
                    "folner_from_generator: T does not generate the relation (atom " +
                        std::to_string(x) + ")");
    }
    auto Tinv = T.inverse();
    std::vector<SubsetFunction<R>> levels;
    for (int n = 1; n <= index_max; ++n) {
        std::vector<std::vector<int>> sets(std::size_t(rel.size()));
        for (int x = 0; x < rel.size(); ++x) {
            std::vector<int> ball = {x};
            int fwd = x, bwd = x;
            for (int i = 1; i <= n; ++i) {
                if (fwd >= 0 && T.defined_at(fwd)) {
                    fwd = T(fwd);
                    ball.push_back(fwd);
                } else
                    fwd = -1;
                if (bwd >= 0 && Tinv.defined_at(bwd)) {
                    bwd = Tinv(bwd);
                    ball.push_back(bwd);
                } else
                    bwd = -1;
            }
            sets[std::size_t(x)] = std::move(ball);
        }
        levels.emplace_back(rel, std::move(sets));
    }
    return SubsetFamily<R>(rel, std::move(levels));
}

struct RatioSetDiagnostic {
    std::set<long> observed_powers;  // cocycle values over words w at atoms with wb != b
    long d = 0;                      // gcd of nonzero observed powers (0 when none)
    std::string type_label;          // "II" or "III_<lambda^d>"
};

/// Finite diagnostic of the discrete-cocycle type: enumerate words up to the
/// given length, record the cocycle values at moved atoms, classify by the
/// gcd d of the nonzero values. This is an instance-level report; the true
/// ratio set quantifies over all positive-measure sets and cannot be decided
/// from a finite sample.
inline RatioSetDiagnostic ratio_set_diagnostic(const MeasureClassAction& action,
                                               int word_length = 3) {
    auto table = cocycle_table(action);
    RatioSetDiagnostic diag;
    const int n = action.B.size();

    struct Word {
        PartialBijection map;
        std::vector<long> cocycle;
    };
    std::vector<Word> alphabet;
    for (std::size_t gi = 0; gi < action.generators.size(); ++gi) {
        alphabet.push_back({action.generators[gi], table.values[gi]});
        // inverse letter: R(g^{-1}, b) = -R(g, g^{-1} b)
        auto inv = action.generators[gi].inverse();
        std::vector<long> acc(std::size_t(n), 0);
        for (int b = 0; b < n; ++b)
            if (inv.defined_at(b)) acc[std::size_t(b)] = -table.values[gi][std::size_t(inv(b))];
        alphabet.push_back({std::move(inv), std::move(acc)});
    }
    std::vector<Word> frontier = alphabet;
    for (int len = 1; len <= word_length; ++len) {
        for (const auto& w : frontier)
            for (int b = 0; b < n; ++b)
                if (w.map.defined_at(b) && w.map(b) != b)
                    diag.observed_powers.insert(w.cocycle[std::size_t(b)]);
        if (len == word_length) break;
        std::vector<Word> next;
        for (const auto& w : frontier)
            for (const auto& a : alphabet) {
                PartialBijection comp = a.map.compose_after(w.map);
                std::vector<long> acc(std::size_t(n), 0);
                for (int b = 0; b < n; ++b)
                    if (comp.defined_at(b))
                        acc[std::size_t(b)] =
                            w.cocycle[std::size_t(b)] + a.cocycle[std::size_t(w.map(b))];
                next.push_back({std::move(comp), std::move(acc)});
            }
        frontier = std::move(next);
    }

    long d = 0;
    for (long v : diag.observed_powers)
        if (v != 0) d = std::gcd(d, std::labs(v));
    diag.d = d;
    diag.type_label = d == 0 ? "II" : "III_" + rational_str(pow_int(action.lambda, d));
    return diag;
}

/// The window product B x X x I: the p.m.p. action X is glued level by level,
/// the level shift driven by the B-cocycle alone.
struct WindowProduct {
    MaharamWindow window;  // carries the cocycle, N, lambda
    GroupAction<Rat> x_action;
    Relation<Rat> base;      // product relation on B x X
    Relation<Rat> relation;  // window relation on B x X x I
    int nB = 0, nX = 0, N = 1;

    int atom(int b, int x, int t) const { return (b * nX + x) * N + t; }
    int b_of(int a) const { return a / (nX * N); }
    int x_of(int a) const { return (a / N) % nX; }
    int t_of(int a) const { return a % N; }
};

inline WindowProduct window_product(const MeasureClassAction& action,
                                    const GroupAction<Rat>& x_action, int N) {
    x_action.validate();
    require(x_action.perms.size() == action.generators.size(),
            "window_product: generator label sets differ");
    for (std::size_t i = 0; i < action.generators.size(); ++i)
        require(x_action.perms[i].label == action.generators[i].label,
                "window_product: generator label sets differ");

    WindowProduct wp;
    wp.window = maharam_extend(action, N);
    wp.x_action = x_action;
    wp.nB = action.B.size();
    wp.nX = x_action.space.size();
    wp.N = N;

    // base relation on B x X
    {
        std::vector<std::string> ids;
        std::vector<Rat> w;
        for (int b = 0; b < wp.nB; ++b)
            for (int x = 0; x < wp.nX; ++x) {
                ids.push_back(action.B.ids[std::size_t(b)] + "|" +
                              x_action.space.ids[std::size_t(x)]);
                w.push_back(action.B.weight[std::size_t(b)] *
                            x_action.space.weight[std::size_t(x)]);
            }
        std::vector<PartialBijection> gens;
        for (std::size_t gi = 0; gi < action.generators.size(); ++gi) {
            const auto& gb = action.generators[gi];
            const auto& gx = x_action.perms[gi];
            std::vector<int> img(std::size_t(wp.nB * wp.nX), -1);
            for (int b = 0; b < wp.nB; ++b)
                if (gb.defined_at(b))
                    for (int x = 0; x < wp.nX; ++x)
                        img[std::size_t(b * wp.nX + x)] = gb(b) * wp.nX + gx(x);
            gens.emplace_back(gb.label, std::move(img));
        }
        wp.base = build_relation(PointSpace<Rat>(std::move(ids), std::move(w)), std::move(gens));
    }

    // window relation on B x X x I
    {
        std::vector<std::string> ids;
        std::vector<Rat> w;
        for (int b = 0; b < wp.nB; ++b)
            for (int x = 0; x < wp.nX; ++x)
                for (int t = 0; t < N; ++t) {
                    ids.push_back(action.B.ids[std::size_t(b)] + "|" +
                                  x_action.space.ids[std::size_t(x)] + "@" + std::to_string(t));
                    w.push_back(action.B.weight[std::size_t(b)] *
                                x_action.space.weight[std::size_t(x)] *
                                pow_int(Rat(1) / action.lambda, t));
                }
        std::vector<PartialBijection> gens;
        for (std::size_t gi = 0; gi < action.generators.size(); ++gi) {
            const auto& gb = action.generators[gi];
            const auto& gx = x_action.perms[gi];
            std::vector<int> img(std::size_t(wp.nB * wp.nX * N), -1);
            for (int b = 0; b < wp.nB; ++b)
                if (gb.defined_at(b)) {
                    long Rv = wp.window.cocycle.at(gi, b);
                    for (int x = 0; x < wp.nX; ++x)
                        for (int t = 0; t < N; ++t) {
                            long target = t + Rv;
                            if (0 <= target && target < N)
                                img[std::size_t(wp.atom(b, x, t))] =
                                    wp.atom(gb(b), gx(x), int(target));
                        }
                }
            gens.emplace_back(gb.label, std::move(img));
        }
        wp.relation = build_relation(PointSpace<Rat>(std::move(ids), std::move(w)), std::move(gens));
    }
    return wp;
}

/// The cocycle partition: k | N, H on the base B x X, K on the window, with
/// property (3): for x in H_i, gx in H_j iff alpha(g, x) = j - i mod k.
struct ErgodicPartition {
    int k = 1;
    std::vector<int> H;          // base atom -> block index 0..k-1
    std::vector<int> K;          // window atom -> block index
    std::vector<Rat> H_measure;  // nu x mu mass per block
    bool measures_uniform = true;  // H_measure == 1/k each (equal-block-measure check)
    bool hypothesis_flag = false;  // set when the 1/k statement fails on an instance whose
                                   // cocycle diagnostic looked type III; reported, not thrown
};

/// Computes the sub-relation R' = { cocycle = 0 mod N } through the Z/N
/// covering extension of the base product relation, labels its classes as the
/// H blocks, and asserts k | N, property (3) exactly, and the K-saturation of
/// the window relation. Instances whose base product is not ergodic, or whose
/// attained cocycle residues do not embed in Z/k, are outside the lemma's
/// hypotheses and rejected.
inline ErgodicPartition ergodic_partition(const WindowProduct& wp,
                                          const RatioSetDiagnostic* diag = nullptr) {
    const int N = wp.N;
    const int nBase = wp.base.size();
    require(wp.base.class_count() == 1,
            "ergodic_partition: base product relation is not ergodic (instance outside the "
            "lemma's hypotheses)");

    // Z/N covering: atoms (base atom, residue), edges shift by the cocycle mod N
    detail::UnionFind uf(nBase * N);
    for (std::size_t gi = 0; gi < wp.base.generators.size(); ++gi) {
        const auto& g = wp.base.generators[gi];
        for (int p = 0; p < nBase; ++p)
            if (g.defined_at(p)) {
                int b = p / wp.nX;
                long Rv = wp.window.cocycle.at(gi, b);
                for (int m = 0; m < N; ++m) {
                    long target = ((m + Rv) % N + N) % N;
                    uf.unite(p * N + m, g(p) * N + int(target));
                }
            }
    }

    // c(p) = cocycle residue of any word joining base atom 0 to p, read off as
    // the fiber residue m with (p, 0) in the component of (0, N - m)
    std::map<int, long> comp_residue;
    for (int m = N - 1; m >= 0; --m) comp_residue[uf.find(0 * N + (N - m) % N)] = m;
    std::vector<long> c(std::size_t(nBase), -1);
    std::set<long> attained;
    for (int p = 0; p < nBase; ++p) {
        auto it = comp_residue.find(uf.find(p * N + 0));
        require(it != comp_residue.end(),
                "ergodic_partition: base atom " + std::to_string(p) +
                    " unreachable in the covering (instance outside the lemma's hypotheses)");
        c[std::size_t(p)] = it->second;
        attained.insert(it->second);
    }
    const int k = int(attained.size());
    require(N % k == 0, "ergodic_partition: k = " + std::to_string(k) + " does not divide N = " +
                            std::to_string(N) + " (instance outside the lemma's hypotheses)");
    {
        std::set<long> mod_k;
        for (long r : attained) mod_k.insert(((r % k) + k) % k);
        require(int(mod_k.size()) == k,
                "ergodic_partition: attained cocycle residues do not embed in Z/k (instance "
                "outside the lemma's hypotheses)");
    }

    ErgodicPartition part;
    part.k = k;
    part.H.resize(std::size_t(nBase));
    for (int p = 0; p < nBase; ++p) part.H[std::size_t(p)] = int(((c[std::size_t(p)] % k) + k) % k);

    // property (3), exact, at every generator and base atom in its domain
    for (std::size_t gi = 0; gi < wp.base.generators.size(); ++gi) {
        const auto& g = wp.base.generators[gi];
        for (int p = 0; p < nBase; ++p)
            if (g.defined_at(p)) {
                int b = p / wp.nX;
                long alpha = wp.window.cocycle.at(gi, b);
                long lhs = ((part.H[std::size_t(g(p))] - part.H[std::size_t(p)]) % k + k) % k;
                require(((alpha % k) + k) % k == lhs,
                        "ergodic_partition: property (3) violated at generator " + g.label +
                            ", base atom " + std::to_string(p));
            }
    }

    // K blocks on the window: K_i = union_j H_{i+j} x {j}, saturated
    part.K.assign(std::size_t(wp.relation.size()), -1);
    for (int p = 0; p < nBase; ++p)
        for (int t = 0; t < N; ++t)
            part.K[std::size_t(p * N + t)] = int(((part.H[std::size_t(p)] - t) % k + k) % k);
    for (const auto& cls : wp.relation.class_atoms) {
        int blk = part.K[std::size_t(cls.front())];
        for (int a : cls)
            ensure(part.K[std::size_t(a)] == blk, "ergodic_partition: K blocks not saturated");
    }

    // equal-block-measure check: nu x mu (H_i) = 1/k
    part.H_measure.assign(std::size_t(k), Rat(0));
    for (int p = 0; p < nBase; ++p)
        part.H_measure[std::size_t(part.H[std::size_t(p)])] += wp.base.space.weight[std::size_t(p)];
    Rat expected = wp.base.space.total_mass() / Rat(k);
    for (const Rat& m : part.H_measure)
        if (m != expected) part.measures_uniform = false;
    if (diag != nullptr && diag->d >= 1 && !part.measures_uniform) part.hypothesis_flag = true;
    return part;
}

struct ExpectationCheck {
    bool ok = true;
    int witness_base_atom = -1;  // first (b,x) where the identity fails
    Rat lhs{0}, rhs{0};
};

/// (1/N) sum_i E[f | I(R~_I)](b,x,i) = int f d(nu x mu x theta_{lambda,I}),
/// checked at every (b,x), exactly. Returns a witness on failure instead of
/// throwing: finite windows of actions with nontrivial cocycle violate it
/// (the hypothesis behind it is infinite-measure-theoretic).
inline ExpectationCheck expectation_average_check(const MeasurableFunction<Rat>& f,
                                                  const WindowProduct& wp) {
    require(f.size() == wp.relation.size(), "expectation_average_check: size mismatch");
    auto E = conditional_expectation(f, wp.relation);
    Rat global = integral(wp.relation.space, f) / wp.relation.space.total_mass();

    ExpectationCheck chk;
    for (int p = 0; p < wp.base.size(); ++p) {
        Rat acc(0);
        for (int t = 0; t < wp.N; ++t) acc += E[p * wp.N + t];
        acc /= Rat(wp.N);
        if (acc != global) {
            chk.ok = false;
            chk.witness_base_atom = p;
            chk.lhs = acc;
            chk.rhs = global;
            return chk;
        }
    }
    return chk;
}

}  // namespace ergrel
