#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "averaging.hpp"
#include "subset_family.hpp"

namespace ergrel {

namespace detail {
inline bool sorted_intersects(const std::vector<int>& a, const std::vector<int>& b) {
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) return true;
        if (a[i] < b[j])
            ++i;
        else
            ++j;
    }
    return false;
}
}  // namespace detail

template <class R>
struct VitaliInput {
    const SubsetFamily<R>* F = nullptr;
    std::vector<int> Y;    // atoms
    std::vector<int> rho;  // parallel to Y, values in 1..index_max
};

template <class R>
struct VitaliResult {
    std::vector<int> chosen;   // Z, in selection order
    std::vector<int> covered;  // sorted union of the selected sets
    R mu_Y{0};
    R mu_covered{0};
    R C_reg{1};
};

/// Vitali-type selection. Rounds of maximal elements: y1 is maximal among the
/// still-alive y2 whose sets meet its own when (rho, T) is lexicographically
/// largest, with the tie-break T = atom index (injective). Postconditions,
/// asserted exactly before returning: the selected sets are pairwise disjoint
/// and C_reg * mu(covered) >= mu(Y).
template <class R>
VitaliResult<R> vitali_select(const VitaliInput<R>& input, const R& C_reg) {
    const auto& F = *input.F;
    const auto& rel = *F.rel;
    require(input.Y.size() == input.rho.size(), "vitali_select: |Y| != |rho|");
    const std::size_t m = input.Y.size();
    for (std::size_t i = 0; i < m; ++i)
        require(input.rho[i] >= 1 && input.rho[i] <= F.index_max(),
                "vitali_select: rho out of range at Y[" + std::to_string(i) + "]");

    std::vector<std::vector<int>> set_of(m);
    for (std::size_t i = 0; i < m; ++i) set_of[i] = F.at(input.rho[i], input.Y[i]);

    std::vector<bool> alive(m, true);
    std::vector<std::size_t> chosen_idx;
    std::size_t alive_count = m;
    while (alive_count > 0) {
        // one round of maximal elements
        std::vector<std::size_t> round;
        for (std::size_t i = 0; i < m; ++i) {
            if (!alive[i]) continue;
            bool maximal = true;
            for (std::size_t j = 0; j < m && maximal; ++j) {
                if (j == i || !alive[j]) continue;
                if (!detail::sorted_intersects(set_of[i], set_of[j])) continue;
                if (input.rho[i] > input.rho[j]) continue;
                if (input.rho[i] == input.rho[j] && input.Y[i] > input.Y[j]) continue;
                maximal = false;
            }
            if (maximal) round.push_back(i);
        }
        ensure(!round.empty(), "vitali_select: maximality round produced no element");
        for (std::size_t i : round) chosen_idx.push_back(i);
        for (std::size_t i : round) alive[i] = false;
        for (std::size_t j = 0; j < m; ++j) {
            if (!alive[j]) continue;
            for (std::size_t i : round)
                if (detail::sorted_intersects(set_of[j], set_of[i])) {
                    alive[j] = false;
                    break;
                }
        }
        alive_count = 0;
        for (std::size_t j = 0; j < m; ++j) alive_count += alive[j] ? 1 : 0;
    }

    VitaliResult<R> res;
    res.C_reg = C_reg;
    std::vector<int> covered;
    for (std::size_t i : chosen_idx) {
        res.chosen.push_back(input.Y[i]);
        covered.insert(covered.end(), set_of[i].begin(), set_of[i].end());
    }
    std::size_t before = covered.size();
    std::sort(covered.begin(), covered.end());
    covered.erase(std::unique(covered.begin(), covered.end()), covered.end());
    ensure(covered.size() == before, "vitali_select: selected sets are not pairwise disjoint");
    res.covered = std::move(covered);
    for (int y : input.Y) res.mu_Y += rel.space.weight[std::size_t(y)];
    for (int y : res.covered) res.mu_covered += rel.space.weight[std::size_t(y)];
    ensure(scalar_traits<R>::leq(res.mu_Y, C_reg * res.mu_covered),
           "vitali_select: coverage certificate C_reg * mu(covered) >= mu(Y) failed");
    return res;
}

template <class R>
struct BasicLemmaResult {
    std::vector<std::size_t> I;  // selected indices into the input collection
    R union_mass{0};             // kappa of the union of the selected sets
    R bound_m{0};                // lambda m / (4 C_u^2)
    R bound_I{0};                // lambda |I| |V_1| / (4 C_u^2)
};

/// Greedy half-new-mass selection lemma. Hypotheses 1-3 are
/// checked up front and violations rejected with a witness; both certified
/// lower bounds and the half-new-mass rule are asserted exactly.
template <class R>
BasicLemmaResult<R> basic_lemma_select(const std::vector<std::vector<int>>& V,
                                       const std::vector<R>& kappa, const R& C_u, const R& lambda) {
    require(!V.empty(), "basic_lemma_select: empty collection");
    require(C_u >= R(1), "basic_lemma_select: C_u must be >= 1");
    require(lambda > R(0), "basic_lemma_select: lambda must be positive");
    const std::size_t m = V.size();
    for (const R& k : kappa) require(k >= R(0), "basic_lemma_select: kappa must be nonnegative");

    auto kappa_of = [&](const std::vector<int>& s) {
        R acc(0);
        for (int w : s) acc += kappa[std::size_t(w)];
        return acc;
    };

    // hypothesis 1: |V_i| / |V_j| <= C_u
    for (std::size_t i = 0; i < m; ++i) {
        require(!V[i].empty(), "basic_lemma_select: hypothesis 1 violated, V_" +
                                   std::to_string(i + 1) + " is empty");
        for (std::size_t j = 0; j < m; ++j)
            require(scalar_traits<R>::leq(
                        scalar_traits<R>::from_fraction(long(V[i].size()), long(V[j].size())), C_u),
                    "basic_lemma_select: hypothesis 1 violated at (i,j) = (" + std::to_string(i + 1) +
                        "," + std::to_string(j + 1) + ")");
    }
    // hypothesis 2: kappa(V_i) >= lambda |V_i|
    for (std::size_t i = 0; i < m; ++i)
        require(scalar_traits<R>::leq(lambda * R(long(V[i].size())), kappa_of(V[i])),
                "basic_lemma_select: hypothesis 2 violated at i = " + std::to_string(i + 1));
    // hypothesis 3: sum_i 1_{V_i}(w) <= C_u |V_1|
    {
        std::vector<long> count;
        for (std::size_t i = 0; i < m; ++i)
            for (int w : V[i]) {
                if (std::size_t(w) >= count.size()) count.resize(std::size_t(w) + 1, 0);
                ++count[std::size_t(w)];
            }
        for (std::size_t w = 0; w < count.size(); ++w)
            require(scalar_traits<R>::leq(R(count[w]), C_u * R(long(V.front().size()))),
                    "basic_lemma_select: hypothesis 3 violated at omega = " + std::to_string(w));
    }

    BasicLemmaResult<R> res;
    std::vector<bool> in_union;
    auto new_mass = [&](const std::vector<int>& s) {
        R acc(0);
        for (int w : s) {
            if (std::size_t(w) >= in_union.size() || !in_union[std::size_t(w)])
                acc += kappa[std::size_t(w)];
        }
        return acc;
    };
    auto add_to_union = [&](const std::vector<int>& s) {
        for (int w : s) {
            if (std::size_t(w) >= in_union.size()) in_union.resize(std::size_t(w) + 1, false);
            in_union[std::size_t(w)] = true;
        }
    };

    for (std::size_t i = 0; i < m; ++i) {
        R fresh = new_mass(V[i]);
        bool take = res.I.empty() || scalar_traits<R>::leq(kappa_of(V[i]), R(2) * fresh);
        if (take) {
            ensure(scalar_traits<R>::leq(kappa_of(V[i]), R(2) * fresh),
                   "basic_lemma_select: half-new-mass rule violated");
            res.union_mass += fresh;
            add_to_union(V[i]);
            res.I.push_back(i);
        }
    }

    R four_cu2 = R(4) * C_u * C_u;
    res.bound_m = lambda * R(long(m)) / four_cu2;
    res.bound_I = lambda * R(long(res.I.size())) * R(long(V.front().size())) / four_cu2;
    ensure(scalar_traits<R>::leq(res.bound_m, res.union_mass),
           "basic_lemma_select: certificate kappa(union) >= lambda m / (4 C_u^2) failed");
    ensure(scalar_traits<R>::leq(res.bound_I, res.union_mass),
           "basic_lemma_select: certificate kappa(union) >= lambda |I| |V_1| / (4 C_u^2) failed");
    return res;
}

/// Blocks, subset functions and measure for the top-down block selection:
/// size ratios within each index bounded by C_u, kappa-mass at least lambda
/// per element on the blocks, inverse sets bounded by C_u, and the tempered
/// overlap bound C_t across indices. verify() rejects violations with a
/// witness before the algorithm runs.
template <class R>
struct BlockSelectionInstance {
    int omega_size = 0;
    std::vector<std::vector<int>> I_blocks;          // I_1..I_N, pairwise disjoint
    std::vector<std::vector<std::vector<int>>> V;    // V[i][omega], i = 0..N-1
    std::vector<R> kappa;                            // nonnegative
    R C_u{1};
    R C_t{1};
    R lambda{1};

    int blocks() const { return int(I_blocks.size()); }

    void verify() const {
        require(int(V.size()) == blocks(), "BlockSelectionInstance: V/I block count mismatch");
        require(int(kappa.size()) == omega_size, "BlockSelectionInstance: kappa size mismatch");
        for (const R& k : kappa) require(k >= R(0), "BlockSelectionInstance: kappa must be nonnegative");
        std::vector<bool> seen(std::size_t(omega_size), false);
        for (const auto& blk : I_blocks)
            for (int w : blk) {
                require(w >= 0 && w < omega_size, "BlockSelectionInstance: block element out of range");
                require(!seen[std::size_t(w)], "BlockSelectionInstance: blocks are not pairwise disjoint");
                seen[std::size_t(w)] = true;
            }
        for (int i = 0; i < blocks(); ++i) {
            require(int(V[std::size_t(i)].size()) == omega_size,
                    "BlockSelectionInstance: V_" + std::to_string(i + 1) + " not defined on all of Omega");
            long lo = -1, hi = 0;
            for (int w = 0; w < omega_size; ++w) {
                long c = long(V[std::size_t(i)][std::size_t(w)].size());
                require(c >= 1, "BlockSelectionInstance: empty V_" + std::to_string(i + 1) + "(" +
                                    std::to_string(w) + ")");
                if (lo < 0 || c < lo) lo = c;
                if (c > hi) hi = c;
            }
            // hypothesis 1
            require(scalar_traits<R>::leq(scalar_traits<R>::from_fraction(hi, lo), C_u),
                    "BlockSelectionInstance: hypothesis 1 violated for i = " + std::to_string(i + 1));
            // hypothesis 3
            std::vector<long> inv_count(std::size_t(omega_size), 0);
            for (int w = 0; w < omega_size; ++w)
                for (int y : V[std::size_t(i)][std::size_t(w)]) ++inv_count[std::size_t(y)];
            for (int w = 0; w < omega_size; ++w)
                require(scalar_traits<R>::leq(
                            R(inv_count[std::size_t(w)]),
                            C_u * R(long(V[std::size_t(i)][std::size_t(w)].size()))),
                        "BlockSelectionInstance: hypothesis 3 violated at (i,omega) = (" +
                            std::to_string(i + 1) + "," + std::to_string(w) + ")");
        }
        // hypothesis 2
        for (int i = 0; i < blocks(); ++i)
            for (int w : I_blocks[std::size_t(i)]) {
                R mass(0);
                for (int y : V[std::size_t(i)][std::size_t(w)]) mass += kappa[std::size_t(y)];
                require(scalar_traits<R>::leq(
                            lambda * R(long(V[std::size_t(i)][std::size_t(w)].size())), mass),
                        "BlockSelectionInstance: hypothesis 2 violated at (i,omega) = (" +
                            std::to_string(i + 1) + "," + std::to_string(w) + ")");
            }
        // hypothesis 4: |union_{i<j} V_i^{-1} V_j (omega)| <= C_t |V_j(omega)|
        std::vector<std::vector<std::vector<int>>> Vinv(static_cast<std::size_t>(blocks()));
        for (int i = 0; i < blocks(); ++i) {
            Vinv[std::size_t(i)].assign(std::size_t(omega_size), {});
            for (int w = 0; w < omega_size; ++w)
                for (int y : V[std::size_t(i)][std::size_t(w)])
                    Vinv[std::size_t(i)][std::size_t(y)].push_back(w);
        }
        for (int j = 1; j < blocks(); ++j)
            for (int w = 0; w < omega_size; ++w) {
                std::vector<int> u;
                for (int i = 0; i < j; ++i)
                    for (int y : V[std::size_t(j)][std::size_t(w)])
                        u.insert(u.end(), Vinv[std::size_t(i)][std::size_t(y)].begin(),
                                 Vinv[std::size_t(i)][std::size_t(y)].end());
                std::sort(u.begin(), u.end());
                u.erase(std::unique(u.begin(), u.end()), u.end());
                require(scalar_traits<R>::leq(
                            R(long(u.size())),
                            C_t * R(long(V[std::size_t(j)][std::size_t(w)].size()))),
                        "BlockSelectionInstance: hypothesis 4 violated at (j,omega) = (" +
                            std::to_string(j + 1) + "," + std::to_string(w) + ")");
            }
    }
};

template <class R>
struct BlockSelectionResult {
    std::vector<int> L, K;               // partition of {1..N}, 1-based block ids
    std::vector<std::vector<int>> D;     // per block (0-based), D_i subset of I'_i, empty for K
    R H_mass{0};                         // kappa( union_{i in L} H_i )
    long total_block_size = 0;           // sum |I_i|
    R certificate_bound{0};              // ((8 C_u^2 + 8 C_t C_u^3) / lambda) * H_mass
};

/// Top-down block selection: walk blocks from the last to the first, keep a
/// block when at least half of it is still disjoint from the selection so
/// far, and pick its D_i by the half-new-mass rule. The final count
/// certificate and the pairwise disjointness of the H_i are asserted exactly.
template <class R>
BlockSelectionResult<R> block_select(const BlockSelectionInstance<R>& inst) {
    inst.verify();
    const int N = inst.blocks();
    BlockSelectionResult<R> res;
    res.D.assign(std::size_t(N), {});
    std::vector<bool> in_H(std::size_t(inst.omega_size), false);

    auto disjoint_from_H = [&](const std::vector<int>& s) {
        for (int y : s)
            if (in_H[std::size_t(y)]) return false;
        return true;
    };

    for (int i = N; i >= 1; --i) {
        const auto& blk = inst.I_blocks[std::size_t(i - 1)];
        res.total_block_size += long(blk.size());
        std::vector<int> prime;
        for (int w : blk)
            if (disjoint_from_H(inst.V[std::size_t(i - 1)][std::size_t(w)])) prime.push_back(w);
        if (2 * long(prime.size()) >= long(blk.size())) {
            res.L.push_back(i);
            if (!prime.empty()) {
                std::vector<std::vector<int>> collection;
                for (int w : prime) collection.push_back(inst.V[std::size_t(i - 1)][std::size_t(w)]);
                auto sel = basic_lemma_select(collection, inst.kappa, inst.C_u, inst.lambda);
                // H_i is the union of the selected sets; sets within one block
                // may overlap each other, but H_i must avoid every earlier H_k.
                std::vector<int> block_atoms;
                for (std::size_t idx : sel.I) {
                    int w = prime[idx];
                    res.D[std::size_t(i - 1)].push_back(w);
                    const auto& s = inst.V[std::size_t(i - 1)][std::size_t(w)];
                    block_atoms.insert(block_atoms.end(), s.begin(), s.end());
                }
                std::sort(block_atoms.begin(), block_atoms.end());
                block_atoms.erase(std::unique(block_atoms.begin(), block_atoms.end()),
                                  block_atoms.end());
                for (int y : block_atoms) {
                    ensure(!in_H[std::size_t(y)], "block_select: H blocks are not disjoint");
                    in_H[std::size_t(y)] = true;
                    res.H_mass += inst.kappa[std::size_t(y)];
                }
                // per-block bounds: |I_i| <= (8 C_u^2 / lambda) kappa(H_i)
                // and |D_i| |V_i(w_i)| <= (4 C_u^2 / lambda) kappa(H_i)
                R four_cu2 = R(4) * inst.C_u * inst.C_u;
                R Hi_mass = sel.union_mass;
                ensure(scalar_traits<R>::leq(inst.lambda * R(long(blk.size())),
                                             R(2) * four_cu2 * Hi_mass),
                       "block_select: per-block |I_i| bound failed");
                ensure(scalar_traits<R>::leq(
                           inst.lambda * R(long(sel.I.size())) * R(long(collection.front().size())),
                           four_cu2 * Hi_mass),
                       "block_select: per-block |D_i| bound failed");
            }
        } else {
            res.K.push_back(i);
        }
    }

    R C = (R(8) * inst.C_u * inst.C_u + R(8) * inst.C_t * pow_int(inst.C_u, 3)) / inst.lambda;
    res.certificate_bound = C * res.H_mass;
    ensure(scalar_traits<R>::leq(R(res.total_block_size), res.certificate_bound),
           "block_select: final count certificate failed");
    return res;
}

template <class R>
struct AssemblyCertificate {
    bool containment_ok = true;   // H \ H' in S in U_N^{-1}(U_N F_R \ F_R)
    bool inequality_ok = true;    // |H'(x)| <= (C / lambda) sum_{y in F_R(x)} f(y)
    R constant;                   // C = 8 C_u^2 + 8 C_t C_u^3
    long worst_H_prime = 0;
    R worst_bound{0};
};

/// The completion of the tempered maximal inequality, per instance: builds
/// H(N,R), H'(N,R), U_N, S(N,R), checks the containment chain set by set and
/// certifies |H'(N,R)(x)| <= (C/lambda) sum_{y in F_R(x)} f(y) through
/// block_select on each class.
template <class R>
AssemblyCertificate<R> tempered_maximal_assembly(const MeasurableFunction<R>& f,
                                                 const SubsetFamily<R>& F,
                                                 const FamilyConstants<R>& constants, int N,
                                                 int Rcap, const R& lambda) {
    const auto& rel = *F.rel;
    require(N >= 1 && N <= F.index_max(), "assembly: N out of range");
    require(Rcap >= 1 && Rcap <= F.index_max(), "assembly: R out of range");
    require(lambda > R(0), "assembly: lambda must be positive");
    require(constants.uniform_ok, "assembly: family must be uniform");
    for (const R& v : f.values) require(v >= R(0), "assembly: f must be nonnegative");

    // per-atom averages A[f|F_n] for n <= N and the level sets
    std::vector<MeasurableFunction<R>> avg;
    for (int n = 1; n <= N; ++n) avg.push_back(average(f, F, n));
    std::vector<bool> E_N(std::size_t(rel.size()), false);
    for (int y = 0; y < rel.size(); ++y)
        for (int n = 1; n <= N && !E_N[std::size_t(y)]; ++n)
            if (scalar_traits<R>::leq(lambda, avg[std::size_t(n - 1)][y])) E_N[std::size_t(y)] = true;

    const auto& FR = F.level(Rcap);
    std::vector<SubsetFunction<R>> U_parts;
    for (int t = 1; t <= N; ++t) U_parts.push_back(F.level(t));
    auto U_N = union_over(U_parts);

    // H, H' and k(y) (smallest qualifying index, per x)
    AssemblyCertificate<R> cert;
    cert.constant = R(8) * constants.C_u * constants.C_u +
                    R(8) * constants.C_t * pow_int(constants.C_u, 3);

    auto UNFR = product(U_N, FR);
    auto UNinv = inverse(U_N);

    for (int x = 0; x < rel.size(); ++x) {
        const auto& FRx = FR.at(x);
        auto subset_of_FRx = [&](const std::vector<int>& s) {
            return std::includes(FRx.begin(), FRx.end(), s.begin(), s.end());
        };
        std::vector<int> H, Hp, k_of;
        for (int y : rel.class_of(x)) {
            if (E_N[std::size_t(y)] && std::binary_search(FRx.begin(), FRx.end(), y)) H.push_back(y);
            for (int n = 1; n <= N; ++n)
                if (scalar_traits<R>::leq(lambda, avg[std::size_t(n - 1)][y]) &&
                    subset_of_FRx(F.at(n, y))) {
                    Hp.push_back(y);
                    k_of.push_back(n);
                    break;
                }
        }
        // S(N,R)(x) and the containment chain
        std::vector<int> S;
        for (int y : FRx)
            if (!subset_of_FRx(U_N.at(y))) S.push_back(y);
        std::vector<int> HminusHp;
        std::set_difference(H.begin(), H.end(), Hp.begin(), Hp.end(), std::back_inserter(HminusHp));
        if (!std::includes(S.begin(), S.end(), HminusHp.begin(), HminusHp.end()))
            cert.containment_ok = false;
        std::vector<int> outer;  // U_N^{-1}(U_N F_R \ F_R)(x)
        {
            std::vector<int> boundary;
            std::set_difference(UNFR.at(x).begin(), UNFR.at(x).end(), FRx.begin(), FRx.end(),
                                std::back_inserter(boundary));
            for (int z : boundary)
                outer.insert(outer.end(), UNinv.at(z).begin(), UNinv.at(z).end());
            std::sort(outer.begin(), outer.end());
            outer.erase(std::unique(outer.begin(), outer.end()), outer.end());
        }
        if (!std::includes(outer.begin(), outer.end(), S.begin(), S.end()))
            cert.containment_ok = false;

        // block-selection certificate for |H'(x)|
        R fr_mass(0);
        for (int y : FRx) fr_mass += f[y];
        if (!Hp.empty()) {
            const auto& cls = rel.class_of(x);
            std::vector<int> local(std::size_t(rel.size()), -1);
            for (std::size_t i = 0; i < cls.size(); ++i) local[std::size_t(cls[i])] = int(i);
            BlockSelectionInstance<R> inst;
            inst.omega_size = int(cls.size());
            inst.C_u = constants.C_u;
            inst.C_t = constants.C_t;
            inst.lambda = lambda;
            inst.kappa.resize(cls.size());
            for (std::size_t i = 0; i < cls.size(); ++i) inst.kappa[i] = f[cls[i]];
            inst.I_blocks.assign(std::size_t(N), {});
            for (std::size_t i = 0; i < Hp.size(); ++i)
                inst.I_blocks[std::size_t(k_of[i] - 1)].push_back(local[std::size_t(Hp[i])]);
            inst.V.resize(std::size_t(N));
            for (int n = 1; n <= N; ++n) {
                inst.V[std::size_t(n - 1)].resize(cls.size());
                for (std::size_t i = 0; i < cls.size(); ++i) {
                    std::vector<int> s;
                    for (int y : F.at(n, cls[i])) s.push_back(local[std::size_t(y)]);
                    std::sort(s.begin(), s.end());
                    inst.V[std::size_t(n - 1)][i] = std::move(s);
                }
            }
            auto sel = block_select(inst);
            R rhs = cert.constant * fr_mass / lambda;
            if (!scalar_traits<R>::leq(R(long(Hp.size())), rhs)) cert.inequality_ok = false;
            if (long(Hp.size()) > cert.worst_H_prime) {
                cert.worst_H_prime = long(Hp.size());
                cert.worst_bound = rhs;
            }
            // the selection's H union sits inside F_R(x), so kappa-mass chains up
            ensure(scalar_traits<R>::leq(sel.H_mass, fr_mass),
                   "assembly: block-selection union escapes F_R(x)");
        }
    }
    ensure(cert.containment_ok, "assembly: containment chain violated");
    ensure(cert.inequality_ok, "assembly: H' inequality violated");
    return cert;
}

}  // namespace ergrel
