#pragma once

#include <string>
#include <tuple>
#include <vector>

#include "subset_family.hpp"

namespace ergrel {

/// A[f | F_r](x) := (1/|F_r(x)|) sum_{x' in F_r(x)} f(x').
template <class R>
MeasurableFunction<R> average(const MeasurableFunction<R>& f, const SubsetFamily<R>& F, int r) {
    require(f.size() == F.rel->size(), "average: size mismatch");
    MeasurableFunction<R> out = MeasurableFunction<R>::constant(f.size(), R(0));
    const auto& Fr = F.level(r);
    for (int x = 0; x < f.size(); ++x) {
        R acc(0);
        for (int y : Fr.at(x)) acc += f[y];
        out[x] = acc / R(long(Fr.at(x).size()));
    }
    return out;
}

/// M_N[f | F](x) := max_{0 < r <= N} A[|f| | F_r](x).
template <class R>
MeasurableFunction<R> maximal(const MeasurableFunction<R>& f, const SubsetFamily<R>& F, int N) {
    require(N >= 1 && N <= F.index_max(), "maximal: cap out of range");
    auto g = abs(f);
    MeasurableFunction<R> out = average(g, F, 1);
    for (int r = 2; r <= N; ++r) {
        auto a = average(g, F, r);
        for (int x = 0; x < out.size(); ++x)
            if (a[x] > out[x]) out[x] = a[x];
    }
    return out;
}

enum class Weak11Mode { regular, tempered };

/// One threshold row of the weak-(1,1) verification.
template <class R>
struct MaximalRow {
    R lambda;
    R exceed_mass;  // mu{M > lambda}  (mu{M >= lambda} for exact rows)
    R bound;        // C ||f||_1 / lambda
    bool ok;
};

template <class R>
struct MaximalReport {
    R constant_used;
    R f_l1;
    std::vector<MaximalRow<R>> grid;       // log-spaced thresholds
    std::vector<MaximalRow<R>> exact_rows; // one per distinct value of M, checking mu{M >= v}
    bool ok = true;
};

/// mu{ M[f|F] > lambda } <= C ||f||_1 / lambda with C = C_reg in regular mode
/// and C = 8 C_u^4 (1 + C_t C_u) in tempered mode. The grid gives the report
/// shape; the exact rows check mu{M >= v} at every distinct value v of M,
/// which bounds every threshold, so the verification is complete rather than
/// sampled.
template <class R>
MaximalReport<R> weak11_verify(const MeasurableFunction<R>& f, const SubsetFamily<R>& F,
                               const FamilyConstants<R>& constants, Weak11Mode mode,
                               int grid_size = 32, bool exact = true) {
    const auto& rel = *F.rel;
    MaximalReport<R> rep;
    if (mode == Weak11Mode::regular) {
        rep.constant_used = constants.C_reg;
    } else {
        require(constants.uniform_ok, "weak11_verify: tempered mode needs a uniform family");
        rep.constant_used =
            R(8) * pow_int(constants.C_u, 4) * (R(1) + constants.C_t * constants.C_u);
    }
    auto M = maximal(f, F, F.index_max());
    rep.f_l1 = l1_norm(rel.space, f);

    std::vector<R> values;
    for (int x = 0; x < M.size(); ++x)
        if (M[x] > R(0)) values.push_back(M[x]);
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    if (values.empty()) return rep;  // f == 0: nothing to check

    auto mass_above = [&](const R& lam, bool strict) {
        R m(0);
        for (int x = 0; x < M.size(); ++x)
            if (strict ? (M[x] > lam) : (M[x] >= lam)) m += rel.space.weight[std::size_t(x)];
        return m;
    };

    double lo = scalar_traits<R>::to_double(values.front()) / 2.0;
    double hi = scalar_traits<R>::to_double(values.back()) * 2.0;
    for (int i = 0; i < grid_size; ++i) {
        double t = grid_size == 1 ? 0.0 : double(i) / double(grid_size - 1);
        double lam_d = lo * std::pow(hi / lo, t);
        R lam(0);
        if constexpr (scalar_traits<R>::exact) {
            lam = R(BigInt(std::llround(lam_d * 1e9)), BigInt(1000000000));
        } else {
            lam = R(lam_d);
        }
        if (lam <= R(0)) continue;
        MaximalRow<R> row;
        row.lambda = lam;
        row.exceed_mass = mass_above(lam, true);
        row.bound = rep.constant_used * rep.f_l1 / lam;
        row.ok = scalar_traits<R>::leq(row.exceed_mass, row.bound);
        rep.ok = rep.ok && row.ok;
        rep.grid.push_back(row);
    }
    if (exact) {
        for (const R& v : values) {
            MaximalRow<R> row;
            row.lambda = v;
            row.exceed_mass = mass_above(v, false);
            row.bound = rep.constant_used * rep.f_l1 / v;
            row.ok = scalar_traits<R>::leq(row.exceed_mass, row.bound);
            rep.ok = rep.ok && row.ok;
            rep.exact_rows.push_back(row);
        }
    }
    return rep;
}

/// C_u^{-1} int f <= int A[f|F_r] <= C_u int f for every r, f >= 0.
template <class R>
bool sandwich_check(const MeasurableFunction<R>& f, const SubsetFamily<R>& F, const R& C_u) {
    for (const R& v : f.values) require(v >= R(0), "sandwich_check: f must be nonnegative");
    const auto& sp = F.rel->space;
    R base = integral(sp, f);
    for (int r = 1; r <= F.index_max(); ++r) {
        R avg = integral(sp, average(f, F, r));
        if (!scalar_traits<R>::leq(base, C_u * avg)) return false;
        if (!scalar_traits<R>::leq(avg, C_u * base)) return false;
    }
    return true;
}

template <class R>
struct LpReport {
    R m_pow_p;  // int |M|^p
    R f_pow_p;  // int |f|^p
    double m_norm, f_norm, ratio;
};

/// Strong L^p data: reports ||M[f|F]||_p / ||f||_p. Interpolation gives a
/// finite bound; the harness records the observed ratio per family, never
/// asserts a value.
/// Exact mode keeps p-th powers; p is an integer >= 2 here.
template <class R>
LpReport<R> lp_maximal_check(const MeasurableFunction<R>& f, const SubsetFamily<R>& F, int p) {
    require(p >= 2, "lp_maximal_check: p <= 1 rejected (and exact mode needs integer p >= 2)");
    const auto& sp = F.rel->space;
    auto M = maximal(f, F, F.index_max());
    LpReport<R> rep;
    rep.m_pow_p = lp_pow(sp, M, p);
    rep.f_pow_p = lp_pow(sp, f, p);
    rep.m_norm = std::pow(scalar_traits<R>::to_double(rep.m_pow_p), 1.0 / p);
    rep.f_norm = std::pow(scalar_traits<R>::to_double(rep.f_pow_p), 1.0 / p);
    rep.ratio = rep.f_norm == 0.0 ? 0.0 : rep.m_norm / rep.f_norm;
    return rep;
}

/// ||f||_{L log L} := int |f| log+ |f| + ||f||_1 (recorded, not asserted: the
/// paper gives no constant for C_1).
template <class R>
double llogl_norm(const PointSpace<R>& sp, const MeasurableFunction<R>& f) {
    double acc = 0;
    for (int x = 0; x < sp.size(); ++x) {
        double a = std::fabs(scalar_traits<R>::to_double(f[x]));
        double w = scalar_traits<R>::to_double(sp.weight[std::size_t(x)]);
        acc += w * (a * std::max(0.0, std::log(a)) + a);
    }
    return acc;
}

template <class R>
struct GoodFunctionProfile {
    std::vector<R> max_average;   // per r: max_x |A[f - f o psi | F_r](x)|
    std::vector<R> max_bound;     // per r: max_x 2||f||_inf defect_r(x)
    std::vector<int> witness;     // per r: argmax atom of the average
    bool pointwise_ok = true;
};

/// |A[f - f o psi | F_r](x)| <= 2 ||f||_inf |F_r(x) delta psi F_r(x)| / |F_r(x)|,
/// asserted pointwise. psi must be a total permutation with graph in the relation.
template <class R>
GoodFunctionProfile<R> good_function_defect(const MeasurableFunction<R>& f,
                                            const PartialBijection& psi, const SubsetFamily<R>& F) {
    const auto& rel = *F.rel;
    require(psi.is_total(), "good_function_defect: psi must be total");
    for (int x = 0; x < rel.size(); ++x)
        require(rel.same_class(x, psi(x)), "good_function_defect: psi graph not in relation");
    R finf(0);
    for (const R& v : f.values) {
        R a = v < R(0) ? R(-v) : v;
        if (a > finf) finf = a;
    }
    MeasurableFunction<R> fp = f;
    for (int x = 0; x < f.size(); ++x) fp[x] = f[x] - f[psi(x)];

    GoodFunctionProfile<R> prof;
    for (int r = 1; r <= F.index_max(); ++r) {
        auto A = average(fp, F, r);
        auto defect = asymptotic_invariance_defect(F, {psi}, r);
        R mxa(0), mxb(0);
        int arg = 0;
        for (int x = 0; x < A.size(); ++x) {
            R a = A[x] < R(0) ? R(-A[x]) : A[x];
            R b = R(2) * finf * defect.per_atom[0][std::size_t(x)];
            if (!scalar_traits<R>::leq(a, b)) prof.pointwise_ok = false;
            if (a > mxa) {
                mxa = a;
                arg = x;
            }
            if (b > mxb) mxb = b;
        }
        prof.max_average.push_back(mxa);
        prof.max_bound.push_back(mxb);
        prof.witness.push_back(arg);
    }
    ensure(prof.pointwise_ok, "good_function_defect: pointwise bound violated");
    return prof;
}

/// Index bookkeeping for spaces of the shape B x X x I with
/// atom = (b * nX + x) * nI + t.
struct ProductLayout {
    int nB = 1, nX = 1, nI = 1;
    int atom(int b, int x, int t) const { return (b * nX + x) * nI + t; }
    int b_of(int a) const { return a / (nX * nI); }
    int x_of(int a) const { return (a / nI) % nX; }
    int t_of(int a) const { return a % nI; }
    int size() const { return nB * nX * nI; }
};

template <class R>
struct AveragedMaximals {
    MeasurableFunction<R> M;  // on B x X x I
    std::vector<R> Mbar;      // on B x X
    std::vector<R> Mpsi;      // on X
};

/// The three maximal operators on a product window: M is the plain maximal
/// function, Mbar averages each (b,x)-slice over I before taking sup, Mpsi
/// additionally integrates against a probability density psi on B. The
/// dominations Mpsi <= int Mbar psi dnu and Mbar <= slice-average of M are
/// structural and asserted before returning.
template <class R>
AveragedMaximals<R> averaged_maximals(const MeasurableFunction<R>& f, const SubsetFamily<R>& Ftilde,
                                      const ProductLayout& lay, const std::vector<R>& nu,
                                      const std::vector<R>& psi) {
    require(lay.size() == Ftilde.rel->size(), "averaged_maximals: layout mismatch");
    require(int(nu.size()) == lay.nB && int(psi.size()) == lay.nB,
            "averaged_maximals: nu/psi must live on B");
    R norm(0);
    for (int b = 0; b < lay.nB; ++b) {
        require(psi[std::size_t(b)] >= R(0), "averaged_maximals: psi must be nonnegative");
        norm += psi[std::size_t(b)] * nu[std::size_t(b)];
    }
    require(scalar_traits<R>::eq(norm, R(1)), "averaged_maximals: psi not normalized");

    AveragedMaximals<R> out;
    out.M = maximal(f, Ftilde, Ftilde.index_max());
    out.Mbar.assign(std::size_t(lay.nB * lay.nX), R(0));
    out.Mpsi.assign(std::size_t(lay.nX), R(0));

    auto g = abs(f);
    const R invI = R(1) / R(lay.nI);
    for (int r = 1; r <= Ftilde.index_max(); ++r) {
        auto A = average(g, Ftilde, r);
        for (int x = 0; x < lay.nX; ++x) {
            R slice_psi(0);
            for (int b = 0; b < lay.nB; ++b) {
                R slice(0);
                for (int t = 0; t < lay.nI; ++t) slice += A[lay.atom(b, x, t)];
                slice *= invI;
                auto& mb = out.Mbar[std::size_t(b * lay.nX + x)];
                if (slice > mb) mb = slice;
                slice_psi += slice * psi[std::size_t(b)] * nu[std::size_t(b)];
            }
            if (slice_psi > out.Mpsi[std::size_t(x)]) out.Mpsi[std::size_t(x)] = slice_psi;
        }
    }

    for (int x = 0; x < lay.nX; ++x) {
        R dom(0);
        for (int b = 0; b < lay.nB; ++b)
            dom += out.Mbar[std::size_t(b * lay.nX + x)] * psi[std::size_t(b)] * nu[std::size_t(b)];
        ensure(scalar_traits<R>::leq(out.Mpsi[std::size_t(x)], dom),
               "averaged_maximals: Mpsi exceeds integral of Mbar");
    }
    for (int b = 0; b < lay.nB; ++b)
        for (int x = 0; x < lay.nX; ++x) {
            R slice(0);
            for (int t = 0; t < lay.nI; ++t) slice += out.M[lay.atom(b, x, t)];
            slice *= invI;
            ensure(scalar_traits<R>::leq(out.Mbar[std::size_t(b * lay.nX + x)], slice),
                   "averaged_maximals: Mbar exceeds slice-average of M");
        }
    return out;
}

}  // namespace ergrel
