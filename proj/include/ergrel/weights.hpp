#pragma once

#include <map>
#include <string>
#include <vector>

#include "averaging.hpp"
#include "prng.hpp"
#include "words.hpp"

namespace ergrel {

/// Probability density on B: psi >= 0 with int psi dnu = 1, exactly.
struct Density {
    std::vector<Rat> psi;

    static Density uniform(int n) { return Density{std::vector<Rat>(std::size_t(n), Rat(1))}; }

    void validate(const PointSpace<Rat>& B) const {
        require(int(psi.size()) == B.size(), "Density: size mismatch");
        Rat total(0);
        for (int b = 0; b < B.size(); ++b) {
            require(psi[std::size_t(b)] >= 0, "Density: negative value");
            total += psi[std::size_t(b)] * B.weight[std::size_t(b)];
        }
        require(total == Rat(1), "Density: int psi dnu = " + rational_str(total) + ", expected 1");
    }
};

/// zeta_r(b, gamma) and zeta_r^psi(gamma): sparse probability distributions
/// over enumerated reduced words, synthesized from a subset family on the
/// Maharam window. Weight mass for a target point goes to the first
/// (shortest) word reaching it; when several enumerated words reach the same
/// target the instance is not essentially free at that atom and a warning is
/// recorded (merged-weight mode).
struct WeightFamily {
    WordSet words;
    int N = 1;
    std::vector<std::vector<std::map<int, Rat>>> zeta;  // [r-1][b] -> word index -> weight
    std::vector<std::map<int, Rat>> zeta_psi;           // [r-1]    -> word index -> weight
    bool essentially_free = true;
    std::vector<std::string> warnings;
};

inline WeightFamily synthesize_weights(const MaharamWindow& window, const SubsetFamily<Rat>& F,
                                       const Density& psi, int word_length) {
    require(F.rel == &window.relation, "synthesize_weights: family not on the window relation");
    psi.validate(window.action.B);
    const int nB = window.action.B.size();
    const int N = window.N;

    WeightFamily wf;
    wf.N = N;
    wf.words = enumerate_words(window.relation.generators, window.relation.size(), word_length);

    // freeness certificate: no two enumerated words agree at a window atom
    // (in particular no nonidentity word fixes an atom it acts on)
    for (int a = 0; a < window.relation.size(); ++a) {
        std::map<int, int> target_count;
        for (int wi = 0; wi < wf.words.word_count(); ++wi) {
            int img = wf.words.window_map[std::size_t(wi)][std::size_t(a)];
            if (img >= 0 && ++target_count[img] > 1 && wf.essentially_free) {
                wf.essentially_free = false;
                wf.warnings.push_back(
                    "freeness: two enumerated words act identically on window atom " +
                    window.relation.space.ids[std::size_t(a)] + "; weights merged");
            }
        }
    }

    const Rat invN = Rat(1) / Rat(N);
    for (int r = 1; r <= F.index_max(); ++r) {
        std::vector<std::map<int, Rat>> row(static_cast<std::size_t>(nB));
        for (int b = 0; b < nB; ++b) {
            for (int t = 0; t < N; ++t) {
                int p = window.atom(b, t);
                const auto& target = F.at(r, p);
                Rat share = invN / Rat(long(target.size()));
                for (int q : target) {
                    int canonical = -1;
                    for (int wi = 0; wi < wf.words.word_count(); ++wi)
                        if (wf.words.window_map[std::size_t(wi)][std::size_t(p)] == q) {
                            canonical = wi;
                            break;
                        }
                    if (canonical < 0)
                        throw std::invalid_argument(
                            "synthesize_weights: no enumerated word moves " +
                            window.relation.space.ids[std::size_t(p)] + " to " +
                            window.relation.space.ids[std::size_t(q)] +
                            " (word length too small)");
                    row[std::size_t(b)][canonical] += share;
                }
            }
            Rat total(0);
            for (const auto& [wi, wt] : row[std::size_t(b)]) total += wt;
            ensure(total == Rat(1), "synthesize_weights: zeta_r(b,.) sums to " +
                                        rational_str(total) + ", expected 1");
        }
        // zeta^psi_r = int zeta_r(b, .) psi(b) dnu(b)
        std::map<int, Rat> mixed;
        for (int b = 0; b < nB; ++b) {
            Rat factor = psi.psi[std::size_t(b)] * window.action.B.weight[std::size_t(b)];
            if (factor == 0) continue;
            for (const auto& [wi, wt] : row[std::size_t(b)]) mixed[wi] += factor * wt;
        }
        Rat total(0);
        for (const auto& [wi, wt] : mixed) total += wt;
        ensure(total == Rat(1), "synthesize_weights: zeta^psi_r sums to " + rational_str(total));
        wf.zeta.push_back(std::move(row));
        wf.zeta_psi.push_back(std::move(mixed));
    }
    return wf;
}

/// sum_gamma zeta_r(b, gamma) f(gamma x) for f a function on X.
inline Rat zeta_average(const WeightFamily& wf, int r, int b, const GroupAction<Rat>& x_action,
                        const MeasurableFunction<Rat>& f, int x) {
    std::vector<PartialBijection> inv;
    for (const auto& g : x_action.perms) inv.push_back(g.inverse());
    Rat acc(0);
    for (const auto& [wi, wt] : wf.zeta[std::size_t(r - 1)][std::size_t(b)])
        acc += wt * f[apply_word_x(wf.words.words[std::size_t(wi)], x, x_action, inv)];
    return acc;
}

inline Rat zeta_psi_average(const WeightFamily& wf, int r, const GroupAction<Rat>& x_action,
                            const MeasurableFunction<Rat>& f, int x) {
    std::vector<PartialBijection> inv;
    for (const auto& g : x_action.perms) inv.push_back(g.inverse());
    Rat acc(0);
    for (const auto& [wi, wt] : wf.zeta_psi[std::size_t(r - 1)])
        acc += wt * f[apply_word_x(wf.words.words[std::size_t(wi)], x, x_action, inv)];
    return acc;
}

struct ConvergenceRow {
    int r;
    double max_dev;
    double mean_dev;
};

struct ConvergenceReport {
    std::vector<ConvergenceRow> rows;       // zeta^psi path
    std::vector<ConvergenceRow> random_rows;  // zeta(b, .) path, worst case over sampled b
    double ergodic_mean = 0;
    bool x_ergodic = true;
    std::vector<std::string> flags;
};

/// Deviation profile of the synthesized averages from the ergodic mean of f
/// on X. When the X-action is not ergodic the deviations are taken against
/// E[f | I] per component instead and the report is flagged. Deterministic
/// given the seed (used only to subsample b when requested).
inline ConvergenceReport run_convergence(const WeightFamily& wf, const GroupAction<Rat>& x_action,
                                         const MeasurableFunction<Rat>& f,
                                         const std::vector<int>& r_grid, Prng& rng,
                                         int b_sample = 0) {
    x_action.validate();
    const int nX = x_action.space.size();
    require(f.size() == nX, "run_convergence: f must live on X");
    auto x_rel = build_relation(x_action.space, x_action.perms);
    ConvergenceReport rep;
    rep.x_ergodic = x_rel.class_count() == 1;
    MeasurableFunction<Rat> target{std::vector<Rat>(static_cast<std::size_t>(nX))};
    if (rep.x_ergodic) {
        Rat mean = integral(x_action.space, f) / x_action.space.total_mass();
        for (int x = 0; x < nX; ++x) target[x] = mean;
        rep.ergodic_mean = scalar_traits<Rat>::to_double(mean);
    } else {
        rep.flags.push_back("x-action not ergodic: deviations taken against E[f|I] per component");
        target = conditional_expectation(f, x_rel);
        rep.ergodic_mean = scalar_traits<Rat>::to_double(integral(x_action.space, f) /
                                                         x_action.space.total_mass());
    }

    const int nB = int(wf.zeta.empty() ? 0 : wf.zeta.front().size());
    std::vector<int> b_subset;
    if (b_sample <= 0 || b_sample >= nB)
        for (int b = 0; b < nB; ++b) b_subset.push_back(b);
    else
        for (int k = 0; k < b_sample; ++k) b_subset.push_back(int(rng.uniform(0, nB - 1)));

    for (int r : r_grid) {
        require(r >= 1 && r <= int(wf.zeta.size()), "run_convergence: r outside the family");
        Rat mx(0), sum(0);
        long count = 0;
        for (int x = 0; x < nX; ++x) {
            Rat a = zeta_psi_average(wf, r, x_action, f, x);
            Rat d = a - target[x];
            if (d < 0) d = -d;
            if (d > mx) mx = d;
            sum += d;
            ++count;
        }
        rep.rows.push_back({r, scalar_traits<Rat>::to_double(mx),
                            scalar_traits<Rat>::to_double(sum / Rat(count))});
        Rat rmx(0), rsum(0);
        long rcount = 0;
        for (int b : b_subset)
            for (int x = 0; x < nX; ++x) {
                Rat a = zeta_average(wf, r, b, x_action, f, x);
                Rat d = a - target[x];
                if (d < 0) d = -d;
                if (d > rmx) rmx = d;
                rsum += d;
                ++rcount;
            }
        rep.random_rows.push_back({r, scalar_traits<Rat>::to_double(rmx),
                                   rcount ? scalar_traits<Rat>::to_double(rsum / Rat(rcount)) : 0.0});
    }
    return rep;
}

}  // namespace ergrel
