// Acceptance suite: runs every exit criterion at its stated tolerance and
// prints one pass/fail line per criterion. Exit code = number of failures.
//
// All checks are exact rational arithmetic unless a line says otherwise.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "ergrel/ergrel.hpp"

using namespace ergrel;

namespace {

int failures = 0;

void report(int criterion, bool ok, const std::string& what, const std::string& detail = "") {
    std::printf("[%s] criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", criterion, what.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    if (!ok) ++failures;
}

MeasurableFunction<Rat> random_nonneg(Prng& rng, int n) {
    std::vector<Rat> v;
    for (int i = 0; i < n; ++i) v.push_back(Rat(rng.uniform(0, 9), rng.uniform(1, 6)));
    return MeasurableFunction<Rat>(std::move(v));
}

MeasurableFunction<Rat> random_signed(Prng& rng, int n) {
    std::vector<Rat> v;
    for (int i = 0; i < n; ++i) v.push_back(Rat(rng.uniform(-9, 9), rng.uniform(1, 6)));
    return MeasurableFunction<Rat>(std::move(v));
}

// --- criterion 1: covering certificates, >= 500 instances each, exact -------

void criterion1() {
    const int kInstances = 500;
    long vit_ok = 0, bas_ok = 0, ben_ok = 0;
    std::string first_error;

    Prng rng(20260801);
    for (int i = 0; i < kInstances; ++i) {
        try {
            auto fam = random_ball_family(rng);
            auto in = random_vitali_input(rng, fam.family);
            auto res = vitali_select(in, fam.constants.C_reg);
            if (fam.constants.C_reg * res.mu_covered >= res.mu_Y) ++vit_ok;
        } catch (const std::exception& e) {
            if (first_error.empty()) first_error = std::string("vitali: ") + e.what();
        }
    }
    Prng rng2(20260802);
    for (int i = 0; i < kInstances; ++i) {
        try {
            auto ins = random_basic_lemma_instance(rng2);
            auto res = basic_lemma_select(ins.V, ins.kappa, ins.C_u, ins.lambda);
            if (res.union_mass >= res.bound_m && res.union_mass >= res.bound_I) ++bas_ok;
        } catch (const std::exception& e) {
            if (first_error.empty()) first_error = std::string("basic: ") + e.what();
        }
    }
    Prng rng3(20260803);
    for (int i = 0; i < kInstances; ++i) {
        try {
            auto inst = random_block_selection_instance(rng3);
            auto res = block_select(inst);
            if (Rat(res.total_block_size) <= res.certificate_bound) ++ben_ok;
        } catch (const std::exception& e) {
            if (first_error.empty()) first_error = std::string("blocks: ") + e.what();
        }
    }
    bool ok = vit_ok == kInstances && bas_ok == kInstances && ben_ok == kInstances;
    report(1, ok, "covering certificates exact on 500 seeded instances per algorithm",
           "vitali " + std::to_string(vit_ok) + "/500, basic " + std::to_string(bas_ok) +
               "/500, blocks " + std::to_string(ben_ok) + "/500" +
               (first_error.empty() ? "" : ", first error: " + first_error));
}

// --- criterion 2: weak (1,1) maximal inequality, both modes ------------------

void criterion2() {
    Prng rng(20260810);
    long reports = 0, ok_count = 0;
    auto run = [&](const FamilyInstance& fam, int f_count) {
        for (int k = 0; k < f_count; ++k) {
            auto f = random_signed(rng, fam.rel.size());
            auto reg = weak11_verify(f, fam.family, fam.constants, Weak11Mode::regular);
            ++reports;
            ok_count += reg.ok ? 1 : 0;
            if (fam.constants.uniform_ok) {
                auto tem = weak11_verify(f, fam.family, fam.constants, Weak11Mode::tempered);
                ++reports;
                ok_count += tem.ok ? 1 : 0;
            }
        }
    };
    for (int famidx = 0; famidx < 6; ++famidx) run(random_ball_family(rng, 20, 101, 4), 100);
    for (int famidx = 0; famidx < 4; ++famidx) run(random_subset_family(rng), 100);
    report(2, ok_count == reports,
           "weak-(1,1) bound at every distinct value of M, regular and tempered constants",
           std::to_string(ok_count) + "/" + std::to_string(reports) + " reports clean");
}

// --- criterion 3: sandwich identity ------------------------------------------

void criterion3() {
    Prng rng(20260815);
    long checks = 0, ok_count = 0;
    for (int famidx = 0; famidx < 10; ++famidx) {
        auto fam = random_ball_family(rng);
        if (!fam.constants.uniform_ok) continue;
        for (int k = 0; k < 50; ++k) {
            auto f = random_nonneg(rng, fam.rel.size());
            ++checks;
            if (sandwich_check(f, fam.family, fam.constants.C_u)) ++ok_count;
        }
    }
    report(3, checks > 0 && ok_count == checks,
           "sandwich C_u^{-1} int f <= int A[f|F_r] <= C_u int f on uniform families",
           std::to_string(ok_count) + "/" + std::to_string(checks));
}

// --- criterion 4: lifting invariance of the constants -------------------------

void criterion4() {
    Prng rng(20260820);
    int built = 0, equal = 0;
    std::string why;
    while (built < 50) {
        auto ins = random_class_bijective_product(rng);
        auto ext = product_extension(ins.rel, ins.pmp);
        if (!ext.is_class_bijective(&why)) {
            // generator contract violated; count as failure by not incrementing equal
            ++built;
            continue;
        }
        auto F = graph_ball_family(ins.rel, int(rng.uniform(1, 3)));
        auto lifted = lift_family(ext, F);
        auto c0 = compute_constants(F);
        auto c1 = compute_constants(lifted);
        ++built;
        if (c0.C_u == c1.C_u && c0.C_reg == c1.C_reg && c0.C_t == c1.C_t && c0.C_d == c1.C_d &&
            c0.monotone == c1.monotone)
            ++equal;
    }
    report(4, equal == built, "lifted families carry identical C_u, C_reg, C_t, C_d",
           std::to_string(equal) + "/" + std::to_string(built) + " product extensions");
}

// --- criterion 5: Maharam preservation -----------------------------------------

void criterion5() {
    long checked = 0, ok_count = 0;
    std::string first_error;
    auto run = [&](const MeasureClassAction& action, int N) {
        try {
            auto win = maharam_extend(action, N);  // asserts preservation internally
            // replay the identity at every (generator, atom) independently
            for (std::size_t gi = 0; gi < action.generators.size(); ++gi) {
                const auto& g = action.generators[gi];
                for (int b = 0; b < action.B.size(); ++b)
                    if (g.defined_at(b)) {
                        ++checked;
                        if (action.B.weight[std::size_t(g(b))] ==
                            action.B.weight[std::size_t(b)] *
                                pow_int(action.lambda, win.cocycle.at(gi, b)))
                            ++ok_count;
                    }
            }
            if (!check_measure_invariance(win.relation).ok)
                throw std::logic_error("window relation not measure invariant");
        } catch (const std::exception& e) {
            if (first_error.empty()) first_error = e.what();
            ++checked;  // count the failed construction
        }
    };
    run(two_atom_typeIII().action, 2);
    run(two_atom_typeIII().action, 4);
    run(cycle_odometer(11, 4).action, 3);
    run(bernoulli_x(4).action, 2);
    run(lambda_cycle(4, Rat(1, 3)).action, 4);
    run(lambda_cycle(6, Rat(1, 2)).action, 3);
    for (int depth : {2, 3, 4}) run(free_boundary_trunc(depth).action, 2);
    report(5, ok_count == checked && first_error.empty(),
           "nu x theta_lambda preservation at every (generator, atom), all built examples",
           std::to_string(ok_count) + "/" + std::to_string(checked) +
               (first_error.empty() ? "" : ", error: " + first_error));
}

// --- criterion 6: ergodic partition + expectation identity ---------------------

void criterion6() {
    struct Instance {
        std::string name;
        ExampleBundle ex;
        int N;
    };
    std::vector<Instance> instances;
    for (int N : {1, 2, 4})
        instances.push_back({"two_atom_typeIII x Z/3, N=" + std::to_string(N),
                             two_atom_typeIII(3), N});
    for (int N : {1, 2})
        instances.push_back({"two_atom_typeIII x Z/5, N=" + std::to_string(N),
                             two_atom_typeIII(5), N});
    instances.push_back({"lambda_cycle(4,1/3), N=4", lambda_cycle(4, Rat(1, 3)), 4});
    instances.push_back({"lambda_cycle(4,1/3), N=2", lambda_cycle(4, Rat(1, 3)), 2});
    instances.push_back({"lambda_cycle(6,1/2), N=3", lambda_cycle(6, Rat(1, 2)), 3});
    // zero-cocycle single-window instances over ergodic product bases
    const int pairs[][2] = {{5, 3}, {7, 4}, {9, 2}, {11, 3}, {4, 3}, {8, 3},
                            {5, 2}, {7, 2}, {3, 2}, {13, 2}, {9, 4}, {25, 2}};
    for (auto [L, m] : pairs)
        instances.push_back({"cycle_odometer(" + std::to_string(L) + "," + std::to_string(m) +
                                 "), N=1",
                             cycle_odometer(L, m), 1});

    long part_ok = 0, exp_ok = 0, exp_total = 0;
    std::vector<std::string> failing;
    Prng rng(20260830);
    for (auto& inst : instances) {
        try {
            auto wp = window_product(inst.ex.action, inst.ex.x_action, inst.N);
            auto diag = ratio_set_diagnostic(inst.ex.action);
            auto part = ergodic_partition(wp, &diag);  // asserts k | N and property (3)
            ++part_ok;
            long local_ok = 0;
            for (int k = 0; k < 50; ++k) {
                auto f = random_signed(rng, wp.relation.size());
                ++exp_total;
                if (expectation_average_check(f, wp).ok) {
                    ++exp_ok;
                    ++local_ok;
                }
            }
            if (local_ok < 50) failing.push_back(inst.name);
        } catch (const std::exception& e) {
            failing.push_back(inst.name + " (" + e.what() + ")");
        }
    }
    bool ok = part_ok == long(instances.size()) && exp_ok == exp_total;
    std::string detail = "partition " + std::to_string(part_ok) + "/" +
                         std::to_string(instances.size()) + ", expectation " +
                         std::to_string(exp_ok) + "/" + std::to_string(exp_total);
    if (!failing.empty()) {
        detail += "; expectation identity fails on: ";
        for (std::size_t i = 0; i < failing.size(); ++i)
            detail += (i ? ", " : "") + failing[i];
        detail +=
            " (finite windows of actions with nontrivial integer cocycle have more relation "
            "classes than K-blocks, so the identity cannot hold for all f; see README)";
    }
    report(6, ok, "ergodic partition k | N + property (3) exact, expectation identity exact",
           detail);
}

// --- criterion 7: weight normalization + path equivalence ----------------------

struct ConvergenceRun {
    std::string name;
    ExampleBundle ex;
    int N;
    int index_max;
    int word_length;
    bool use_folner;  // single-generator Folner balls instead of graph balls
    std::vector<int> r_grid;
};

std::vector<ConvergenceRun> convergence_runs() {
    std::vector<ConvergenceRun> runs;
    // X = Z/101 keeps the pairing essentially free (g^101 is the smallest
    // word fixing the base, and it also fixes X), so the relation lift exists
    runs.push_back({"cycle_odometer(101) x Z/101", cycle_odometer(101, 101), 1, 24, 24, true,
                    {6, 12, 24}});
    runs.push_back({"free_boundary_trunc(3) x Z/7", free_boundary_trunc(3, 7), 3, 5, 6, false,
                    {1, 2, 3, 4, 5}});
    runs.push_back({"free_boundary_trunc(2) x Z/5", free_boundary_trunc(2, 5), 2, 3, 5, false,
                    {1, 2, 3}});
    return runs;
}

struct PreparedRun {
    ConvergenceRun run;
    std::unique_ptr<WindowProduct> wp;  // stable address: the family points into it
    SubsetFamily<Rat> F;
    WeightFamily wf;
};

PreparedRun prepare(const ConvergenceRun& run) {
    PreparedRun prep;
    prep.run = run;
    prep.wp = std::make_unique<WindowProduct>(
        window_product(run.ex.action, run.ex.x_action, run.N));
    prep.F = run.use_folner
                 ? folner_from_generator(prep.wp->window.relation,
                                         prep.wp->window.relation.generators.front(),
                                         run.index_max)
                 : graph_ball_family(prep.wp->window.relation, run.index_max);
    prep.wf = synthesize_weights(prep.wp->window, prep.F,
                                 Density::uniform(run.ex.action.B.size()), run.word_length);
    return prep;
}

void criterion7() {
    long norm_checks = 0, norm_ok = 0, path_checks = 0, path_ok = 0;
    std::string first_error;
    for (const auto& run : convergence_runs()) {
        try {
            auto prep = prepare(run);
            const auto& wf = prep.wf;
            for (int r = 1; r <= prep.F.index_max(); ++r) {
                for (int b = 0; b < prep.wp->nB; ++b) {
                    Rat total(0);
                    for (const auto& [wi, wt] : wf.zeta[std::size_t(r - 1)][std::size_t(b)])
                        total += wt;
                    ++norm_checks;
                    if (total == Rat(1)) ++norm_ok;
                }
                Rat total(0);
                for (const auto& [wi, wt] : wf.zeta_psi[std::size_t(r - 1)]) total += wt;
                ++norm_checks;
                if (total == Rat(1)) ++norm_ok;
            }

            // path equivalence: zeta average vs lifted-family average, exactly
            ClassBijectiveExtension<Rat> ext;
            ext.upstairs = prep.wp->relation;
            ext.downstairs = prep.wp->window.relation;
            ext.projection.resize(std::size_t(prep.wp->relation.size()));
            for (int a = 0; a < prep.wp->relation.size(); ++a)
                ext.projection[std::size_t(a)] =
                    prep.wp->window.atom(prep.wp->b_of(a), prep.wp->t_of(a));
            auto lifted = lift_family(ext, prep.F);
            Prng rng(20260840);
            auto fX = random_signed(rng, prep.wp->nX);
            MeasurableFunction<Rat> fprod{
                std::vector<Rat>(static_cast<std::size_t>(prep.wp->relation.size()))};
            for (int a = 0; a < prep.wp->relation.size(); ++a) fprod[a] = fX[prep.wp->x_of(a)];
            for (int r : run.r_grid) {
                auto A = average(fprod, lifted, r);
                for (int b = 0; b < prep.wp->nB; ++b)
                    for (int x = 0; x < prep.wp->nX; ++x) {
                        Rat lhs = zeta_average(wf, r, b, run.ex.x_action, fX, x);
                        Rat rhs(0);
                        for (int t = 0; t < prep.wp->N; ++t) rhs += A[prep.wp->atom(b, x, t)];
                        rhs /= Rat(prep.wp->N);
                        ++path_checks;
                        if (lhs == rhs) ++path_ok;
                    }
            }
        } catch (const std::exception& e) {
            if (first_error.empty()) first_error = e.what();
        }
    }
    bool ok = first_error.empty() && norm_ok == norm_checks && path_ok == path_checks;
    report(7, ok, "zeta normalization exact; zeta path agrees with the lifted-average path",
           "normalization " + std::to_string(norm_ok) + "/" + std::to_string(norm_checks) +
               ", path equality " + std::to_string(path_ok) + "/" + std::to_string(path_checks) +
               (first_error.empty() ? "" : ", error: " + first_error));
}

// --- criterion 8: convergence regression baselines ------------------------------

void criterion8() {
    // stored baselines; deterministic given the seeds, tolerance +-0.01
    const double kCycleBaseline = 52.0 / 4949;  // max deviation at r = 24
    bool ok = true;
    std::string detail;
    try {
        auto runs = convergence_runs();
        {
            auto prep = prepare(runs[0]);
            auto f = MeasurableFunction<Rat>::indicator(prep.wp->nX, 0);
            Prng rng(20260850);
            auto rep = run_convergence(prep.wf, runs[0].ex.x_action, f, runs[0].r_grid, rng);
            double top = rep.rows.back().max_dev;
            bool pass = top <= 0.05 && std::fabs(top - kCycleBaseline) <= 0.01;
            ok = ok && pass;
            detail += "cycle_odometer top-index max_dev = " + std::to_string(top) +
                      (pass ? " (<= 0.05, baseline 52/4949)" : " VIOLATES baseline");
        }
        {
            auto prep = prepare(runs[1]);
            auto f = MeasurableFunction<Rat>::indicator(prep.wp->nX, 0);
            Prng rng(20260851);
            auto rep = run_convergence(prep.wf, runs[1].ex.x_action, f, runs[1].r_grid, rng);
            std::size_t n = rep.rows.size();
            bool mono = rep.rows[n - 3].max_dev >= rep.rows[n - 2].max_dev &&
                        rep.rows[n - 2].max_dev >= rep.rows[n - 1].max_dev;
            ok = ok && mono;
            detail += "; free_boundary last-3 profile " + std::to_string(rep.rows[n - 3].max_dev) +
                      " >= " + std::to_string(rep.rows[n - 2].max_dev) +
                      " >= " + std::to_string(rep.rows[n - 1].max_dev) +
                      (mono ? " (monotone)" : " NOT monotone");
        }
    } catch (const std::exception& e) {
        ok = false;
        detail += std::string(" error: ") + e.what();
    }
    report(8, ok, "convergence regression baselines", detail);
}

// --- criterion 9: Folner constants on full cycles --------------------------------

void criterion9() {
    long checks = 0, ok_count = 0;
    for (int L : {7, 9, 11, 15, 21, 33, 47, 101}) {
        auto rel = build_relation(uniform_cycle_space(L), {cycle_rotation(L)});
        for (int im = 1; 2 * im + 1 < L && im <= 4; ++im) {
            auto F = folner_from_generator(rel, rel.generators.front(), im);
            auto c = compute_constants(F);
            ++checks;
            if (c.uniform_ok && c.C_u == Rat(1) && c.monotone && c.C_d <= Rat(2)) ++ok_count;
        }
    }
    report(9, checks > 0 && ok_count == checks,
           "folner_from_generator on full cycles: C_u = 1 and C_d <= 2 while 2r+1 < L",
           std::to_string(ok_count) + "/" + std::to_string(checks) + " (L, index_max) pairs");
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    std::printf("%d of 9 criteria failed\n", failures);
    return failures;
}
