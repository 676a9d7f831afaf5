#include <catch2/catch_amalgamated.hpp>

#include "ergrel/examples.hpp"
#include "ergrel/instances.hpp"
#include "ergrel/serialize.hpp"
#include "test_helpers.hpp"

using namespace ergrel;

TEST_CASE("relation spec round trip") {
    PointSpace<Rat> sp({"a0", "a1", "a2"}, {Rat(1, 6), Rat(1, 3), Rat(1, 2)});
    std::vector<int> img = {1, 2, -1};  // partial shift
    auto rel = build_relation(sp, {PartialBijection("s", img)});
    auto back = relation_from_json(relation_spec_to_json(rel));
    REQUIRE(back.space.ids == rel.space.ids);
    REQUIRE(back.space.weight == rel.space.weight);
    REQUIRE(back.class_id == rel.class_id);
    REQUIRE(back.generators.front().image == rel.generators.front().image);
}

TEST_CASE("action spec round trip keeps lambda and partial generators") {
    auto ex = free_boundary_trunc(2);
    auto back = action_from_json(action_to_json(ex.action));
    REQUIRE(back.lambda == Rat(1, 3));
    REQUIRE(back.B.ids == ex.action.B.ids);
    for (std::size_t g = 0; g < back.generators.size(); ++g)
        REQUIRE(back.generators[g].image == ex.action.generators[g].image);
}

TEST_CASE("family round trip") {
    auto rel = th::cycle_relation(7);
    auto F = graph_ball_family(rel, 2);
    auto back = family_from_json(family_to_json(F), rel);
    REQUIRE(back.index_max() == 2);
    for (int r = 1; r <= 2; ++r)
        for (int x = 0; x < 7; ++x) REQUIRE(back.at(r, x) == F.at(r, x));
}

TEST_CASE("block-selection instance round trip and certificate report") {
    Prng rng(12);
    auto inst = random_block_selection_instance(rng);
    auto back = block_selection_from_json(block_selection_to_json(inst));
    REQUIRE(back.omega_size == inst.omega_size);
    REQUIRE(back.I_blocks == inst.I_blocks);
    REQUIRE(back.V == inst.V);
    REQUIRE(back.kappa == inst.kappa);
    REQUIRE(back.lambda == inst.lambda);
    auto res = block_select(back);
    auto j = block_selection_result_to_json(res);
    REQUIRE(j.contains("certificate_bound"));
    REQUIRE(parse_rational(j.at("H_mass").get<std::string>()) == res.H_mass);
}

TEST_CASE("convergence report: lossless JSON round trip, CSV shape") {
    ConvergenceReport rep;
    rep.ergodic_mean = 0.25;
    rep.x_ergodic = true;
    rep.rows = {{6, 0.0670221, 0.0172532}, {24, 0.0105072, 0.0101951}};
    rep.random_rows = {{6, 0.07, 0.02}, {24, 0.011, 0.0102}};
    auto back = convergence_from_json(convergence_to_json(rep));
    REQUIRE(back.ergodic_mean == rep.ergodic_mean);
    REQUIRE(back.rows.size() == 2);
    REQUIRE(back.rows[1].max_dev == rep.rows[1].max_dev);
    REQUIRE(back.rows[1].mean_dev == rep.rows[1].mean_dev);
    // parse-emit-compare: a second trip is bit-identical
    REQUIRE(convergence_to_json(back) == convergence_to_json(rep));

    std::string csv = convergence_csv(rep);
    REQUIRE(csv.rfind("r,max_dev,mean_dev\n", 0) == 0);

    ConvergenceReport empty;
    REQUIRE(convergence_csv(empty) == "r,max_dev,mean_dev\n");  // header-only
}

TEST_CASE("maximal report and averages CSV shapes") {
    auto rel = th::cycle_relation(9);
    auto F = graph_ball_family(rel, 2);
    auto c = compute_constants(F);
    Prng rng(3);
    auto f = th::random_nonneg(rng, 9);
    auto rep = weak11_verify(f, F, c, Weak11Mode::regular);
    auto j = maximal_report_to_json(rep);
    REQUIRE(j.at("ok").get<bool>());
    REQUIRE(j.at("grid").size() == 32);
    std::string csv = maximal_report_csv(rep);
    REQUIRE(csv.rfind("lambda,exceed_mass,bound\n", 0) == 0);

    std::string avg = averages_csv(f, F);
    REQUIRE(avg.rfind("r,atom,average\n", 0) == 0);
    // one row per (r, atom)
    REQUIRE(std::count(avg.begin(), avg.end(), '\n') == 1 + 2 * 9);
}

TEST_CASE("constants report uses rational strings") {
    auto rel = th::cycle_relation(101);
    auto j = constants_to_json(compute_constants(graph_ball_family(rel, 3)));
    REQUIRE(j.at("C_reg").get<std::string>() == "13/7");
    REQUIRE(j.at("C_t").get<std::string>() == "11/7");
    REQUIRE(j.at("C_d").get<std::string>() == "13/7");
    REQUIRE(j.at("C_u").get<std::string>() == "1");
}
