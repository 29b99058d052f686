#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "resmet/walk.hpp"

using namespace resmet;
using oracles::rs;

TEST_CASE("a single-edge walk jumps straight to the target") {
    auto g = WeightedGraph::build({"x", "y"}, {{"x", "y", rs(2)}});
    auto trace = simulate_walk(g, "x", "y", 10, 1);
    CHECK(trace.cause == WalkTrace::Stop::hit_target);
    CHECK(trace.steps == std::vector<std::string>{"x", "y"});
}

TEST_CASE("first steps on the cycle split evenly") {
    auto c4 = oracles::unit_cycle4();
    int to_v1 = 0;
    const int walks = 10000;
    for (int k = 0; k < walks; ++k) {
        auto trace = simulate_walk(c4, "v0", "v2", 1000, 777 + k);
        REQUIRE(trace.steps.size() >= 2);
        if (trace.steps[1] == "v1") ++to_v1;
    }
    // 3 sigma around 1/2
    double freq = static_cast<double>(to_v1) / walks;
    CHECK(std::abs(freq - 0.5) < 3.0 * std::sqrt(0.25 / walks));
}

TEST_CASE("consecutive steps are adjacent") {
    std::mt19937_64 rng(51);
    auto g = oracles::random_connected_graph(rng, 4, 7);
    auto trace = simulate_walk(g, g.labels().front(), g.labels().back(), 200, 9);
    for (std::size_t k = 0; k + 1 < trace.steps.size(); ++k)
        CHECK(!g.weight(trace.steps[k], trace.steps[k + 1]).is_zero());
}

TEST_CASE("return-vs-hit split on pinned instances") {
    auto single = WeightedGraph::build({"x", "y"}, {{"x", "y", rs(1)}});
    auto s = exact_return_vs_hit(single, "x", "y");
    CHECK(s.p_return.is_zero());
    CHECK(s.p_hit == rs(1));
    CHECK(s.p_escape.is_zero());

    auto c4 = oracles::unit_cycle4();
    auto sc = exact_return_vs_hit(c4, "v0", "v2");
    CHECK(sc.p_return == rs(1, 2));
    CHECK(sc.p_hit == rs(1, 2));

    CHECK_THROWS_AS(exact_return_vs_hit(c4, "v0", "v0"), Error);
}

TEST_CASE("plain truncations of the transient family pin the split at one half") {
    auto g = family_graph(Family::transient, 12);
    auto s = exact_return_vs_hit(g, "B", "T");
    CHECK(s.p_return == rs(1, 2));
    CHECK(s.p_hit == rs(1, 2));
}

TEST_CASE("escape boundary reproduces the transient probabilities") {
    auto g = family_graph(Family::transient, 20);
    auto s = exact_return_vs_hit(g, "B", "T", {"20"});
    Scalar band = rs(1, 1000);
    CHECK((s.p_hit - rs(2, 5)).abs() <= band);
    CHECK((s.p_hit_weak() - rs(3, 5)).abs() <= band);
    CHECK((s.p_return - rs(2, 5)).abs() <= band);
    CHECK(sign_of(s.p_escape).sign == Sign::positive);
    CHECK_THROWS_AS(exact_return_vs_hit(g, "B", "T", {"B"}), Error);
}

TEST_CASE("expected visits: geometric route and pinned values") {
    auto single = WeightedGraph::build({"x", "y"}, {{"x", "y", rs(1)}});
    CHECK(exact_expected_visits(single, "x", "y") == rs(1));
    CHECK(exact_expected_visits(oracles::unit_cycle4(), "v0", "v2") == rs(2));
}

TEST_CASE("fundamental-matrix route agrees with the geometric route") {
    std::mt19937_64 rng(52);
    for (int trial = 0; trial < 20; ++trial) {
        auto g = oracles::random_connected_graph(rng, 2, 6);
        const auto& labels = g.labels();
        for (const auto& x : labels)
            for (const auto& y : labels) {
                if (x == y) continue;
                auto visits = expected_visits_vector(g, x, y);
                Scalar via_geometric = exact_expected_visits(g, x, y);
                CHECK(visits[g.index_of(x)] == via_geometric);
                CHECK(visits[g.index_of(y)].is_zero());
            }
    }
}

TEST_CASE("visit counts reproduce the potential at every intermediate vertex") {
    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 12; ++trial) {
        auto g = oracles::random_connected_graph(rng, 2, 6);
        auto r = effective_resistance(g);
        const auto& labels = g.labels();
        for (const auto& x : labels)
            for (const auto& y : labels) {
                if (x == y) continue;
                auto visits = expected_visits_vector(g, x, y);
                auto p = potential(g, x, y);
                for (const auto& z : labels) {
                    Scalar cz = g.strength(g.index_of(z));
                    CHECK(visits[g.index_of(z)] / cz == p.at(z));
                }
                // and the resistance identity at x
                Scalar cx = g.strength(g.index_of(x));
                CHECK(visits[g.index_of(x)] / cx == r.d(x, y));
            }
    }
}

TEST_CASE("edge weights never exceed the inverse resistance") {
    for (Family f : {Family::tightness, Family::path, Family::star}) {
        auto traces = exhaustion_traces(plan_for_family(
            f, std::vector<std::size_t>{3, 4, 5, 6, 7, 8}));
        const auto& metric = traces.metrics.back();
        for (const auto& g : traces.graphs)
            for (const auto& e : g.edges())
                CHECK(e.w <= Scalar::one(Backend::rational) / metric.d(e.u, e.v));
    }
}

TEST_CASE("mc estimate on a deterministic instance") {
    auto g = WeightedGraph::build({"x", "y"}, {{"x", "y", rs(2)}});
    auto est = mc_resistance(g, "x", "y", 500, 100, 7);
    CHECK(est.estimate == 0.5);  // every walk has Phi = 1
    CHECK(est.std_error == 0.0);
    CHECK(est.samples == 500);
    CHECK(est.capped == 0);
}

TEST_CASE("mc estimate matches the exact resistance on the cycle") {
    auto c4 = oracles::unit_cycle4();
    auto est = mc_resistance(c4, "v0", "v2", 20000, 100000, 99);
    CHECK(std::abs(est.estimate - 1.0) <= 3.0 * est.std_error);
    CHECK(est.capped == 0);
}

TEST_CASE("mc estimate on the transient truncation sits at 2") {
    auto g = family_graph(Family::transient, 20);
    auto est = mc_resistance(g, "B", "T", 20000, 1000000, 4242, 4);
    CHECK(std::abs(est.estimate - 2.0) <= 3.0 * est.std_error);
}

TEST_CASE("mc estimates are bit-identical across worker counts") {
    auto c4 = oracles::unit_cycle4();
    auto one = mc_resistance(c4, "v0", "v2", 30000, 100000, 31337, 1);
    auto four = mc_resistance(c4, "v0", "v2", 30000, 100000, 31337, 4);
    auto eight = mc_resistance(c4, "v0", "v2", 30000, 100000, 31337, 8);
    CHECK(one.estimate == four.estimate);
    CHECK(one.estimate == eight.estimate);
    CHECK(one.std_error == four.std_error);
    CHECK(one.std_error == eight.std_error);
    CHECK(one.samples == eight.samples);
}

TEST_CASE("mc with x equal to y is exactly zero") {
    auto c4 = oracles::unit_cycle4();
    auto est = mc_resistance(c4, "v0", "v0", 100, 100, 5);
    CHECK(est.estimate == 0.0);
}

TEST_CASE("capped walks are excluded and flagged") {
    // cap of 1 forces every cycle walk that does not hit immediately to cap
    auto c4 = oracles::unit_cycle4();
    auto est = mc_resistance(c4, "v0", "v1", 2000, 1, 17);
    CHECK(est.capped > 0);
    CHECK(est.samples + est.capped == 2000);
    // the surviving walks all have Phi = 1
    CHECK(est.mean_phi == 1.0);
}

TEST_CASE("the visit count follows the geometric law on the cycle") {
    auto c4 = oracles::unit_cycle4();
    auto report = phi_law_check(c4, "v0", "v2", 50000, 100000, 2024);
    CHECK(report.p == 0.5);
    CHECK(report.distribution_ok);
    CHECK(report.mean_ok);
    CHECK(report.variance_ok);
    CHECK(report.expected_mean == 2.0);
    CHECK(report.expected_variance == 2.0);
}

TEST_CASE("degenerate law on a single edge") {
    auto g = WeightedGraph::build({"x", "y"}, {{"x", "y", rs(3)}});
    auto report = phi_law_check(g, "x", "y", 1000, 100, 3);
    CHECK(report.p == 0.0);
    CHECK(report.distribution_ok);
    REQUIRE(report.histogram.size() == 1);
    CHECK(report.histogram.at(1) == 1000);
}

TEST_CASE("limit-check refusals") {
    // condition (C) fails at the tightness hub
    auto traces = exhaustion_traces(plan_for_family(
        Family::tightness, std::vector<std::size_t>{3, 4, 5, 6, 7, 8, 9, 10}));
    auto report = limit_graph_estimate(traces);
    try {
        limit_walk_consistency(traces, report, "v0", "v1", 100, 1000, 1, true);
        FAIL("expected ConditionCFails");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::condition_c_fails);
    }

    // recurrence must be asserted even where condition (C) holds
    auto path_traces = exhaustion_traces(plan_for_family(
        Family::path, std::vector<std::size_t>{4, 5, 6, 7, 8}));
    auto path_report = limit_graph_estimate(path_traces);
    try {
        limit_walk_consistency(path_traces, path_report, "1", "2", 100, 1000, 1, false);
        FAIL("expected RecurrenceNotAsserted");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::recurrence_not_asserted);
    }

    // the unbridged two-ray family also holds (C) but is transient: refused too
    auto ray_traces = exhaustion_traces(plan_for_family(
        Family::two_ray, std::vector<std::size_t>{5, 7, 9, 11}));
    auto ray_report = limit_graph_estimate(ray_traces);
    CHECK(ray_report.condition_c_holds_at("0"));
    CHECK_THROWS_AS(
        limit_walk_consistency(ray_traces, ray_report, "0", "1", 100, 1000, 1, false),
        Error);
}

TEST_CASE("limit-check passes on a recurrent family") {
    auto traces = exhaustion_traces(plan_for_family(
        Family::path, std::vector<std::size_t>{4, 5, 6, 7, 8, 9}));
    auto report = limit_graph_estimate(traces);
    auto out = limit_walk_consistency(traces, report, "1", "2", 8000, 100000, 606, true, 2);
    CHECK(out.resistance_ok);
    CHECK(out.transitions_ok);
    CHECK(out.family_resistance == 1.0);

    auto trivial = limit_walk_consistency(traces, report, "1", "1", 10, 10, 1, false);
    CHECK(trivial.trivial);
    CHECK(trivial.resistance_ok);
}
