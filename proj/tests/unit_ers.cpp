#include <doctest.h>

#include "oracles.hpp"
#include "resmet/ers.hpp"

using namespace resmet;
using oracles::rs;

TEST_CASE("potential of a single edge") {
    auto g = WeightedGraph::build({"x", "y"}, {{"x", "y", rs(3)}});
    auto p = potential(g, "x", "y");
    CHECK(p.at("x") == rs(1, 3));
    CHECK(p.at("y").is_zero());
    CHECK_THROWS_AS(potential(g, "x", "x"), Error);
}

TEST_CASE("potential across the unit cycle") {
    auto p = potential(oracles::unit_cycle4(), "v0", "v2");
    CHECK(p.at("v0") == rs(1));
    CHECK(p.at("v1") == rs(1, 2));
    CHECK(p.at("v3") == rs(1, 2));
    CHECK(p.at("v2").is_zero());
}

TEST_CASE("potential is the half triangle defect of the resistances") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 15; ++trial) {
        auto g = oracles::random_connected_graph(rng, 2, 6);
        auto r = effective_resistance(g);
        for (const auto& x : g.labels())
            for (const auto& y : g.labels()) {
                if (x == y) continue;
                auto p = potential(g, x, y);
                for (const auto& z : g.labels()) {
                    Scalar expect = (r.d(x, y) + r.d(y, z) - r.d(x, z)) / rs(2);
                    CHECK(p.at(z) == expect);
                }
                // maximum principle
                for (const auto& z : g.labels()) {
                    CHECK(!p.at(z).is_negative());
                    CHECK(p.at(z) <= p.at(x));
                }
            }
    }
}

TEST_CASE("effective resistance pinned values") {
    auto single = WeightedGraph::build({"x", "y"}, {{"x", "y", rs(4)}});
    CHECK(effective_resistance(single).d("x", "y") == rs(1, 4));

    auto r = effective_resistance(oracles::unit_cycle4());
    CHECK(r.d("v0", "v2") == rs(1));
    CHECK(r.d("v0", "v1") == rs(3, 4));

    auto two = WeightedGraph::build({"a", "b", "c", "d"},
                                    {{"a", "b", rs(1)}, {"c", "d", rs(1)}});
    CHECK_THROWS_AS(effective_resistance(two), Error);
}

TEST_CASE("recover: the cycle geodesic is rejected on the defect determinant") {
    auto v = recover_graph(oracles::c4_geodesic_metric());
    CHECK(v.outcome == ErsOutcome::not_ers);
    CHECK(v.reason == ErsReason::singular_defect);
    CHECK(v.anchor == "v0");
    CHECK(v.defect_det->is_zero());
    CHECK(!v.recovered);
}

TEST_CASE("recover: the negative example is rejected with the full candidate") {
    auto v = recover_graph(oracles::neg_example_metric());
    CHECK(v.outcome == ErsOutcome::not_ers);
    CHECK(v.reason == ErsReason::negative_weight);
    CHECK(v.witness_x == "v0");
    CHECK(v.witness_y == "v3");
    CHECK(*v.witness_value == rs(-1));
    REQUIRE(v.candidate);
    const auto& c = *v.candidate;
    auto w = [&](const char* a, const char* b) {
        return c.at(c.index_of(a), c.index_of(b));
    };
    CHECK(w("v0", "v1") == rs(10));
    CHECK(w("v0", "v2") == rs(5));
    CHECK(w("v0", "v3") == rs(-1));
    CHECK(w("v1", "v3") == rs(10));
    CHECK(w("v2", "v3") == rs(5));
    CHECK(w("v1", "v2").is_zero());
    CHECK(c.is_symmetric());
    CHECK(*v.defect_det == rs(1, 1300));
}

TEST_CASE("recover: two-point metric inverts the distance") {
    DenseMatrix d({"x", "y"}, Backend::rational);
    d.at(0, 1) = rs(7, 2);
    d.at(1, 0) = rs(7, 2);
    auto v = recover_graph(validate_metric(std::move(d)));
    REQUIRE(v.outcome == ErsOutcome::is_ers);
    CHECK(v.recovered->weight("x", "y") == rs(2, 7));
}

TEST_CASE("defect determinant is anchor independent") {
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 10; ++trial) {
        auto g = oracles::random_connected_graph(rng, 2, 6);
        auto r = effective_resistance(g);
        Scalar first = determinant(defect_system(r, r.labels().front()).reduced);
        for (const auto& y : r.labels()) {
            auto sys = defect_system(r, y);
            CHECK(determinant(sys.reduced) == first);
            CHECK(determinant(sys.anchored) == first);
        }
        CHECK(sign_of(first).sign == Sign::positive);
    }
    // also on a non-resistance metric: all anchors agree on the zero
    auto m = oracles::c4_geodesic_metric();
    for (const auto& y : m.labels())
        CHECK(determinant(defect_system(m, y).reduced).is_zero());
}

TEST_CASE("round trips are exact on random rational graphs") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 60; ++trial) {
        auto g = oracles::random_connected_graph(rng, 2, 8);
        auto report = check_round_trip(g);
        CHECK(report.exact);
        CHECK(report.verdict.outcome == ErsOutcome::is_ers);
        CHECK(*report.verdict.recovered == g);
    }
}

TEST_CASE("round trip on the unit cycle and a fractional edge") {
    CHECK(check_round_trip(oracles::unit_cycle4()).exact);
    auto g = WeightedGraph::build({"x", "y"}, {{"x", "y", rs(1, 3)}});
    CHECK(check_round_trip(g).exact);
}

TEST_CASE("recovered resistances satisfy the defining systems with zero residual") {
    std::mt19937_64 rng(24);
    auto g = oracles::random_connected_graph(rng, 3, 6);
    auto r = effective_resistance(g);
    auto v = recover_graph(r);
    REQUIRE(v.outcome == ErsOutcome::is_ers);
    for (const auto& y : r.labels()) {
        auto sys = defect_system(r, y);
        std::vector<Scalar> c_col;
        for (const auto& x : r.labels())
            c_col.push_back(v.recovered->weight(x, y));
        auto lhs = mat_vec(sys.anchored, c_col);
        for (std::size_t i = 0; i < lhs.size(); ++i) CHECK(lhs[i] == sys.rhs[i]);
    }
    // the resistance matrix itself validates as a metric
    CHECK(check_metric(r.matrix()).empty());
}

TEST_CASE("variational identities") {
    auto single = WeightedGraph::build({"x", "y"}, {{"x", "y", rs(5)}});
    auto rep = variational_check(single, "x", "y");
    CHECK(rep.resistance == rs(1, 5));
    CHECK(rep.potential_energy == rs(1, 5));
    CHECK(rep.energy_matches);
    CHECK(rep.normalization_ok);
    CHECK(rep.stationary);

    auto c4 = variational_check(oracles::unit_cycle4(), "v0", "v2");
    CHECK(c4.resistance == rs(1));
    CHECK(c4.potential_energy == rs(1));
    CHECK(c4.energy_matches);
    CHECK(c4.max_stationarity_defect.is_zero());

    std::mt19937_64 rng(25);
    for (int trial = 0; trial < 10; ++trial) {
        auto g = oracles::random_connected_graph(rng, 2, 6);
        auto labels = g.labels();
        auto rep2 = variational_check(g, labels.front(), labels.back());
        CHECK(rep2.energy_matches);
        CHECK(rep2.normalization_ok);
        CHECK(rep2.stationary);
    }
}

TEST_CASE("float backend recovers a clean metric") {
    DenseMatrix d({"x", "y", "z"}, Backend::float64);
    auto set = [&](std::size_t i, std::size_t j, double v) {
        d.at(i, j) = Scalar::real(v);
        d.at(j, i) = Scalar::real(v);
    };
    // resistances of a unit triangle
    set(0, 1, 2.0 / 3.0);
    set(0, 2, 2.0 / 3.0);
    set(1, 2, 2.0 / 3.0);
    auto v = recover_graph(validate_metric(std::move(d), {1e-9}), {1e-9});
    REQUIRE(v.outcome == ErsOutcome::is_ers);
    for (const auto& e : v.recovered->edges())
        CHECK(std::abs(e.w.to_double() - 1.0) < 1e-9);
    CHECK(v.max_residual < 1e-9);
}

TEST_CASE("float backend returns indeterminate near the determinant band") {
    // geodesic of the cycle: the determinant is a true zero, which in float
    // mode lands inside the tolerance band
    DenseMatrix d({"v0", "v1", "v2", "v3"}, Backend::float64);
    const double D[4][4] = {{0, 1, 2, 1}, {1, 0, 1, 2}, {2, 1, 0, 1}, {1, 2, 1, 0}};
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) d.at(i, j) = Scalar::real(D[i][j]);
    auto v = recover_graph(validate_metric(std::move(d), {1e-9}), {1e-9});
    CHECK(v.outcome == ErsOutcome::indeterminate);
}
