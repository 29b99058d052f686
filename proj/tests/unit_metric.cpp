#include <doctest.h>

#include <algorithm>

#include "oracles.hpp"
#include "resmet/metric.hpp"

using namespace resmet;
using oracles::rs;

namespace {

DenseMatrix matrix4(const long (&d)[4][4], long den = 1) {
    DenseMatrix m({"v0", "v1", "v2", "v3"}, Backend::rational);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) m.at(i, j) = rs(d[i][j], den);
    return m;
}

} // namespace

TEST_CASE("the cycle geodesic matrix validates") {
    const long D[4][4] = {{0, 1, 2, 1}, {1, 0, 1, 2}, {2, 1, 0, 1}, {1, 2, 1, 0}};
    auto m = validate_metric(matrix4(D));
    CHECK(m.size() == 4);
    CHECK(m.d("v0", "v2") == rs(2));
}

TEST_CASE("violations are all reported with witnesses") {
    DenseMatrix d({"a", "b", "c"}, Backend::rational);
    d.at(0, 1) = rs(1);
    d.at(1, 0) = rs(1);
    d.at(1, 2) = rs(1);
    d.at(2, 1) = rs(1);
    d.at(0, 2) = rs(5);
    d.at(2, 0) = rs(5);
    auto issues = check_metric(d);
    REQUIRE(!issues.empty());
    bool found = false;
    for (const auto& is : issues)
        if (is.code == Errc::triangle_violation &&
            is.witness == std::vector<std::string>{"a", "b", "c"})
            found = true;
    CHECK(found);
    CHECK_THROWS_AS(validate_metric(std::move(d)), Error);
}

TEST_CASE("zero off-diagonal and asymmetry are caught") {
    DenseMatrix zero({"a", "b"}, Backend::rational);
    auto issues = check_metric(zero);
    CHECK(std::any_of(issues.begin(), issues.end(), [](const MetricIssue& i) {
        return i.code == Errc::non_positive_off_diagonal;
    }));

    DenseMatrix asym({"a", "b"}, Backend::rational);
    asym.at(0, 1) = rs(1);
    asym.at(1, 0) = rs(2);
    issues = check_metric(asym);
    CHECK(std::any_of(issues.begin(), issues.end(), [](const MetricIssue& i) {
        return i.code == Errc::not_symmetric;
    }));

    DenseMatrix tiny(std::vector<std::string>{"a"}, Backend::rational);
    issues = check_metric(tiny);
    REQUIRE(issues.size() == 1);
    CHECK(issues[0].code == Errc::too_small);
}

TEST_CASE("defect system of the cycle geodesic") {
    auto m = oracles::c4_geodesic_metric();
    auto sys = defect_system(m, "v0");
    const long expect[3][3] = {{1, 1, 0}, {1, 2, 1}, {0, 1, 1}};
    REQUIRE(sys.reduced.size() == 3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            CHECK(sys.reduced.at(i, j) == rs(expect[i][j]));
    // anchored matrix keeps the full index set with a unit at the anchor
    CHECK(sys.anchored.at(0, 0) == rs(1));
    for (std::size_t j = 1; j < 4; ++j) CHECK(sys.anchored.at(0, j).is_zero());
    CHECK(sys.rhs == std::vector<Scalar>{rs(0), rs(1), rs(1), rs(1)});
}

TEST_CASE("defect system of the negative example carries the metric's scale") {
    auto m = oracles::neg_example_metric();
    auto sys = defect_system(m, "v0");
    const long expect[3][3] = {{23, 10, 20}, {10, 36, 20}, {20, 20, 40}};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            CHECK(sys.reduced.at(i, j) == rs(expect[i][j], 260));
}

TEST_CASE("two-point defect system") {
    DenseMatrix d({"x", "y"}, Backend::rational);
    d.at(0, 1) = rs(7);
    d.at(1, 0) = rs(7);
    auto m = validate_metric(std::move(d));
    auto sys = defect_system(m, "y");
    CHECK(sys.anchored.at(0, 0) == rs(7));
    CHECK(sys.anchored.at(0, 1).is_zero());
    CHECK(sys.anchored.at(1, 0).is_zero());
    CHECK(sys.anchored.at(1, 1) == rs(1));
    CHECK(sys.rhs == std::vector<Scalar>{rs(1), rs(0)});
    CHECK_THROWS_AS(defect_system(m, "nope"), Error);
}

TEST_CASE("defect entries are nonnegative and the anchor row vanishes") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        auto g = oracles::random_connected_graph(rng, 2, 6);
        auto m = geodesic_metric(g);
        for (const auto& anchor : m.labels()) {
            auto sys = defect_system(m, anchor);
            std::size_t y = m.index_of(anchor);
            CHECK(sys.defect.is_symmetric());
            for (std::size_t x = 0; x < m.size(); ++x) {
                CHECK(!sys.defect.at(x, y).is_negative());
                CHECK(sys.defect.at(y, x).is_zero());
                for (std::size_t z = 0; z < m.size(); ++z)
                    CHECK(!sys.defect.at(x, z).is_negative());
                CHECK(sys.defect.at(x, x) == m.d(x, y));
            }
        }
    }
}

TEST_CASE("defect system permutes with a relabeling") {
    auto m = oracles::neg_example_metric();
    // same metric with labels listed in a different order
    std::vector<std::string> order{"v2", "v0", "v3", "v1"};
    auto permuted = m.restrict_to(order);
    auto sys = defect_system(m, "v2");
    auto sys_p = defect_system(permuted, "v2");
    for (const auto& a : m.labels())
        for (const auto& b : m.labels()) {
            std::size_t i = sys.defect.index_of(a), j = sys.defect.index_of(b);
            std::size_t ip = sys_p.defect.index_of(a), jp = sys_p.defect.index_of(b);
            CHECK(sys.defect.at(i, j) == sys_p.defect.at(ip, jp));
        }
}

TEST_CASE("builtin metrics") {
    auto disc = discrete_metric(3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            CHECK(disc.d(i, j) == (i == j ? rs(0) : rs(1)));

    auto star = star_metric(4);
    CHECK(star.d("1", "3") == rs(1));
    CHECK(star.d("2", "4") == rs(2));
    CHECK(star.d("3", "2") == rs(2));

    // the two families coincide at n = 2
    CHECK(discrete_metric(2) == star_metric(2));

    CHECK_THROWS_AS(discrete_metric(1), Error);
    CHECK_THROWS_AS(star_metric(0), Error);
}

TEST_CASE("float-mode validation uses the tolerance band") {
    DenseMatrix d({"a", "b", "c"}, Backend::float64);
    auto set = [&](std::size_t i, std::size_t j, double v) {
        d.at(i, j) = Scalar::real(v);
        d.at(j, i) = Scalar::real(v);
    };
    set(0, 1, 1.0);
    set(1, 2, 1.0);
    set(0, 2, 2.0 + 1e-13);  // violates the triangle only below tolerance
    CHECK(check_metric(d, {1e-9}).empty());
    set(0, 2, 2.1);
    CHECK(!check_metric(d, {1e-9}).empty());
}
