#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "resmet/io.hpp"

// End-to-end runs of the installed binary; RESMET_CLI_PATH comes from CMake.

namespace {

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run(const std::string& args) {
    std::string cmd = std::string(RESMET_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    while (std::size_t got = fread(buf, 1, sizeof(buf), pipe)) out.append(buf, got);
    int status = pclose(pipe);
    return {WEXITSTATUS(status), out};
}

std::filesystem::path temp_dir() {
    auto dir = std::filesystem::temp_directory_path() / "resmet-cli-tests";
    std::filesystem::create_directories(dir);
    return dir;
}

std::string fixture(const std::string& spec_args, const std::string& name) {
    auto path = temp_dir() / name;
    auto res = run("generate " + spec_args + " -o " + path.string());
    REQUIRE(res.exit_code == 0);
    return path.string();
}

} // namespace

TEST_CASE("check-ers verdicts and exit codes") {
    auto geo = fixture("c4-geodesic", "c4geo.json");
    auto res = run("check-ers " + geo);
    CHECK(res.exit_code == 2);
    auto j = resmet::json::parse(res.out);
    CHECK(j.at("outcome") == "not_ers");
    CHECK(j.at("reason").at("type") == "singular_defect");
    CHECK(j.at("reason").at("determinant") == "0");
    CHECK(j.at("config").at("backend") == "rational");

    auto neg = fixture("neg-example", "neg.json");
    res = run("check-ers " + neg);
    CHECK(res.exit_code == 2);
    j = resmet::json::parse(res.out);
    CHECK(j.at("reason").at("type") == "negative_weight");
    CHECK(j.at("reason").at("x") == "v0");
    CHECK(j.at("reason").at("y") == "v3");

    auto two = fixture("two-point --param 4", "twopoint.json");
    auto out_graph = (temp_dir() / "recovered.json").string();
    res = run("check-ers " + two + " --write-graph " + out_graph);
    CHECK(res.exit_code == 0);
    j = resmet::json::parse(res.out);
    CHECK(j.at("outcome") == "is_ers");
    CHECK(j.at("graph").at("edges")[0].at("w") == "1/4");
    CHECK(std::filesystem::exists(out_graph));
}

TEST_CASE("effres and geodesic agree on a tree and carry pinned values") {
    auto tree = fixture("path 5", "path5.json");
    auto via_effres = run("effres " + tree);
    auto via_geodesic = run("geodesic " + tree);
    CHECK(via_effres.exit_code == 0);
    auto a = resmet::json::parse(via_effres.out);
    auto b = resmet::json::parse(via_geodesic.out);
    CHECK(a.at("d") == b.at("d"));

    auto c4 = fixture("c4", "c4.json");
    auto res = run("effres " + c4);
    auto j = resmet::json::parse(res.out);
    // R(v0,v1) = 3/4, R(v0,v2) = 1
    CHECK(j.at("d")[0][1] == "3/4");
    CHECK(j.at("d")[0][2] == "1");
}

TEST_CASE("reduce emits one snapshot per removal") {
    auto t5 = fixture("tightness 5", "t5.json");
    auto res = run("reduce " + t5 + " --keep v0,v1,v2,v3,v4");
    CHECK(res.exit_code == 0);
    auto j = resmet::json::parse(res.out);
    REQUIRE(j.at("steps").size() == 1);
    auto final_graph = j.at("steps")[0].at("graph");
    // stepping the family down reproduces the smaller instance
    auto t4 = resmet::json::parse(run("generate tightness 4").out);
    CHECK(final_graph.at("edges") == t4.at("edges"));

    // keep-all is the identity
    res = run("reduce " + t5 + " --keep v0,v1,v2,v3,v4,v5");
    j = resmet::json::parse(res.out);
    CHECK(j.at("steps").empty());
}

TEST_CASE("limit run flags the tightness hub") {
    auto res = run("limit --family tightness --sizes 3..12 --condition-eps 0.5");
    CHECK(res.exit_code == 0);
    auto j = resmet::json::parse(res.out);
    bool seen_v0 = false;
    for (const auto& v : j.at("vertices"))
        if (v.at("x") == "v0") {
            seen_v0 = true;
            CHECK(v.at("condition_c") == "fails_within");
        }
    CHECK(seen_v0);
}

TEST_CASE("walk subcommands") {
    auto t20 = fixture("transient 20", "t20.json");
    auto res = run("walk exact --graph " + t20 + " --from B --to T --boundary 20");
    CHECK(res.exit_code == 0);
    auto j = resmet::json::parse(res.out);
    double p_hit = resmet::Scalar::parse(j.at("split").at("p_hit").get<std::string>(),
                                         resmet::Backend::rational)
                       .to_double();
    CHECK(std::abs(p_hit - 0.4) < 1e-3);
    CHECK(j.at("resistance_via_dirichlet") == "2");

    auto c4 = fixture("c4", "c4b.json");
    res = run("walk mc --graph " + c4 +
              " --from v0 --to v2 --walks 5000 --seed 12 --workers 2");
    CHECK(res.exit_code == 0);
    j = resmet::json::parse(res.out);
    double est = j.at("estimate").get<double>();
    double se = j.at("std_error").get<double>();
    CHECK(std::abs(est - 1.0) <= 3.0 * se);
    CHECK(j.at("config").at("seed") == 12);

    res = run("walk law --graph " + c4 + " --from v0 --to v2 --samples 20000 --seed 5");
    CHECK(res.exit_code == 0);
    j = resmet::json::parse(res.out);
    CHECK(j.at("distribution_ok") == true);

    res = run("walk limit-check --family path --sizes 4..9 --from 1 --to 2 "
              "--samples 4000 --seed 3");
    CHECK(res.exit_code == 65);  // recurrence not asserted
    j = resmet::json::parse(res.out);
    CHECK(j.at("error").at("code") == "RecurrenceNotAsserted");

    res = run("walk limit-check --family path --sizes 4..9 --from 1 --to 2 "
              "--samples 4000 --seed 3 --assert-recurrent");
    CHECK(res.exit_code == 0);
    j = resmet::json::parse(res.out);
    CHECK(j.at("resistance_ok") == true);
}

TEST_CASE("parse failures exit with 64 and an error object") {
    auto res = run("check-ers /nonexistent.json");
    CHECK(res.exit_code == 64);
    auto j = resmet::json::parse(res.out);
    CHECK(j.at("error").at("code") == "IoError");

    auto bad = (temp_dir() / "bad.json").string();
    std::ofstream(bad) << "{not json";
    res = run("check-ers " + bad);
    CHECK(res.exit_code == 64);

    // a structurally valid file that is not a metric exits 65
    auto invalid = (temp_dir() / "invalid.json").string();
    std::ofstream(invalid) << R"({"labels":["a","b"],"d":[[0,1],[2,0]]})";
    res = run("check-ers " + invalid);
    CHECK(res.exit_code == 65);
}

TEST_CASE("float backend is selectable by flag") {
    auto c4 = fixture("c4", "c4c.json");
    auto res = run("--backend float effres " + c4);
    CHECK(res.exit_code == 0);
    auto j = resmet::json::parse(res.out);
    CHECK(j.at("config").at("backend") == "float");
    CHECK(j.at("d")[0][2].is_number());
    double r = j.at("d")[0][2].get<double>();
    CHECK(std::abs(r - 1.0) < 1e-9);
}
