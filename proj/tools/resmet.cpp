// resmet - effective resistance metrics toolbox
//
// Subcommands: check-ers, effres, geodesic, reduce, limit,
// walk {exact|mc|law|limit-check}, generate.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "resmet/io.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

struct RunConfig {
    std::string backend = "rational";
    double tolerance = 1e-9;
    std::uint64_t seed = 0;
    std::string output;  // empty = stdout

    resmet::Backend backend_enum() const { return resmet::backend_from_name(backend); }
    resmet::TolerancePolicy policy() const { return {tolerance}; }

    resmet::json to_json() const {
        return {{"backend", backend},
                {"tolerance", tolerance},
                {"seed", seed},
                {"version", kVersion}};
    }
};

void emit(const RunConfig& cfg, resmet::json payload) {
    payload["config"] = cfg.to_json();
    std::string text = payload.dump(2) + "\n";
    if (cfg.output.empty())
        std::cout << text;
    else
        resmet::write_text_file(cfg.output, text);
}

int exit_code_for(resmet::Errc code) {
    switch (code) {
        case resmet::Errc::parse_error:
        case resmet::Errc::io_error:
            return 64;
        default:
            return 65;
    }
}

std::vector<std::size_t> parse_sizes(const std::string& text) {
    auto dots = text.find("..");
    std::vector<std::size_t> sizes;
    if (dots != std::string::npos) {
        std::size_t lo = std::stoul(text.substr(0, dots));
        std::size_t hi = std::stoul(text.substr(dots + 2));
        for (std::size_t s = lo; s <= hi; ++s) sizes.push_back(s);
    } else {
        std::size_t pos = 0;
        while (pos < text.size()) {
            auto comma = text.find(',', pos);
            if (comma == std::string::npos) comma = text.size();
            sizes.push_back(std::stoul(text.substr(pos, comma - pos)));
            pos = comma + 1;
        }
    }
    if (sizes.empty())
        resmet::fail(resmet::Errc::bad_parameter, "empty size schedule '" + text + "'");
    return sizes;
}

resmet::json run_config_error(const resmet::Error& e) {
    return {{"error",
             {{"code", resmet::errc_name(e.code())}, {"message", e.what()}}}};
}

// ---- fixtures -----------------------------------------------------------

resmet::json fixture(const std::string& name, std::size_t n, const std::string& param,
                     const RunConfig& cfg) {
    using namespace resmet;
    Backend b = cfg.backend_enum();
    if (name == "c4") {
        auto g = WeightedGraph::build(
            {"v0", "v1", "v2", "v3"},
            {{"v0", "v1", Scalar::one(b)}, {"v1", "v2", Scalar::one(b)},
             {"v2", "v3", Scalar::one(b)}, {"v3", "v0", Scalar::one(b)}});
        return graph_to_json(g);
    }
    if (name == "c4-geodesic") {
        auto g = WeightedGraph::build(
            {"v0", "v1", "v2", "v3"},
            {{"v0", "v1", Scalar::one(b)}, {"v1", "v2", Scalar::one(b)},
             {"v2", "v3", Scalar::one(b)}, {"v3", "v0", Scalar::one(b)}});
        return metric_to_json(geodesic_metric(g, cfg.policy()));
    }
    if (name == "neg-example") {
        // 4-point metric whose unique weight candidate has one negative entry
        static const long D[4][4] = {
            {0, 23, 36, 40}, {23, 0, 39, 23}, {36, 39, 0, 36}, {40, 23, 36, 0}};
        DenseMatrix d({"v0", "v1", "v2", "v3"}, b);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j)
                d.at(i, j) = b == Backend::rational
                                 ? Scalar::rational(D[i][j], 260)
                                 : Scalar::real(static_cast<double>(D[i][j]) / 260.0);
        return metric_to_json(validate_metric(std::move(d), cfg.policy()));
    }
    if (name == "two-point") {
        Scalar r = Scalar::parse(param.empty() ? "1" : param, b);
        DenseMatrix d({"x", "y"}, b);
        d.at(0, 1) = r;
        d.at(1, 0) = r;
        return metric_to_json(validate_metric(std::move(d), cfg.policy()));
    }
    if (name == "discrete") return metric_to_json(discrete_metric(n, b));
    if (name == "star") return metric_to_json(star_metric(n, b));
    Family f = family_from_name(name);
    return graph_to_json(family_graph(f, n, b));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"effective resistance metrics toolbox"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    RunConfig cfg;
    app.add_option("--backend", cfg.backend, "arithmetic backend: rational|float")
        ->envname("RESMET_BACKEND")
        ->check(CLI::IsMember({"rational", "float"}));
    app.add_option("--tolerance", cfg.tolerance, "float-mode zero/sign tolerance");
    app.add_option("--seed", cfg.seed, "master RNG seed");
    app.add_option("-o,--output", cfg.output, "write the report here instead of stdout");

    // check-ers ------------------------------------------------------------
    std::string metric_path, write_graph;
    auto* check = app.add_subcommand("check-ers",
                                     "decide whether a metric is an effective resistance");
    check->add_option("metric", metric_path, "metric JSON file")->required();
    check->add_option("--write-graph", write_graph, "write the recovered graph here");

    // effres / geodesic ------------------------------------------------------
    std::string graph_path;
    auto* effres = app.add_subcommand("effres", "effective resistance matrix of a graph");
    effres->add_option("graph", graph_path, "graph JSON file")->required();
    auto* geodesic = app.add_subcommand("geodesic", "geodesic metric of a graph");
    geodesic->add_option("graph", graph_path, "graph JSON file")->required();

    // reduce -----------------------------------------------------------------
    std::string keep_list, order_list;
    auto* reduce = app.add_subcommand("reduce", "star-mesh reduction onto a vertex subset");
    reduce->add_option("graph", graph_path, "graph JSON file")->required();
    reduce->add_option("--keep", keep_list, "comma-separated vertices to keep")->required();
    reduce->add_option("--order", order_list, "removal order (default: label order)");

    // limit ------------------------------------------------------------------
    std::string family_name, sizes_text, metric_file, csv_path;
    double stall_tol = 1e-6, divergence_cap = 1e12, condition_eps = 1e-6;
    auto* limit = app.add_subcommand("limit", "limit-graph estimation along an exhaustion");
    limit->add_option("--family", family_name,
                      "discrete|star|tightness|two-ray|two-ray-bridged|transient|path");
    limit->add_option("--metric", metric_file, "user metric JSON file");
    limit->add_option("--sizes", sizes_text, "prefix sizes, e.g. 2..12 or 3,5,9")->required();
    limit->add_option("--stall-tol", stall_tol, "successive-delta stall threshold");
    limit->add_option("--divergence-cap", divergence_cap, "strength cap");
    limit->add_option("--condition-eps", condition_eps, "allowed condition-(C) gap");
    limit->add_option("--csv", csv_path, "also write trajectories as CSV");

    // walk -------------------------------------------------------------------
    auto* walk = app.add_subcommand("walk", "random-walk representations");
    walk->require_subcommand(1);
    std::string from, to, boundary_list;
    std::uint64_t walks = 10000, samples = 10000, cap = 1000000;
    unsigned workers = 1;
    double alpha = 0.01;
    bool assert_recurrent = false;

    auto* wexact = walk->add_subcommand("exact", "exact hitting quantities by linear solves");
    wexact->add_option("--graph", graph_path, "graph JSON file")->required();
    wexact->add_option("--from", from)->required();
    wexact->add_option("--to", to)->required();
    wexact->add_option("--boundary", boundary_list,
                       "comma-separated absorbing escape vertices");

    auto* wmc = walk->add_subcommand("mc", "Monte-Carlo effective resistance");
    wmc->add_option("--graph", graph_path, "graph JSON file")->required();
    wmc->add_option("--from", from)->required();
    wmc->add_option("--to", to)->required();
    wmc->add_option("--walks", walks, "number of walks");
    wmc->add_option("--cap", cap, "per-walk step cap");
    wmc->add_option("--workers", workers, "worker threads");

    auto* wlaw = walk->add_subcommand("law", "geometric-law check for the visit count");
    wlaw->add_option("--graph", graph_path, "graph JSON file")->required();
    wlaw->add_option("--from", from)->required();
    wlaw->add_option("--to", to)->required();
    wlaw->add_option("--samples", samples, "number of sampled visits");
    wlaw->add_option("--cap", cap, "per-walk step cap");
    wlaw->add_option("--alpha", alpha, "significance level");
    wlaw->add_option("--workers", workers, "worker threads");

    auto* wlimit = walk->add_subcommand("limit-check",
                                        "walk consistency of a family's limit graph");
    wlimit->add_option("--family", family_name)->required();
    wlimit->add_option("--sizes", sizes_text)->required();
    wlimit->add_option("--from", from)->required();
    wlimit->add_option("--to", to)->required();
    wlimit->add_option("--samples", samples, "number of walks");
    wlimit->add_option("--cap", cap, "per-walk step cap");
    wlimit->add_option("--workers", workers, "worker threads");
    wlimit->add_flag("--assert-recurrent", assert_recurrent,
                     "assert that the limit graph's walk is recurrent");
    wlimit->add_option("--stall-tol", stall_tol);
    wlimit->add_option("--condition-eps", condition_eps);

    // generate -----------------------------------------------------------------
    std::string fixture_name, fixture_param;
    std::size_t fixture_n = 4;
    auto* generate = app.add_subcommand("generate", "write a built-in fixture");
    generate->add_option("name", fixture_name,
                         "c4|c4-geodesic|neg-example|two-point|discrete|star|"
                         "tightness|two-ray|two-ray-bridged|transient|path")
        ->required();
    generate->add_option("n", fixture_n, "family parameter");
    generate->add_option("--param", fixture_param, "scalar parameter (two-point)");

    CLI11_PARSE(app, argc, argv);

    using namespace resmet;
    try {
        const Backend backend = cfg.backend_enum();
        const TolerancePolicy pol = cfg.policy();

        if (*check) {
            MetricSpace m = read_metric_file(metric_path, backend, pol);
            ErsVerdict v = recover_graph(m, pol);
            if (v.outcome == ErsOutcome::is_ers && !write_graph.empty())
                write_text_file(write_graph, graph_to_json(*v.recovered).dump(2) + "\n");
            emit(cfg, verdict_to_json(v));
            return v.outcome == ErsOutcome::is_ers      ? 0
                   : v.outcome == ErsOutcome::not_ers   ? 2
                                                        : 3;
        }
        if (*effres) {
            WeightedGraph g = read_graph_file(graph_path, backend);
            emit(cfg, metric_to_json(effective_resistance(g, pol)));
            return 0;
        }
        if (*geodesic) {
            WeightedGraph g = read_graph_file(graph_path, backend);
            emit(cfg, metric_to_json(geodesic_metric(g, pol)));
            return 0;
        }
        if (*reduce) {
            WeightedGraph g = read_graph_file(graph_path, backend);
            auto split = [](const std::string& s) {
                std::vector<std::string> out;
                std::size_t pos = 0;
                while (pos <= s.size() && !s.empty()) {
                    auto comma = s.find(',', pos);
                    if (comma == std::string::npos) comma = s.size();
                    out.push_back(s.substr(pos, comma - pos));
                    pos = comma + 1;
                    if (pos > s.size()) break;
                }
                return out;
            };
            ReductionTrace t =
                order_list.empty()
                    ? trace_to_subset(g, split(keep_list), pol)
                    : trace_to_subset(g, split(keep_list), split(order_list), pol);
            emit(cfg, reduction_trace_to_json(t));
            return 0;
        }
        if (*limit) {
            ExhaustionPlan plan =
                metric_file.empty()
                    ? plan_for_family(family_from_name(family_name),
                                      parse_sizes(sizes_text), backend, pol)
                    : plan_for_metric(read_metric_file(metric_file, backend, pol),
                                      parse_sizes(sizes_text));
            auto traces = exhaustion_traces(plan, pol);
            LimitEstimateOptions opts{stall_tol, divergence_cap, condition_eps};
            auto report = limit_graph_estimate(traces, opts);
            if (!csv_path.empty()) write_text_file(csv_path, limit_report_to_csv(report));
            emit(cfg, limit_report_to_json(report));
            return 0;
        }
        if (*wexact) {
            WeightedGraph g = read_graph_file(graph_path, backend);
            std::vector<std::string> boundary;
            std::size_t pos = 0;
            while (!boundary_list.empty() && pos <= boundary_list.size()) {
                auto comma = boundary_list.find(',', pos);
                if (comma == std::string::npos) comma = boundary_list.size();
                boundary.push_back(boundary_list.substr(pos, comma - pos));
                pos = comma + 1;
                if (pos > boundary_list.size()) break;
            }
            HitReturnSplit split = exact_return_vs_hit(g, from, to, boundary, pol);
            json payload{{"split", hit_split_to_json(split)}};
            Scalar one = Scalar::one(backend);
            Scalar denom = one - split.p_return;
            if (sign_of(denom, pol).sign == Sign::positive)
                payload["expected_visits"] = scalar_to_json(one / denom);
            Scalar cx = g.strength(g.index_of(from));
            if (sign_of(split.p_hit_weak(), pol).sign == Sign::positive)
                payload["resistance_via_walk"] =
                    scalar_to_json(one / (cx * split.p_hit_weak()));
            payload["resistance_via_dirichlet"] =
                scalar_to_json(effective_resistance(g, pol).d(from, to));
            emit(cfg, std::move(payload));
            return 0;
        }
        if (*wmc) {
            WeightedGraph g = read_graph_file(graph_path, backend);
            auto est = mc_resistance(g, from, to, walks, cap, cfg.seed, workers, pol);
            emit(cfg, mc_estimate_to_json(est));
            return 0;
        }
        if (*wlaw) {
            WeightedGraph g = read_graph_file(graph_path, backend);
            auto report =
                phi_law_check(g, from, to, samples, cap, cfg.seed, alpha, workers, pol);
            emit(cfg, phi_law_to_json(report));
            return report.distribution_ok ? 0 : 3;
        }
        if (*wlimit) {
            ExhaustionPlan plan = plan_for_family(family_from_name(family_name),
                                                  parse_sizes(sizes_text), backend, pol);
            auto traces = exhaustion_traces(plan, pol);
            LimitEstimateOptions opts{stall_tol, divergence_cap, condition_eps};
            auto limit_report = limit_graph_estimate(traces, opts);
            auto report = limit_walk_consistency(traces, limit_report, from, to, samples,
                                                 cap, cfg.seed, assert_recurrent, workers, pol);
            emit(cfg, limit_walk_to_json(report));
            return 0;
        }
        if (*generate) {
            emit(cfg, fixture(fixture_name, fixture_n, fixture_param, cfg));
            return 0;
        }
    } catch (const Error& e) {
        emit(cfg, run_config_error(e));
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 70;
    }
    return 0;
}
