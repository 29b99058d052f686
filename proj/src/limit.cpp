#include "resmet/limit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace resmet {

Family family_from_name(std::string_view name) {
    if (name == "discrete") return Family::discrete;
    if (name == "star") return Family::star;
    if (name == "tightness") return Family::tightness;
    if (name == "two-ray" || name == "two_ray") return Family::two_ray;
    if (name == "two-ray-bridged" || name == "two_ray_bridged")
        return Family::two_ray_bridged;
    if (name == "transient") return Family::transient;
    if (name == "path") return Family::path;
    fail(Errc::unknown_family, "unknown family '" + std::string(name) + "'");
}

const char* family_name(Family f) {
    switch (f) {
        case Family::discrete: return "discrete";
        case Family::star: return "star";
        case Family::tightness: return "tightness";
        case Family::two_ray: return "two-ray";
        case Family::two_ray_bridged: return "two-ray-bridged";
        case Family::transient: return "transient";
        case Family::path: return "path";
    }
    return "?";
}

namespace {

Scalar pow2(long k, Backend b) {
    // 2^k for possibly negative k
    if (b == Backend::float64) return Scalar::real(std::ldexp(1.0, static_cast<int>(k)));
    mpq_class q;
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(k < 0 ? -k : k));
    if (k >= 0)
        q = mpq_class(p);
    else
        q = mpq_class(1) / mpq_class(p);
    return Scalar::rational(q);
}

WeightedGraph tightness_graph(std::size_t n, Backend b) {
    if (n < 2) fail(Errc::bad_parameter, "tightness family needs n >= 2");
    std::vector<std::string> labels;
    for (std::size_t k = 0; k <= n; ++k) labels.push_back("v" + std::to_string(k));
    std::vector<Edge> edges;
    for (std::size_t k = 1; k < n; ++k)
        edges.push_back({"v0", "v" + std::to_string(k), pow2(1 - static_cast<long>(k), b)});
    edges.push_back({"v0", "v" + std::to_string(n), Scalar::one(b)});
    for (std::size_t k = 1; k < n; ++k) {
        Scalar w = pow2(static_cast<long>(k) - 1, b) - Scalar::one(b);
        if (!w.is_zero())
            edges.push_back({"v" + std::to_string(k), "v" + std::to_string(k + 1), w});
    }
    return WeightedGraph::build(std::move(labels), edges);
}

std::vector<std::string> two_ray_labels(std::size_t n) {
    std::vector<std::string> labels{"0"};
    for (std::size_t k = 1; k <= n; ++k) {
        labels.push_back(std::to_string(k));
        labels.push_back("-" + std::to_string(k));
    }
    return labels;
}

WeightedGraph two_ray_graph(std::size_t n, bool bridged, Backend b) {
    if (n < (bridged ? 2u : 1u))
        fail(Errc::bad_parameter, "two-ray family parameter too small");
    std::vector<Edge> edges;
    for (long v = -static_cast<long>(n); v < static_cast<long>(n); ++v) {
        long w = v + 1;
        long m = std::min(std::labs(v), std::labs(w));
        edges.push_back({std::to_string(v), std::to_string(w), pow2(m, b)});
    }
    if (bridged)
        edges.push_back({std::to_string(-static_cast<long>(n)), std::to_string(n),
                         pow2(static_cast<long>(n) - 2, b)});
    return WeightedGraph::build(two_ray_labels(n), edges);
}

WeightedGraph transient_graph(std::size_t depth, Backend b) {
    if (depth < 1) fail(Errc::bad_parameter, "transient family needs depth >= 1");
    std::vector<std::string> labels{"B", "T"};
    for (std::size_t k = 0; k <= depth; ++k) labels.push_back(std::to_string(k));
    std::vector<Edge> edges{{"B", "0", Scalar::one(b)}, {"T", "0", Scalar::one(b)}};
    for (std::size_t k = 0; k < depth; ++k)
        edges.push_back({std::to_string(k), std::to_string(k + 1),
                         pow2(static_cast<long>(k), b)});
    return WeightedGraph::build(std::move(labels), edges);
}

WeightedGraph path_graph(std::size_t n, Backend b) {
    if (n < 1) fail(Errc::bad_parameter, "path family needs n >= 1");
    std::vector<std::string> labels;
    for (std::size_t k = 0; k <= n; ++k) labels.push_back(std::to_string(k));
    std::vector<Edge> edges;
    for (std::size_t k = 0; k < n; ++k)
        edges.push_back({std::to_string(k), std::to_string(k + 1), Scalar::one(b)});
    return WeightedGraph::build(std::move(labels), edges);
}

// smallest family parameter whose instance has at least `size` vertices
std::size_t parameter_for_size(Family f, std::size_t size) {
    switch (f) {
        case Family::discrete:
        case Family::star:
            return std::max<std::size_t>(size, 2);
        case Family::tightness:
            return std::max<std::size_t>(size < 1 ? 2 : size - 1, 2);
        case Family::two_ray:
            return std::max<std::size_t>(size / 2, 1);  // |V| = 2n + 1
        case Family::two_ray_bridged:
            return std::max<std::size_t>(size / 2, 2);
        case Family::transient:
            return size > 3 ? size - 3 : 1;  // |V| = depth + 3
        case Family::path:
            return std::max<std::size_t>(size < 1 ? 1 : size - 1, 1);
    }
    fail(Errc::unknown_family, "bad family");
}

} // namespace

WeightedGraph family_graph(Family f, std::size_t n, Backend b) {
    switch (f) {
        case Family::discrete: {
            // the unique graph of the discrete metric: complete, weight 2/n
            if (n < 2) fail(Errc::bad_parameter, "discrete family needs n >= 2");
            std::vector<std::string> labels;
            for (std::size_t i = 1; i <= n; ++i) labels.push_back(std::to_string(i));
            Scalar w = (Scalar::one(b) + Scalar::one(b)) /
                       (b == Backend::rational ? Scalar::rational(static_cast<long>(n))
                                               : Scalar::real(static_cast<double>(n)));
            std::vector<Edge> edges;
            for (std::size_t i = 1; i <= n; ++i)
                for (std::size_t j = i + 1; j <= n; ++j)
                    edges.push_back({std::to_string(i), std::to_string(j), w});
            return WeightedGraph::build(std::move(labels), edges);
        }
        case Family::star: {
            // the unique graph of the star metric: unit star tree at vertex 1
            if (n < 2) fail(Errc::bad_parameter, "star family needs n >= 2");
            std::vector<std::string> labels;
            for (std::size_t i = 1; i <= n; ++i) labels.push_back(std::to_string(i));
            std::vector<Edge> edges;
            for (std::size_t i = 2; i <= n; ++i)
                edges.push_back({"1", std::to_string(i), Scalar::one(b)});
            return WeightedGraph::build(std::move(labels), edges);
        }
        case Family::tightness: return tightness_graph(n, b);
        case Family::two_ray: return two_ray_graph(n, false, b);
        case Family::two_ray_bridged: return two_ray_graph(n, true, b);
        case Family::transient: return transient_graph(n, b);
        case Family::path: return path_graph(n, b);
    }
    fail(Errc::unknown_family, "bad family");
}

MetricSpace family_metric(Family f, std::size_t n, Backend b, const TolerancePolicy& pol) {
    switch (f) {
        case Family::discrete: return discrete_metric(n, b);
        case Family::star: return star_metric(n, b);
        default: return effective_resistance(family_graph(f, n, b), pol);
    }
}

ExhaustionPlan plan_for_family(Family f, std::vector<std::size_t> sizes, Backend b,
                               const TolerancePolicy& pol) {
    if (sizes.empty()) fail(Errc::bad_parameter, "empty size schedule");
    for (std::size_t i = 0; i + 1 < sizes.size(); ++i)
        if (sizes[i] >= sizes[i + 1])
            fail(Errc::bad_parameter, "sizes must be strictly increasing");
    if (sizes.front() < 2) fail(Errc::bad_parameter, "smallest prefix must have 2 vertices");

    // One metric at the largest size; every step is a prefix restriction.
    std::size_t top = parameter_for_size(f, sizes.back());
    MetricSpace full = family_metric(f, top, b, pol);
    if (full.size() < sizes.back())
        fail(Errc::bad_parameter, "family instance smaller than requested prefix");
    return plan_for_metric(std::move(full), std::move(sizes));
}

ExhaustionPlan plan_for_metric(MetricSpace m, std::vector<std::size_t> sizes) {
    if (sizes.empty()) fail(Errc::bad_parameter, "empty size schedule");
    for (std::size_t i = 0; i + 1 < sizes.size(); ++i)
        if (sizes[i] >= sizes[i + 1])
            fail(Errc::bad_parameter, "sizes must be strictly increasing");
    if (sizes.back() > m.size())
        fail(Errc::bad_parameter, "prefix size exceeds metric size");
    ExhaustionPlan plan;
    plan.name = "metric";
    plan.sizes = std::move(sizes);
    plan.metric_at = [m = std::move(m)](std::size_t s) {
        std::vector<std::string> prefix(m.labels().begin(), m.labels().begin() + s);
        return m.restrict_to(prefix);
    };
    return plan;
}

ExhaustionTraces exhaustion_traces(const ExhaustionPlan& plan, const TolerancePolicy& pol) {
    ExhaustionTraces out;
    out.name = plan.name;
    out.sizes = plan.sizes;
    for (std::size_t k = 0; k < plan.sizes.size(); ++k) {
        MetricSpace m = plan.metric_at(plan.sizes[k]);
        if (m.size() != plan.sizes[k])
            fail(Errc::bad_parameter, "plan generator returned wrong prefix size");
        if (k > 0) {
            // nesting: the previous step must be the restriction of this one
            const MetricSpace& prev = out.metrics.back();
            MetricSpace back = m.restrict_to(prev.labels());
            if (!(back == prev))
                fail(Errc::bad_parameter,
                     "plan generator violates nesting between sizes " +
                         std::to_string(plan.sizes[k - 1]) + " and " +
                         std::to_string(plan.sizes[k]));
        }
        ErsVerdict v = recover_graph(m, pol);
        if (v.outcome != ErsOutcome::is_ers) {
            std::ostringstream msg;
            msg << "restriction to " << plan.sizes[k]
                << " vertices is not an effective resistance ("
                << ers_outcome_name(v.outcome);
            if (v.reason == ErsReason::singular_defect)
                msg << ", defect determinant " << v.defect_det->str() << " at anchor '"
                    << v.anchor << "'";
            if (v.reason == ErsReason::negative_weight)
                msg << ", negative weight " << v.witness_value->str() << " on ("
                    << v.witness_x << "," << v.witness_y << ")";
            msg << ")";
            fail(Errc::not_a_resistance_metric, msg.str());
        }
        out.metrics.push_back(std::move(m));
        out.graphs.push_back(std::move(*v.recovered));
    }
    return out;
}

const char* condition_c_name(ConditionC v) {
    switch (v) {
        case ConditionC::holds: return "holds";
        case ConditionC::fails_within: return "fails_within";
        case ConditionC::divergence_suspected: return "divergence_suspected";
    }
    return "?";
}

namespace {

Scalar tol_scalar(double tol, Backend b) {
    // exact conversion; doubles are dyadic rationals
    return b == Backend::rational ? Scalar::rational(mpq_class(tol)) : Scalar::real(tol);
}

bool deltas_stalled(const std::vector<Scalar>& v, const Scalar& tol) {
    if (v.size() < 2) return false;
    std::size_t deltas = std::min<std::size_t>(2, v.size() - 1);
    for (std::size_t k = 0; k < deltas; ++k) {
        Scalar d = (v[v.size() - 1 - k] - v[v.size() - 2 - k]).abs();
        if (d > tol) return false;
    }
    return true;
}

} // namespace

bool LimitGraphReport::condition_c_holds_at(const std::string& x) const {
    for (const auto& v : vertices)
        if (v.x == x) return v.verdict == ConditionC::holds;
    fail(Errc::unknown_vertex, "vertex '" + x + "' not covered by the report");
}

WeightedGraph LimitGraphReport::snapshot(Backend b) const {
    std::vector<std::string> labels;
    std::vector<Edge> edge_list;
    auto touch = [&](const std::string& l) {
        if (std::find(labels.begin(), labels.end(), l) == labels.end())
            labels.push_back(l);
    };
    for (const auto& e : edges) {
        if (!e.estimate || e.estimate->is_zero()) continue;
        touch(e.x);
        touch(e.y);
        edge_list.push_back({e.x, e.y, *e.estimate});
    }
    if (labels.size() < 2)
        fail(Errc::insufficient_data, "limit snapshot has fewer than 2 vertices");
    return WeightedGraph::build(std::move(labels), edge_list);
}

LimitGraphReport limit_graph_estimate(const ExhaustionTraces& traces,
                                      const LimitEstimateOptions& opts) {
    if (traces.graphs.size() < 3)
        fail(Errc::insufficient_data, "limit estimation needs at least 3 trace points");

    LimitGraphReport report;
    report.name = traces.name;
    report.sizes = traces.sizes;
    const Backend backend = traces.graphs.front().backend();
    const Scalar stall = tol_scalar(opts.stall_tol, backend);
    const Scalar cap = tol_scalar(opts.divergence_cap, backend);
    const Scalar eps = tol_scalar(opts.condition_eps, backend);

    const auto& top = traces.graphs.back();
    const auto& top_labels = top.labels();

    // edge trajectories over every prefix that contains both endpoints
    for (std::size_t a = 0; a < top_labels.size(); ++a)
        for (std::size_t b = a + 1; b < top_labels.size(); ++b) {
            EdgeTrajectory tr;
            tr.x = top_labels[a];
            tr.y = top_labels[b];
            for (std::size_t k = 0; k < traces.graphs.size(); ++k) {
                const auto& g = traces.graphs[k];
                const auto& ls = g.labels();
                if (std::find(ls.begin(), ls.end(), tr.x) == ls.end()) continue;
                if (std::find(ls.begin(), ls.end(), tr.y) == ls.end()) continue;
                tr.sizes.push_back(traces.sizes[k]);
                tr.values.push_back(g.weight(tr.x, tr.y));
            }
            if (tr.values.empty()) continue;
            tr.single_sample = tr.values.size() < 2;
            if (!tr.single_sample) {
                tr.estimate = tr.values.back();
                tr.stalled = deltas_stalled(tr.values, stall);
            }
            for (std::size_t k = 0; k + 1 < tr.values.size(); ++k)
                if (tr.values[k] < tr.values[k + 1])
                    report.monotonicity_violations.push_back(
                        "edge (" + tr.x + "," + tr.y + ") increased between sizes " +
                        std::to_string(tr.sizes[k]) + " and " + std::to_string(tr.sizes[k + 1]));
            report.edges.push_back(std::move(tr));
        }

    for (const auto& x : top_labels) {
        VertexDiagnostic diag;
        diag.x = x;
        for (std::size_t k = 0; k < traces.graphs.size(); ++k) {
            const auto& g = traces.graphs[k];
            const auto& ls = g.labels();
            if (std::find(ls.begin(), ls.end(), x) == ls.end()) continue;
            diag.sizes.push_back(traces.sizes[k]);
            diag.strengths.push_back(g.strength(g.index_of(x)));
        }
        for (std::size_t k = 0; k + 1 < diag.strengths.size(); ++k)
            if (diag.strengths[k] > diag.strengths[k + 1])
                report.monotonicity_violations.push_back(
                    "strength at " + x + " decreased between sizes " +
                    std::to_string(diag.sizes[k]) + " and " + std::to_string(diag.sizes[k + 1]));
        diag.strength_estimate = diag.strengths.back();
        diag.stalled = deltas_stalled(diag.strengths, stall);

        diag.edge_sum = Scalar::zero(backend);
        for (const auto& e : report.edges) {
            if (e.x != x && e.y != x) continue;
            if (e.estimate) diag.edge_sum += *e.estimate;
        }
        diag.gap = (diag.strength_estimate - diag.edge_sum).abs();

        bool over_cap = diag.strength_estimate > cap;
        bool increments_not_shrinking = false;
        if (!diag.stalled && diag.strengths.size() >= 3) {
            std::size_t m = diag.strengths.size();
            Scalar last = diag.strengths[m - 1] - diag.strengths[m - 2];
            Scalar prev = diag.strengths[m - 2] - diag.strengths[m - 3];
            increments_not_shrinking = last > stall && last >= prev;
        }
        if (over_cap || increments_not_shrinking)
            diag.verdict = ConditionC::divergence_suspected;
        else
            diag.verdict = diag.gap <= eps ? ConditionC::holds : ConditionC::fails_within;
        report.vertices.push_back(std::move(diag));
    }
    return report;
}

TwoRayIdentityReport two_ray_resistance_identity_check(std::size_t n, Backend b,
                                                       const TolerancePolicy& pol) {
    if (n < 2) fail(Errc::bad_parameter, "two-ray identity needs n >= 2");
    MetricSpace r1 = effective_resistance(two_ray_graph(n, false, b), pol);
    MetricSpace r2 = effective_resistance(two_ray_graph(n, true, b), pol);
    TwoRayIdentityReport report{n, false, Scalar::zero(b), 0};
    const Scalar four = Scalar::parse("4", b);
    const Scalar quarter = Scalar::one(b) / four;
    for (std::size_t i = 0; i < r1.size(); ++i)
        for (std::size_t j = 0; j < r1.size(); ++j) {
            Scalar predicted = quarter * r1.d(i, j) * (four - r1.d(i, j));
            Scalar dev = (r2.d(i, j) - predicted).abs();
            if (dev > report.max_deviation) report.max_deviation = dev;
            ++report.pairs_checked;
        }
    report.exact = report.max_deviation.is_zero();
    return report;
}

} // namespace resmet
