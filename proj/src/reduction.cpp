#include "resmet/reduction.hpp"

#include <algorithm>
#include <unordered_set>

namespace resmet {

WeightedGraph star_mesh(const WeightedGraph& g, const std::string& x0,
                        const TolerancePolicy& pol) {
    const std::size_t n = g.size();
    if (n < 3) fail(Errc::too_small, "star-mesh needs at least 3 vertices");
    const std::size_t r = g.index_of(x0);
    if (!is_connected(g, pol))
        fail(Errc::disconnected, "star-mesh input must be connected");

    Scalar hub = g.strength(r);
    std::vector<std::size_t> keep;
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i)
        if (i != r) {
            keep.push_back(i);
            labels.push_back(g.labels()[i]);
        }
    DenseMatrix c(labels, g.backend());
    for (std::size_t a = 0; a < keep.size(); ++a)
        for (std::size_t b = 0; b < keep.size(); ++b) {
            if (a == b) continue;
            c.at(a, b) = g.weight(keep[a], keep[b]) +
                         g.weight(keep[a], r) * g.weight(r, keep[b]) / hub;
        }
    WeightedGraph out = WeightedGraph::from_weights(std::move(c));
    // Exact arithmetic cannot disconnect here; float weights can fall
    // through the tolerance.
    if (!is_connected(out, pol))
        fail(Errc::disconnects, "star-mesh at '" + x0 + "' disconnected the survivors");
    return out;
}

ReductionTrace trace_to_subset(const WeightedGraph& g, const std::vector<std::string>& keep,
                               const TolerancePolicy& pol) {
    std::unordered_set<std::string> kept(keep.begin(), keep.end());
    std::vector<std::string> order;
    for (const auto& l : g.labels())
        if (!kept.count(l)) order.push_back(l);
    return trace_to_subset(g, keep, order, pol);
}

ReductionTrace trace_to_subset(const WeightedGraph& g, const std::vector<std::string>& keep,
                               const std::vector<std::string>& removal_order,
                               const TolerancePolicy& pol) {
    if (keep.size() < 2) fail(Errc::too_small, "trace target needs at least 2 vertices");
    std::unordered_set<std::string> kept(keep.begin(), keep.end());
    for (const auto& l : keep) (void)g.index_of(l);
    if (removal_order.size() + keep.size() != g.size())
        fail(Errc::bad_parameter, "removal order must cover exactly the dropped vertices");
    for (const auto& l : removal_order)
        if (kept.count(l))
            fail(Errc::bad_parameter, "removal order contains kept vertex '" + l + "'");

    ReductionTrace trace{g, {}};
    WeightedGraph current = g;
    for (const auto& victim : removal_order) {
        auto before = current.strengths();
        auto labels_before = current.labels();
        WeightedGraph next = star_mesh(current, victim, pol);
        ReductionStep step{victim, next, {}};
        for (std::size_t i = 0; i < labels_before.size(); ++i) {
            if (labels_before[i] == victim) continue;
            Scalar after = next.strength(next.index_of(labels_before[i]));
            step.strength_drop.emplace_back(labels_before[i], before[i] - after);
        }
        trace.steps.push_back(std::move(step));
        current = trace.steps.back().graph;
    }
    return trace;
}

MonotonicityReport monotonicity_report(const WeightedGraph& g,
                                       const std::vector<std::string>& v1,
                                       const std::vector<std::string>& v2,
                                       const TolerancePolicy& pol) {
    std::unordered_set<std::string> outer_set(v2.begin(), v2.end());
    for (const auto& l : v1)
        if (!outer_set.count(l))
            fail(Errc::bad_parameter, "V1 must be a subset of V2 ('" + l + "' missing)");

    MonotonicityReport report{
        trace_to_subset(g, v1, pol).result(),
        trace_to_subset(g, v2, pol).result(),
        {}};
    const auto& g1 = report.inner;
    const auto& g2 = report.outer;
    for (std::size_t a = 0; a < v1.size(); ++a) {
        const auto& x = v1[a];
        Scalar s1 = g1.strength(g1.index_of(x));
        Scalar s2 = g2.strength(g2.index_of(x));
        if (s1 > s2)
            report.violations.push_back({"strength", x, "", s1, s2});
        for (std::size_t b = 0; b < v1.size(); ++b) {
            if (a == b) continue;
            const auto& y = v1[b];
            Scalar w1 = g1.weight(x, y);
            Scalar w2 = g2.weight(x, y);
            if (w1 < w2)
                report.violations.push_back({"edge", x, y, w1, w2});
            if (w1 / s1 < w2 / s2)
                report.violations.push_back({"quotient", x, y, w1 / s1, w2 / s2});
        }
    }
    return report;
}

} // namespace resmet
