#pragma once

#include <string>
#include <vector>

#include "resmet/graph.hpp"

namespace resmet {

// Removes x0, compensating with c(x,x0) c(x0,y) / c_{x0} on every surviving
// pair so that effective resistances among survivors are unchanged.
WeightedGraph star_mesh(const WeightedGraph& g, const std::string& x0,
                        const TolerancePolicy& pol = {});

struct ReductionStep {
    std::string removed;
    WeightedGraph graph;
    // (vertex, c_x before - c_x after), for the survivors
    std::vector<std::pair<std::string, Scalar>> strength_drop;
};

struct ReductionTrace {
    WeightedGraph original;
    std::vector<ReductionStep> steps;

    const WeightedGraph& result() const {
        return steps.empty() ? original : steps.back().graph;
    }
};

// Iterated star-mesh down to the kept vertex set. Removal order defaults to
// input label order of the dropped vertices; the endpoint is order-independent.
ReductionTrace trace_to_subset(const WeightedGraph& g, const std::vector<std::string>& keep,
                               const TolerancePolicy& pol = {});
ReductionTrace trace_to_subset(const WeightedGraph& g, const std::vector<std::string>& keep,
                               const std::vector<std::string>& removal_order,
                               const TolerancePolicy& pol = {});

struct MonotonicityViolation {
    std::string kind;  // "edge", "strength", "quotient"
    std::string x, y;
    Scalar inner_value, outer_value;
};

struct MonotonicityReport {
    WeightedGraph inner;   // trace to V1
    WeightedGraph outer;   // trace to V2
    std::vector<MonotonicityViolation> violations;
    bool ok() const { return violations.empty(); }
};

// With g1 = trace(g,V1) and g2 = trace(g,V2), V1 subset of V2: checks
// c1(x,y) >= c2(x,y), (c1)_x <= (c2)_x and c1(x,y)/(c1)_x >= c2(x,y)/(c2)_x
// on V1.
MonotonicityReport monotonicity_report(const WeightedGraph& g,
                                       const std::vector<std::string>& v1,
                                       const std::vector<std::string>& v2,
                                       const TolerancePolicy& pol = {});

} // namespace resmet
