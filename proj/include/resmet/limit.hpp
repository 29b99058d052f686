#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "resmet/ers.hpp"

namespace resmet {

// Built-in infinite families (finite instances parameterized by n):
//   discrete    - metric, d = 1 off the diagonal, labels 1..n
//   star        - metric, d(1,k) = 1 and d(j,k) = 2 otherwise
//   tightness   - graph v0..vn: c(v0,vk) = 2^{1-k} (k<n), c(v0,vn) = 1,
//                 c(vk,vk+1) = 2^{k-1} - 1
//   two_ray     - graph on -n..n: c(x,y) = 2^{min|x|,|y|} for |x-y| = 1
//   two_ray_bridged - two_ray plus a bridge of weight 2^{n-2} between -n, n
//   transient   - graph B,T,0..n: unit edges B-0, T-0 and ray c(k,k+1) = 2^k
//   path        - unit-weight path 0..n (a recurrent reference family)
enum class Family { discrete, star, tightness, two_ray, two_ray_bridged, transient, path };

Family family_from_name(std::string_view name);
const char* family_name(Family f);

// The finite instance at parameter n, as the family defines it.
WeightedGraph family_graph(Family f, std::size_t n, Backend b = Backend::rational);

// The finite metric at parameter n: the distance matrix for metric families,
// the effective resistance for graph families.
MetricSpace family_metric(Family f, std::size_t n, Backend b = Backend::rational,
                          const TolerancePolicy& pol = {});

// An exhaustion: nested prefixes (first `size` labels in canonical order) of
// one countable metric. `metric_at(size)` must honor nesting; the trace run
// re-checks restriction consistency between consecutive sizes.
struct ExhaustionPlan {
    std::string name;
    std::vector<std::size_t> sizes;  // vertex counts, strictly increasing
    std::function<MetricSpace(std::size_t)> metric_at;
};

// Sizes are vertex counts. Family parameters are chosen minimally so the
// instance covers each requested prefix.
ExhaustionPlan plan_for_family(Family f, std::vector<std::size_t> sizes,
                               Backend b = Backend::rational,
                               const TolerancePolicy& pol = {});
ExhaustionPlan plan_for_metric(MetricSpace m, std::vector<std::size_t> sizes);

struct ExhaustionTraces {
    std::string name;
    std::vector<std::size_t> sizes;
    std::vector<MetricSpace> metrics;
    std::vector<WeightedGraph> graphs;  // recovered, one per size
};

// Recovers the unique graph of every restriction. Throws
// Errc::not_a_resistance_metric naming the first failing size.
ExhaustionTraces exhaustion_traces(const ExhaustionPlan& plan,
                                   const TolerancePolicy& pol = {});

struct LimitEstimateOptions {
    double stall_tol = 1e-6;      // successive-delta threshold for "stalled"
    double divergence_cap = 1e12; // strength beyond this is divergence
    double condition_eps = 1e-6;  // allowed gap for condition (C) to "hold"
};

struct EdgeTrajectory {
    std::string x, y;
    std::vector<std::size_t> sizes;
    std::vector<Scalar> values;
    bool single_sample = false;  // only seen in the largest prefix: no estimate
    bool stalled = false;
    std::optional<Scalar> estimate;  // last value; monotone upper bound
};

enum class ConditionC { holds, fails_within, divergence_suspected };

const char* condition_c_name(ConditionC v);

struct VertexDiagnostic {
    std::string x;
    std::vector<std::size_t> sizes;
    std::vector<Scalar> strengths;
    bool stalled = false;
    Scalar strength_estimate;  // last value; monotone lower bound
    Scalar edge_sum;           // sum of incident edge estimates
    Scalar gap;                // |strength_estimate - edge_sum|
    ConditionC verdict = ConditionC::holds;
};

struct LimitGraphReport {
    std::string name;
    std::vector<std::size_t> sizes;
    std::vector<EdgeTrajectory> edges;
    std::vector<VertexDiagnostic> vertices;
    // Monotonicity is a theorem for exact inputs; float runs report drift.
    std::vector<std::string> monotonicity_violations;

    bool condition_c_holds_at(const std::string& x) const;

    // Finite-horizon limit graph: estimated edges only; vertices that kept
    // no estimated edge are dropped.
    WeightedGraph snapshot(Backend b) const;
};

LimitGraphReport limit_graph_estimate(const ExhaustionTraces& traces,
                                      const LimitEstimateOptions& opts = {});

struct TwoRayIdentityReport {
    std::size_t n;
    bool exact = false;
    Scalar max_deviation;
    std::size_t pairs_checked = 0;
};

// R2(x,y) = R1(x,y) (4 - R1(x,y)) / 4 pairwise, where R1/R2 are the
// resistances of the two-ray family without and with the bridge.
TwoRayIdentityReport two_ray_resistance_identity_check(std::size_t n,
                                                       Backend b = Backend::rational,
                                                       const TolerancePolicy& pol = {});

} // namespace resmet
