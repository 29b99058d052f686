#pragma once

#include <optional>
#include <string>
#include <vector>

#include "resmet/graph.hpp"

namespace resmet {

// Unit-current potential between a source and a sink: phi(sink) = 0 and
// phi(source) equals the effective resistance.
struct Potential {
    std::string source, sink;
    std::vector<std::string> labels;
    std::vector<Scalar> phi;

    const Scalar& at(const std::string& v) const;
};

// phi solving L phi = (1/c_x) 1_x - (1/c_y) 1_y with phi(y) = 0.
Potential potential(const WeightedGraph& g, const std::string& x, const std::string& y,
                    const TolerancePolicy& pol = {});

// Pairwise effective resistances of a connected graph. The result is a
// metric space (validated on construction).
MetricSpace effective_resistance(const WeightedGraph& g, const TolerancePolicy& pol = {});

enum class ErsOutcome { is_ers, not_ers, indeterminate };
enum class ErsReason { none, singular_defect, negative_weight };

const char* ers_outcome_name(ErsOutcome o);

// Full outcome of the metric -> graph characterization. On acceptance the
// unique graph is attached; on rejection the witness is: the anchor whose
// reduced defect matrix is singular (or negative-determinant), or the
// entry of the candidate solution that came out negative. The candidate
// weight matrix is attached whenever the linear systems were solved.
struct ErsVerdict {
    ErsOutcome outcome = ErsOutcome::indeterminate;
    ErsReason reason = ErsReason::none;

    std::optional<WeightedGraph> recovered;

    std::string anchor;                 // anchor used for the determinant test
    std::optional<Scalar> defect_det;   // det at that anchor
    std::string witness_x, witness_y;   // negative-weight witness
    std::optional<Scalar> witness_value;
    std::optional<DenseMatrix> candidate;

    std::string detail;                 // indeterminate explanation
    double max_residual = 0.0;          // float mode solver residual
    double max_asymmetry = 0.0;         // float mode, before symmetrization
};

// Decides whether m is the effective resistance of a (then unique) graph:
// the determinant test at one anchor, then one linear solve per anchor and
// a sign check of every candidate weight. Float mode may return
// `indeterminate` instead of guessing near the tolerance band.
ErsVerdict recover_graph(const MetricSpace& m, const TolerancePolicy& pol = {});

struct RoundTripReport {
    bool exact = false;
    ErsVerdict verdict;
    Scalar max_discrepancy;  // max |recovered - original| entrywise
};

// recover_graph(effective_resistance(g)) must reproduce g; rational mode
// demands exact equality.
RoundTripReport check_round_trip(const WeightedGraph& g, const TolerancePolicy& pol = {});

struct VariationalReport {
    Scalar resistance;        // R(x,y) from the potential
    Scalar potential_energy;  // E(phi) — equals R(x,y)
    bool energy_matches = false;
    bool normalization_ok = false;        // u = phi/R has u(x)=1, u(y)=0
    Scalar max_stationarity_defect;       // max_z |dE/deps at z|, finite difference
    bool stationary = false;
};

// Checks E(phi) = R(x,y) and first-order stationarity of the energy at the
// normalized potential under single-vertex perturbations.
VariationalReport variational_check(const WeightedGraph& g, const std::string& x,
                                    const std::string& y, const TolerancePolicy& pol = {});

} // namespace resmet
