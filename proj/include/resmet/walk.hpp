#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "resmet/limit.hpp"

namespace resmet {

struct WalkTrace {
    enum class Stop { hit_target, step_cap };
    std::string start;
    std::vector<std::string> steps;  // includes the start vertex
    Stop cause = Stop::step_cap;
};

// One trajectory with transition weights c(y,z)/c_y, halting at the target
// or the step cap. Deterministic in (seed).
WalkTrace simulate_walk(const WeightedGraph& g, const std::string& start,
                        const std::string& target, std::uint64_t step_cap,
                        std::uint64_t seed);

// First-event split of the walk started at x: return to x, strict hit of y,
// or absorption at a boundary vertex (the finite stand-in for escape to
// infinity). Without a boundary, p_return + p_hit = 1.
// P[tau_y <= tau_x+] with ties at infinity counted toward y is
// p_hit + p_escape.
struct HitReturnSplit {
    Scalar p_return;
    Scalar p_hit;
    Scalar p_escape;
    Scalar p_hit_weak() const { return p_hit + p_escape; }
};

HitReturnSplit exact_return_vs_hit(const WeightedGraph& g, const std::string& x,
                                   const std::string& y,
                                   const std::vector<std::string>& boundary = {},
                                   const TolerancePolicy& pol = {});

// E[number of visits to x strictly before tau_y] = 1/(1 - p_return),
// the geometric-law route.
Scalar exact_expected_visits(const WeightedGraph& g, const std::string& x,
                             const std::string& y, const TolerancePolicy& pol = {});

// The fundamental-matrix route: E_x[visits to z before tau_y] for every z,
// aligned with g.labels() (zero at y). Entry at x is E[Phi] again — the two
// routes cross-check each other.
std::vector<Scalar> expected_visits_vector(const WeightedGraph& g, const std::string& x,
                                           const std::string& y,
                                           const TolerancePolicy& pol = {});

struct McEstimate {
    double estimate = 0.0;   // mean(Phi) / c_x over completed walks
    double std_error = 0.0;
    std::uint64_t samples = 0;  // completed walks
    std::uint64_t capped = 0;   // excluded; nonzero means biased downward
    std::uint64_t seed = 0;
    unsigned workers = 1;
    double mean_phi = 0.0;
    double var_phi = 0.0;
};

// Monte-Carlo effective resistance. Per-walk RNG streams depend only on
// (seed, walk index) and tallies are integer sums, so the estimate is
// bit-identical for any worker count.
McEstimate mc_resistance(const WeightedGraph& g, const std::string& x,
                         const std::string& y, std::uint64_t walks,
                         std::uint64_t step_cap, std::uint64_t seed,
                         unsigned workers = 1, const TolerancePolicy& pol = {});

struct PhiLawReport {
    double p = 0.0;  // exact return-before-hit probability
    std::map<std::uint64_t, std::uint64_t> histogram;
    std::uint64_t samples = 0;
    std::uint64_t capped = 0;
    double chi_square = 0.0;
    unsigned dof = 0;
    double p_value = 1.0;
    double alpha = 0.01;
    bool distribution_ok = false;
    double sample_mean = 0.0, expected_mean = 0.0, mean_band = 0.0;
    bool mean_ok = false;
    double sample_variance = 0.0, expected_variance = 0.0, variance_band = 0.0;
    bool variance_ok = false;
};

// Samples Phi and tests it against the geometric law with the exactly
// solved parameter: chi-square on the histogram plus first/second moment
// bands (3 standard errors).
PhiLawReport phi_law_check(const WeightedGraph& g, const std::string& x,
                           const std::string& y, std::uint64_t samples,
                           std::uint64_t step_cap, std::uint64_t seed,
                           double alpha = 0.01, unsigned workers = 1,
                           const TolerancePolicy& pol = {});

struct LimitWalkReport {
    double family_resistance = 0.0;
    McEstimate mc;
    bool resistance_ok = false;
    double max_transition_gap = 0.0;
    double transition_band = 0.0;
    bool transitions_ok = false;
    bool trivial = false;  // x == y
};

// Monte-Carlo consistency of a family's metric with the random walk on the
// finite-horizon limit graph. Refuses when condition (C) fails at x or y
// and, because transience has no finite certificate, when the caller has
// not asserted recurrence.
LimitWalkReport limit_walk_consistency(const ExhaustionTraces& traces,
                                       const LimitGraphReport& report,
                                       const std::string& x, const std::string& y,
                                       std::uint64_t samples, std::uint64_t step_cap,
                                       std::uint64_t seed, bool recurrence_asserted,
                                       unsigned workers = 1,
                                       const TolerancePolicy& pol = {});

} // namespace resmet
