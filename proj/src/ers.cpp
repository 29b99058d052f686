#include "resmet/ers.hpp"

#include <algorithm>
#include <cmath>

namespace resmet {

const char* ers_outcome_name(ErsOutcome o) {
    switch (o) {
        case ErsOutcome::is_ers: return "is_ers";
        case ErsOutcome::not_ers: return "not_ers";
        case ErsOutcome::indeterminate: return "indeterminate";
    }
    return "?";
}

const Scalar& Potential::at(const std::string& v) const {
    auto it = std::find(labels.begin(), labels.end(), v);
    if (it == labels.end()) fail(Errc::unknown_vertex, "unknown vertex '" + v + "'");
    return phi[static_cast<std::size_t>(it - labels.begin())];
}

Potential potential(const WeightedGraph& g, const std::string& x, const std::string& y,
                    const TolerancePolicy& pol) {
    if (x == y) fail(Errc::same_vertex, "potential needs two distinct vertices");
    if (!is_connected(g, pol))
        fail(Errc::disconnected, "potential needs a connected graph");
    const std::size_t n = g.size();
    const std::size_t xi = g.index_of(x);
    const std::size_t yi = g.index_of(y);

    // Ground y and solve the restricted normalized-Laplacian system; the
    // grounded column drops out because phi(y) = 0.
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < n; ++i)
        if (i != yi) keep.push_back(i);
    DenseMatrix a(n - 1, g.backend());
    std::vector<Scalar> rhs(n - 1, Scalar::zero(g.backend()));
    for (std::size_t r = 0; r < keep.size(); ++r) {
        Scalar cr = g.strength(keep[r]);
        for (std::size_t c = 0; c < keep.size(); ++c) {
            Scalar v = r == c ? Scalar::one(g.backend()) : Scalar::zero(g.backend());
            a.at(r, c) = v - g.weight(keep[r], keep[c]) / cr;
        }
        if (keep[r] == xi) rhs[r] = Scalar::one(g.backend()) / cr;
    }
    auto solved = solve_linear_system(a, rhs, pol);

    Potential out;
    out.source = x;
    out.sink = y;
    out.labels = g.labels();
    out.phi.assign(n, Scalar::zero(g.backend()));
    for (std::size_t r = 0; r < keep.size(); ++r) out.phi[keep[r]] = solved.x[r];
    return out;
}

MetricSpace effective_resistance(const WeightedGraph& g, const TolerancePolicy& pol) {
    if (!is_connected(g, pol))
        fail(Errc::disconnected, "effective resistance needs a connected graph");
    const std::size_t n = g.size();
    const std::size_t ground = n - 1;

    // Grounded Kirchhoff minor, inverted column by column; then
    // R(a,b) = G(a,a) + G(b,b) - 2 G(a,b) with G(ground,.) = 0.
    DenseMatrix k(n - 1, g.backend());
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = 0; j + 1 < n; ++j)
            k.at(i, j) = i == j ? g.strength(i) : -g.weight(i, j);
    auto f = lu_factorize(k);
    std::vector<std::vector<Scalar>> green;
    green.reserve(n - 1);
    for (std::size_t col = 0; col + 1 < n; ++col) {
        std::vector<Scalar> e(n - 1, Scalar::zero(g.backend()));
        e[col] = Scalar::one(g.backend());
        green.push_back(lu_solve(f, e, pol));
    }
    auto gval = [&](std::size_t a, std::size_t b) -> Scalar {
        if (a == ground || b == ground) return Scalar::zero(g.backend());
        return green[b][a];
    };
    DenseMatrix r(g.labels(), g.backend());
    Scalar two = Scalar::one(g.backend()) + Scalar::one(g.backend());
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            if (a == b) continue;
            r.at(a, b) = gval(a, a) + gval(b, b) - two * gval(a, b);
        }
    return validate_metric(std::move(r), pol);
}

ErsVerdict recover_graph(const MetricSpace& m, const TolerancePolicy& pol) {
    const std::size_t n = m.size();
    ErsVerdict verdict;
    verdict.anchor = m.labels().front();

    auto anchor_sys = defect_system(m, verdict.anchor);
    Scalar det = determinant(anchor_sys.reduced);
    verdict.defect_det = det;
    SignVerdict det_sign = sign_of(det, pol);
    if (det_sign.sign == Sign::indeterminate) {
        verdict.outcome = ErsOutcome::indeterminate;
        verdict.detail = "defect determinant " + det.str() + " inside tolerance band";
        return verdict;
    }
    if (det_sign.sign != Sign::positive) {
        verdict.outcome = ErsOutcome::not_ers;
        verdict.reason = ErsReason::singular_defect;
        return verdict;
    }

    // One solve per anchor: reduced(y) * c(.,y) = 1.
    DenseMatrix candidate(m.labels(), m.backend());
    double max_residual = 0.0;
    for (std::size_t y = 0; y < n; ++y) {
        auto sys = y == 0 ? std::move(anchor_sys) : defect_system(m, m.labels()[y]);
        std::vector<Scalar> ones(n - 1, Scalar::one(m.backend()));
        LinearSolve solved;
        try {
            solved = solve_linear_system(sys.reduced, ones, pol);
        } catch (const Error& e) {
            if (e.code() != Errc::singular_matrix) throw;
            // det A_y is anchor-independent, so an exact-mode singularity
            // here is impossible once the anchor test passed; float mode
            // can land in the band.
            if (m.backend() == Backend::rational) throw;
            verdict.outcome = ErsOutcome::indeterminate;
            verdict.detail = "anchor '" + m.labels()[y] + "' near-singular in float mode";
            return verdict;
        }
        max_residual = std::max(max_residual, solved.residual_inf.to_double());
        std::size_t r = 0;
        for (std::size_t x = 0; x < n; ++x) {
            if (x == y) continue;
            candidate.at(x, y) = solved.x[r++];
        }
    }
    verdict.max_residual = max_residual;

    // Symmetry is a theorem; a violation in float mode is numeric failure.
    if (m.backend() == Backend::rational) {
        if (!candidate.is_symmetric())
            fail(Errc::not_symmetric, "recovered weights asymmetric in exact mode");
    } else {
        double worst = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                worst = std::max(worst,
                                 std::abs(candidate.at(i, j).to_double() -
                                          candidate.at(j, i).to_double()));
        verdict.max_asymmetry = worst;
        if (worst > pol.abs_tol) {
            verdict.outcome = ErsOutcome::indeterminate;
            verdict.detail = "recovered weights asymmetric beyond tolerance";
            verdict.candidate = std::move(candidate);
            return verdict;
        }
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                Scalar avg = Scalar::real(
                    (candidate.at(i, j).to_double() + candidate.at(j, i).to_double()) / 2.0);
                candidate.at(i, j) = avg;
                candidate.at(j, i) = avg;
            }
    }

    verdict.candidate = candidate;
    bool any_indeterminate = false;
    std::string ind_detail;
    for (std::size_t x = 0; x < n && verdict.reason == ErsReason::none; ++x)
        for (std::size_t y = x + 1; y < n; ++y) {
            SignVerdict s = sign_of(candidate.at(x, y), pol);
            if (s.sign == Sign::negative) {
                verdict.outcome = ErsOutcome::not_ers;
                verdict.reason = ErsReason::negative_weight;
                verdict.witness_x = m.labels()[x];
                verdict.witness_y = m.labels()[y];
                verdict.witness_value = candidate.at(x, y);
                return verdict;
            }
            if (s.sign == Sign::indeterminate && !any_indeterminate) {
                any_indeterminate = true;
                ind_detail = "candidate weight (" + m.labels()[x] + "," + m.labels()[y] +
                             ") = " + candidate.at(x, y).str() + " inside tolerance band";
            }
        }
    if (any_indeterminate) {
        verdict.outcome = ErsOutcome::indeterminate;
        verdict.detail = ind_detail;
        return verdict;
    }

    WeightedGraph recovered = WeightedGraph::from_weights(candidate);
    if (!is_connected(recovered, pol)) {
        if (m.backend() == Backend::rational)
            fail(Errc::disconnected, "recovered graph disconnected in exact mode");
        verdict.outcome = ErsOutcome::indeterminate;
        verdict.detail = "recovered graph disconnected at tolerance";
        return verdict;
    }
    verdict.outcome = ErsOutcome::is_ers;
    verdict.recovered = std::move(recovered);
    return verdict;
}

RoundTripReport check_round_trip(const WeightedGraph& g, const TolerancePolicy& pol) {
    MetricSpace r = effective_resistance(g, pol);
    RoundTripReport report{false, recover_graph(r, pol), Scalar::zero(g.backend())};
    if (report.verdict.outcome == ErsOutcome::is_ers) {
        const auto& rec = report.verdict.recovered->weights();
        for (std::size_t i = 0; i < g.size(); ++i)
            for (std::size_t j = 0; j < g.size(); ++j) {
                Scalar diff = (rec.at(i, j) - g.weight(i, j)).abs();
                if (diff > report.max_discrepancy) report.max_discrepancy = diff;
            }
        report.exact = report.max_discrepancy.is_zero();
    }
    return report;
}

VariationalReport variational_check(const WeightedGraph& g, const std::string& x,
                                    const std::string& y, const TolerancePolicy& pol) {
    Potential p = potential(g, x, y, pol);
    const std::size_t n = g.size();
    const std::size_t xi = g.index_of(x);
    const std::size_t yi = g.index_of(y);

    VariationalReport report{p.phi[xi], energy(g, p.phi), false, false,
                             Scalar::zero(g.backend()), false};
    Scalar diff = (report.potential_energy - report.resistance).abs();
    report.energy_matches = g.backend() == Backend::rational
                                ? diff.is_zero()
                                : diff.to_double() <= pol.abs_tol;

    std::vector<Scalar> u(n, Scalar::zero(g.backend()));
    for (std::size_t i = 0; i < n; ++i) u[i] = p.phi[i] / report.resistance;
    report.normalization_ok = u[xi] == Scalar::one(g.backend()) && u[yi].is_zero();

    // E is quadratic, so the central difference equals the directional
    // derivative exactly for any step.
    Scalar eps = g.backend() == Backend::rational ? Scalar::rational(1, 1024)
                                                  : Scalar::real(1.0 / 1024);
    Scalar two_eps = eps + eps;
    for (std::size_t z = 0; z < n; ++z) {
        if (z == xi || z == yi) continue;
        std::vector<Scalar> up = u, down = u;
        up[z] += eps;
        down[z] -= eps;
        Scalar deriv = ((energy(g, up) - energy(g, down)) / two_eps).abs();
        if (deriv > report.max_stationarity_defect) report.max_stationarity_defect = deriv;
    }
    report.stationary = g.backend() == Backend::rational
                            ? report.max_stationarity_defect.is_zero()
                            : report.max_stationarity_defect.to_double() <= pol.abs_tol;
    return report;
}

} // namespace resmet
