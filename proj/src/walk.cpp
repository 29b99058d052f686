#include "resmet/walk.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <cmath>
#include <thread>

namespace resmet {

namespace {

std::uint64_t splitmix64(std::uint64_t& s) {
    s += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Stream keyed by (seed, counter); walk results depend only on the key, so
// scheduling and worker count cannot change them.
class KeyedRng {
public:
    KeyedRng(std::uint64_t seed, std::uint64_t counter) {
        std::uint64_t s = seed;
        std::uint64_t a = splitmix64(s);
        s = a ^ (counter + 0x9e3779b97f4a7c15ULL);
        state_ = splitmix64(s) ^ counter;
    }

    double uniform() {  // [0, 1)
        return static_cast<double>(splitmix64(state_) >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

// Per-vertex cumulative transition weights in double precision, shared by
// every sampled walk.
class TransitionSampler {
public:
    explicit TransitionSampler(const WeightedGraph& g) {
        const std::size_t n = g.size();
        rows_.resize(n);
        totals_.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            double total = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                double w = g.weight(i, j).to_double();
                if (w > 0.0) {
                    total += w;
                    rows_[i].push_back({total, j});
                }
            }
            if (total <= 0.0)
                fail(Errc::isolated_vertex,
                     "vertex '" + g.labels()[i] + "' has no positive edge");
            totals_[i] = total;
        }
    }

    std::size_t step(std::size_t from, double u) const {
        double target = u * totals_[from];
        for (const auto& [cum, j] : rows_[from])
            if (target < cum) return j;
        return rows_[from].back().second;
    }

private:
    std::vector<std::vector<std::pair<double, std::size_t>>> rows_;
    std::vector<double> totals_;
};

struct PhiSample {
    std::uint64_t phi = 0;
    bool capped = false;
};

PhiSample sample_phi(const TransitionSampler& sampler, std::size_t x, std::size_t y,
                     std::uint64_t step_cap, KeyedRng& rng) {
    PhiSample out;
    std::size_t pos = x;
    out.phi = 1;  // the walk starts at x
    for (std::uint64_t step = 0; step < step_cap; ++step) {
        pos = sampler.step(pos, rng.uniform());
        if (pos == y) return out;
        if (pos == x) ++out.phi;
    }
    out.capped = true;
    return out;
}

struct Tally {
    std::uint64_t count = 0;
    std::uint64_t capped = 0;
    std::uint64_t sum = 0;
    std::uint64_t sum_sq = 0;  // documented ranges keep this within 64 bits
    std::map<std::uint64_t, std::uint64_t> histogram;
};

// Runs walks [begin, end) and tallies integer sums; merging tallies is
// order-independent, which is what makes worker count irrelevant.
Tally run_walks(const TransitionSampler& sampler, std::size_t x, std::size_t y,
                std::uint64_t begin, std::uint64_t end, std::uint64_t step_cap,
                std::uint64_t seed, bool keep_histogram) {
    Tally t;
    for (std::uint64_t k = begin; k < end; ++k) {
        KeyedRng rng(seed, k);
        PhiSample s = sample_phi(sampler, x, y, step_cap, rng);
        if (s.capped) {
            ++t.capped;
            continue;
        }
        ++t.count;
        t.sum += s.phi;
        t.sum_sq += s.phi * s.phi;
        if (keep_histogram) ++t.histogram[s.phi];
    }
    return t;
}

Tally run_walks_parallel(const WeightedGraph& g, std::size_t x, std::size_t y,
                         std::uint64_t walks, std::uint64_t step_cap,
                         std::uint64_t seed, unsigned workers, bool keep_histogram) {
    TransitionSampler sampler(g);
    if (workers <= 1) return run_walks(sampler, x, y, 0, walks, step_cap, seed, keep_histogram);
    std::vector<Tally> parts(workers);
    std::vector<std::thread> pool;
    std::uint64_t chunk = (walks + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        std::uint64_t begin = std::min<std::uint64_t>(walks, w * chunk);
        std::uint64_t end = std::min<std::uint64_t>(walks, begin + chunk);
        pool.emplace_back([&, w, begin, end] {
            parts[w] = run_walks(sampler, x, y, begin, end, step_cap, seed, keep_histogram);
        });
    }
    for (auto& th : pool) th.join();
    Tally total;
    for (const auto& p : parts) {
        total.count += p.count;
        total.capped += p.capped;
        total.sum += p.sum;
        total.sum_sq += p.sum_sq;
        for (const auto& [k, v] : p.histogram) total.histogram[k] += v;
    }
    return total;
}

// First-hit probabilities toward `target` with the whole set `absorbing`
// absorbing: solve (I - Q) h = P(., target) on the interior.
std::vector<Scalar> hit_probability(const WeightedGraph& g,
                                    const std::vector<std::size_t>& interior,
                                    std::size_t target,
                                    const TolerancePolicy& pol) {
    const Backend b = g.backend();
    DenseMatrix a(interior.size(), b);
    std::vector<Scalar> rhs(interior.size(), Scalar::zero(b));
    for (std::size_t r = 0; r < interior.size(); ++r) {
        Scalar cr = g.strength(interior[r]);
        for (std::size_t c = 0; c < interior.size(); ++c) {
            Scalar v = r == c ? Scalar::one(b) : Scalar::zero(b);
            a.at(r, c) = v - g.weight(interior[r], interior[c]) / cr;
        }
        rhs[r] = g.weight(interior[r], target) / cr;
    }
    return solve_linear_system(a, rhs, pol).x;
}

} // namespace

WalkTrace simulate_walk(const WeightedGraph& g, const std::string& start,
                        const std::string& target, std::uint64_t step_cap,
                        std::uint64_t seed) {
    if (step_cap < 1) fail(Errc::bad_parameter, "step cap must be at least 1");
    const std::size_t s = g.index_of(start);
    const std::size_t t = g.index_of(target);
    TransitionSampler sampler(g);
    KeyedRng rng(seed, 0);
    WalkTrace trace;
    trace.start = start;
    trace.steps.push_back(start);
    std::size_t pos = s;
    for (std::uint64_t step = 0; step < step_cap; ++step) {
        pos = sampler.step(pos, rng.uniform());
        trace.steps.push_back(g.labels()[pos]);
        if (pos == t) {
            trace.cause = WalkTrace::Stop::hit_target;
            return trace;
        }
    }
    trace.cause = WalkTrace::Stop::step_cap;
    return trace;
}

HitReturnSplit exact_return_vs_hit(const WeightedGraph& g, const std::string& x,
                                   const std::string& y,
                                   const std::vector<std::string>& boundary,
                                   const TolerancePolicy& pol) {
    if (x == y) fail(Errc::same_vertex, "return-vs-hit needs two distinct vertices");
    if (!is_connected(g, pol))
        fail(Errc::disconnected, "return-vs-hit needs a connected graph");
    const std::size_t xi = g.index_of(x);
    const std::size_t yi = g.index_of(y);
    std::vector<bool> absorbed(g.size(), false);
    absorbed[xi] = absorbed[yi] = true;
    for (const auto& l : boundary) {
        std::size_t i = g.index_of(l);
        if (i == xi || i == yi)
            fail(Errc::bad_parameter, "boundary may not contain the endpoints");
        absorbed[i] = true;
    }
    std::vector<std::size_t> interior;
    for (std::size_t i = 0; i < g.size(); ++i)
        if (!absorbed[i]) interior.push_back(i);

    auto h_x = hit_probability(g, interior, xi, pol);
    auto h_y = hit_probability(g, interior, yi, pol);

    const Backend b = g.backend();
    Scalar cx = g.strength(xi);
    HitReturnSplit split{Scalar::zero(b), Scalar::zero(b), Scalar::zero(b)};
    split.p_hit = g.weight(xi, yi) / cx;  // one-step hit
    for (std::size_t r = 0; r < interior.size(); ++r) {
        Scalar step = g.weight(xi, interior[r]) / cx;
        split.p_return += step * h_x[r];
        split.p_hit += step * h_y[r];
    }
    split.p_escape = Scalar::one(b) - split.p_return - split.p_hit;
    return split;
}

Scalar exact_expected_visits(const WeightedGraph& g, const std::string& x,
                             const std::string& y, const TolerancePolicy& pol) {
    Scalar p = exact_return_vs_hit(g, x, y, {}, pol).p_return;
    Scalar one = Scalar::one(g.backend());
    if (sign_of(one - p, pol).sign != Sign::positive)
        fail(Errc::p_equals_one, "return probability is 1; expected visits diverge");
    return one / (one - p);
}

std::vector<Scalar> expected_visits_vector(const WeightedGraph& g, const std::string& x,
                                           const std::string& y,
                                           const TolerancePolicy& pol) {
    if (x == y) fail(Errc::same_vertex, "expected visits need two distinct vertices");
    if (!is_connected(g, pol))
        fail(Errc::disconnected, "expected visits need a connected graph");
    const Backend b = g.backend();
    const std::size_t n = g.size();
    const std::size_t xi = g.index_of(x);
    const std::size_t yi = g.index_of(y);
    std::vector<std::size_t> interior;
    for (std::size_t i = 0; i < n; ++i)
        if (i != yi) interior.push_back(i);

    // row x of (I - Q)^{-1}: solve the transposed system with e_x
    DenseMatrix a(interior.size(), b);
    std::vector<Scalar> rhs(interior.size(), Scalar::zero(b));
    for (std::size_t r = 0; r < interior.size(); ++r) {
        for (std::size_t c = 0; c < interior.size(); ++c) {
            Scalar v = r == c ? Scalar::one(b) : Scalar::zero(b);
            // (I - Q)^T (r,c) = delta - Q(c,r)
            a.at(r, c) = v - g.weight(interior[c], interior[r]) / g.strength(interior[c]);
        }
        if (interior[r] == xi) rhs[r] = Scalar::one(b);
    }
    auto solved = solve_linear_system(a, rhs, pol);
    std::vector<Scalar> out(n, Scalar::zero(b));
    for (std::size_t r = 0; r < interior.size(); ++r) out[interior[r]] = solved.x[r];
    return out;
}

McEstimate mc_resistance(const WeightedGraph& g, const std::string& x,
                         const std::string& y, std::uint64_t walks,
                         std::uint64_t step_cap, std::uint64_t seed,
                         unsigned workers, const TolerancePolicy& pol) {
    if (walks < 1) fail(Errc::bad_parameter, "need at least one walk");
    McEstimate est;
    est.seed = seed;
    est.workers = std::max(1u, workers);
    if (x == y) {  // Phi is identically zero
        est.samples = walks;
        return est;
    }
    if (!is_connected(g, pol))
        fail(Errc::disconnected, "walk sampling needs a connected graph");
    const std::size_t xi = g.index_of(x);
    const std::size_t yi = g.index_of(y);
    Tally t = run_walks_parallel(g, xi, yi, walks, step_cap, seed, est.workers, false);
    if (t.count == 0)
        fail(Errc::insufficient_data, "every walk hit the step cap");
    est.samples = t.count;
    est.capped = t.capped;
    double m = static_cast<double>(t.count);
    est.mean_phi = static_cast<double>(t.sum) / m;
    if (t.count > 1) {
        double sum = static_cast<double>(t.sum);
        est.var_phi = (static_cast<double>(t.sum_sq) - sum * sum / m) / (m - 1.0);
        est.var_phi = std::max(est.var_phi, 0.0);
    }
    double cx = g.strength(xi).to_double();
    est.estimate = est.mean_phi / cx;
    est.std_error = std::sqrt(est.var_phi / m) / cx;
    return est;
}

PhiLawReport phi_law_check(const WeightedGraph& g, const std::string& x,
                           const std::string& y, std::uint64_t samples,
                           std::uint64_t step_cap, std::uint64_t seed, double alpha,
                           unsigned workers, const TolerancePolicy& pol) {
    if (samples < 100) fail(Errc::bad_parameter, "need at least 100 samples");
    PhiLawReport report;
    report.alpha = alpha;
    report.p = exact_return_vs_hit(g, x, y, {}, pol).p_return.to_double();

    const std::size_t xi = g.index_of(x);
    const std::size_t yi = g.index_of(y);
    Tally t = run_walks_parallel(g, xi, yi, samples, step_cap, seed,
                                 std::max(1u, workers), true);
    if (t.count == 0) fail(Errc::insufficient_data, "every walk hit the step cap");
    report.histogram = std::move(t.histogram);
    report.samples = t.count;
    report.capped = t.capped;

    const double p = report.p;
    const double m = static_cast<double>(t.count);
    report.sample_mean = static_cast<double>(t.sum) / m;
    report.expected_mean = 1.0 / (1.0 - p);
    double sum = static_cast<double>(t.sum);
    report.sample_variance =
        t.count > 1
            ? std::max(0.0, (static_cast<double>(t.sum_sq) - sum * sum / m) / (m - 1.0))
            : 0.0;
    report.expected_variance = p / ((1.0 - p) * (1.0 - p));
    report.mean_band = 3.0 * std::sqrt(report.expected_variance / m);
    report.mean_ok = std::abs(report.sample_mean - report.expected_mean) <= report.mean_band;

    // variance band from the sampling variance of S^2 (fourth central moment
    // of the geometric law: E(X-mu)^4 = (p^3 + 18p^2 + 9p) / (1-p)^4 + 3 var^2 - ...
    // use the empirical fourth moment instead of the closed form)
    double mu4 = 0.0;
    for (const auto& [k, cnt] : report.histogram) {
        double d = static_cast<double>(k) - report.sample_mean;
        mu4 += static_cast<double>(cnt) * d * d * d * d;
    }
    mu4 /= m;
    double var_of_s2 = (mu4 - report.sample_variance * report.sample_variance) / m;
    report.variance_band = 3.0 * std::sqrt(std::max(var_of_s2, 0.0));
    report.variance_ok =
        std::abs(report.sample_variance - report.expected_variance) <= report.variance_band;

    if (p <= 0.0) {  // degenerate law: all mass at Phi = 1
        report.distribution_ok =
            report.histogram.size() == 1 && report.histogram.count(1) == 1;
        report.p_value = report.distribution_ok ? 1.0 : 0.0;
        report.dof = 0;
        return report;
    }

    // chi-square bins 1..K-1 plus pooled tail, expected count >= 5 each
    std::vector<double> expected;
    std::vector<double> observed;
    std::uint64_t k = 1;
    double tail_prob = 1.0;  // P[Phi >= k]
    while (true) {
        double bin_prob = (1.0 - p) * std::pow(p, static_cast<double>(k - 1));
        double rest = tail_prob - bin_prob;
        if (m * bin_prob < 5.0 || m * rest < 5.0) break;
        expected.push_back(m * bin_prob);
        auto it = report.histogram.find(k);
        observed.push_back(it == report.histogram.end() ? 0.0
                                                        : static_cast<double>(it->second));
        tail_prob = rest;
        ++k;
    }
    // tail bin >= k
    expected.push_back(m * tail_prob);
    double tail_obs = 0.0;
    for (const auto& [kk, cnt] : report.histogram)
        if (kk >= k) tail_obs += static_cast<double>(cnt);
    observed.push_back(tail_obs);

    if (expected.size() < 2) {
        report.distribution_ok = true;  // nothing to test beyond the mean
        report.p_value = 1.0;
        report.dof = 0;
        return report;
    }
    double chi2 = 0.0;
    for (std::size_t i = 0; i < expected.size(); ++i) {
        double d = observed[i] - expected[i];
        chi2 += d * d / expected[i];
    }
    report.chi_square = chi2;
    report.dof = static_cast<unsigned>(expected.size() - 1);
    boost::math::chi_squared dist(report.dof);
    report.p_value = boost::math::cdf(boost::math::complement(dist, chi2));
    report.distribution_ok = report.p_value >= alpha;
    return report;
}

LimitWalkReport limit_walk_consistency(const ExhaustionTraces& traces,
                                       const LimitGraphReport& report,
                                       const std::string& x, const std::string& y,
                                       std::uint64_t samples, std::uint64_t step_cap,
                                       std::uint64_t seed, bool recurrence_asserted,
                                       unsigned workers, const TolerancePolicy& pol) {
    LimitWalkReport out;
    if (x == y) {
        out.trivial = true;
        out.resistance_ok = true;
        out.transitions_ok = true;
        return out;
    }
    for (const auto& v : {x, y})
        if (!report.condition_c_holds_at(v))
            fail(Errc::condition_c_fails,
                 "condition (C) does not hold at '" + v +
                     "'; the walk laws are not tight along this exhaustion");
    if (!recurrence_asserted)
        fail(Errc::recurrence_not_asserted,
             "recurrence of the limit graph cannot be certified from finitely many "
             "truncations (the built-in 'transient' family passes every finite check "
             "yet is transient, and the 'two-ray' family carries two distinct metrics "
             "over one limit graph); pass --assert-recurrent to proceed");

    const Backend b = traces.graphs.back().backend();
    WeightedGraph limit = report.snapshot(b);
    out.family_resistance = traces.metrics.back().d(x, y).to_double();
    out.mc = mc_resistance(limit, x, y, samples, step_cap, seed, workers, pol);
    double band = 3.0 * out.mc.std_error;
    out.resistance_ok = std::abs(out.mc.estimate - out.family_resistance) <= band;

    // one-step frequencies on the largest trace vs the limit graph's law
    const WeightedGraph& top = traces.graphs.back();
    const std::size_t xi = top.index_of(x);
    TransitionSampler sampler(top);
    std::vector<std::uint64_t> counts(top.size(), 0);
    for (std::uint64_t kk = 0; kk < samples; ++kk) {
        KeyedRng rng(seed ^ 0x517cc1b727220a95ULL, kk);
        ++counts[sampler.step(xi, rng.uniform())];
    }
    Scalar cx = limit.strength(limit.index_of(x));
    out.transition_band = 0.0;
    for (std::size_t j = 0; j < top.size(); ++j) {
        const std::string& lbl = top.labels()[j];
        double q = 0.0;
        auto& ll = limit.labels();
        if (std::find(ll.begin(), ll.end(), lbl) != ll.end())
            q = (limit.weight(x, lbl) / cx).to_double();
        double freq = static_cast<double>(counts[j]) / static_cast<double>(samples);
        double sigma = std::sqrt(std::max(q * (1.0 - q), 1e-12) / static_cast<double>(samples));
        out.max_transition_gap = std::max(out.max_transition_gap, std::abs(freq - q));
        out.transition_band = std::max(out.transition_band, 3.0 * sigma + 10.0 * pol.abs_tol);
    }
    out.transitions_ok = out.max_transition_gap <= out.transition_band;
    return out;
}

} // namespace resmet
