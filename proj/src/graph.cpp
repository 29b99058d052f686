#include "resmet/graph.hpp"

#include <algorithm>

namespace resmet {

WeightedGraph WeightedGraph::build(std::vector<std::string> labels,
                                   const std::vector<Edge>& edges) {
    Backend b = Backend::rational;
    if (!edges.empty()) b = edges.front().w.backend();
    DenseMatrix c(std::move(labels), b);
    for (const auto& e : edges) {
        std::size_t i = c.index_of(e.u);
        std::size_t j = c.index_of(e.v);
        if (i == j) fail(Errc::self_loop, "self-loop at '" + e.u + "'");
        if (e.w.is_negative())
            fail(Errc::negative_weight,
                 "negative weight " + e.w.str() + " on (" + e.u + "," + e.v + ")");
        if (!c.at(i, j).is_zero())
            fail(Errc::duplicate_edge, "duplicate edge (" + e.u + "," + e.v + ")");
        c.at(i, j) = e.w;
        c.at(j, i) = e.w;
    }
    return WeightedGraph(std::move(c));
}

WeightedGraph WeightedGraph::from_weights(DenseMatrix c) {
    const std::size_t n = c.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (!c.at(i, i).is_zero())
            fail(Errc::self_loop, "nonzero diagonal at '" + c.label(i) + "'");
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!(c.at(i, j) == c.at(j, i)))
                fail(Errc::not_symmetric,
                     "weights (" + c.label(i) + "," + c.label(j) + ") asymmetric");
            if (c.at(i, j).is_negative())
                fail(Errc::negative_weight,
                     "negative weight on (" + c.label(i) + "," + c.label(j) + ")");
        }
    }
    return WeightedGraph(std::move(c));
}

Scalar WeightedGraph::strength(std::size_t i) const {
    Scalar s = Scalar::zero(backend());
    for (std::size_t j = 0; j < size(); ++j) s += c_.at(i, j);
    return s;
}

std::vector<Scalar> WeightedGraph::strengths() const {
    std::vector<Scalar> out;
    out.reserve(size());
    for (std::size_t i = 0; i < size(); ++i) out.push_back(strength(i));
    return out;
}

std::vector<Edge> WeightedGraph::edges() const {
    std::vector<Edge> out;
    for (std::size_t i = 0; i < size(); ++i)
        for (std::size_t j = i + 1; j < size(); ++j)
            if (!c_.at(i, j).is_zero())
                out.push_back({c_.label(i), c_.label(j), c_.at(i, j)});
    return out;
}

namespace {

bool edge_present(const WeightedGraph& g, std::size_t i, std::size_t j,
                  const TolerancePolicy& pol) {
    if (g.backend() == Backend::rational) return !g.weight(i, j).is_zero();
    return g.weight(i, j).to_double() > pol.abs_tol;
}

} // namespace

bool is_connected(const WeightedGraph& g, const TolerancePolicy& pol) {
    const std::size_t n = g.size();
    if (n == 0) return false;
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    std::size_t count = 1;
    while (!stack.empty()) {
        std::size_t v = stack.back();
        stack.pop_back();
        for (std::size_t w = 0; w < n; ++w)
            if (!seen[w] && edge_present(g, v, w, pol)) {
                seen[w] = true;
                ++count;
                stack.push_back(w);
            }
    }
    return count == n;
}

DenseMatrix laplacian(const WeightedGraph& g, const TolerancePolicy& pol) {
    const std::size_t n = g.size();
    DenseMatrix l(g.labels(), g.backend());
    for (std::size_t x = 0; x < n; ++x) {
        Scalar cx = g.strength(x);
        if (sign_of(cx, pol).sign != Sign::positive)
            fail(Errc::isolated_vertex, "vertex '" + l.label(x) + "' has zero strength");
        for (std::size_t y = 0; y < n; ++y) {
            Scalar v = x == y ? Scalar::one(g.backend()) : Scalar::zero(g.backend());
            l.at(x, y) = v - g.weight(x, y) / cx;
        }
    }
    return l;
}

Scalar kirchhoff_minor_determinant(const WeightedGraph& g, const std::string& ground) {
    const std::size_t n = g.size();
    const std::size_t y = g.index_of(ground);
    DenseMatrix k(n - 1, g.backend());
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < n; ++i)
        if (i != y) keep.push_back(i);
    for (std::size_t a = 0; a < keep.size(); ++a)
        for (std::size_t b = 0; b < keep.size(); ++b)
            k.at(a, b) = a == b ? g.strength(keep[a]) : -g.weight(keep[a], keep[b]);
    return determinant(k);
}

Scalar energy(const WeightedGraph& g, const std::vector<Scalar>& u) {
    const std::size_t n = g.size();
    if (u.size() != n)
        fail(Errc::missing_value, "energy argument does not cover every vertex");
    Scalar total = Scalar::zero(g.backend());
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = x + 1; y < n; ++y) {
            if (g.weight(x, y).is_zero()) continue;
            Scalar diff = u[x] - u[y];
            total += g.weight(x, y) * diff * diff;
        }
    return total;
}

Scalar energy(const WeightedGraph& g, const std::vector<Scalar>& u,
              const std::vector<Scalar>& v) {
    const std::size_t n = g.size();
    if (u.size() != n || v.size() != n)
        fail(Errc::missing_value, "energy argument does not cover every vertex");
    std::vector<Scalar> plus(n, Scalar::zero(g.backend()));
    std::vector<Scalar> minus(n, Scalar::zero(g.backend()));
    for (std::size_t i = 0; i < n; ++i) {
        plus[i] = u[i] + v[i];
        minus[i] = u[i] - v[i];
    }
    Scalar quarter = g.backend() == Backend::rational ? Scalar::rational(1, 4)
                                                      : Scalar::real(0.25);
    return quarter * (energy(g, plus) - energy(g, minus));
}

MetricSpace geodesic_metric(const WeightedGraph& g, const TolerancePolicy& pol) {
    if (!is_connected(g, pol))
        fail(Errc::disconnected, "geodesic metric needs a connected graph");
    const std::size_t n = g.size();
    // Floyd-Warshall on edge lengths 1/c. "absent" tracked separately so the
    // rational backend never needs an infinity value.
    std::vector<std::vector<Scalar>> dist(n, std::vector<Scalar>(n, Scalar::zero(g.backend())));
    std::vector<std::vector<bool>> known(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) {
        known[i][i] = true;
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && edge_present(g, i, j, pol)) {
                dist[i][j] = Scalar::one(g.backend()) / g.weight(i, j);
                known[i][j] = true;
            }
    }
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i) {
            if (!known[i][k]) continue;
            for (std::size_t j = 0; j < n; ++j) {
                if (!known[k][j]) continue;
                Scalar via = dist[i][k] + dist[k][j];
                if (!known[i][j] || via < dist[i][j]) {
                    dist[i][j] = via;
                    known[i][j] = true;
                }
            }
        }
    DenseMatrix d(g.labels(), g.backend());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) d.at(i, j) = dist[i][j];
    return MetricSpace::trusted(std::move(d));
}

} // namespace resmet
