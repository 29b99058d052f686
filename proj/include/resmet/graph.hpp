#pragma once

#include <string>
#include <vector>

#include "resmet/metric.hpp"

namespace resmet {

struct Edge {
    std::string u, v;
    Scalar w;
};

// Undirected weighted graph: symmetric non-negative conductances, zero
// diagonal. Vertex strength c_x is the row sum.
class WeightedGraph {
public:
    WeightedGraph() = default;

    // From an edge list. Rejects self-loops, negative weights, duplicate
    // edges and unknown endpoints. Zero-weight edges are allowed and mean
    // "no edge".
    static WeightedGraph build(std::vector<std::string> labels, const std::vector<Edge>& edges);

    // From a full weight matrix; validates symmetry, zero diagonal,
    // non-negativity.
    static WeightedGraph from_weights(DenseMatrix c);

    const std::vector<std::string>& labels() const { return c_.labels(); }
    std::size_t size() const { return c_.size(); }
    Backend backend() const { return c_.backend(); }
    const DenseMatrix& weights() const { return c_; }

    std::size_t index_of(const std::string& label) const { return c_.index_of(label); }
    const Scalar& weight(std::size_t i, std::size_t j) const { return c_.at(i, j); }
    const Scalar& weight(const std::string& x, const std::string& y) const {
        return c_.at(c_.index_of(x), c_.index_of(y));
    }

    Scalar strength(std::size_t i) const;
    std::vector<Scalar> strengths() const;

    std::vector<Edge> edges() const;

    bool operator==(const WeightedGraph& o) const { return c_ == o.c_; }

private:
    explicit WeightedGraph(DenseMatrix c) : c_(std::move(c)) {}
    DenseMatrix c_;
};

// True when every pair is joined by edges with weight > 0 (float mode:
// weight > pol.abs_tol).
bool is_connected(const WeightedGraph& g, const TolerancePolicy& pol = {});

// Normalized Laplacian: L(x,y) = delta_x(y) - c(x,y)/c_x. Rows sum to zero.
// Throws Errc::isolated_vertex when some c_x = 0.
DenseMatrix laplacian(const WeightedGraph& g, const TolerancePolicy& pol = {});

// Determinant of the Kirchhoff matrix (K(x,x) = c_x, K(x,y) = -c(x,y))
// with the row and column of `ground` deleted: the weighted spanning-tree
// sum, positive exactly when g is connected.
Scalar kirchhoff_minor_determinant(const WeightedGraph& g, const std::string& ground);

// Quadratic energy: sum over unordered pairs of c(x,y) (u(x)-u(y))^2.
Scalar energy(const WeightedGraph& g, const std::vector<Scalar>& u);

// Bilinear form by polarization: (E(u+v) - E(u-v)) / 4.
Scalar energy(const WeightedGraph& g, const std::vector<Scalar>& u,
              const std::vector<Scalar>& v);

// All-pairs shortest paths with edge length 1/c(x,y); requires connected g.
MetricSpace geodesic_metric(const WeightedGraph& g, const TolerancePolicy& pol = {});

} // namespace resmet
