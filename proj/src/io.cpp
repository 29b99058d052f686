#include "resmet/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace resmet {

Scalar scalar_from_json(const json& j, Backend b) {
    if (j.is_string()) return Scalar::parse(j.get<std::string>(), b);
    if (j.is_number_integer()) {
        long v = j.get<long>();
        return b == Backend::rational ? Scalar::rational(v)
                                      : Scalar::real(static_cast<double>(v));
    }
    if (j.is_number_float()) {
        double v = j.get<double>();
        if (b == Backend::float64) return Scalar::real(v);
        char buf[32];
        auto res = std::to_chars(buf, buf + sizeof(buf), v);
        return Scalar::parse(std::string_view(buf, res.ptr - buf), b);
    }
    fail(Errc::parse_error, "scalar literal must be a number or string");
}

json scalar_to_json(const Scalar& s) {
    if (s.is_rational()) return s.str();
    return s.to_double();
}

MetricSpace metric_from_json(const json& j, Backend b, const TolerancePolicy& pol) {
    if (!j.is_object() || !j.contains("labels") || !j.contains("d"))
        fail(Errc::parse_error, "metric file needs 'labels' and 'd'");
    std::vector<std::string> labels = j.at("labels").get<std::vector<std::string>>();
    const json& rows = j.at("d");
    if (!rows.is_array() || rows.size() != labels.size())
        fail(Errc::parse_error, "'d' must be a square matrix over the labels");
    DenseMatrix d(labels, b);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (!rows[i].is_array() || rows[i].size() != labels.size())
            fail(Errc::parse_error, "'d' must be a square matrix over the labels");
        for (std::size_t k = 0; k < labels.size(); ++k)
            d.at(i, k) = scalar_from_json(rows[i][k], b);
    }
    return validate_metric(std::move(d), pol);
}

json metric_to_json(const MetricSpace& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.size(); ++i) {
        json row = json::array();
        for (std::size_t k = 0; k < m.size(); ++k) row.push_back(scalar_to_json(m.d(i, k)));
        rows.push_back(std::move(row));
    }
    return {{"labels", m.labels()}, {"d", std::move(rows)}};
}

WeightedGraph graph_from_json(const json& j, Backend b) {
    if (!j.is_object() || !j.contains("labels") || !j.contains("edges"))
        fail(Errc::parse_error, "graph file needs 'labels' and 'edges'");
    std::vector<std::string> labels = j.at("labels").get<std::vector<std::string>>();
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) {
        if (!e.is_object() || !e.contains("u") || !e.contains("v") || !e.contains("w"))
            fail(Errc::parse_error, "edge needs 'u', 'v', 'w'");
        edges.push_back({e.at("u").get<std::string>(), e.at("v").get<std::string>(),
                         scalar_from_json(e.at("w"), b)});
    }
    if (edges.empty() && b == Backend::float64) {
        // WeightedGraph::build infers the backend from the first edge
        DenseMatrix c(labels, b);
        return WeightedGraph::from_weights(std::move(c));
    }
    return WeightedGraph::build(std::move(labels), edges);
}

json graph_to_json(const WeightedGraph& g) {
    json edges = json::array();
    for (const auto& e : g.edges())
        edges.push_back({{"u", e.u}, {"v", e.v}, {"w", scalar_to_json(e.w)}});
    return {{"labels", g.labels()}, {"edges", std::move(edges)}};
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(Errc::io_error, "cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        fail(Errc::parse_error, "invalid JSON in '" + path + "': " + e.what());
    }
    return j;
}

MetricSpace read_metric_file(const std::string& path, Backend b, const TolerancePolicy& pol) {
    return metric_from_json(read_json_file(path), b, pol);
}

WeightedGraph read_graph_file(const std::string& path, Backend b) {
    return graph_from_json(read_json_file(path), b);
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) fail(Errc::io_error, "cannot write '" + path + "'");
    out << text;
    if (!out) fail(Errc::io_error, "short write to '" + path + "'");
}

json verdict_to_json(const ErsVerdict& v) {
    json out{{"outcome", ers_outcome_name(v.outcome)}};
    out["graph"] = v.recovered ? graph_to_json(*v.recovered) : json(nullptr);
    json reason(nullptr);
    if (v.reason == ErsReason::singular_defect)
        reason = {{"type", "singular_defect"},
                  {"anchor", v.anchor},
                  {"determinant", scalar_to_json(*v.defect_det)}};
    else if (v.reason == ErsReason::negative_weight)
        reason = {{"type", "negative_weight"},
                  {"x", v.witness_x},
                  {"y", v.witness_y},
                  {"value", scalar_to_json(*v.witness_value)}};
    out["reason"] = std::move(reason);
    json dets = json::object();
    if (v.defect_det) dets[v.anchor] = scalar_to_json(*v.defect_det);
    out["determinants"] = std::move(dets);
    if (v.candidate) {
        json rows = json::array();
        for (std::size_t i = 0; i < v.candidate->size(); ++i) {
            json row = json::array();
            for (std::size_t k = 0; k < v.candidate->size(); ++k)
                row.push_back(scalar_to_json(v.candidate->at(i, k)));
            rows.push_back(std::move(row));
        }
        out["candidate"] = {{"labels", v.candidate->labels()}, {"c", std::move(rows)}};
    }
    if (!v.detail.empty()) out["detail"] = v.detail;
    if (v.candidate && v.candidate->backend() == Backend::float64) {
        out["max_residual"] = v.max_residual;
        out["max_asymmetry"] = v.max_asymmetry;
    }
    return out;
}

json reduction_trace_to_json(const ReductionTrace& t) {
    json steps = json::array();
    for (const auto& s : t.steps) {
        json drops = json::object();
        for (const auto& [vertex, drop] : s.strength_drop)
            drops[vertex] = scalar_to_json(drop);
        steps.push_back({{"removed", s.removed},
                         {"graph", graph_to_json(s.graph)},
                         {"strength_drop", std::move(drops)}});
    }
    return {{"original", graph_to_json(t.original)}, {"steps", std::move(steps)}};
}

json limit_report_to_json(const LimitGraphReport& r) {
    json edges = json::array();
    for (const auto& e : r.edges) {
        json values = json::array();
        for (const auto& v : e.values) values.push_back(scalar_to_json(v));
        json entry{{"x", e.x},         {"y", e.y},
                   {"sizes", e.sizes}, {"values", std::move(values)},
                   {"stalled", e.stalled}, {"single_sample", e.single_sample}};
        entry["estimate"] = e.estimate ? scalar_to_json(*e.estimate) : json(nullptr);
        edges.push_back(std::move(entry));
    }
    json vertices = json::array();
    for (const auto& v : r.vertices) {
        json strengths = json::array();
        for (const auto& s : v.strengths) strengths.push_back(scalar_to_json(s));
        vertices.push_back({{"x", v.x},
                            {"sizes", v.sizes},
                            {"strengths", std::move(strengths)},
                            {"stalled", v.stalled},
                            {"strength_estimate", scalar_to_json(v.strength_estimate)},
                            {"edge_sum", scalar_to_json(v.edge_sum)},
                            {"gap", scalar_to_json(v.gap)},
                            {"condition_c", condition_c_name(v.verdict)}});
    }
    return {{"name", r.name},
            {"sizes", r.sizes},
            {"edges", std::move(edges)},
            {"vertices", std::move(vertices)},
            {"monotonicity_violations", r.monotonicity_violations}};
}

std::string limit_report_to_csv(const LimitGraphReport& r) {
    std::ostringstream out;
    out << "kind,x,y,n,value\n";
    for (const auto& e : r.edges)
        for (std::size_t k = 0; k < e.values.size(); ++k)
            out << "edge," << e.x << "," << e.y << "," << e.sizes[k] << ","
                << e.values[k].to_double() << "\n";
    for (const auto& v : r.vertices)
        for (std::size_t k = 0; k < v.strengths.size(); ++k)
            out << "strength," << v.x << ",," << v.sizes[k] << ","
                << v.strengths[k].to_double() << "\n";
    return out.str();
}

json mc_estimate_to_json(const McEstimate& e) {
    return {{"estimate", e.estimate}, {"std_error", e.std_error},
            {"samples", e.samples},   {"capped", e.capped},
            {"seed", e.seed},         {"workers", e.workers},
            {"mean_phi", e.mean_phi}, {"var_phi", e.var_phi},
            {"bias_warning", e.capped > 0}};
}

json hit_split_to_json(const HitReturnSplit& s) {
    return {{"p_return", scalar_to_json(s.p_return)},
            {"p_hit", scalar_to_json(s.p_hit)},
            {"p_escape", scalar_to_json(s.p_escape)},
            {"p_hit_weak", scalar_to_json(s.p_hit_weak())}};
}

json phi_law_to_json(const PhiLawReport& r) {
    json hist = json::object();
    for (const auto& [k, v] : r.histogram) hist[std::to_string(k)] = v;
    return {{"p", r.p},
            {"histogram", std::move(hist)},
            {"samples", r.samples},
            {"capped", r.capped},
            {"chi_square", r.chi_square},
            {"dof", r.dof},
            {"p_value", r.p_value},
            {"alpha", r.alpha},
            {"distribution_ok", r.distribution_ok},
            {"sample_mean", r.sample_mean},
            {"expected_mean", r.expected_mean},
            {"mean_ok", r.mean_ok},
            {"sample_variance", r.sample_variance},
            {"expected_variance", r.expected_variance},
            {"variance_ok", r.variance_ok}};
}

json limit_walk_to_json(const LimitWalkReport& r) {
    return {{"family_resistance", r.family_resistance},
            {"mc", mc_estimate_to_json(r.mc)},
            {"resistance_ok", r.resistance_ok},
            {"max_transition_gap", r.max_transition_gap},
            {"transition_band", r.transition_band},
            {"transitions_ok", r.transitions_ok},
            {"trivial", r.trivial}};
}

} // namespace resmet
