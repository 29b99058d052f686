#include "resmet/metric.hpp"

#include <sstream>

namespace resmet {

namespace {

bool definitely_negative(const Scalar& s, const TolerancePolicy& pol) {
    return sign_of(s, pol).sign == Sign::negative;
}

} // namespace

std::vector<MetricIssue> check_metric(const DenseMatrix& d, const TolerancePolicy& pol) {
    std::vector<MetricIssue> issues;
    const std::size_t n = d.size();
    if (n < 2) {
        issues.push_back({Errc::too_small, {}, "a metric space needs at least 2 points"});
        return issues;
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!d.at(i, i).is_zero())
            issues.push_back({Errc::nonzero_diagonal,
                              {d.label(i)},
                              "d(" + d.label(i) + "," + d.label(i) + ") = " + d.at(i, i).str()});
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!(d.at(i, j) == d.at(j, i)))
                issues.push_back({Errc::not_symmetric,
                                  {d.label(i), d.label(j)},
                                  d.at(i, j).str() + " vs " + d.at(j, i).str()});
            if (sign_of(d.at(i, j), pol).sign != Sign::positive)
                issues.push_back({Errc::non_positive_off_diagonal,
                                  {d.label(i), d.label(j)},
                                  "d = " + d.at(i, j).str()});
        }
    }
    // d(x,z) <= d(x,y) + d(y,z), every ordered triple of distinct points
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
            for (std::size_t z = 0; z < n; ++z) {
                if (x == y || y == z || x == z) continue;
                Scalar slack = d.at(x, y) + d.at(y, z) - d.at(x, z);
                if (definitely_negative(slack, pol))
                    issues.push_back({Errc::triangle_violation,
                                      {d.label(x), d.label(y), d.label(z)},
                                      "d(x,z) exceeds d(x,y)+d(y,z) by " + (-slack).str()});
            }
    return issues;
}

MetricSpace validate_metric(DenseMatrix d, const TolerancePolicy& pol) {
    auto issues = check_metric(d, pol);
    if (!issues.empty()) {
        std::ostringstream msg;
        msg << issues.size() << " metric violation(s):";
        for (const auto& is : issues) {
            msg << "\n  " << errc_name(is.code);
            if (!is.witness.empty()) {
                msg << " (";
                for (std::size_t i = 0; i < is.witness.size(); ++i)
                    msg << (i ? "," : "") << is.witness[i];
                msg << ")";
            }
            msg << ": " << is.detail;
        }
        fail(issues.front().code, msg.str());
    }
    return MetricSpace::trusted(std::move(d));
}

MetricSpace MetricSpace::restrict_to(const std::vector<std::string>& labels) const {
    std::vector<std::size_t> keep;
    keep.reserve(labels.size());
    for (const auto& l : labels) keep.push_back(d_.index_of(l));
    return MetricSpace(d_.restrict_to(keep));
}

DefectSystem defect_system(const MetricSpace& m, const std::string& anchor) {
    const std::size_t n = m.size();
    const std::size_t y = m.index_of(anchor);
    const Scalar half = m.backend() == Backend::rational ? Scalar::rational(1, 2)
                                                         : Scalar::real(0.5);
    DefectSystem sys;
    sys.anchor = anchor;
    sys.defect = DenseMatrix(m.labels(), m.backend());
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t z = 0; z < n; ++z)
            sys.defect.at(x, z) = half * (m.d(x, y) + m.d(y, z) - m.d(x, z));
    sys.anchored = sys.defect;
    sys.anchored.at(y, y) = Scalar::one(m.backend());
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < n; ++i)
        if (i != y) keep.push_back(i);
    sys.reduced = sys.defect.restrict_to(keep);
    sys.rhs.assign(n, Scalar::one(m.backend()));
    sys.rhs[y] = Scalar::zero(m.backend());
    return sys;
}

MetricSpace discrete_metric(std::size_t n, Backend b) {
    if (n < 2) fail(Errc::bad_parameter, "discrete metric needs n >= 2");
    std::vector<std::string> labels;
    for (std::size_t i = 1; i <= n; ++i) labels.push_back(std::to_string(i));
    DenseMatrix d(labels, b);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) d.at(i, j) = Scalar::one(b);
    return MetricSpace::trusted(std::move(d));
}

MetricSpace star_metric(std::size_t n, Backend b) {
    if (n < 2) fail(Errc::bad_parameter, "star metric needs n >= 2");
    std::vector<std::string> labels;
    for (std::size_t i = 1; i <= n; ++i) labels.push_back(std::to_string(i));
    DenseMatrix d(labels, b);
    const Scalar one = Scalar::one(b);
    const Scalar two = one + one;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            d.at(i, j) = (i == 0 || j == 0) ? one : two;
        }
    return MetricSpace::trusted(std::move(d));
}

const char* errc_name(Errc code) {
    switch (code) {
        case Errc::backend_mismatch: return "BackendMismatch";
        case Errc::dimension_mismatch: return "DimensionMismatch";
        case Errc::singular_matrix: return "SingularMatrix";
        case Errc::division_by_zero: return "DivisionByZero";
        case Errc::parse_error: return "ParseError";
        case Errc::not_symmetric: return "NotSymmetric";
        case Errc::nonzero_diagonal: return "NonzeroDiagonal";
        case Errc::non_positive_off_diagonal: return "NonPositiveOffDiagonal";
        case Errc::triangle_violation: return "TriangleViolation";
        case Errc::too_small: return "TooSmall";
        case Errc::unknown_vertex: return "UnknownVertex";
        case Errc::unknown_family: return "UnknownFamily";
        case Errc::bad_parameter: return "BadParameter";
        case Errc::self_loop: return "SelfLoop";
        case Errc::negative_weight: return "NegativeWeight";
        case Errc::duplicate_edge: return "DuplicateEdge";
        case Errc::isolated_vertex: return "IsolatedVertex";
        case Errc::disconnected: return "Disconnected";
        case Errc::same_vertex: return "SameVertex";
        case Errc::missing_value: return "MissingValue";
        case Errc::disconnects: return "Disconnects";
        case Errc::not_a_resistance_metric: return "NotAResistanceMetric";
        case Errc::insufficient_data: return "InsufficientData";
        case Errc::p_equals_one: return "PEqualsOne";
        case Errc::condition_c_fails: return "ConditionCFails";
        case Errc::recurrence_not_asserted: return "RecurrenceNotAsserted";
        case Errc::io_error: return "IoError";
    }
    return "UnknownError";
}

} // namespace resmet
