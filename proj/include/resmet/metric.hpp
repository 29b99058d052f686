#pragma once

#include <string>
#include <vector>

#include "resmet/matrix.hpp"

namespace resmet {

// One violated metric axiom with its witness vertices.
struct MetricIssue {
    Errc code;
    std::vector<std::string> witness;
    std::string detail;
};

// A finite labeled metric space. Construct through validate_metric (or
// MetricSpace::trusted for values that are metrics by construction).
class MetricSpace {
public:
    const std::vector<std::string>& labels() const { return d_.labels(); }
    std::size_t size() const { return d_.size(); }
    Backend backend() const { return d_.backend(); }
    const DenseMatrix& matrix() const { return d_; }

    std::size_t index_of(const std::string& label) const { return d_.index_of(label); }
    const Scalar& d(std::size_t i, std::size_t j) const { return d_.at(i, j); }
    const Scalar& d(const std::string& x, const std::string& y) const {
        return d_.at(d_.index_of(x), d_.index_of(y));
    }

    // Restriction to a label subset, in the given order.
    MetricSpace restrict_to(const std::vector<std::string>& labels) const;

    bool operator==(const MetricSpace& o) const { return d_ == o.d_; }

    static MetricSpace trusted(DenseMatrix d) { return MetricSpace(std::move(d)); }

private:
    explicit MetricSpace(DenseMatrix d) : d_(std::move(d)) {}
    DenseMatrix d_;
};

// Checks (M1)-(M3) plus shape; returns every violation, not just the first.
std::vector<MetricIssue> check_metric(const DenseMatrix& d, const TolerancePolicy& pol = {});

// Returns the validated space or throws Errc of the first issue, with all
// issues listed in the message.
MetricSpace validate_metric(DenseMatrix d, const TolerancePolicy& pol = {});

// The triangle-defect system anchored at y:
//   defect(x,z) = (d(x,y) + d(y,z) - d(x,z)) / 2,
//   anchored    = defect except (y,y) -> 1,
//   reduced     = defect restricted to labels != y,
//   rhs(x)      = 1 - delta_y(x).
struct DefectSystem {
    std::string anchor;
    DenseMatrix defect;    // M_y, over all of V
    DenseMatrix reduced;   // M'_y, over V minus the anchor
    DenseMatrix anchored;  // A_y
    std::vector<Scalar> rhs;
};

DefectSystem defect_system(const MetricSpace& m, const std::string& anchor);

// Built-in finite metrics: discrete(n) is all-ones off the diagonal;
// star(n) has d(1,k) = 1 and d(j,k) = 2 otherwise.
MetricSpace discrete_metric(std::size_t n, Backend b = Backend::rational);
MetricSpace star_metric(std::size_t n, Backend b = Backend::rational);

} // namespace resmet
