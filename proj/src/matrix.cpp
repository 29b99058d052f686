#include "resmet/matrix.hpp"

#include <algorithm>
#include <unordered_set>

namespace resmet {

DenseMatrix::DenseMatrix(std::vector<std::string> labels, Backend b)
    : labels_(std::move(labels)),
      n_(labels_.size()),
      backend_(b),
      e_(n_ * n_, Scalar::zero(b)) {
    std::unordered_set<std::string> seen;
    for (const auto& l : labels_)
        if (!seen.insert(l).second)
            fail(Errc::bad_parameter, "duplicate label '" + l + "'");
}

DenseMatrix DenseMatrix::identity(std::size_t n, Backend b) {
    DenseMatrix m(n, b);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = Scalar::one(b);
    return m;
}

std::string DenseMatrix::label(std::size_t i) const {
    return has_labels() ? labels_[i] : std::to_string(i);
}

std::size_t DenseMatrix::index_of(const std::string& label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end())
        fail(Errc::unknown_vertex, "unknown label '" + label + "'");
    return static_cast<std::size_t>(it - labels_.begin());
}

bool DenseMatrix::is_symmetric() const {
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = i + 1; j < n_; ++j)
            if (!(at(i, j) == at(j, i))) return false;
    return true;
}

DenseMatrix DenseMatrix::restrict_to(const std::vector<std::size_t>& keep) const {
    DenseMatrix out(keep.size(), backend_);
    if (has_labels()) {
        out.labels_.reserve(keep.size());
        for (auto i : keep) out.labels_.push_back(labels_[i]);
    }
    for (std::size_t a = 0; a < keep.size(); ++a)
        for (std::size_t b = 0; b < keep.size(); ++b)
            out.at(a, b) = at(keep[a], keep[b]);
    return out;
}

bool DenseMatrix::operator==(const DenseMatrix& o) const {
    if (n_ != o.n_ || backend_ != o.backend_) return false;
    for (std::size_t i = 0; i < e_.size(); ++i)
        if (!(e_[i] == o.e_[i])) return false;
    return true;
}

LuFactorization lu_factorize(const DenseMatrix& a) {
    const std::size_t n = a.size();
    LuFactorization f;
    f.lu = a;
    f.perm.resize(n);
    for (std::size_t i = 0; i < n; ++i) f.perm[i] = i;
    f.determinant = Scalar::one(a.backend());

    double max_piv = 0.0, min_piv = 0.0;
    bool first_piv = true;

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        Scalar best = f.lu.at(k, k).abs();
        for (std::size_t i = k + 1; i < n; ++i) {
            Scalar v = f.lu.at(i, k).abs();
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (f.lu.at(piv, k).is_zero()) {
            f.singular = true;
            f.determinant = Scalar::zero(a.backend());
            continue;
        }
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j)
                std::swap(f.lu.at(k, j), f.lu.at(piv, j));
            std::swap(f.perm[k], f.perm[piv]);
            f.permutation_sign = -f.permutation_sign;
        }
        const Scalar& pivot = f.lu.at(k, k);
        f.determinant *= pivot;
        if (a.backend() == Backend::float64) {
            double p = std::abs(pivot.to_double());
            max_piv = first_piv ? p : std::max(max_piv, p);
            min_piv = first_piv ? p : std::min(min_piv, p);
            first_piv = false;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            if (f.lu.at(i, k).is_zero()) continue;
            Scalar factor = f.lu.at(i, k) / pivot;
            f.lu.at(i, k) = factor;
            for (std::size_t j = k + 1; j < n; ++j)
                f.lu.at(i, j) -= factor * f.lu.at(k, j);
        }
    }
    if (!f.singular && f.permutation_sign < 0)
        f.determinant = -f.determinant;
    if (!first_piv && min_piv > 0.0) f.pivot_ratio = max_piv / min_piv;
    return f;
}

std::vector<Scalar> lu_solve(const LuFactorization& f, const std::vector<Scalar>& b,
                             const TolerancePolicy& pol) {
    const std::size_t n = f.lu.size();
    if (b.size() != n)
        fail(Errc::dimension_mismatch, "rhs length does not match matrix size");
    if (f.singular)
        fail(Errc::singular_matrix, "matrix is singular");
    if (f.lu.backend() == Backend::float64) {
        for (std::size_t k = 0; k < n; ++k)
            if (std::abs(f.lu.at(k, k).to_double()) <= pol.abs_tol)
                fail(Errc::singular_matrix, "pivot below tolerance");
    }
    std::vector<Scalar> x(n, Scalar::zero(f.lu.backend()));
    // forward: L y = P b
    for (std::size_t i = 0; i < n; ++i) {
        Scalar s = b[f.perm[i]];
        for (std::size_t j = 0; j < i; ++j) s -= f.lu.at(i, j) * x[j];
        x[i] = s;
    }
    // backward: U x = y
    for (std::size_t ii = n; ii-- > 0;) {
        Scalar s = x[ii];
        for (std::size_t j = ii + 1; j < n; ++j) s -= f.lu.at(ii, j) * x[j];
        x[ii] = s / f.lu.at(ii, ii);
    }
    return x;
}

std::vector<Scalar> mat_vec(const DenseMatrix& a, const std::vector<Scalar>& x) {
    const std::size_t n = a.size();
    if (x.size() != n)
        fail(Errc::dimension_mismatch, "vector length does not match matrix size");
    std::vector<Scalar> y(n, Scalar::zero(a.backend()));
    for (std::size_t i = 0; i < n; ++i) {
        Scalar s = Scalar::zero(a.backend());
        for (std::size_t j = 0; j < n; ++j) s += a.at(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

LinearSolve solve_linear_system(const DenseMatrix& a, const std::vector<Scalar>& b,
                                const TolerancePolicy& pol) {
    if (b.size() != a.size())
        fail(Errc::dimension_mismatch, "rhs length does not match matrix size");
    auto f = lu_factorize(a);
    LinearSolve out{lu_solve(f, b, pol), Scalar::zero(a.backend())};
    auto ax = mat_vec(a, out.x);
    for (std::size_t i = 0; i < a.size(); ++i) {
        Scalar r = (ax[i] - b[i]).abs();
        if (r > out.residual_inf) out.residual_inf = r;
    }
    return out;
}

Scalar determinant(const DenseMatrix& a) {
    return lu_factorize(a).determinant;
}

} // namespace resmet
