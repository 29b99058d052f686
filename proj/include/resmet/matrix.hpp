#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "resmet/scalar.hpp"

namespace resmet {

// Square matrix of same-backend scalars with optional row/column labels
// (rows and columns always share one labeling).
class DenseMatrix {
public:
    DenseMatrix() : n_(0), backend_(Backend::rational) {}
    DenseMatrix(std::size_t n, Backend b)
        : n_(n), backend_(b), e_(n * n, Scalar::zero(b)) {}
    DenseMatrix(std::vector<std::string> labels, Backend b);

    static DenseMatrix identity(std::size_t n, Backend b);

    std::size_t size() const { return n_; }
    Backend backend() const { return backend_; }

    bool has_labels() const { return !labels_.empty(); }
    const std::vector<std::string>& labels() const { return labels_; }
    std::string label(std::size_t i) const;
    std::size_t index_of(const std::string& label) const;

    Scalar& at(std::size_t i, std::size_t j) { return e_[i * n_ + j]; }
    const Scalar& at(std::size_t i, std::size_t j) const { return e_[i * n_ + j]; }

    bool is_symmetric() const;

    // Principal submatrix on the given row/column indices, keeping labels.
    DenseMatrix restrict_to(const std::vector<std::size_t>& keep) const;

    bool operator==(const DenseMatrix& o) const;

private:
    std::vector<std::string> labels_;
    std::size_t n_;
    Backend backend_;
    std::vector<Scalar> e_;
};

// LU factorization with partial pivoting, shared by solve and determinant.
// Complete even for singular inputs so determinants come out as exact zero
// instead of an error; solves check the flag.
struct LuFactorization {
    DenseMatrix lu;               // L below diagonal (unit), U on/above
    std::vector<std::size_t> perm;
    int permutation_sign = 1;
    bool singular = false;
    Scalar determinant;
    double pivot_ratio = 1.0;     // max|pivot| / min|pivot|, float mode only
};

LuFactorization lu_factorize(const DenseMatrix& a);

struct LinearSolve {
    std::vector<Scalar> x;
    // ||Ax - b||_inf; exact zero for the rational backend.
    Scalar residual_inf;
};

// Solves A x = b. Rational mode is exact; float mode reports the residual.
// Throws Errc::singular_matrix when a pivot is exactly zero (rational) or
// |pivot| <= pol.abs_tol (float), Errc::dimension_mismatch on shape errors.
LinearSolve solve_linear_system(const DenseMatrix& a, const std::vector<Scalar>& b,
                                const TolerancePolicy& pol = {});

std::vector<Scalar> lu_solve(const LuFactorization& f, const std::vector<Scalar>& b,
                             const TolerancePolicy& pol = {});

Scalar determinant(const DenseMatrix& a);

std::vector<Scalar> mat_vec(const DenseMatrix& a, const std::vector<Scalar>& x);

} // namespace resmet
