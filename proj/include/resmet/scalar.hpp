#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>

#include "resmet/error.hpp"

namespace resmet {

enum class Backend { rational, float64 };

const char* backend_name(Backend b);
Backend backend_from_name(std::string_view name);

// Tolerance band for float-mode zero/sign decisions. The rational backend
// ignores it entirely.
struct TolerancePolicy {
    double abs_tol = 1e-9;
};

enum class Sign { negative, zero, positive, indeterminate };

const char* sign_name(Sign s);

// A scalar tagged with its arithmetic backend. Rational values are exact
// (arbitrary precision, canonical lowest terms, positive denominator);
// float64 values are IEEE doubles. Arithmetic never mixes backends: any
// operation on a rational/float pair throws Errc::backend_mismatch.
class Scalar {
public:
    Scalar() : v_(mpq_class(0)) {}

    static Scalar rational(long num, long den = 1);
    static Scalar rational(const mpq_class& q);
    static Scalar real(double x) { return Scalar(x); }
    static Scalar zero(Backend b);
    static Scalar one(Backend b);

    // Accepts integer ("12"), fraction ("p/q") and decimal ("0.25", "1e-3")
    // literals. Decimals parse exactly in the rational backend.
    static Scalar parse(std::string_view text, Backend b);

    Backend backend() const {
        return std::holds_alternative<mpq_class>(v_) ? Backend::rational
                                                     : Backend::float64;
    }
    bool is_rational() const { return backend() == Backend::rational; }

    const mpq_class& rat() const;
    double f64() const;

    // Lossy view for display and sampling; valid for both backends.
    double to_double() const;

    Scalar operator-() const;
    Scalar& operator+=(const Scalar& o);
    Scalar& operator-=(const Scalar& o);
    Scalar& operator*=(const Scalar& o);
    Scalar& operator/=(const Scalar& o);

    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
    friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }

    bool operator==(const Scalar& o) const;
    std::strong_ordering operator<=>(const Scalar& o) const;

    bool is_zero() const;
    bool is_negative() const;
    Scalar abs() const;

    // "p/q" (or plain integer) for rationals, shortest round-trip decimal
    // for floats.
    std::string str() const;

private:
    explicit Scalar(mpq_class q) : v_(std::move(q)) {}
    explicit Scalar(double x) : v_(x) {}

    void check_same(const Scalar& o) const;

    std::variant<mpq_class, double> v_;
};

std::ostream& operator<<(std::ostream& os, const Scalar& s);

struct SignVerdict {
    Sign sign;
    Scalar magnitude;
    double tolerance = 0.0;

    bool is_positive() const { return sign == Sign::positive; }
    bool is_negative() const { return sign == Sign::negative; }
};

// Exact trichotomy for rationals. Floats: exact 0.0 reports zero, values
// with 0 < |x| <= tol report indeterminate.
SignVerdict sign_of(const Scalar& x, const TolerancePolicy& pol = {});

} // namespace resmet
