#include "resmet/scalar.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace resmet {

const char* backend_name(Backend b) {
    return b == Backend::rational ? "rational" : "float";
}

Backend backend_from_name(std::string_view name) {
    if (name == "rational") return Backend::rational;
    if (name == "float" || name == "float64") return Backend::float64;
    fail(Errc::parse_error, "unknown backend '" + std::string(name) + "'");
}

const char* sign_name(Sign s) {
    switch (s) {
        case Sign::negative: return "negative";
        case Sign::zero: return "zero";
        case Sign::positive: return "positive";
        case Sign::indeterminate: return "indeterminate";
    }
    return "?";
}

Scalar Scalar::rational(long num, long den) {
    if (den == 0) fail(Errc::division_by_zero, "rational with zero denominator");
    mpq_class q(num, den);
    q.canonicalize();
    return Scalar(std::move(q));
}

Scalar Scalar::rational(const mpq_class& q) {
    mpq_class c = q;
    c.canonicalize();
    return Scalar(std::move(c));
}

Scalar Scalar::zero(Backend b) {
    return b == Backend::rational ? rational(0) : real(0.0);
}

Scalar Scalar::one(Backend b) {
    return b == Backend::rational ? rational(1) : real(1.0);
}

namespace {

// Exact decimal-literal parse: [+-]ddd[.ddd][eE[+-]k] -> p/q.
mpq_class decimal_to_mpq(std::string_view text) {
    std::string digits;
    digits.reserve(text.size());
    bool negative = false;
    std::size_t i = 0;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
        negative = text[i] == '-';
        ++i;
    }
    long frac_digits = 0;
    bool seen_digit = false, seen_dot = false;
    for (; i < text.size(); ++i) {
        char ch = text[i];
        if (ch >= '0' && ch <= '9') {
            digits.push_back(ch);
            seen_digit = true;
            if (seen_dot) ++frac_digits;
        } else if (ch == '.' && !seen_dot) {
            seen_dot = true;
        } else if (ch == 'e' || ch == 'E') {
            break;
        } else {
            fail(Errc::parse_error, "bad scalar literal '" + std::string(text) + "'");
        }
    }
    long exponent = 0;
    if (i < text.size()) { // at 'e'
        ++i;
        auto rest = text.substr(i);
        auto res = std::from_chars(rest.data(), rest.data() + rest.size(), exponent);
        if (res.ec != std::errc() || res.ptr != rest.data() + rest.size())
            fail(Errc::parse_error, "bad exponent in '" + std::string(text) + "'");
    }
    if (!seen_digit)
        fail(Errc::parse_error, "bad scalar literal '" + std::string(text) + "'");
    mpz_class mantissa(digits.empty() ? "0" : digits, 10);
    mpq_class value(mantissa);
    long ten_power = exponent - frac_digits;
    mpz_class pow10;
    mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(ten_power)));
    if (ten_power >= 0)
        value *= mpq_class(pow10);
    else
        value /= mpq_class(pow10);
    value.canonicalize();
    if (negative) value = -value;
    return value;
}

} // namespace

Scalar Scalar::parse(std::string_view text, Backend b) {
    if (text.empty()) fail(Errc::parse_error, "empty scalar literal");
    if (b == Backend::float64) {
        double x = 0;
        auto slash = text.find('/');
        if (slash != std::string_view::npos) {
            mpq_class q = decimal_to_mpq(text.substr(0, slash));
            mpq_class d = decimal_to_mpq(text.substr(slash + 1));
            if (d == 0) fail(Errc::division_by_zero, "zero denominator in '" + std::string(text) + "'");
            return real(mpq_class(q / d).get_d());
        }
        auto res = std::from_chars(text.data(), text.data() + text.size(), x);
        if (res.ec != std::errc() || res.ptr != text.data() + text.size())
            fail(Errc::parse_error, "bad float literal '" + std::string(text) + "'");
        return real(x);
    }
    auto slash = text.find('/');
    if (slash != std::string_view::npos) {
        mpq_class num = decimal_to_mpq(text.substr(0, slash));
        mpq_class den = decimal_to_mpq(text.substr(slash + 1));
        if (den == 0) fail(Errc::division_by_zero, "zero denominator in '" + std::string(text) + "'");
        return rational(mpq_class(num / den));
    }
    return rational(decimal_to_mpq(text));
}

const mpq_class& Scalar::rat() const {
    if (!is_rational())
        fail(Errc::backend_mismatch, "float scalar used where a rational is required");
    return std::get<mpq_class>(v_);
}

double Scalar::f64() const {
    if (is_rational())
        fail(Errc::backend_mismatch, "rational scalar used where a float is required");
    return std::get<double>(v_);
}

double Scalar::to_double() const {
    return is_rational() ? std::get<mpq_class>(v_).get_d() : std::get<double>(v_);
}

void Scalar::check_same(const Scalar& o) const {
    if (backend() != o.backend())
        fail(Errc::backend_mismatch, "mixed rational/float arithmetic");
}

Scalar Scalar::operator-() const {
    if (is_rational()) return Scalar(mpq_class(-std::get<mpq_class>(v_)));
    return Scalar(-std::get<double>(v_));
}

Scalar& Scalar::operator+=(const Scalar& o) {
    check_same(o);
    if (is_rational())
        std::get<mpq_class>(v_) += std::get<mpq_class>(o.v_);
    else
        std::get<double>(v_) += std::get<double>(o.v_);
    return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
    check_same(o);
    if (is_rational())
        std::get<mpq_class>(v_) -= std::get<mpq_class>(o.v_);
    else
        std::get<double>(v_) -= std::get<double>(o.v_);
    return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
    check_same(o);
    if (is_rational())
        std::get<mpq_class>(v_) *= std::get<mpq_class>(o.v_);
    else
        std::get<double>(v_) *= std::get<double>(o.v_);
    return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) {
    check_same(o);
    if (o.is_zero()) fail(Errc::division_by_zero, "scalar division by zero");
    if (is_rational())
        std::get<mpq_class>(v_) /= std::get<mpq_class>(o.v_);
    else
        std::get<double>(v_) /= std::get<double>(o.v_);
    return *this;
}

bool Scalar::operator==(const Scalar& o) const {
    check_same(o);
    if (is_rational())
        return std::get<mpq_class>(v_) == std::get<mpq_class>(o.v_);
    return std::get<double>(v_) == std::get<double>(o.v_);
}

std::strong_ordering Scalar::operator<=>(const Scalar& o) const {
    check_same(o);
    if (is_rational()) {
        int c = cmp(std::get<mpq_class>(v_), std::get<mpq_class>(o.v_));
        return c < 0   ? std::strong_ordering::less
               : c > 0 ? std::strong_ordering::greater
                       : std::strong_ordering::equal;
    }
    double a = std::get<double>(v_), b = std::get<double>(o.v_);
    return a < b   ? std::strong_ordering::less
           : a > b ? std::strong_ordering::greater
                   : std::strong_ordering::equal;
}

bool Scalar::is_zero() const {
    return is_rational() ? sgn(std::get<mpq_class>(v_)) == 0
                         : std::get<double>(v_) == 0.0;
}

bool Scalar::is_negative() const {
    return is_rational() ? sgn(std::get<mpq_class>(v_)) < 0
                         : std::get<double>(v_) < 0.0;
}

Scalar Scalar::abs() const {
    if (is_rational()) return Scalar(mpq_class(::abs(std::get<mpq_class>(v_))));
    return Scalar(std::fabs(std::get<double>(v_)));
}

std::string Scalar::str() const {
    if (is_rational()) {
        const mpq_class& q = std::get<mpq_class>(v_);
        if (q.get_den() == 1) return q.get_num().get_str();
        return q.get_num().get_str() + "/" + q.get_den().get_str();
    }
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), std::get<double>(v_));
    return std::string(buf, res.ptr);
}

std::ostream& operator<<(std::ostream& os, const Scalar& s) {
    return os << s.str();
}

SignVerdict sign_of(const Scalar& x, const TolerancePolicy& pol) {
    if (x.is_rational()) {
        int s = sgn(x.rat());
        Sign sign = s < 0 ? Sign::negative : s > 0 ? Sign::positive : Sign::zero;
        return {sign, x.abs(), 0.0};
    }
    double v = x.f64();
    double mag = std::fabs(v);
    Sign sign;
    if (v == 0.0)
        sign = Sign::zero;
    else if (mag <= pol.abs_tol)
        sign = Sign::indeterminate;
    else
        sign = v < 0 ? Sign::negative : Sign::positive;
    return {sign, x.abs(), pol.abs_tol};
}

} // namespace resmet
