#ifndef FLOWCURV_RATIONAL_HPP
#define FLOWCURV_RATIONAL_HPP

#include <gmpxx.h>

#include <cstdint>
#include <string>

#include "flowcurv/errors.hpp"

namespace flowcurv {

/// Arbitrary-precision exact rational. Always canonical: denominator
/// positive, gcd(|num|, den) = 1, zero stored as 0/1.
class Rational {
  public:
    Rational() : q_(0) {}
    Rational(long n) : q_(n) {} // NOLINT(google-explicit-constructor)
    Rational(long n, long d) : q_(n, d) {
        if (d == 0) throw math_error("rational with zero denominator");
        q_.canonicalize();
    }
    explicit Rational(const mpq_class& q) : q_(q) { q_.canonicalize(); }
    explicit Rational(const mpz_class& n) : q_(n) {}

    /// Exact conversion of a binary double (mantissa * 2^e). Rejects
    /// NaN and infinities.
    static Rational from_double(double x);

    /// Parse "a", "-a" or "a/b" with integer a, b (b > 0 after
    /// canonicalization). Throws parse_error on anything else.
    static Rational parse(const std::string& text);

    /// Parse a decimal literal ("0.25", "-1.5e-3") into the exact
    /// scaled rational. Plain integers and a/b forms also accepted.
    static Rational parse_decimal(const std::string& text);

    bool is_zero() const { return q_ == 0; }
    bool is_one() const { return q_ == 1; }
    bool is_integer() const { return q_.get_den() == 1; }
    int sign() const { return sgn(q_); }

    const mpz_class& num() const { return q_.get_num(); }
    const mpz_class& den() const { return q_.get_den(); }
    const mpq_class& raw() const { return q_; }

    double to_double() const { return q_.get_d(); }
    std::string str() const;

    Rational operator-() const { return Rational(mpq_class(-q_)); }
    Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
    Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
    Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw math_error("rational division by zero");
        q_ /= o.q_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.q_ != b.q_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.q_ < b.q_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.q_ <= b.q_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.q_ > b.q_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.q_ >= b.q_; }

    Rational abs() const { return Rational(mpq_class(::abs(q_))); }
    Rational pow(unsigned e) const;

  private:
    mpq_class q_;
};

} // namespace flowcurv

#endif
