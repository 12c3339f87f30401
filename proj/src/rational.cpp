#include "flowcurv/rational.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

namespace flowcurv {

Rational Rational::from_double(double x) {
    if (!std::isfinite(x)) throw math_error("cannot convert non-finite double to rational");
    mpq_class q;
    mpq_set_d(q.get_mpq_t(), x); // exact for finite doubles
    return Rational(q);
}

Rational Rational::pow(unsigned e) const {
    Rational r(1);
    Rational base = *this;
    while (e) {
        if (e & 1u) r *= base;
        base *= base;
        e >>= 1u;
    }
    return r;
}

std::string Rational::str() const {
    std::string s = q_.get_num().get_str();
    if (q_.get_den() != 1) s += "/" + q_.get_den().get_str();
    return s;
}

static bool is_integer_text(const std::string& s) {
    if (s.empty()) return false;
    size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

Rational Rational::parse(const std::string& text) {
    auto slash = text.find('/');
    if (slash == std::string::npos) {
        if (!is_integer_text(text)) throw parse_error("expected integer or a/b rational, got '" + text + "'", 1);
        return Rational(mpq_class(mpz_class(text, 10)));
    }
    std::string num = text.substr(0, slash);
    std::string den = text.substr(slash + 1);
    if (!is_integer_text(num) || !is_integer_text(den))
        throw parse_error("expected a/b rational, got '" + text + "'", 1);
    mpz_class d(den, 10);
    if (d == 0) throw math_error("rational with zero denominator: '" + text + "'");
    mpq_class q(mpz_class(num, 10), d);
    q.canonicalize();
    return Rational(q);
}

Rational Rational::parse_decimal(const std::string& text) {
    if (text.find('/') != std::string::npos || is_integer_text(text)) return parse(text);
    // decimal with optional exponent: scale by powers of ten
    std::string s = text;
    bool neg = false;
    size_t i = 0;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) neg = (s[i] == '-'), ++i;
    std::string digits;
    long frac_digits = 0;
    bool seen_dot = false, seen_digit = false;
    for (; i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.'); ++i) {
        if (s[i] == '.') {
            if (seen_dot) throw parse_error("bad decimal literal '" + text + "'", 1);
            seen_dot = true;
        } else {
            digits += s[i];
            seen_digit = true;
            if (seen_dot) ++frac_digits;
        }
    }
    if (!seen_digit) throw parse_error("bad decimal literal '" + text + "'", 1);
    long exp10 = 0;
    if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        ++i;
        std::string e = s.substr(i);
        if (!is_integer_text(e)) throw parse_error("bad decimal exponent in '" + text + "'", 1);
        exp10 = std::strtol(e.c_str(), nullptr, 10);
        i = s.size();
    }
    if (i != s.size()) throw parse_error("bad decimal literal '" + text + "'", 1);
    mpz_class mant(digits.empty() ? "0" : digits, 10);
    if (neg) mant = -mant;
    long net = exp10 - frac_digits;
    mpz_class p10;
    mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(net < 0 ? -net : net));
    mpq_class q = net >= 0 ? mpq_class(mant * p10) : mpq_class(mant, p10);
    q.canonicalize();
    return Rational(q);
}

} // namespace flowcurv
