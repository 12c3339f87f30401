#ifndef FLOWCURV_POLY_HPP
#define FLOWCURV_POLY_HPP

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "flowcurv/monomial.hpp"
#include "flowcurv/rational.hpp"

namespace flowcurv {

struct Term {
    Monomial mono;
    Rational coeff;
};

using SubstValue = std::variant<Rational, class Poly>;

/// Sparse multivariate polynomial over Rational in a fixed variable
/// context. Canonical form: terms sorted descending in grevlex, no
/// zero coefficients. Immutable in spirit; all operations are pure.
class Poly {
  public:
    Poly() = default; // zero in an empty context; mostly for containers
    explicit Poly(ContextPtr ctx) : ctx_(std::move(ctx)) {}

    static Poly zero(ContextPtr ctx) { return Poly(std::move(ctx)); }
    static Poly constant(ContextPtr ctx, const Rational& c);
    static Poly variable(const ContextPtr& ctx, const std::string& name);
    static Poly variable(ContextPtr ctx, int index, int power = 1);
    /// Build from unsorted (monomial, coeff) pairs, combining duplicates.
    static Poly from_terms(ContextPtr ctx, std::vector<Term> terms);

    const ContextPtr& context() const { return ctx_; }
    int nvars() const { return ctx_ ? ctx_->size() : 0; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_constant()); }
    size_t term_count() const { return terms_.size(); }
    const std::vector<Term>& terms() const { return terms_; }
    const Term& leading_term() const;

    /// Max exponent of one variable; empty for the zero polynomial
    /// ("minus infinity" sentinel).
    std::optional<int> degree_in(int var) const;
    std::optional<int> degree_in(const std::string& var) const;
    std::optional<int> total_degree() const;

    /// Largest k such that var^k divides every term (0 for the zero poly).
    int content_power(int var) const;
    Poly divided_by_var_power(int var, int k) const;

    Poly operator-() const;
    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly& operator+=(const Poly& o) { *this = *this + o; return *this; }
    Poly& operator-=(const Poly& o) { *this = *this - o; return *this; }
    Poly& operator*=(const Poly& o) { *this = *this * o; return *this; }

    Poly scaled(const Rational& c) const;
    Poly mul_term(const Monomial& m, const Rational& c) const;
    Poly pow(unsigned e) const;

    friend bool operator==(const Poly& a, const Poly& b);
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    /// Formal partial derivative with respect to one context variable.
    Poly derivative(int var) const;
    Poly derivative(const std::string& var) const;

    /// Simultaneous substitution of variables by rationals or polynomials
    /// (in the same context). Result stays in this context.
    Poly substitute(const std::map<std::string, SubstValue>& bindings) const;

    /// Exact rational value; every context variable must be bound.
    Rational evaluate(const std::map<std::string, Rational>& point) const;
    Rational evaluate(const std::vector<Rational>& point) const;

    /// Single-divisor division: p = quotient * q + remainder, no
    /// remainder term divisible by q's leading monomial.
    static std::pair<Poly, Poly> divide_exact(const Poly& p, const Poly& q);

    /// Canonical text document; parse() restores a term-map-equal Poly.
    std::string serialize() const;
    static Poly deserialize(const std::string& doc);
    /// Serialization body without the header (used by manifold docs).
    void serialize_into(std::string& out) const;
    static Poly deserialize_lines(const std::vector<std::string>& lines, size_t& pos);

    /// Human-readable form, valid in the expression grammar.
    std::string to_expression() const;

    /// Rebuild this polynomial in another context; every variable with a
    /// nonzero exponent must exist there.
    Poly transplanted(const ContextPtr& new_ctx) const;

  private:
    void check_same_context(const Poly& o) const;

    ContextPtr ctx_;
    std::vector<Term> terms_; // descending grevlex, nonzero coeffs
    friend class PolyBuilder;
};

/// Hash-map accumulator for sums of many term products; finalizes into
/// canonical form in one sort.
class PolyBuilder {
  public:
    explicit PolyBuilder(ContextPtr ctx) : ctx_(std::move(ctx)) {}
    void add_term(const Monomial& m, const Rational& c);
    void add(const Poly& p);
    void add_scaled(const Poly& p, const Rational& c);
    void add_product(const Poly& a, const Poly& b);
    Poly build();

  private:
    ContextPtr ctx_;
    std::unordered_map<Monomial, Rational, MonomialHash> acc_;
};

/// Quotient of two polynomials; denominator nonzero with positive
/// leading coefficient. Not reduced (gcd computation is out of scope).
struct RationalFunction {
    Poly numerator;
    Poly denominator;

    RationalFunction() = default;
    RationalFunction(Poly num, Poly den);

    bool is_zero() const { return numerator.is_zero(); }
    std::string str() const;
};

} // namespace flowcurv

#endif
