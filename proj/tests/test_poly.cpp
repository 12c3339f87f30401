#include <doctest.h>

#include <random>

#include "flowcurv/expr.hpp"
#include "flowcurv/poly.hpp"

using namespace flowcurv;

namespace {

ContextPtr uvwx() { return make_context({"u", "v", "w", "x"}); }

Poly P(const ContextPtr& ctx, const std::string& s) { return parse_expression(s, ctx); }

Poly random_poly(const ContextPtr& ctx, std::mt19937_64& rng, int max_deg = 3, int max_terms = 6) {
    std::uniform_int_distribution<int> nterms(0, max_terms);
    std::uniform_int_distribution<int> coef(-9, 9);
    std::uniform_int_distribution<int> den(1, 4);
    std::uniform_int_distribution<int> deg(0, max_deg);
    std::vector<Term> terms;
    int n = nterms(rng);
    for (int t = 0; t < n; ++t) {
        Monomial m(ctx->size());
        int budget = deg(rng);
        for (int v = 0; v < ctx->size() && budget > 0; ++v) {
            std::uniform_int_distribution<int> e(0, budget);
            int ev = e(rng);
            m.set_exp(v, ev);
            budget -= ev;
        }
        terms.push_back({m, Rational(coef(rng), den(rng))});
    }
    return Poly::from_terms(ctx, std::move(terms));
}

} // namespace

TEST_CASE("grevlex order basics") {
    // u^4 beats u^2 w^2 (same degree, later variable decides reversed)
    auto ctx = make_context({"u", "v", "w"});
    Poly p = P(ctx, "u^2*w^2 - u^4");
    CHECK(p.leading_term().coeff == Rational(-1));
    CHECK(p.leading_term().mono.exp(0) == 4);
    // total degree dominates
    Poly q = P(ctx, "u*v*w + u^2");
    CHECK(q.leading_term().mono.degree() == 3);
}

TEST_CASE("addition cancels and keeps canonical form") {
    auto ctx = uvwx();
    CHECK(P(ctx, "x + u") + P(ctx, "x - u") == P(ctx, "2*x"));
    Poly p = P(ctx, "u^2*v - 3*w");
    CHECK(p + Poly::zero(ctx) == p);
    CHECK((P(ctx, "u^2 - w^2") + P(ctx, "v^2 + w^2")) == P(ctx, "u^2 + v^2"));
    CHECK((p - p).is_zero());
}

TEST_CASE("multiplication") {
    auto ctx = uvwx();
    CHECK(P(ctx, "(u-w)*(u+w)") == P(ctx, "u^2 - w^2"));
    Poly p = P(ctx, "u^2*v - 3*w + 1/2");
    CHECK(P(ctx, "1") * p == p);
    CHECK((p * Poly::zero(ctx)).is_zero());
    CHECK(P(ctx, "(x+u*v)^2") == P(ctx, "x^2 + 2*u*v*x + u^2*v^2"));
}

TEST_CASE("ring axioms on random polynomials") {
    auto ctx = uvwx();
    std::mt19937_64 rng(20240811);
    for (int i = 0; i < 200; ++i) {
        Poly a = random_poly(ctx, rng), b = random_poly(ctx, rng), c = random_poly(ctx, rng);
        CHECK(a + b == b + a);
        CHECK((a + b) + c == a + (b + c));
        CHECK(a * b == b * a);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
    }
}

TEST_CASE("partial derivative") {
    auto ctx = uvwx();
    CHECK(P(ctx, "u^2-w^2").derivative("u") == P(ctx, "2*u"));
    CHECK(P(ctx, "7/3").derivative("x").is_zero());
    // d/du of (x + eps u v) with eps as an ordinary variable
    auto ctx2 = make_context({"x", "u", "v", "eps"});
    CHECK(P(ctx2, "x + eps*u*v").derivative("u") == P(ctx2, "eps*v"));
    CHECK_THROWS_AS(P(ctx, "u").derivative("zz"), contract_error);
}

TEST_CASE("Leibniz rule on random polynomials") {
    auto ctx = uvwx();
    std::mt19937_64 rng(7);
    for (int i = 0; i < 100; ++i) {
        Poly p = random_poly(ctx, rng), q = random_poly(ctx, rng);
        for (int v = 0; v < ctx->size(); ++v)
            CHECK((p * q).derivative(v) == p * q.derivative(v) + q * p.derivative(v));
    }
}

TEST_CASE("substitution") {
    auto ctx = make_context({"u", "v", "w", "delta"});
    CHECK(P(ctx, "delta*w + u").substitute({{"delta", SubstValue(Rational(0))}}) == P(ctx, "u"));
    CHECK(P(ctx, "u^2+v^2").substitute({{"u", SubstValue(Rational(1, 2))},
                                        {"v", SubstValue(Rational(1, 2))}}) ==
          Poly::constant(ctx, Rational(1, 2)));
    // substituting a variable with itself is the identity
    Poly p = P(ctx, "u^2*v - delta*w");
    CHECK(p.substitute({{"v", SubstValue(P(ctx, "v"))}}) == p);
    // simultaneous, not sequential: u->v, v->u swaps
    Poly swapped = P(ctx, "u*v^2").substitute({{"u", SubstValue(P(ctx, "v"))},
                                               {"v", SubstValue(P(ctx, "u"))}});
    CHECK(swapped == P(ctx, "v*u^2"));
    CHECK_THROWS_AS(p.substitute({{"zz", SubstValue(Rational(0))}}), contract_error);
}

TEST_CASE("substitute then evaluate commutes with direct evaluation") {
    auto ctx = uvwx();
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> num(-5, 5);
    for (int i = 0; i < 100; ++i) {
        Poly p = random_poly(ctx, rng);
        std::map<std::string, Rational> point;
        for (const auto& name : ctx->names()) point[name] = Rational(num(rng), 3);
        Poly sub = p.substitute({{"u", SubstValue(point["u"])}});
        CHECK(sub.evaluate(point) == p.evaluate(point));
    }
}

TEST_CASE("evaluation") {
    auto ctx = uvwx();
    std::map<std::string, Rational> pt{{"u", Rational(2)}, {"v", Rational(0)},
                                       {"w", Rational(2)}, {"x", Rational(7)}};
    CHECK(P(ctx, "u^2-w^2").evaluate(pt) == Rational(0));
    CHECK(Poly::zero(ctx).evaluate(pt) == Rational(0));
    auto ctx2 = make_context({"u", "v"});
    CHECK(P(ctx2, "u^2+v^2").evaluate({{"u", Rational(-2)}, {"v", Rational(197, 100)}}) ==
          Rational(78809, 10000));
    CHECK_THROWS_AS(P(ctx, "u").evaluate(std::map<std::string, Rational>{}), contract_error);
}

TEST_CASE("exact division") {
    auto ctx = make_context({"u", "v", "w"});
    // 2uvw(u^2-w^2) / (u^2-w^2) = 2uvw exactly
    auto [q1, r1] = Poly::divide_exact(P(ctx, "2*u*v*w*(u^2-w^2)"), P(ctx, "u^2-w^2"));
    CHECK(r1.is_zero());
    CHECK(q1 == P(ctx, "2*u*v*w"));

    Poly p = P(ctx, "u^2*v - 3*w + 1");
    auto [q2, r2] = Poly::divide_exact(p, P(ctx, "1"));
    CHECK(q2 == p);
    CHECK(r2.is_zero());

    auto [q3, r3] = Poly::divide_exact(P(ctx, "u^2+1"), P(ctx, "u"));
    CHECK(q3 == P(ctx, "u"));
    CHECK(r3 == P(ctx, "1"));

    CHECK_THROWS_AS(Poly::divide_exact(p, Poly::zero(ctx)), math_error);
}

TEST_CASE("division recomposition on random inputs") {
    auto ctx = uvwx();
    std::mt19937_64 rng(1234);
    int nontrivial = 0;
    for (int i = 0; i < 200; ++i) {
        Poly p = random_poly(ctx, rng, 4, 8);
        Poly q = random_poly(ctx, rng, 2, 3);
        if (q.is_zero()) continue;
        auto [quot, rem] = Poly::divide_exact(p, q);
        CHECK(quot * q + rem == p);
        // no remainder term divisible by the leading monomial of q
        for (const Term& t : rem.terms()) CHECK(!q.leading_term().mono.divides(t.mono));
        if (!quot.is_zero()) ++nontrivial;
    }
    CHECK(nontrivial > 20);
}

TEST_CASE("degree queries") {
    auto ctx = make_context({"u", "v", "w"});
    CHECK(P(ctx, "u^2*v - w").degree_in("u") == 2);
    CHECK(P(ctx, "5").degree_in("u") == 0);
    CHECK_FALSE(Poly::zero(ctx).degree_in("u").has_value()); // minus-infinity sentinel
    CHECK_FALSE(Poly::zero(ctx).total_degree().has_value());
    CHECK(P(ctx, "u^2*v - w").total_degree() == 3);
}

TEST_CASE("content and monomial division") {
    auto ctx = make_context({"u", "delta"});
    Poly p = P(ctx, "delta^2*u + delta^3");
    CHECK(p.content_power(1) == 2);
    CHECK(p.divided_by_var_power(1, 2) == P(ctx, "u + delta"));
    CHECK_THROWS_AS(p.divided_by_var_power(1, 3), contract_error);
}

TEST_CASE("serialization round trip") {
    auto ctx = uvwx();
    std::mt19937_64 rng(5150);
    for (int i = 0; i < 50; ++i) {
        Poly p = random_poly(ctx, rng, 5, 10);
        Poly q = Poly::deserialize(p.serialize());
        CHECK(p == q);
        CHECK(p.serialize() == q.serialize()); // byte-exact fixpoint
    }
}

TEST_CASE("expression printer parses back") {
    auto ctx = uvwx();
    std::mt19937_64 rng(31337);
    for (int i = 0; i < 100; ++i) {
        Poly p = random_poly(ctx, rng);
        CHECK(parse_expression(p.to_expression(), ctx) == p);
    }
    CHECK(Poly::zero(ctx).to_expression() == "0");
}

TEST_CASE("context mismatch is rejected") {
    auto a = make_context({"x", "y"});
    auto b = make_context({"y", "x"});
    CHECK_THROWS_AS(P(a, "x") + P(b, "x"), contract_error);
    CHECK_THROWS_AS(P(a, "x") * P(b, "y"), contract_error);
}

TEST_CASE("rational function canonical sign") {
    auto ctx = make_context({"u", "kappa"});
    RationalFunction rf(P(ctx, "u"), P(ctx, "-1-kappa^2"));
    CHECK(rf.denominator.leading_term().coeff.sign() > 0);
    CHECK(rf.numerator == P(ctx, "-u"));
    CHECK_THROWS_AS(RationalFunction(P(ctx, "u"), Poly::zero(ctx)), math_error);
}
