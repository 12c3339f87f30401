#include <doctest.h>

#include <random>

#include "flowcurv/expr.hpp"
#include "flowcurv/linalg.hpp"

using namespace flowcurv;

TEST_CASE("polynomial determinant, both algorithms") {
    auto ctx = make_context({"a", "b", "c", "d"});
    auto P = [&](const char* s) { return parse_expression(s, ctx); };
    PolyMatrix m{{P("a"), P("b")}, {P("c"), P("d")}};
    Poly expect = P("a*d - b*c");
    CHECK(determinant(m, DetAlgo::laplace_dp) == expect);
    CHECK(determinant(m, DetAlgo::bareiss) == expect);

    // zero pivot path for the fraction-free route
    PolyMatrix z{{Poly::zero(ctx), P("b")}, {P("c"), P("d")}};
    CHECK(determinant(z, DetAlgo::bareiss) == P("-b*c"));

    PolyMatrix sing{{P("a"), P("b")}, {P("2*a"), P("2*b")}};
    CHECK(determinant(sing, DetAlgo::laplace_dp).is_zero());
    CHECK(determinant(sing, DetAlgo::bareiss).is_zero());
}

TEST_CASE("laplace and bareiss agree on random polynomial matrices") {
    auto ctx = make_context({"x", "y"});
    std::mt19937_64 rng(404);
    std::uniform_int_distribution<int> coef(-4, 4);
    std::uniform_int_distribution<int> ex(0, 2);
    auto rnd = [&]() {
        std::vector<Term> ts;
        for (int t = 0; t < 3; ++t) {
            Monomial m(2);
            m.set_exp(0, ex(rng));
            m.set_exp(1, ex(rng));
            ts.push_back({m, Rational(coef(rng))});
        }
        return Poly::from_terms(ctx, std::move(ts));
    };
    for (int trial = 0; trial < 25; ++trial) {
        for (int n = 2; n <= 4; ++n) {
            PolyMatrix m(n, std::vector<Poly>(n));
            for (auto& row : m)
                for (auto& e : row) e = rnd();
            CHECK(determinant(m, DetAlgo::laplace_dp) == determinant(m, DetAlgo::bareiss));
        }
    }
}

TEST_CASE("rational determinant on known values") {
    RationalMatrix m{{Rational(1), Rational(2)}, {Rational(3), Rational(4)}};
    CHECK(rational_determinant(m) == Rational(-2));
    RationalMatrix id3{{Rational(1), Rational(0), Rational(0)},
                       {Rational(0), Rational(1), Rational(0)},
                       {Rational(0), Rational(0), Rational(1)}};
    CHECK(rational_determinant(id3) == Rational(1));
    CHECK(rational_trace(id3) == Rational(3));
}

TEST_CASE("trace identity: fixed cases") {
    // J = identity: lhs = n det = Tr(I) det
    std::vector<std::vector<Rational>> vecs{{Rational(1), Rational(2)}, {Rational(3), Rational(5)}};
    RationalMatrix id{{Rational(1), Rational(0)}, {Rational(0), Rational(1)}};
    CHECK(trace_identity_oracle(id, vecs));
    // trace-free J
    RationalMatrix tf{{Rational(2), Rational(1)}, {Rational(7), Rational(-2)}};
    CHECK(trace_identity_oracle(tf, vecs));
    CHECK_THROWS_AS(trace_identity_oracle(tf, {{Rational(1)}, {Rational(2)}}), contract_error);
}

TEST_CASE("trace identity: 200 random exact cases, n in 2..5") {
    std::mt19937_64 rng(2718281828);
    std::uniform_int_distribution<int> entry(-9, 9);
    std::uniform_int_distribution<int> dim(2, 5);
    for (int trial = 0; trial < 200; ++trial) {
        int n = dim(rng);
        RationalMatrix j(n, std::vector<Rational>(n));
        std::vector<std::vector<Rational>> vecs(n, std::vector<Rational>(n));
        for (auto& row : j)
            for (auto& e : row) e = Rational(entry(rng));
        for (auto& v : vecs)
            for (auto& e : v) e = Rational(entry(rng));
        CHECK(trace_identity_oracle(j, vecs));
    }
}
