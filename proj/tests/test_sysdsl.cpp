#include <doctest.h>
#include <random>

#include "flowcurv/expr.hpp"
#include "flowcurv/sysdsl.hpp"

using namespace flowcurv;

namespace {

const char* kTiny = "state x\nparam\ndx/dt = -x\n";

const char* kDemo = R"(state  x y u v w          # ordered state variables
param  delta kappa eps F  # ordered parameters
small  delta              # optional; must be a param
time   fast               # 'fast' (default) or 'slow'
fast   x y                # optional fast-variable subset
dx/dt = -y - kappa*x
dy/dt = x + eps*u*v - kappa*y
du/dt = delta*(-(v*w) + delta*eps*v*y - delta*u)
dv/dt = delta*(u*w - delta*eps*u*y - delta*v + F)
dw/dt = -delta*(u*v + delta*w)
)";

} // namespace

TEST_CASE("minimal one-variable system") {
    OdeSystem sys = parse_system(kTiny);
    CHECK(sys.state_vars == std::vector<std::string>{"x"});
    CHECK(sys.params.empty());
    CHECK_FALSE(sys.small_param.has_value());
    CHECK(sys.rhs[0] == parse_expression("-x", sys.ctx));
}

TEST_CASE("full grammar demo parses") {
    OdeSystem sys = parse_system(kDemo);
    CHECK(sys.n_states() == 5);
    CHECK(sys.params == std::vector<std::string>{"delta", "kappa", "eps", "F"});
    CHECK(sys.small_param == "delta");
    CHECK(sys.fast_vars == std::vector<std::string>{"x", "y"});
    CHECK(sys.time == TimeScale::fast);
    // context: states first, then params with the small parameter last
    CHECK(sys.ctx->names() ==
          std::vector<std::string>{"x", "y", "u", "v", "w", "kappa", "eps", "F", "delta"});
    CHECK(sys.rhs_of("w") == parse_expression("-delta*(u*v + delta*w)", sys.ctx));
}

TEST_CASE("parse errors carry positions and names") {
    // undeclared variable in an equation
    CHECK_THROWS_WITH_AS(parse_system("state x\nparam\ndx/dt = x*yy\n"),
                         doctest::Contains("undeclared variable 'yy'"), parse_error);
    try {
        parse_system("state x\nparam\ndx/dt = x*yy\n");
    } catch (const parse_error& e) {
        CHECK(e.line == 3);
        CHECK(e.col > 0);
    }
    // duplicate declaration
    CHECK_THROWS_WITH_AS(parse_system("state x x\nparam\ndx/dt = -x\n"),
                         doctest::Contains("duplicate declaration"), parse_error);
    CHECK_THROWS_WITH_AS(parse_system("state x\nparam x\ndx/dt = -x\n"),
                         doctest::Contains("duplicate declaration of 'x'"), parse_error);
    // duplicate equation
    CHECK_THROWS_WITH_AS(parse_system("state x\nparam\ndx/dt = -x\ndx/dt = x\n"),
                         doctest::Contains("duplicate equation"), parse_error);
    // missing equation
    CHECK_THROWS_WITH_AS(parse_system("state x y\nparam\ndx/dt = -x\n"),
                         doctest::Contains("missing equation for state variable 'y'"), parse_error);
    // non-polynomial construct
    CHECK_THROWS_WITH_AS(parse_system("state x y\nparam\ndx/dt = x/y\ndy/dt = x\n"),
                         doctest::Contains("non-literal"), parse_error);
    // small must be a param
    CHECK_THROWS_WITH_AS(parse_system("state x\nparam\nsmall x\ndx/dt = -x\n"),
                         doctest::Contains("not a declared parameter"), parse_error);
    // equation for a parameter
    CHECK_THROWS_WITH_AS(parse_system("state x\nparam a\ndx/dt = -x\nda/dt = a\n"),
                         doctest::Contains("equation for parameter"), parse_error);
    // declaration after equations
    CHECK_THROWS_WITH_AS(parse_system("state x\nparam\ndx/dt = -x\nfast x\n"),
                         doctest::Contains("declaration after equations"), parse_error);
}

TEST_CASE("division by integer literal is allowed, by variables is not") {
    OdeSystem sys = parse_system("state x\nparam\ndx/dt = x/2 + 3/4\n");
    CHECK(sys.rhs[0] == parse_expression("1/2*x + 3/4", sys.ctx));
}

TEST_CASE("round trip: parse, serialize, parse") {
    for (const char* src : {kTiny, kDemo}) {
        OdeSystem s1 = parse_system(src);
        std::string text1 = s1.serialize();
        OdeSystem s2 = parse_system(text1);
        CHECK(s2.serialize() == text1); // byte-exact fixpoint
        CHECK(s2.state_vars == s1.state_vars);
        CHECK(s2.params == s1.params);
        CHECK(s2.rhs == s1.rhs);
        CHECK(s1.hash() == s2.hash());
    }
}

TEST_CASE("rescale to fast time") {
    const char* slow_src = R"(state x y
param eps
small eps
time slow
fast x
dx/dt = y - x
dy/dt = -y
)";
    OdeSystem slow = parse_system(slow_src);
    OdeSystem fast = rescale_to_fast_time(slow);
    CHECK(fast.time == TimeScale::fast);
    CHECK(fast.rhs_of("x") == parse_expression("y - x", fast.ctx));   // fast rhs unchanged
    CHECK(fast.rhs_of("y") == parse_expression("-eps*y", fast.ctx)); // slow rhs picks up eps
    // idempotent
    OdeSystem again = rescale_to_fast_time(fast);
    CHECK(again.serialize() == fast.serialize());
    // no small parameter -> error
    OdeSystem tiny = parse_system(kTiny);
    CHECK_THROWS_AS(rescale_to_fast_time(tiny), contract_error);
}

TEST_CASE("bind_params") {
    OdeSystem sys = parse_system(kDemo);
    OdeSystem bound = bind_params(sys, {{"kappa", Rational(1, 2)}});
    CHECK_FALSE(bound.is_param("kappa"));
    CHECK(bound.rhs_of("x") == parse_expression("-y - 1/2*x", bound.ctx));
    CHECK(bound.bindings.at("kappa") == Rational(1, 2));

    // empty bindings: identity
    OdeSystem same = bind_params(sys, {});
    CHECK(same.serialize() == sys.serialize());

    // small parameter needs force
    CHECK_THROWS_AS(bind_params(sys, {{"delta", Rational(0)}}), contract_error);
    OdeSystem forced = bind_params(sys, {{"delta", Rational(1, 10)}}, true);
    CHECK_FALSE(forced.small_param.has_value());

    CHECK_THROWS_AS(bind_params(sys, {{"nope", Rational(1)}}), contract_error);
}

TEST_CASE("state and parameter cannot collide across directives") {
    CHECK_THROWS_AS(parse_system("state x\nparam\nfast q\ndx/dt = -x\n"), parse_error);
    CHECK_THROWS_AS(parse_system("state x\nparam\ntime sideways\ndx/dt = -x\n"), parse_error);
}

TEST_CASE("parser rejects malformed input without crashing") {
    // deterministic pseudo-random line soup: every outcome must be a
    // clean parse_error (or a valid parse), never a crash
    std::mt19937_64 rng(424242);
    const std::string alphabet = "xyzuvw deltaps*+-/^()=#.0123456789\n\t_";
    std::uniform_int_distribution<size_t> pick(0, alphabet.size() - 1);
    std::uniform_int_distribution<int> len(0, 160);
    int parsed_ok = 0, rejected = 0;
    for (int trial = 0; trial < 500; ++trial) {
        std::string src = "state x y\nparam a\n";
        int n = len(rng);
        for (int i = 0; i < n; ++i) src += alphabet[pick(rng)];
        try {
            (void)parse_system(src);
            ++parsed_ok;
        } catch (const parse_error&) {
            ++rejected;
        } catch (const contract_error&) {
            ++rejected;
        }
    }
    CHECK(parsed_ok + rejected == 500);
    CHECK(rejected > 400); // almost everything random is malformed
}
