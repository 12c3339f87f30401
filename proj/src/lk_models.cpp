#include "flowcurv/lk_models.hpp"

#include "flowcurv/expr.hpp"
#include "flowcurv/sysdsl.hpp"

namespace flowcurv {
namespace lk {

namespace {

const std::string kGeneralized = R"(# Five-mode slow/fast model with damping and forcing, fast-time form.
# Rossby triad (u, v, w) coupled to the gravity pair (x, y);
# delta is the slow/fast separation, kappa the gravity damping,
# eps the coupling, F the forcing.
state x y u v w
param delta kappa eps F
small delta
time fast
fast x y
dx/dt = -y - kappa*x
dy/dt = x + eps*u*v - kappa*y
du/dt = delta*(-(v*w) + delta*eps*v*y - delta*u)
dv/dt = delta*(u*w - delta*eps*u*y - delta*v + F)
dw/dt = -delta*(u*v + delta*w)
)";

const std::string kGeneralizedSlow = R"(# Slow-time form of the generalized model: delta multiplies the
# x and y derivatives, so the stored fast rhs stand for delta*dx/dtau.
state x y u v w
param delta kappa eps F
small delta
time slow
fast x y
dx/dt = -y - kappa*x
dy/dt = x + eps*u*v - kappa*y
du/dt = -(v*w) + delta*eps*v*y - delta*u
dv/dt = u*w - delta*eps*u*y - delta*v + F
dw/dt = -(u*v) - delta*w
)";

const std::string kConservative = R"(# Zero-forcing, zero-dissipation five-mode model, slow-time form:
# eps multiplies the x and y derivatives. b is the coupling strength.
# Against the damped model this drops kappa, F and the dissipation
# terms and renames the parameters (delta -> eps, eps -> b).
state x y u v w
param eps b
small eps
time slow
fast x y
dx/dt = -y
dy/dt = x + b*u*v
du/dt = -(v*w) + b*eps*v*y
dv/dt = u*w - b*eps*u*y
dw/dt = -(u*v)
)";

const std::string kOriginal = R"(# The unscaled five-mode model: alpha damps the Rossby triad,
# kappa the gravity pair, F is the forcing, eps the coupling.
state x y u v w
param eps alpha kappa F
time fast
dx/dt = -y - kappa*x
dy/dt = x + eps*u*v - kappa*y
du/dt = -(v*w) + eps*v*y - alpha*u
dv/dt = u*w - eps*u*y - alpha*v + alpha*F
dw/dt = -(u*v) - alpha*w
)";

Poly expr(const OdeSystem& sys, const std::string& text) { return parse_expression(text, sys.ctx); }

} // namespace

const std::string& generalized_source() { return kGeneralized; }
const std::string& generalized_slow_source() { return kGeneralizedSlow; }
const std::string& conservative_source() { return kConservative; }
const std::string& original_source() { return kOriginal; }

OdeSystem generalized() { return parse_system(kGeneralized); }
OdeSystem generalized_slow() { return parse_system(kGeneralizedSlow); }
OdeSystem conservative_slow() { return parse_system(kConservative); }
OdeSystem conservative() { return rescale_to_fast_time(conservative_slow()); }
OdeSystem original() { return parse_system(kOriginal); }

std::vector<KnownResult> known_results(Model model) {
    std::vector<KnownResult> out;
    if (model == Model::generalized) {
        OdeSystem sys = generalized();
        {
            KnownResult r;
            r.label = "gravity mode v invariant at delta=0";
            r.kind = KnownResult::Kind::invariant_manifold;
            r.regime = {{"delta", Rational(0)}};
            r.polys = {expr(sys, "v")};
            out.push_back(std::move(r));
        }
        {
            KnownResult r;
            r.label = "u^2-w^2 invariant at delta=0";
            r.kind = KnownResult::Kind::invariant_manifold;
            r.regime = {{"delta", Rational(0)}};
            r.polys = {expr(sys, "u^2-w^2")};
            out.push_back(std::move(r));
        }
        {
            KnownResult r;
            r.label = "singular approximation of the gravity pair";
            r.kind = KnownResult::Kind::singular_approximation;
            r.fast_solution.emplace(
                "x", RationalFunction(expr(sys, "-eps*u*v"), expr(sys, "1+kappa^2")));
            r.fast_solution.emplace(
                "y", RationalFunction(expr(sys, "kappa*eps*u*v"), expr(sys, "1+kappa^2")));
            out.push_back(std::move(r));
        }
        {
            KnownResult r;
            r.label = "curvature manifold degree profile";
            r.kind = KnownResult::Kind::degree_profile;
            r.degree_profile = {{"u", 10}, {"v", 10}, {"w", 10}, {"x", 5}, {"y", 11}};
            out.push_back(std::move(r));
        }
        {
            KnownResult r;
            r.label = "delta=0 limit factors: v, u^2-w^2, gravity quartic";
            r.kind = KnownResult::Kind::factorization;
            r.regime = {{"delta", Rational(0)}};
            r.test_bindings = {{"kappa", Rational(1, 2)}, {"eps", Rational(1, 10)}, {"F", Rational(1, 10)}};
            r.polys = {expr(sys, "v"), expr(sys, "u^2-w^2"),
                       expr(sys, "((1+kappa^2)*x + eps*u*v)^2 + ((1+kappa^2)*y - kappa*eps*u*v)^2")};
            out.push_back(std::move(r));
        }
        {
            KnownResult r;
            r.label = "printed x=y=0 restriction (literal transcription)";
            r.kind = KnownResult::Kind::factorization;
            r.advisory = true;
            r.test_bindings = {{"kappa", Rational(1, 2)}, {"eps", Rational(1, 10)}, {"F", Rational(1, 10)}};
            r.regime = {{"x", Rational(0)}, {"y", Rational(0)}};
            r.polys = {expr(sys,
                            "u^2*w^2*(v^2*delta^2*(1+eps^2) - (delta^2-kappa)^2)"
                            " - w^2*(u^2 + v^2*w^2*delta^2)"
                            " + u^4*(1 + (delta^2-kappa)^2)"
                            " + u*v*w*delta*(delta^2-kappa)*(2*w^2 - u^2*(2+eps^2))")};
            out.push_back(std::move(r));
        }
        {
            KnownResult r;
            r.label = "printed Lie derivative of the x=y=0 restriction at delta=0";
            r.kind = KnownResult::Kind::cofactor;
            r.advisory = true;
            r.use_slow_form = true;
            r.test_bindings = {{"kappa", Rational(1, 2)}, {"eps", Rational(1, 10)}, {"F", Rational(1, 10)}};
            r.regime = {{"delta", Rational(0)}};
            r.polys = {expr(sys, "u^2*(u^2-w^2)*(1+kappa^2)")};
            out.push_back(std::move(r));
        }
    } else {
        OdeSystem sys = conservative_slow();
        {
            KnownResult r;
            r.label = "quadratic first integral u^2+v^2";
            r.kind = KnownResult::Kind::invariant_manifold;
            r.use_slow_form = true;
            r.polys = {expr(sys, "u^2+v^2")};
            out.push_back(std::move(r));
        }
        {
            KnownResult r;
            r.label = "u^2-w^2 invariant at eps=0";
            r.kind = KnownResult::Kind::invariant_manifold;
            r.use_slow_form = true;
            r.regime = {{"eps", Rational(0)}};
            r.polys = {expr(sys, "u^2-w^2")};
            out.push_back(std::move(r));
        }
        {
            KnownResult r;
            r.label = "v^2+w^2 invariant at eps=0";
            r.kind = KnownResult::Kind::invariant_manifold;
            r.use_slow_form = true;
            r.regime = {{"eps", Rational(0)}};
            r.polys = {expr(sys, "v^2+w^2")};
            out.push_back(std::move(r));
        }
        {
            KnownResult r;
            r.label = "singular approximation of the gravity pair";
            r.kind = KnownResult::Kind::singular_approximation;
            r.fast_solution.emplace("x", RationalFunction(expr(sys, "-b*u*v"), expr(sys, "1")));
            r.fast_solution.emplace("y", RationalFunction(expr(sys, "0"), expr(sys, "1")));
            out.push_back(std::move(r));
        }
        {
            KnownResult r;
            r.label = "curvature manifold degree profile";
            r.kind = KnownResult::Kind::degree_profile;
            r.degree_profile = {{"u", 9}, {"v", 9}, {"w", 9}, {"x", 5}, {"y", 11}};
            out.push_back(std::move(r));
        }
        {
            KnownResult r;
            r.label = "eps=0 limit factors: u^2-w^2, v^2+w^2, (x+buv)^2+y^2";
            r.kind = KnownResult::Kind::factorization;
            r.regime = {{"eps", Rational(0)}};
            r.test_bindings = {{"b", Rational(1, 2)}};
            r.polys = {expr(sys, "u^2-w^2"), expr(sys, "v^2+w^2"), expr(sys, "(x+b*u*v)^2 + y^2")};
            out.push_back(std::move(r));
        }
        {
            KnownResult r;
            r.label = "x=y=0 restriction factors: u^2+v^2 and the quartic sheet";
            r.kind = KnownResult::Kind::factorization;
            r.regime = {{"x", Rational(0)}, {"y", Rational(0)}};
            r.test_bindings = {{"b", Rational(1, 2)}};
            r.polys = {expr(sys, "u^2+v^2"),
                       expr(sys, "u^2*w^2 - u^4 + eps^2*v^2*w^2*(w^2 - (1+b^2)*u^2)")};
            out.push_back(std::move(r));
        }
        {
            KnownResult r;
            r.label = "quartic sheet locally invariant at eps=0";
            r.kind = KnownResult::Kind::cofactor;
            r.use_slow_form = true;
            r.regime = {{"eps", Rational(0)}};
            // manifold, expected Lie derivative / remainder, locality manifold
            r.polys = {expr(sys, "u^2*w^2 - u^4 + eps^2*v^2*w^2*(w^2 - (1+b^2)*u^2)"),
                       expr(sys, "2*u*v*w*(u^2-w^2)"), expr(sys, "u^2-w^2")};
            out.push_back(std::move(r));
        }
    }
    return out;
}

} // namespace lk
} // namespace flowcurv
