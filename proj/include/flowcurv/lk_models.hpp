#ifndef FLOWCURV_LK_MODELS_HPP
#define FLOWCURV_LK_MODELS_HPP

#include "flowcurv/flow.hpp"
#include "flowcurv/odesystem.hpp"

namespace flowcurv {
namespace lk {

/// Five-mode model with damping and forcing, fast time:
///   dx/dt = -y - kappa x
///   dy/dt = x + eps u v - kappa y
///   du/dt = delta (-v w + delta eps v y - delta u)
///   dv/dt = delta (u w - delta eps u y - delta v + F)
///   dw/dt = -delta (u v + delta w)
OdeSystem generalized();

/// The same model written in slow time (delta multiplying the x, y
/// derivatives); rescale_to_fast_time turns it into generalized().
OdeSystem generalized_slow();

/// Zero-forcing, zero-dissipation variant in slow time:
///   eps dx/dt = -y,  eps dy/dt = x + b u v,
///   du/dt = -v w + b eps v y,  dv/dt = u w - b eps u y,  dw/dt = -u v
OdeSystem conservative_slow();

/// Fast-time form of the conservative model (the canonical stored
/// form; equals rescale_to_fast_time(conservative_slow())).
OdeSystem conservative();

/// The undamped-parameter original form:
///   dx/dt = -y - kappa x, dy/dt = x + eps u v - kappa y,
///   du/dt = -v w + eps v y - alpha u,
///   dv/dt = u w - eps u y - alpha v + alpha F,
///   dw/dt = -u v - alpha w
OdeSystem original();

/// The side of the model catalogue an entry belongs to.
enum class Model { generalized, conservative };

struct KnownResult {
    enum class Kind {
        invariant_manifold,
        singular_approximation,
        factorization,
        cofactor,
        degree_profile
    };

    std::string label;
    Kind kind = Kind::invariant_manifold;
    bool advisory = false; // mismatches are reported, not failed

    // regime: substitutions under which the claim holds
    std::map<std::string, Rational> regime;
    // recommended concrete parameter values for exact division work
    std::map<std::string, Rational> test_bindings;
    // whether the claim is stated against the slow-time written form
    bool use_slow_form = false;

    std::vector<Poly> polys;                              // manifolds / factors / remainders
    std::map<std::string, RationalFunction> fast_solution; // singular approximation
    std::map<std::string, int> degree_profile;
};

std::vector<KnownResult> known_results(Model model);

/// Shipped definition-file sources, byte-for-byte what the model files
/// under models/ contain.
const std::string& generalized_source();
const std::string& generalized_slow_source();
const std::string& conservative_source();
const std::string& original_source();

} // namespace lk
} // namespace flowcurv

#endif
