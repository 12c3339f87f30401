#ifndef FLOWCURV_FLOW_HPP
#define FLOWCURV_FLOW_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "flowcurv/linalg.hpp"
#include "flowcurv/odesystem.hpp"

namespace flowcurv {

/// Successive total time derivatives of the state along the flow:
/// levels[m-1] holds the components of X^(m), m = 1..upto.
struct JetTable {
    std::vector<std::vector<Poly>> levels;

    const std::vector<Poly>& order(int m) const { return levels.at(static_cast<size_t>(m - 1)); }
    int max_order() const { return static_cast<int>(levels.size()); }
};

/// J[i][j] = d(rhs_i)/d(state_j); parameters are constants.
PolyMatrix jacobian(const OdeSystem& sys);

/// Total time derivative of a scalar along the system flow:
/// sum_i d(p)/d(x_i) * rhs_i over the state variables.
Poly total_derivative(const OdeSystem& sys, const Poly& p);

JetTable flow_jet(const OdeSystem& sys, int upto);

/// flow_jet with a term-count guard: throws math_error once the jet
/// table exceeds max_terms (0 disables the guard).
JetTable flow_jet_guarded(const OdeSystem& sys, int upto, size_t max_terms);

/// How the derivative rows of the manifold determinant are built.
/// stationary_jacobian freezes J along the flow (X^(m+1) = J^m X^(1),
/// exact for linear systems, and the locally-stationary approximation
/// behind the cofactor theory otherwise); exact takes genuine total
/// derivatives.
enum class JetKind { stationary_jacobian, exact };

/// Rows X^(1)..X^(upto) under the stationary-Jacobian rule.
JetTable stationary_jets(const OdeSystem& sys, int upto, size_t max_terms = 0);

struct SubstRecord {
    std::string var;
    std::string value; // canonical expression text
};

/// A manifold equation phi = 0 with its provenance: which system, how
/// many Lie derivatives were taken, which power of the small parameter
/// was factored out of the raw determinant, and what substitutions
/// have been applied since.
struct ManifoldEq {
    Poly phi;
    uint64_t system_hash = 0;
    int lie_order = 0;
    int cleared_small_exponent = 0;
    JetKind jet_kind = JetKind::stationary_jacobian;
    std::vector<std::string> state_vars;
    std::vector<SubstRecord> substitutions_applied;

    std::string serialize() const;
    static ManifoldEq deserialize(const std::string& doc);

    bool poly_is_state_free(const Poly& p) const;
};

/// The curvature manifold det(X^(1), ..., X^(n)). Slow-time systems
/// are rescaled to fast time first so the rows follow the genuine
/// flow. When an unbound small parameter is present, the overall
/// power of it dividing the determinant is removed and recorded in
/// cleared_small_exponent.
ManifoldEq curvature_manifold(const OdeSystem& sys, DetAlgo algo = DetAlgo::laplace_dp,
                              size_t max_terms = 0, JetKind kind = JetKind::stationary_jacobian);

/// Raw jet determinant of order n (rows X^(1)..X^(n-1), X^(top)) with
/// no content clearing; top = n gives the plain determinant, top =
/// n+1 the row-replaced one. Test support for the Lie-derivative
/// identity.
Poly jet_determinant(const OdeSystem& sys, int top_order, DetAlgo algo = DetAlgo::laplace_dp);

ManifoldEq lie_derivative(const OdeSystem& sys, const ManifoldEq& m);

struct DarbouxVerdict {
    bool invariant = false;
    Poly lie;       // L_X phi
    Poly cofactor;  // quotient (the Darboux cofactor when invariant)
    Poly remainder; // zero when invariant
};

/// Divide L_X phi by phi: zero remainder means phi = 0 is invariant
/// with the quotient as cofactor.
DarbouxVerdict darboux_check(const OdeSystem& sys, const ManifoldEq& m);

struct TlsaResult {
    PolyMatrix djdt;
    /// Whether dJ/dt vanishes entrywise once the small parameter is set
    /// to zero; empty when the system has no small parameter.
    std::optional<bool> zero_at_small_param_zero;
};

TlsaResult tlsa_check(const OdeSystem& sys);

/// Solve the fast subsystem's equilibrium at small parameter zero by
/// Cramer's rule: fast rhs must be affine in the fast variables.
std::map<std::string, RationalFunction> singular_approximation(const OdeSystem& sys);

ManifoldEq restrict_manifold(const ManifoldEq& m, const std::map<std::string, SubstValue>& bindings);

struct FactorCheckResult {
    bool ok = false;                // every division left remainder zero
    bool quotient_state_free = false;
    Poly quotient;                  // running quotient (final when ok)
    Poly failed_remainder;          // first nonzero remainder
    int failed_index = -1;
};

/// Divide phi sequentially by each candidate factor.
FactorCheckResult factor_check(const ManifoldEq& m, const std::vector<Poly>& candidates);

} // namespace flowcurv

#endif
