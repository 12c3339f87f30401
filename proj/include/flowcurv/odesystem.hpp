#ifndef FLOWCURV_ODESYSTEM_HPP
#define FLOWCURV_ODESYSTEM_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "flowcurv/poly.hpp"

namespace flowcurv {

/// Which time parameterization the stored right-hand sides use. In a
/// slow-time system the small parameter multiplies the fast-variable
/// derivatives, so the stored fast rhs stand for eps*dx/dtau.
enum class TimeScale { fast, slow };

struct OdeSystem {
    std::vector<std::string> state_vars;
    std::vector<std::string> params; // declaration order
    std::optional<std::string> small_param;
    TimeScale time = TimeScale::fast;
    std::vector<std::string> fast_vars;
    std::vector<Poly> rhs; // one per state variable, in the shared context
    std::map<std::string, Rational> bindings; // parameters bound away so far
    ContextPtr ctx;

    int n_states() const { return static_cast<int>(state_vars.size()); }

    int state_index(const std::string& name) const {
        for (size_t i = 0; i < state_vars.size(); ++i)
            if (state_vars[i] == name) return static_cast<int>(i);
        return -1;
    }
    bool is_state(const std::string& name) const { return state_index(name) >= 0; }
    bool is_param(const std::string& name) const {
        for (const auto& p : params)
            if (p == name) return true;
        return false;
    }
    bool is_fast(const std::string& name) const {
        for (const auto& f : fast_vars)
            if (f == name) return true;
        return false;
    }

    const Poly& rhs_of(const std::string& state) const {
        int i = state_index(state);
        if (i < 0) throw contract_error("unknown state variable '" + state + "'");
        return rhs[static_cast<size_t>(i)];
    }

    /// Context order: state variables, then parameters in declaration
    /// order with the small parameter moved last.
    static ContextPtr build_context(const std::vector<std::string>& states,
                                    const std::vector<std::string>& params,
                                    const std::optional<std::string>& small);

    /// Canonical single-form text (directives then one equation per
    /// state); parsing it back reproduces the same system.
    std::string serialize() const;

    /// FNV-1a 64 over the canonical serialization.
    uint64_t hash() const;

    void validate() const;
};

uint64_t fnv1a64(const std::string& data);

} // namespace flowcurv

#endif
