#include "flowcurv/odesystem.hpp"

#include <algorithm>

namespace flowcurv {

uint64_t fnv1a64(const std::string& data) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

ContextPtr OdeSystem::build_context(const std::vector<std::string>& states,
                                    const std::vector<std::string>& params,
                                    const std::optional<std::string>& small) {
    std::vector<std::string> names = states;
    for (const auto& p : params)
        if (!small || p != *small) names.push_back(p);
    if (small) names.push_back(*small);
    return make_context(names);
}

std::string OdeSystem::serialize() const {
    std::string out;
    out += "state";
    for (const auto& s : state_vars) out += " " + s;
    out += "\n";
    out += "param";
    for (const auto& p : params) out += " " + p;
    out += "\n";
    if (small_param) out += "small " + *small_param + "\n";
    out += std::string("time ") + (time == TimeScale::fast ? "fast" : "slow") + "\n";
    if (!fast_vars.empty()) {
        out += "fast";
        for (const auto& f : fast_vars) out += " " + f;
        out += "\n";
    }
    for (size_t i = 0; i < state_vars.size(); ++i)
        out += "d" + state_vars[i] + "/dt = " + rhs[i].to_expression() + "\n";
    return out;
}

uint64_t OdeSystem::hash() const { return fnv1a64(serialize()); }

void OdeSystem::validate() const {
    if (rhs.size() != state_vars.size())
        throw contract_error("right-hand side count does not match state variable count");
    if (small_param) {
        if (!is_param(*small_param)) throw contract_error("small parameter must be a declared parameter");
        if (is_state(*small_param)) throw contract_error("small parameter cannot be a state variable");
    }
    for (const auto& f : fast_vars)
        if (!is_state(f)) throw contract_error("fast variable '" + f + "' is not a state variable");
    for (const auto& s : state_vars)
        if (is_param(s)) throw contract_error("'" + s + "' declared both state and parameter");
    for (const auto& p : rhs)
        if (!same_context(p.context(), ctx)) throw contract_error("rhs polynomial context mismatch");
    if (time == TimeScale::slow) {
        if (!small_param) throw contract_error("slow-time form requires a small parameter");
        if (fast_vars.empty()) throw contract_error("slow-time form requires declared fast variables");
    }
}

} // namespace flowcurv
