#ifndef FLOWCURV_SYSDSL_HPP
#define FLOWCURV_SYSDSL_HPP

#include <string>

#include "flowcurv/odesystem.hpp"

namespace flowcurv {

/// Parse a system definition document (see README for the grammar).
/// Line-oriented, '#' starts a comment. Declarations must precede the
/// equations; one equation per declared state variable.
OdeSystem parse_system(const std::string& source);

/// Convenience: read and parse a file. Throws contract_error when the
/// file cannot be read.
OdeSystem parse_system_file(const std::string& path);

/// Convert a slow-time system (small parameter multiplying the fast
/// derivatives) to the equivalent fast-time polynomial form: fast rhs
/// kept, slow rhs multiplied by the small parameter. Identity on
/// fast-time systems.
OdeSystem rescale_to_fast_time(const OdeSystem& sys);

/// Substitute parameter values and remove the parameters from the
/// context. Binding the small parameter requires force = true.
OdeSystem bind_params(const OdeSystem& sys, const std::map<std::string, Rational>& bindings,
                      bool force = false);

} // namespace flowcurv

#endif
