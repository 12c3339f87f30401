#include "flowcurv/sysdsl.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "flowcurv/expr.hpp"

namespace flowcurv {

namespace {

std::string strip_comment(const std::string& line) {
    auto pos = line.find('#');
    return pos == std::string::npos ? line : line.substr(0, pos);
}

bool blank(const std::string& s) {
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) return false;
    return true;
}

std::vector<std::string> split_words(const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> words;
    std::string w;
    while (is >> w) words.push_back(w);
    return words;
}

bool valid_ident(const std::string& s) {
    if (s.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    return true;
}

} // namespace

OdeSystem parse_system(const std::string& source) {
    std::vector<std::string> lines;
    {
        std::istringstream is(source);
        std::string line;
        while (std::getline(is, line)) lines.push_back(line);
    }

    OdeSystem sys;
    bool seen_state = false, seen_param = false, seen_small = false, seen_time = false, seen_fast = false;
    bool in_equations = false;
    std::vector<std::pair<int, std::string>> equations; // line number, text
    std::vector<std::string> eq_vars;

    for (size_t li = 0; li < lines.size(); ++li) {
        int lineno = static_cast<int>(li) + 1;
        std::string text = strip_comment(lines[li]);
        if (blank(text)) continue;

        auto words = split_words(text);
        const std::string& head = words[0];

        bool is_directive =
            head == "state" || head == "param" || head == "small" || head == "time" || head == "fast";
        if (is_directive) {
            if (in_equations) throw parse_error("declaration after equations", lineno);
            if (head == "state") {
                if (seen_state) throw parse_error("duplicate 'state' declaration", lineno);
                seen_state = true;
                for (size_t i = 1; i < words.size(); ++i) {
                    if (!valid_ident(words[i])) throw parse_error("bad state name '" + words[i] + "'", lineno);
                    if (sys.is_state(words[i]))
                        throw parse_error("duplicate declaration of '" + words[i] + "'", lineno);
                    sys.state_vars.push_back(words[i]);
                }
                if (sys.state_vars.empty()) throw parse_error("empty 'state' declaration", lineno);
            } else if (head == "param") {
                if (seen_param) throw parse_error("duplicate 'param' declaration", lineno);
                seen_param = true;
                for (size_t i = 1; i < words.size(); ++i) {
                    if (!valid_ident(words[i])) throw parse_error("bad parameter name '" + words[i] + "'", lineno);
                    if (sys.is_param(words[i]) || sys.is_state(words[i]))
                        throw parse_error("duplicate declaration of '" + words[i] + "'", lineno);
                    sys.params.push_back(words[i]);
                }
            } else if (head == "small") {
                if (seen_small) throw parse_error("duplicate 'small' declaration", lineno);
                seen_small = true;
                if (words.size() != 2) throw parse_error("'small' takes exactly one parameter name", lineno);
                if (!sys.is_param(words[1]))
                    throw parse_error("small parameter '" + words[1] + "' is not a declared parameter", lineno);
                sys.small_param = words[1];
            } else if (head == "time") {
                if (seen_time) throw parse_error("duplicate 'time' declaration", lineno);
                seen_time = true;
                if (words.size() != 2 || (words[1] != "fast" && words[1] != "slow"))
                    throw parse_error("'time' must be 'fast' or 'slow'", lineno);
                sys.time = words[1] == "fast" ? TimeScale::fast : TimeScale::slow;
            } else { // fast
                if (seen_fast) throw parse_error("duplicate 'fast' declaration", lineno);
                seen_fast = true;
                for (size_t i = 1; i < words.size(); ++i) {
                    if (!sys.is_state(words[i]))
                        throw parse_error("fast variable '" + words[i] + "' is not a declared state", lineno);
                    if (sys.is_fast(words[i]))
                        throw parse_error("duplicate declaration of '" + words[i] + "'", lineno);
                    sys.fast_vars.push_back(words[i]);
                }
            }
            continue;
        }

        // equation line: d<var>/dt = <expr>
        in_equations = true;
        auto eq_pos = text.find('=');
        if (eq_pos == std::string::npos) throw parse_error("expected '=' in equation", lineno);
        std::string lhs = text.substr(0, eq_pos);
        auto lhs_words = split_words(lhs);
        if (lhs_words.size() != 1 || lhs_words[0].size() < 4 || lhs_words[0][0] != 'd' ||
            lhs_words[0].substr(lhs_words[0].size() - 3) != "/dt")
            throw parse_error("equation must start with 'd<var>/dt ='", lineno);
        std::string var = lhs_words[0].substr(1, lhs_words[0].size() - 4);
        if (!sys.is_state(var)) {
            if (sys.is_param(var))
                throw parse_error("equation for parameter '" + var + "'", lineno);
            throw parse_error("equation for undeclared variable '" + var + "'", lineno);
        }
        for (const auto& ev : eq_vars)
            if (ev == var) throw parse_error("duplicate equation for '" + var + "'", lineno);
        eq_vars.push_back(var);
        equations.emplace_back(lineno, text.substr(eq_pos + 1));
    }

    if (!seen_state) throw parse_error("missing 'state' declaration", static_cast<int>(lines.size()));
    sys.ctx = OdeSystem::build_context(sys.state_vars, sys.params, sys.small_param);

    sys.rhs.assign(sys.state_vars.size(), Poly(sys.ctx));
    std::vector<bool> have(sys.state_vars.size(), false);
    for (size_t e = 0; e < equations.size(); ++e) {
        int idx = sys.state_index(eq_vars[e]);
        sys.rhs[static_cast<size_t>(idx)] =
            parse_expression(equations[e].second, sys.ctx, equations[e].first);
        have[static_cast<size_t>(idx)] = true;
    }
    for (size_t i = 0; i < have.size(); ++i)
        if (!have[i])
            throw parse_error("missing equation for state variable '" + sys.state_vars[i] + "'",
                              static_cast<int>(lines.size()));

    sys.validate();
    return sys;
}

OdeSystem parse_system_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw contract_error("cannot read file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_system(ss.str());
}

OdeSystem rescale_to_fast_time(const OdeSystem& sys) {
    if (!sys.small_param) throw contract_error("system has no small parameter");
    if (sys.time == TimeScale::fast) return sys;
    OdeSystem out = sys;
    Poly eps = Poly::variable(sys.ctx, *sys.small_param);
    for (size_t i = 0; i < sys.state_vars.size(); ++i)
        if (!sys.is_fast(sys.state_vars[i])) out.rhs[i] = sys.rhs[i] * eps;
    out.time = TimeScale::fast;
    return out;
}

OdeSystem bind_params(const OdeSystem& sys, const std::map<std::string, Rational>& bindings, bool force) {
    for (const auto& [name, value] : bindings) {
        (void)value;
        if (!sys.is_param(name)) throw contract_error("unknown parameter '" + name + "'");
        if (sys.small_param && name == *sys.small_param && !force)
            throw contract_error("binding the small parameter '" + name + "' requires force");
    }
    if (bindings.empty()) return sys;

    OdeSystem out;
    out.state_vars = sys.state_vars;
    out.time = sys.time;
    out.fast_vars = sys.fast_vars;
    out.bindings = sys.bindings;
    for (const auto& p : sys.params)
        if (!bindings.count(p)) out.params.push_back(p);
    out.small_param = sys.small_param;
    if (out.small_param && bindings.count(*out.small_param)) {
        if (sys.time == TimeScale::slow)
            throw contract_error("cannot bind the small parameter of a slow-time system; rescale first");
        out.small_param.reset();
    }
    out.ctx = OdeSystem::build_context(out.state_vars, out.params, out.small_param);

    std::map<std::string, SubstValue> subst;
    for (const auto& [name, value] : bindings) {
        subst.emplace(name, value);
        out.bindings[name] = value;
    }
    out.rhs.reserve(sys.rhs.size());
    for (const auto& p : sys.rhs) out.rhs.push_back(p.substitute(subst).transplanted(out.ctx));
    out.validate();
    return out;
}

} // namespace flowcurv
