#include "flowcurv/flow.hpp"

#include <sstream>

#include "flowcurv/sysdsl.hpp"

namespace flowcurv {

PolyMatrix jacobian(const OdeSystem& sys) {
    const int n = sys.n_states();
    PolyMatrix j(static_cast<size_t>(n), std::vector<Poly>(static_cast<size_t>(n)));
    for (int i = 0; i < n; ++i)
        for (int c = 0; c < n; ++c)
            j[static_cast<size_t>(i)][static_cast<size_t>(c)] = sys.rhs[static_cast<size_t>(i)].derivative(c);
    return j;
}

Poly total_derivative(const OdeSystem& sys, const Poly& p) {
    if (!same_context(p.context(), sys.ctx))
        throw contract_error("polynomial context does not match system");
    PolyBuilder acc(sys.ctx);
    for (int i = 0; i < sys.n_states(); ++i) {
        Poly d = p.derivative(i);
        if (!d.is_zero()) acc.add_product(d, sys.rhs[static_cast<size_t>(i)]);
    }
    return acc.build();
}

JetTable flow_jet(const OdeSystem& sys, int upto) { return flow_jet_guarded(sys, upto, 0); }

JetTable flow_jet_guarded(const OdeSystem& sys, int upto, size_t max_terms) {
    if (upto < 1) throw contract_error("jet order must be at least 1");
    JetTable jt;
    jt.levels.push_back(sys.rhs);
    for (int m = 1; m < upto; ++m) {
        std::vector<Poly> next;
        next.reserve(sys.rhs.size());
        size_t total = 0;
        for (const Poly& comp : jt.levels.back()) {
            next.push_back(total_derivative(sys, comp));
            total += next.back().term_count();
        }
        if (max_terms && total > max_terms)
            throw math_error("jet term count " + std::to_string(total) + " exceeds cap " +
                             std::to_string(max_terms) + " at order " + std::to_string(m + 1));
        jt.levels.push_back(std::move(next));
    }
    return jt;
}

namespace {

OdeSystem canonical_fast_form(const OdeSystem& sys) {
    return sys.time == TimeScale::slow ? rescale_to_fast_time(sys) : sys;
}

} // namespace

JetTable stationary_jets(const OdeSystem& sys, int upto, size_t max_terms) {
    if (upto < 1) throw contract_error("jet order must be at least 1");
    const int n = sys.n_states();
    PolyMatrix jac = jacobian(sys);
    JetTable jt;
    jt.levels.push_back(sys.rhs);
    for (int m = 1; m < upto; ++m) {
        std::vector<Poly> next(static_cast<size_t>(n), Poly(sys.ctx));
        size_t total = 0;
        for (int i = 0; i < n; ++i) {
            PolyBuilder acc(sys.ctx);
            for (int j = 0; j < n; ++j)
                acc.add_product(jac[static_cast<size_t>(i)][static_cast<size_t>(j)],
                                jt.levels.back()[static_cast<size_t>(j)]);
            next[static_cast<size_t>(i)] = acc.build();
            total += next[static_cast<size_t>(i)].term_count();
        }
        if (max_terms && total > max_terms)
            throw math_error("jet term count " + std::to_string(total) + " exceeds cap " +
                             std::to_string(max_terms) + " at order " + std::to_string(m + 1));
        jt.levels.push_back(std::move(next));
    }
    return jt;
}

ManifoldEq curvature_manifold(const OdeSystem& sys, DetAlgo algo, size_t max_terms, JetKind kind) {
    const int n = sys.n_states();
    if (n < 2) throw contract_error("curvature manifold needs at least two state variables");
    OdeSystem fast = canonical_fast_form(sys);
    JetTable jets = kind == JetKind::stationary_jacobian ? stationary_jets(fast, n, max_terms)
                                                         : flow_jet_guarded(fast, n, max_terms);
    PolyMatrix m(static_cast<size_t>(n));
    for (int r = 0; r < n; ++r) m[static_cast<size_t>(r)] = jets.order(r + 1);
    Poly phi = determinant(m, algo);

    ManifoldEq out;
    out.system_hash = sys.hash();
    out.lie_order = 0;
    out.jet_kind = kind;
    out.state_vars = sys.state_vars;
    if (fast.small_param && !phi.is_zero()) {
        int idx = fast.ctx->index_of(*fast.small_param);
        int s = phi.content_power(idx);
        if (s > 0) phi = phi.divided_by_var_power(idx, s);
        out.cleared_small_exponent = s;
    }
    out.phi = std::move(phi);
    return out;
}

Poly jet_determinant(const OdeSystem& sys, int top_order, DetAlgo algo) {
    const int n = sys.n_states();
    if (top_order < n) throw contract_error("top order below dimension");
    OdeSystem fast = canonical_fast_form(sys);
    JetTable jets = flow_jet(fast, top_order);
    PolyMatrix m(static_cast<size_t>(n));
    for (int r = 0; r < n - 1; ++r) m[static_cast<size_t>(r)] = jets.order(r + 1);
    m[static_cast<size_t>(n - 1)] = jets.order(top_order);
    return determinant(m, algo);
}

ManifoldEq lie_derivative(const OdeSystem& sys, const ManifoldEq& m) {
    ManifoldEq out = m;
    out.phi = total_derivative(sys, m.phi);
    out.lie_order = m.lie_order + 1;
    return out;
}

DarbouxVerdict darboux_check(const OdeSystem& sys, const ManifoldEq& m) {
    if (m.phi.is_zero()) throw contract_error("darboux check on the zero polynomial");
    DarbouxVerdict v;
    v.lie = total_derivative(sys, m.phi);
    auto [q, r] = Poly::divide_exact(v.lie, m.phi);
    v.invariant = r.is_zero();
    v.cofactor = std::move(q);
    v.remainder = std::move(r);
    return v;
}

TlsaResult tlsa_check(const OdeSystem& sys) {
    TlsaResult res;
    PolyMatrix j = jacobian(sys);
    const size_t n = j.size();
    res.djdt.assign(n, std::vector<Poly>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t c = 0; c < n; ++c) res.djdt[i][c] = total_derivative(sys, j[i][c]);
    if (sys.small_param) {
        std::map<std::string, SubstValue> zero{{*sys.small_param, SubstValue(Rational(0))}};
        bool all_zero = true;
        for (size_t i = 0; i < n && all_zero; ++i)
            for (size_t c = 0; c < n && all_zero; ++c)
                if (!res.djdt[i][c].substitute(zero).is_zero()) all_zero = false;
        res.zero_at_small_param_zero = all_zero;
    }
    return res;
}

std::map<std::string, RationalFunction> singular_approximation(const OdeSystem& sys) {
    if (sys.fast_vars.empty()) throw contract_error("no fast variables declared");
    const size_t k = sys.fast_vars.size();

    std::map<std::string, SubstValue> at_zero;
    if (sys.small_param) at_zero.emplace(*sys.small_param, SubstValue(Rational(0)));

    std::vector<Poly> f; // fast rhs at small parameter zero
    for (const auto& fv : sys.fast_vars) {
        Poly p = sys.rhs_of(fv);
        f.push_back(at_zero.empty() ? p : p.substitute(at_zero));
    }

    // affine split f_i = sum_j A[i][j] fast_j + c_i with A, c free of fast vars
    PolyMatrix a(k, std::vector<Poly>(k));
    std::vector<Poly> c;
    std::map<std::string, SubstValue> fast_zero;
    for (const auto& fv : sys.fast_vars) fast_zero.emplace(fv, SubstValue(Rational(0)));
    for (size_t i = 0; i < k; ++i) {
        for (size_t j = 0; j < k; ++j) {
            Poly aij = f[i].derivative(sys.fast_vars[j]);
            for (const auto& fv : sys.fast_vars)
                if (aij.degree_in(fv).value_or(0) > 0)
                    throw math_error("fast subsystem is not affine in the fast variables");
            a[i][j] = aij;
        }
        c.push_back(f[i].substitute(fast_zero));
    }

    Poly det_a = determinant(a);
    if (det_a.is_zero()) throw math_error("degenerate fast block: det A = 0");

    std::map<std::string, RationalFunction> out;
    for (size_t j = 0; j < k; ++j) {
        PolyMatrix aj = a;
        for (size_t i = 0; i < k; ++i) aj[i][j] = -c[i];
        out.emplace(sys.fast_vars[j], RationalFunction(determinant(aj), det_a));
    }
    return out;
}

ManifoldEq restrict_manifold(const ManifoldEq& m, const std::map<std::string, SubstValue>& bindings) {
    ManifoldEq out = m;
    out.phi = m.phi.substitute(bindings);
    for (const auto& [var, val] : bindings) {
        if (const Rational* r = std::get_if<Rational>(&val))
            out.substitutions_applied.push_back({var, r->str()});
        else
            out.substitutions_applied.push_back({var, std::get<Poly>(val).to_expression()});
    }
    return out;
}

FactorCheckResult factor_check(const ManifoldEq& m, const std::vector<Poly>& candidates) {
    FactorCheckResult res;
    res.quotient = m.phi;
    for (size_t i = 0; i < candidates.size(); ++i) {
        if (candidates[i].is_zero()) throw math_error("zero candidate factor");
        auto [q, r] = Poly::divide_exact(res.quotient, candidates[i]);
        if (!r.is_zero()) {
            res.ok = false;
            res.failed_remainder = std::move(r);
            res.failed_index = static_cast<int>(i);
            res.quotient = std::move(q);
            return res;
        }
        res.quotient = std::move(q);
    }
    res.ok = true;
    res.quotient_state_free = m.poly_is_state_free(res.quotient);
    return res;
}

bool ManifoldEq::poly_is_state_free(const Poly& p) const {
    for (const auto& sv : state_vars) {
        if (!p.context() || p.context()->index_of(sv) < 0) continue;
        if (p.degree_in(sv).value_or(0) > 0) return false;
    }
    return true;
}

std::string ManifoldEq::serialize() const {
    std::string out;
    out += "manifold v1\n";
    {
        std::ostringstream h;
        h << std::hex << system_hash;
        out += "system " + h.str() + "\n";
    }
    out += "lie-order " + std::to_string(lie_order) + "\n";
    out += "cleared-small " + std::to_string(cleared_small_exponent) + "\n";
    out += std::string("jets ") + (jet_kind == JetKind::stationary_jacobian ? "stationary" : "exact") + "\n";
    out += "states " + std::to_string(state_vars.size());
    for (const auto& s : state_vars) out += " " + s;
    out += "\n";
    out += "subst " + std::to_string(substitutions_applied.size()) + "\n";
    for (const auto& s : substitutions_applied) out += s.var + " " + s.value + "\n";
    phi.serialize_into(out);
    return out;
}

ManifoldEq ManifoldEq::deserialize(const std::string& doc) {
    std::vector<std::string> lines;
    {
        std::istringstream is(doc);
        std::string line;
        while (std::getline(is, line)) lines.push_back(line);
    }
    size_t pos = 0;
    auto next = [&]() -> std::string {
        if (pos >= lines.size()) throw parse_error("unexpected end of manifold document", static_cast<int>(pos + 1));
        return lines[pos++];
    };
    ManifoldEq m;
    if (next() != "manifold v1") throw parse_error("expected 'manifold v1' header", 1);
    {
        std::istringstream is(next());
        std::string kw, hex;
        is >> kw >> hex;
        if (kw != "system") throw parse_error("expected 'system <hash>'", static_cast<int>(pos));
        m.system_hash = std::stoull(hex, nullptr, 16);
    }
    {
        std::istringstream is(next());
        std::string kw;
        is >> kw >> m.lie_order;
        if (kw != "lie-order") throw parse_error("expected 'lie-order <k>'", static_cast<int>(pos));
    }
    {
        std::istringstream is(next());
        std::string kw;
        is >> kw >> m.cleared_small_exponent;
        if (kw != "cleared-small") throw parse_error("expected 'cleared-small <k>'", static_cast<int>(pos));
    }
    {
        std::istringstream is(next());
        std::string kw, kind;
        is >> kw >> kind;
        if (kw != "jets" || (kind != "stationary" && kind != "exact"))
            throw parse_error("expected 'jets stationary|exact'", static_cast<int>(pos));
        m.jet_kind = kind == "stationary" ? JetKind::stationary_jacobian : JetKind::exact;
    }
    {
        std::istringstream is(next());
        std::string kw;
        size_t n = 0;
        is >> kw >> n;
        if (kw != "states") throw parse_error("expected 'states <n> ...'", static_cast<int>(pos));
        for (size_t i = 0; i < n; ++i) {
            std::string s;
            if (!(is >> s)) throw parse_error("too few state names", static_cast<int>(pos));
            m.state_vars.push_back(s);
        }
    }
    {
        std::istringstream is(next());
        std::string kw;
        size_t n = 0;
        is >> kw >> n;
        if (kw != "subst") throw parse_error("expected 'subst <n>'", static_cast<int>(pos));
        for (size_t i = 0; i < n; ++i) {
            std::string line = next();
            auto sp = line.find(' ');
            if (sp == std::string::npos) throw parse_error("bad substitution record", static_cast<int>(pos));
            m.substitutions_applied.push_back({line.substr(0, sp), line.substr(sp + 1)});
        }
    }
    m.phi = Poly::deserialize_lines(lines, pos);
    return m;
}

} // namespace flowcurv
