#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "flowcurv/expr.hpp"
#include "flowcurv/flow.hpp"
#include "flowcurv/numerics.hpp"
#include "flowcurv/sysdsl.hpp"

using namespace flowcurv;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "flowcurv 0.1.0";

// exit codes: 0 success, 1 usage, 2 parse error, 3 math error
constexpr int kUsage = 1;
constexpr int kParse = 2;
constexpr int kMath = 3;

struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw usage_error("cannot read file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void atomic_write(const std::string& path, const std::string& data) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw usage_error("cannot write file '" + tmp + "'");
        out << data;
        if (!out) throw usage_error("write failed for '" + tmp + "'");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw usage_error("cannot move '" + tmp + "' into place");
}

std::pair<std::string, std::string> split_kv(const std::string& s, const char* what) {
    auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0)
        throw usage_error(std::string(what) + " must look like name=value, got '" + s + "'");
    return {s.substr(0, eq), s.substr(eq + 1)};
}

std::map<std::string, Rational> parse_rational_bindings(const std::vector<std::string>& kvs,
                                                        const char* what) {
    std::map<std::string, Rational> out;
    for (const auto& kv : kvs) {
        auto [name, value] = split_kv(kv, what);
        out[name] = Rational::parse_decimal(value);
    }
    return out;
}

std::vector<double> parse_ic(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) throw usage_error("empty component in --ic");
        out.push_back(Rational::parse_decimal(item).to_double());
    }
    if (out.empty()) throw usage_error("--ic must list the initial state");
    return out;
}

struct ManifestInfo {
    std::vector<std::string> command;
    std::map<std::string, std::string> inputs;   // path -> hash
    std::map<std::string, std::string> bindings; // name -> exact value
    std::vector<std::string> outputs;
};

std::string file_hash(const std::string& path) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx",
                  static_cast<unsigned long long>(fnv1a64(slurp(path))));
    return buf;
}

void write_manifest(const ManifestInfo& info, const std::string& out_path) {
    json j;
    j["tool"] = kVersion;
    j["command"] = info.command;
    j["inputs"] = json::object();
    for (const auto& [path, hash] : info.inputs) j["inputs"][path] = hash;
    j["bindings"] = json::object();
    for (const auto& [name, value] : info.bindings) j["bindings"][name] = value;
    j["outputs"] = info.outputs;
    atomic_write(out_path + ".manifest.json", j.dump(2) + "\n");
}

OdeSystem load_system(const std::string& path) {
    std::string text = slurp(path); // usage error when missing
    return parse_system(text);      // parse_error on bad content
}

DetAlgo det_algo_of(const std::string& s) {
    if (s == "laplace") return DetAlgo::laplace_dp;
    if (s == "bareiss") return DetAlgo::bareiss;
    throw usage_error("--det must be 'laplace' or 'bareiss'");
}

JetKind jet_kind_of(const std::string& s) {
    if (s == "stationary") return JetKind::stationary_jacobian;
    if (s == "exact") return JetKind::exact;
    throw usage_error("--jets must be 'stationary' or 'exact'");
}

std::map<std::string, SubstValue> to_subst(const std::map<std::string, Rational>& b) {
    std::map<std::string, SubstValue> out;
    for (const auto& [k, v] : b) out.emplace(k, SubstValue(v));
    return out;
}

// ---------------------------------------------------------------- derive

int cmd_derive(const std::string& system_path, int lie_order, const std::string& out_path,
               const std::string& det, const std::string& jets,
               const std::vector<std::string>& bind_kvs, size_t max_terms, bool force,
               const std::vector<std::string>& argv) {
    OdeSystem sys = load_system(system_path);
    auto bindings = parse_rational_bindings(bind_kvs, "--bind");
    if (!bindings.empty()) {
        if (sys.time == TimeScale::slow && sys.small_param && bindings.count(*sys.small_param))
            sys = rescale_to_fast_time(sys);
        sys = bind_params(sys, bindings, /*force=*/true);
    }

    ManifoldEq m = curvature_manifold(sys, det_algo_of(det), force ? 0 : max_terms, jet_kind_of(jets));
    OdeSystem lie_sys = sys.time == TimeScale::slow ? rescale_to_fast_time(sys) : sys;
    for (int k = 0; k < lie_order; ++k) m = lie_derivative(lie_sys, m);

    std::printf("system %s (hash %016llx)\n", system_path.c_str(),
                static_cast<unsigned long long>(sys.hash()));
    std::printf("jets %s, det %s, lie order %d", jets.c_str(), det.c_str(), m.lie_order);
    if (m.cleared_small_exponent > 0 && sys.small_param)
        std::printf(", cleared %s^%d", sys.small_param->c_str(), m.cleared_small_exponent);
    std::printf("\n");
    std::printf("phi: %zu terms\n", m.phi.term_count());
    for (const auto& name : m.phi.context()->names()) {
        auto d = m.phi.degree_in(name);
        std::printf("degree %s %s\n", name.c_str(), d ? std::to_string(*d).c_str() : "-inf");
    }

    std::string doc = m.serialize();
    if (out_path.empty()) {
        std::fputs(doc.c_str(), stdout);
    } else {
        atomic_write(out_path, doc);
        ManifestInfo info;
        info.command = argv;
        info.inputs[system_path] = file_hash(system_path);
        for (const auto& [k, v] : bindings) info.bindings[k] = v.str();
        info.outputs = {out_path};
        write_manifest(info, out_path);
        std::printf("wrote %s\n", out_path.c_str());
    }
    return 0;
}

// ---------------------------------------------------------------- darboux

int cmd_darboux(const std::string& system_path, const std::string& phi_path,
                const std::string& phi_expr, const std::vector<std::string>& set_kvs,
                const std::string& locality_expr) {
    OdeSystem sys = load_system(system_path);
    ManifoldEq m;
    if (!phi_expr.empty()) {
        m.phi = parse_expression(phi_expr, sys.ctx);
        m.system_hash = sys.hash();
        m.state_vars = sys.state_vars;
    } else if (!phi_path.empty()) {
        m = ManifoldEq::deserialize(slurp(phi_path));
        m.phi = m.phi.transplanted(sys.ctx);
        m.state_vars = sys.state_vars;
    } else {
        throw usage_error("darboux needs --phi or --phi-expr");
    }

    auto sets = parse_rational_bindings(set_kvs, "--set");
    if (!sets.empty()) {
        auto subst = to_subst(sets);
        for (auto& r : sys.rhs) r = r.substitute(subst);
        m = restrict_manifold(m, subst);
    }
    if (m.phi.is_zero()) throw math_error("phi is the zero polynomial after substitution");

    DarbouxVerdict v = darboux_check(sys, m);
    if (v.invariant) {
        std::printf("verdict: Invariant\n");
        std::printf("cofactor: %s\n", v.cofactor.to_expression().c_str());
    } else {
        std::printf("verdict: NotInvariant\n");
        std::printf("remainder: %s\n", v.remainder.to_expression().c_str());
    }
    if (!locality_expr.empty()) {
        Poly loc = parse_expression(locality_expr, sys.ctx);
        Poly lie_rest = v.invariant ? Poly::zero(sys.ctx) : v.remainder;
        auto [q, r] = Poly::divide_exact(lie_rest, loc);
        if (r.is_zero())
            std::printf("locality (%s): remainder divisible, quotient %s\n", locality_expr.c_str(),
                        q.to_expression().c_str());
        else
            std::printf("locality (%s): remainder NOT divisible\n", locality_expr.c_str());
    }
    return 0;
}

// ---------------------------------------------------------------- restrict

int cmd_restrict(const std::string& phi_path, const std::vector<std::string>& set_kvs,
                 const std::vector<std::string>& factor_exprs, const std::string& out_path,
                 const std::vector<std::string>& argv) {
    ManifoldEq m = ManifoldEq::deserialize(slurp(phi_path));
    auto sets = parse_rational_bindings(set_kvs, "--set");
    if (!sets.empty()) m = restrict_manifold(m, to_subst(sets));

    if (!factor_exprs.empty()) {
        std::vector<Poly> factors;
        for (const auto& fe : factor_exprs) factors.push_back(parse_expression(fe, m.phi.context()));
        FactorCheckResult res = factor_check(m, factors);
        std::printf("factors: %zu\n", factors.size());
        for (size_t i = 0; i < factors.size(); ++i) {
            const char* status = res.failed_index < 0 || static_cast<int>(i) < res.failed_index
                                     ? "exact"
                                     : (static_cast<int>(i) == res.failed_index ? "remainder nonzero"
                                                                                : "skipped");
            std::printf("factor %zu (%s): %s\n", i + 1, factor_exprs[i].c_str(), status);
        }
        std::printf("all divide: %s\n", res.ok ? "yes" : "no");
        if (res.ok) {
            std::printf("quotient: %s\n", res.quotient.to_expression().c_str());
            std::printf("quotient state-free: %s\n", res.quotient_state_free ? "yes" : "no");
        }
    }

    if (!out_path.empty()) {
        atomic_write(out_path, m.serialize());
        ManifestInfo info;
        info.command = argv;
        info.inputs[phi_path] = file_hash(phi_path);
        for (const auto& [k, v] : sets) info.bindings[k] = v.str();
        info.outputs = {out_path};
        write_manifest(info, out_path);
        std::printf("wrote %s\n", out_path.c_str());
    }
    return 0;
}

// ---------------------------------------------------------------- integrate

int cmd_integrate(const std::string& system_path, const std::vector<std::string>& bind_kvs,
                  const std::string& ic_csv, double t_max, double dt, int save_every,
                  const std::string& phi_path, bool normalize, const std::string& out_path,
                  const std::vector<std::string>& argv) {
    if (dt <= 0) throw usage_error("--dt must be positive");
    if (t_max <= 0) throw usage_error("--tmax must be positive");
    OdeSystem sys = load_system(system_path);
    auto exact = parse_rational_bindings(bind_kvs, "--bind");
    std::map<std::string, double> params;
    for (const auto& [k, v] : exact) params[k] = v.to_double();
    for (const auto& p : sys.params)
        if (!params.count(p)) throw usage_error("--bind is missing parameter '" + p + "'");
    std::vector<double> ic = parse_ic(ic_csv);
    if (static_cast<int>(ic.size()) != sys.n_states())
        throw usage_error("--ic needs " + std::to_string(sys.n_states()) + " components");

    Trajectory traj = integrate(sys, params, ic, t_max, dt, save_every);

    if (!phi_path.empty()) {
        ManifoldEq m = ManifoldEq::deserialize(slurp(phi_path));
        OdeSystem fast = sys.time == TimeScale::slow ? rescale_to_fast_time(sys) : sys;
        traj.add_channel("phi", eval_manifold_along(traj, fast, exact, m, false));
        if (normalize) traj.add_channel("phi_norm", eval_manifold_along(traj, fast, exact, m, true));
    }

    atomic_write(out_path, trajectory_to_csv(traj));
    ManifestInfo info;
    info.command = argv;
    info.inputs[system_path] = file_hash(system_path);
    if (!phi_path.empty()) info.inputs[phi_path] = file_hash(phi_path);
    for (const auto& [k, v] : exact) info.bindings[k] = v.str();
    info.outputs = {out_path};
    write_manifest(info, out_path);
    std::printf("integrated %zu samples, wrote %s\n", traj.size(), out_path.c_str());
    return 0;
}

// ---------------------------------------------------------------- sweep

int cmd_sweep(const std::string& system_path, const std::string& vary_kv,
              const std::vector<std::string>& bind_kvs, const std::string& ic_csv, double t_max,
              double dt, int save_every, const std::string& jets, const std::string& out_path,
              const std::vector<std::string>& argv) {
    if (dt <= 0) throw usage_error("--dt must be positive");
    if (t_max <= 0) throw usage_error("--tmax must be positive");
    auto [vary_name, vary_list] = split_kv(vary_kv, "--vary");
    std::vector<Rational> values;
    {
        std::stringstream ss(vary_list);
        std::string item;
        while (std::getline(ss, item, ',')) values.push_back(Rational::parse_decimal(item));
    }
    if (values.empty()) throw usage_error("--vary needs at least one value");

    OdeSystem sys = load_system(system_path);
    if (sys.time == TimeScale::slow) sys = rescale_to_fast_time(sys);
    auto fixed = parse_rational_bindings(bind_kvs, "--bind");
    std::vector<double> ic = parse_ic(ic_csv);
    if (static_cast<int>(ic.size()) != sys.n_states())
        throw usage_error("--ic needs " + std::to_string(sys.n_states()) + " components");

    std::string csv = vary_name + ",max_abs_phi,max_norm_phi\n";
    std::vector<double> norm_peaks;
    for (const Rational& value : values) {
        auto bindings = fixed;
        bindings[vary_name] = value;
        OdeSystem bound = bind_params(sys, bindings, /*force=*/true);
        if (!bound.params.empty())
            throw usage_error("--bind is missing parameter '" + bound.params.front() + "'");
        ManifoldEq m = curvature_manifold(bound, DetAlgo::laplace_dp, 0, jet_kind_of(jets));

        Trajectory traj = integrate(bound, {}, ic, t_max, dt, save_every);
        auto abs_channel = eval_manifold_along(traj, bound, {}, m, false);
        auto norm_channel = eval_manifold_along(traj, bound, {}, m, true);
        double max_abs = 0, max_norm = 0;
        for (double v : abs_channel) max_abs = std::max(max_abs, std::fabs(v));
        for (double v : norm_channel) max_norm = std::max(max_norm, std::fabs(v));
        norm_peaks.push_back(max_norm);
        csv += value.str() + "," + format_double(max_abs) + "," + format_double(max_norm) + "\n";
        std::printf("%s = %s: max |phi| %.6e, max normalized %.6e\n", vary_name.c_str(),
                    value.str().c_str(), max_abs, max_norm);
    }

    if (norm_peaks.size() >= 2) {
        bool decreasing = true;
        for (size_t i = 1; i < norm_peaks.size(); ++i)
            decreasing &= norm_peaks[i] < norm_peaks[i - 1];
        std::printf("max normalized residual strictly decreasing: %s\n", decreasing ? "yes" : "no");
    } else {
        std::printf("max normalized residual strictly decreasing: n/a (single value)\n");
    }

    atomic_write(out_path, csv);
    ManifestInfo info;
    info.command = argv;
    info.inputs[system_path] = file_hash(system_path);
    for (const auto& [k, v] : fixed) info.bindings[k] = v.str();
    info.bindings[vary_name] = vary_list;
    info.outputs = {out_path};
    write_manifest(info, out_path);
    std::printf("wrote %s\n", out_path.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    CLI::App app{"Slow-manifold toolkit for polynomial slow/fast systems"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    auto* derive = app.add_subcommand("derive", "Compute the curvature manifold polynomial");
    std::string d_system, d_out, d_det = "laplace", d_jets = "stationary";
    int d_lie = 0;
    std::vector<std::string> d_bind;
    size_t d_max_terms = 4000000;
    bool d_force = false;
    derive->add_option("system", d_system, "system definition file")->required();
    derive->add_option("--lie-order", d_lie, "apply this many Lie derivatives")
        ->check(CLI::NonNegativeNumber);
    derive->add_option("--out", d_out, "output manifold document");
    derive->add_option("--det", d_det, "determinant algorithm: laplace or bareiss");
    derive->add_option("--jets", d_jets, "jet construction: stationary or exact");
    derive->add_option("--bind", d_bind, "bind parameter, name=value (exact rational)");
    derive->add_option("--max-terms", d_max_terms, "refuse when the jet table exceeds this");
    derive->add_flag("--force", d_force, "ignore the size guard");

    auto* darboux = app.add_subcommand("darboux", "Check Darboux invariance of phi");
    std::string b_system, b_phi, b_expr, b_locality;
    std::vector<std::string> b_set;
    darboux->add_option("system", b_system, "system definition file")->required();
    darboux->add_option("--phi", b_phi, "manifold document");
    darboux->add_option("--phi-expr", b_expr, "phi as an expression");
    darboux->add_option("--set", b_set, "substitute var=value in system and phi");
    darboux->add_option("--locality", b_locality, "check the remainder divides by this manifold");

    auto* restrict_cmd = app.add_subcommand("restrict", "Substitute into a manifold document");
    std::string r_phi, r_out;
    std::vector<std::string> r_set, r_factors;
    restrict_cmd->add_option("--phi", r_phi, "manifold document")->required();
    restrict_cmd->add_option("--set", r_set, "substitute var=value");
    restrict_cmd->add_option("--factors", r_factors, "candidate factors to divide out");
    restrict_cmd->add_option("--out", r_out, "output manifold document");

    auto* integrate_cmd = app.add_subcommand("integrate", "Integrate with fixed-step RK4");
    std::string i_system, i_ic, i_phi, i_out;
    std::vector<std::string> i_bind;
    double i_tmax = 0, i_dt = 0;
    int i_save = 1;
    bool i_norm = false;
    integrate_cmd->add_option("system", i_system, "system definition file")->required();
    integrate_cmd->add_option("--bind", i_bind, "bind parameter, name=value");
    integrate_cmd->add_option("--ic", i_ic, "initial state, comma separated")->required();
    integrate_cmd->add_option("--tmax", i_tmax, "integration span")->required();
    integrate_cmd->add_option("--dt", i_dt, "step size")->required();
    integrate_cmd->add_option("--save-every", i_save, "record every Nth step");
    integrate_cmd->add_option("--phi", i_phi, "manifold document for a residual channel");
    integrate_cmd->add_flag("--normalize", i_norm, "add the normalized residual channel");
    integrate_cmd->add_option("--out", i_out, "output CSV")->required();

    auto* sweep = app.add_subcommand("sweep", "Residual summary across parameter values");
    std::string s_system, s_vary, s_ic, s_out, s_jets = "stationary";
    std::vector<std::string> s_bind;
    double s_tmax = 0, s_dt = 0;
    int s_save = 10;
    sweep->add_option("system", s_system, "system definition file")->required();
    sweep->add_option("--vary", s_vary, "parameter sweep, name=v1,v2,...")->required();
    sweep->add_option("--bind", s_bind, "bind the remaining parameters");
    sweep->add_option("--ic", s_ic, "initial state, comma separated")->required();
    sweep->add_option("--tmax", s_tmax, "integration span")->required();
    sweep->add_option("--dt", s_dt, "step size")->required();
    sweep->add_option("--save-every", s_save, "evaluate the residual every Nth step");
    sweep->add_option("--jets", s_jets, "jet construction: stationary or exact");
    sweep->add_option("--out", s_out, "output summary CSV")->required();

    try {
        app.parse(argc, argv);
        if (derive->parsed())
            return cmd_derive(d_system, d_lie, d_out, d_det, d_jets, d_bind, d_max_terms, d_force, args);
        if (darboux->parsed()) return cmd_darboux(b_system, b_phi, b_expr, b_set, b_locality);
        if (restrict_cmd->parsed()) return cmd_restrict(r_phi, r_set, r_factors, r_out, args);
        if (integrate_cmd->parsed())
            return cmd_integrate(i_system, i_bind, i_ic, i_tmax, i_dt, i_save, i_phi, i_norm, i_out, args);
        if (sweep->parsed())
            return cmd_sweep(s_system, s_vary, s_bind, s_ic, s_tmax, s_dt, s_save, s_jets, s_out, args);
        return kUsage;
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kUsage;
    } catch (const usage_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kUsage;
    } catch (const parse_error& e) {
        std::fprintf(stderr, "parse error: %s\n", e.what());
        return kParse;
    } catch (const math_error& e) {
        std::fprintf(stderr, "math error: %s\n", e.what());
        return kMath;
    } catch (const contract_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kUsage;
    }
}
