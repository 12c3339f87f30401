#include "flowcurv/numerics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>

#include "flowcurv/sysdsl.hpp"

namespace flowcurv {

void Trajectory::add_channel(std::string name, std::vector<double> values) {
    if (values.size() != times.size()) throw contract_error("channel length does not match trajectory");
    channel_names.push_back(std::move(name));
    channels.push_back(std::move(values));
}

CompiledField::CompiledField(const OdeSystem& sys, const std::map<std::string, double>& params) {
    OdeSystem fast = sys.time == TimeScale::slow ? rescale_to_fast_time(sys) : sys;
    n_ = fast.n_states();
    for (const auto& p : fast.params)
        if (!params.count(p)) throw contract_error("unbound parameter '" + p + "'");

    rhs_.resize(static_cast<size_t>(n_));
    for (int i = 0; i < n_; ++i) {
        for (const Term& t : fast.rhs[static_cast<size_t>(i)].terms()) {
            CTerm ct;
            ct.coeff = t.coeff.to_double();
            for (int v = 0; v < fast.ctx->size(); ++v) {
                int e = t.mono.exp(v);
                if (e == 0) continue;
                const std::string& name = fast.ctx->name(v);
                int si = fast.state_index(name);
                if (si >= 0) {
                    ct.pows.emplace_back(si, e);
                } else {
                    ct.coeff *= std::pow(params.at(name), e);
                }
            }
            rhs_[static_cast<size_t>(i)].push_back(std::move(ct));
        }
    }
}

void CompiledField::eval(const double* x, double* dxdt) const {
    for (int i = 0; i < n_; ++i) {
        double acc = 0.0;
        for (const CTerm& t : rhs_[static_cast<size_t>(i)]) {
            double v = t.coeff;
            for (auto [s, e] : t.pows) {
                double b = x[s];
                for (int k = 0; k < e; ++k) v *= b;
            }
            acc += v;
        }
        dxdt[i] = acc;
    }
}

Trajectory integrate(const OdeSystem& sys, const std::map<std::string, double>& params,
                     const std::vector<double>& ic, double t_max, double dt, int save_every) {
    if (dt <= 0.0) throw contract_error("dt must be positive");
    if (t_max <= 0.0) throw contract_error("t_max must be positive");
    if (save_every < 1) throw contract_error("save_every must be at least 1");
    if (static_cast<int>(ic.size()) != sys.n_states())
        throw contract_error("initial condition length does not match state count");

    CompiledField field(sys, params);
    const int n = field.dim();
    const long steps = std::llround(t_max / dt);
    if (steps < 1) throw contract_error("t_max shorter than one step");

    Trajectory traj;
    traj.state_names = sys.state_vars;
    std::vector<double> x = ic;
    std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);

    auto record = [&](long step) {
        traj.times.push_back(static_cast<double>(step) * dt);
        traj.states.push_back(x);
    };
    record(0);

    for (long s = 1; s <= steps; ++s) {
        field.eval(x.data(), k1.data());
        for (int i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * dt * k1[i];
        field.eval(tmp.data(), k2.data());
        for (int i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * dt * k2[i];
        field.eval(tmp.data(), k3.data());
        for (int i = 0; i < n; ++i) tmp[i] = x[i] + dt * k3[i];
        field.eval(tmp.data(), k4.data());
        for (int i = 0; i < n; ++i) x[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        for (int i = 0; i < n; ++i)
            if (!std::isfinite(x[i]))
                throw math_error("non-finite state at t = " + std::to_string(static_cast<double>(s) * dt) +
                                 " (last good t = " + std::to_string(static_cast<double>(s - 1) * dt) + ")");
        if (s % save_every == 0) record(s);
    }
    return traj;
}

namespace {

// truncated power series in the time variable
using Series = std::vector<double>;

Series series_mul(const Series& a, const Series& b, int upto) {
    Series out(static_cast<size_t>(upto) + 1, 0.0);
    for (size_t i = 0; i < a.size() && i <= static_cast<size_t>(upto); ++i) {
        if (a[i] == 0.0) continue;
        for (size_t j = 0; j + i <= static_cast<size_t>(upto) && j < b.size(); ++j)
            out[i + j] += a[i] * b[j];
    }
    return out;
}

} // namespace

std::vector<std::vector<double>> taylor_jet_numeric(const OdeSystem& sys,
                                                    const std::map<std::string, double>& params,
                                                    const std::vector<double>& point, int upto) {
    if (upto < 1) throw contract_error("jet order must be at least 1");
    OdeSystem fast = sys.time == TimeScale::slow ? rescale_to_fast_time(sys) : sys;
    const int n = fast.n_states();
    if (static_cast<int>(point.size()) != n) throw contract_error("point length does not match state count");
    for (const auto& p : fast.params)
        if (!params.count(p)) throw contract_error("unbound parameter '" + p + "'");

    // state series, coefficients c_0..c_upto
    std::vector<Series> c(static_cast<size_t>(n), Series(static_cast<size_t>(upto) + 1, 0.0));
    for (int i = 0; i < n; ++i) c[static_cast<size_t>(i)][0] = point[static_cast<size_t>(i)];

    for (int k = 0; k < upto; ++k) {
        // F = f(c) truncated at order k, term by term
        for (int i = 0; i < n; ++i) {
            double fk = 0.0;
            for (const Term& t : fast.rhs[static_cast<size_t>(i)].terms()) {
                Series prod(static_cast<size_t>(k) + 1, 0.0);
                prod[0] = t.coeff.to_double();
                for (int v = 0; v < fast.ctx->size(); ++v) {
                    int e = t.mono.exp(v);
                    if (e == 0) continue;
                    const std::string& name = fast.ctx->name(v);
                    int si = fast.state_index(name);
                    if (si < 0) {
                        double pv = std::pow(params.at(name), e);
                        for (double& pc : prod) pc *= pv;
                    } else {
                        for (int rep = 0; rep < e; ++rep)
                            prod = series_mul(prod, c[static_cast<size_t>(si)], k);
                    }
                }
                fk += prod[static_cast<size_t>(k)];
            }
            c[static_cast<size_t>(i)][static_cast<size_t>(k) + 1] = fk / static_cast<double>(k + 1);
        }
    }

    // X^(m) = m! c_m
    std::vector<std::vector<double>> jets;
    double fact = 1.0;
    for (int m = 1; m <= upto; ++m) {
        fact *= static_cast<double>(m);
        std::vector<double> row(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) row[static_cast<size_t>(i)] = fact * c[static_cast<size_t>(i)][static_cast<size_t>(m)];
        jets.push_back(std::move(row));
    }
    return jets;
}

namespace {

double lu_determinant(std::vector<std::vector<double>> m) {
    const size_t n = m.size();
    double det = 1.0;
    for (size_t k = 0; k < n; ++k) {
        size_t piv = k;
        for (size_t i = k + 1; i < n; ++i)
            if (std::fabs(m[i][k]) > std::fabs(m[piv][k])) piv = i;
        if (m[piv][k] == 0.0) return 0.0;
        if (piv != k) {
            std::swap(m[piv], m[k]);
            det = -det;
        }
        det *= m[k][k];
        for (size_t i = k + 1; i < n; ++i) {
            double f = m[i][k] / m[k][k];
            for (size_t j = k; j < n; ++j) m[i][j] -= f * m[k][j];
        }
    }
    return det;
}

} // namespace

double numeric_jet_determinant(const OdeSystem& sys, const std::map<std::string, double>& params,
                               const std::vector<double>& point) {
    auto jets = taylor_jet_numeric(sys, params, point, sys.n_states());
    return lu_determinant(jets);
}

std::vector<double> eval_manifold_along(const Trajectory& traj, const OdeSystem& sys,
                                        const std::map<std::string, Rational>& exact_params,
                                        const ManifoldEq& m, bool normalize) {
    const ContextPtr& ctx = m.phi.context();
    // split phi's context into trajectory states and exact parameters
    std::vector<int> state_slot(static_cast<size_t>(ctx->size()), -1);
    std::vector<Rational> fixed(static_cast<size_t>(ctx->size()), Rational(0));
    for (int v = 0; v < ctx->size(); ++v) {
        const std::string& name = ctx->name(v);
        auto it = std::find(traj.state_names.begin(), traj.state_names.end(), name);
        if (it != traj.state_names.end()) {
            state_slot[static_cast<size_t>(v)] = static_cast<int>(it - traj.state_names.begin());
        } else {
            auto pit = exact_params.find(name);
            if (pit == exact_params.end())
                throw contract_error("manifold variable '" + name + "' neither a trajectory state nor a bound parameter");
            fixed[static_cast<size_t>(v)] = pit->second;
        }
    }

    std::map<std::string, double> dparams;
    for (const auto& [k, v] : exact_params) dparams[k] = v.to_double();

    std::vector<double> out;
    out.reserve(traj.size());
    std::vector<Rational> pt(static_cast<size_t>(ctx->size()));
    for (size_t s = 0; s < traj.size(); ++s) {
        for (int v = 0; v < ctx->size(); ++v) {
            int slot = state_slot[static_cast<size_t>(v)];
            pt[static_cast<size_t>(v)] =
                slot >= 0 ? Rational::from_double(traj.states[s][static_cast<size_t>(slot)])
                          : fixed[static_cast<size_t>(v)];
        }
        double value = m.phi.evaluate(pt).to_double();
        if (normalize) {
            auto jets = taylor_jet_numeric(sys, dparams, traj.states[s], sys.n_states());
            double norm_prod = 1.0;
            for (const auto& row : jets) {
                double nr = 0.0;
                for (double c : row) nr += c * c;
                norm_prod *= std::sqrt(nr);
            }
            value = norm_prod == 0.0 ? 0.0 : value / norm_prod;
        }
        out.push_back(value);
    }
    return out;
}

DriftResult conservation_check(const Trajectory& traj, const Poly& q,
                               const std::map<std::string, double>& params) {
    const ContextPtr& ctx = q.context();
    if (traj.size() == 0) throw contract_error("empty trajectory");

    auto value_at = [&](size_t s) {
        double acc = 0.0;
        for (const Term& t : q.terms()) {
            double v = t.coeff.to_double();
            for (int c = 0; c < ctx->size(); ++c) {
                int e = t.mono.exp(c);
                if (e == 0) continue;
                const std::string& name = ctx->name(c);
                auto it = std::find(traj.state_names.begin(), traj.state_names.end(), name);
                double base;
                if (it != traj.state_names.end())
                    base = traj.states[s][static_cast<size_t>(it - traj.state_names.begin())];
                else if (params.count(name))
                    base = params.at(name);
                else
                    throw contract_error("unbound variable '" + name + "' in conserved quantity");
                for (int k = 0; k < e; ++k) v *= base;
            }
            acc += v;
        }
        return acc;
    };

    double q0 = value_at(0);
    DriftResult res;
    double max_abs = 0.0;
    for (size_t s = 0; s < traj.size(); ++s) max_abs = std::max(max_abs, std::fabs(value_at(s) - q0));
    res.max_abs = max_abs;
    if (q0 != 0.0) res.max_rel = max_abs / std::fabs(q0);
    return res;
}

std::string format_double(double v) {
    char buf[40];
    auto r = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, r.ptr);
}

std::string trajectory_to_csv(const Trajectory& traj) {
    std::string out = "t";
    for (const auto& s : traj.state_names) out += "," + s;
    for (const auto& c : traj.channel_names) out += "," + c;
    out += "\n";
    for (size_t i = 0; i < traj.size(); ++i) {
        out += format_double(traj.times[i]);
        for (size_t v = 0; v < traj.state_names.size(); ++v) out += "," + format_double(traj.states[i][v]);
        for (size_t c = 0; c < traj.channels.size(); ++c) out += "," + format_double(traj.channels[c][i]);
        out += "\n";
    }
    return out;
}

} // namespace flowcurv
