#ifndef FLOWCURV_NUMERICS_HPP
#define FLOWCURV_NUMERICS_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "flowcurv/flow.hpp"
#include "flowcurv/odesystem.hpp"

namespace flowcurv {

/// Uniformly sampled state history plus named diagnostic channels.
struct Trajectory {
    std::vector<std::string> state_names;
    std::vector<double> times;
    std::vector<std::vector<double>> states; // [sample][state]
    std::vector<std::string> channel_names;
    std::vector<std::vector<double>> channels; // [channel][sample]

    size_t size() const { return times.size(); }
    void add_channel(std::string name, std::vector<double> values);
};

/// Right-hand sides lowered to plain doubles with all parameters bound.
class CompiledField {
  public:
    CompiledField(const OdeSystem& sys, const std::map<std::string, double>& params);

    int dim() const { return n_; }
    void eval(const double* x, double* dxdt) const;

  private:
    struct CTerm {
        double coeff;
        std::vector<std::pair<int, int>> pows; // (state index, exponent)
    };
    int n_;
    std::vector<std::vector<CTerm>> rhs_;
};

/// Classical fixed-step RK4 on the fast-time form of the system.
/// Samples are recorded every save_every steps (the grid stays
/// uniform). Throws math_error on the first non-finite state.
Trajectory integrate(const OdeSystem& sys, const std::map<std::string, double>& params,
                     const std::vector<double>& ic, double t_max, double dt, int save_every = 1);

/// Taylor coefficients of the solution through a point, computed by
/// truncated power-series arithmetic on the rhs (independent of the
/// symbolic jet machinery). Entry k-1 holds X^(k) = k! c_k.
std::vector<std::vector<double>> taylor_jet_numeric(const OdeSystem& sys,
                                                    const std::map<std::string, double>& params,
                                                    const std::vector<double>& point, int upto);

/// Numeric determinant of the n x n matrix with rows X^(1)..X^(n)
/// from taylor_jet_numeric (LU with partial pivoting).
double numeric_jet_determinant(const OdeSystem& sys, const std::map<std::string, double>& params,
                               const std::vector<double>& point);

/// phi along the trajectory. States are converted to exact rationals
/// sample by sample, phi is evaluated exactly with exact parameter
/// values, and the result is rounded once. With normalize the value
/// is divided by the product of the Euclidean norms of the numeric
/// derivative rows (0/0 -> 0).
std::vector<double> eval_manifold_along(const Trajectory& traj, const OdeSystem& sys,
                                        const std::map<std::string, Rational>& exact_params,
                                        const ManifoldEq& m, bool normalize);

struct DriftResult {
    double max_abs = 0.0;
    std::optional<double> max_rel; // empty when the initial value is 0
};

/// Drift of a conserved quantity q(state) along the trajectory,
/// relative to its initial value.
DriftResult conservation_check(const Trajectory& traj, const Poly& q,
                               const std::map<std::string, double>& params);

/// CSV with header t,<states>[,<channels>]; floats in shortest
/// round-trip form.
std::string trajectory_to_csv(const Trajectory& traj);

std::string format_double(double v);

} // namespace flowcurv

#endif
