#pragma once

#include <cmath>

#include <Eigen/Dense>

#include "mgc/graph.hpp"
#include "mgc/model.hpp"
#include "mgc/spectral.hpp"

namespace mgc {

/// State of a run. In unit-gain mode v is not integrated; it is kept equal to delta_v + v_ref.
struct SimState {
    double t = 0.0;
    Eigen::VectorXd delta_v;  // secondary corrections, V
    Eigen::VectorXd v;        // PCC voltages, V
};

/// Piecewise-constant exogenous inputs.
struct Inputs {
    Eigen::VectorXd load_current;  // I_L, A
    Eigen::VectorXd v_ref;         // V
};

struct Outputs {
    Eigen::VectorXd i_line;  // A, positive along line orientation
    Eigen::VectorXd i_t;     // DGU output currents, A
    Eigen::VectorXd i_pu;    // d_i * I_ti
    double v_avg = 0.0;
};

/// -Q dV - L D I_L - Q V_ref
[[nodiscard]] Eigen::VectorXd rhs_unit_gain(const Eigen::VectorXd& delta_v, const Eigen::VectorXd& load_current,
                                            const Eigen::VectorXd& v_ref, const CoupledModel& model);

/// Stacked [d(dV)/dt; dV/dt] with d(dV)/dt = -Q V - L D I_L and dV/dt = w_c (dV - V + V_ref).
[[nodiscard]] Eigen::VectorXd rhs_first_order(const SimState& state, const Eigen::VectorXd& load_current,
                                              const Eigen::VectorXd& v_ref, const CoupledModel& model);

/// One classical Runge-Kutta step of f(t, x) over h.
template <typename F>
[[nodiscard]] Eigen::VectorXd rk4_step(F&& f, double t, const Eigen::VectorXd& x, double h) {
    const Eigen::VectorXd k1 = f(t, x);
    const Eigen::VectorXd k2 = f(t + 0.5 * h, x + 0.5 * h * k1);
    const Eigen::VectorXd k3 = f(t + 0.5 * h, x + 0.5 * h * k2);
    const Eigen::VectorXd k4 = f(t + h, x + h * k3);
    return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// Advances the closed loop selected by model.mode by dt. Throws NumericalError on NaN/Inf.
[[nodiscard]] SimState step(const CoupledModel& model, const SimState& state, double dt, const Inputs& inputs);

/// I_line = -W B^T V, I_t = I_L - B I_line, I_pu = D I_t.
[[nodiscard]] Outputs compute_outputs(const Eigen::VectorXd& v, const Eigen::VectorXd& load_current,
                                      const ElectricalNetwork& network, const ScalingMatrix& scaling);

/// min(1e-3, 0.1 / w_c (first-order only), 0.1 / rho(Q)).
[[nodiscard]] double default_time_step(const CoupledModel& model);

/// Initial state with dV = 0 and V = V_ref.
[[nodiscard]] SimState rest_state(const Inputs& inputs);

}  // namespace mgc
