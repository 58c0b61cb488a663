#include "mgc/dynamics.hpp"

#include <algorithm>
#include <string>

#include "mgc/error.hpp"

namespace mgc {
namespace {

void check_sizes(const CoupledModel& model, const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                 const Eigen::VectorXd& c) {
    const auto n = static_cast<Eigen::Index>(model.size());
    if (a.size() != n || b.size() != n || c.size() != n) {
        throw DimensionError("state/input vectors must have " + std::to_string(n) + " entries");
    }
}

}  // namespace

Eigen::VectorXd rhs_unit_gain(const Eigen::VectorXd& delta_v, const Eigen::VectorXd& load_current,
                              const Eigen::VectorXd& v_ref, const CoupledModel& model) {
    check_sizes(model, delta_v, load_current, v_ref);
    return -model.q * (delta_v + v_ref) - model.ld * load_current;
}

Eigen::VectorXd rhs_first_order(const SimState& state, const Eigen::VectorXd& load_current,
                                const Eigen::VectorXd& v_ref, const CoupledModel& model) {
    check_sizes(model, state.delta_v, load_current, v_ref);
    check_sizes(model, state.v, load_current, v_ref);
    if (!(model.omega_c > 0.0)) throw DimensionError("omega_c must be positive");
    const auto n = state.v.size();
    Eigen::VectorXd out(2 * n);
    out.head(n) = -model.q * state.v - model.ld * load_current;
    out.tail(n) = model.omega_c * (state.delta_v - state.v + v_ref);
    return out;
}

SimState step(const CoupledModel& model, const SimState& state, double dt, const Inputs& inputs) {
    if (!(dt > 0.0)) throw DimensionError("time step must be positive");
    SimState next;
    next.t = state.t + dt;
    if (model.mode == PrimaryMode::UnitGain) {
        // V_ref enters only through Q V_ref; fold the constant part once.
        const Eigen::VectorXd forcing = -model.q * inputs.v_ref - model.ld * inputs.load_current;
        check_sizes(model, state.delta_v, inputs.load_current, inputs.v_ref);
        auto f = [&](double, const Eigen::VectorXd& x) -> Eigen::VectorXd { return -model.q * x + forcing; };
        next.delta_v = rk4_step(f, state.t, state.delta_v, dt);
        next.v = next.delta_v + inputs.v_ref;
    } else {
        const auto n = static_cast<Eigen::Index>(model.size());
        Eigen::VectorXd x(2 * n);
        x << state.delta_v, state.v;
        auto f = [&](double, const Eigen::VectorXd& y) -> Eigen::VectorXd {
            SimState s;
            s.delta_v = y.head(n);
            s.v = y.tail(n);
            return rhs_first_order(s, inputs.load_current, inputs.v_ref, model);
        };
        const Eigen::VectorXd y = rk4_step(f, state.t, x, dt);
        next.delta_v = y.head(n);
        next.v = y.tail(n);
    }
    if (!next.delta_v.allFinite() || !next.v.allFinite()) {
        throw NumericalError("non-finite state at t = " + std::to_string(next.t) + " s (dt = " + std::to_string(dt) +
                             ")");
    }
    return next;
}

Outputs compute_outputs(const Eigen::VectorXd& v, const Eigen::VectorXd& load_current,
                        const ElectricalNetwork& network, const ScalingMatrix& scaling) {
    const auto n = static_cast<Eigen::Index>(network.size());
    if (v.size() != n || load_current.size() != n || static_cast<Eigen::Index>(scaling.size()) != n) {
        throw DimensionError("compute_outputs: size mismatch");
    }
    const Eigen::MatrixXd b = incidence_matrix(network);
    Outputs out;
    out.i_line = -(network.conductances().asDiagonal() * (b.transpose() * v));
    out.i_t = load_current - b * out.i_line;
    out.i_pu = scaling.diagonal().cwiseProduct(out.i_t);
    out.v_avg = n > 0 ? v.mean() : 0.0;
    return out;
}

double default_time_step(const CoupledModel& model) {
    double dt = 1e-3;
    if (model.mode == PrimaryMode::FirstOrder) dt = std::min(dt, 0.1 / model.omega_c);
    if (model.size() > 1) {
        const Eigen::VectorXcd ev = model.q.eigenvalues();
        const double rho = ev.cwiseAbs().maxCoeff();
        if (rho > 0.0) dt = std::min(dt, 0.1 / rho);
    }
    return dt;
}

SimState rest_state(const Inputs& inputs) {
    SimState s;
    s.delta_v = Eigen::VectorXd::Zero(inputs.v_ref.size());
    s.v = inputs.v_ref;
    return s;
}

}  // namespace mgc
