#include "mgc/model.hpp"

#include <utility>

#include "mgc/error.hpp"

namespace mgc {

CoupledModel CoupledModel::assemble(ElectricalNetwork electrical, CommNetwork communication, ScalingMatrix scaling,
                                    PrimaryMode mode, double omega_c) {
    if (scaling.size() != electrical.size()) throw DimensionError("scaling matrix does not match the network size");
    if (mode == PrimaryMode::FirstOrder && !(omega_c > 0.0)) throw DimensionError("omega_c must be positive");

    CoupledModel model;
    model.incidence = incidence_matrix(electrical);
    model.conductance = electrical.conductances();
    auto pair = laplacians(electrical, communication);
    model.m = std::move(pair.electrical);
    model.l = std::move(pair.communication);
    model.ld = model.l * scaling.diagonal().asDiagonal();
    model.q = model.ld * model.m;
    model.electrical = std::move(electrical);
    model.communication = std::move(communication);
    model.scaling = std::move(scaling);
    model.mode = mode;
    model.omega_c = omega_c;
    return model;
}

SpectralReport CoupledModel::analyze() const { return analyze_q(q, scaling, l, m); }

Eigen::MatrixXd first_order_system_matrix(const Eigen::MatrixXd& q, double omega_c) {
    const auto n = q.rows();
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    a.topRightCorner(n, n) = -q;
    a.bottomLeftCorner(n, n).diagonal().setConstant(omega_c);
    a.bottomRightCorner(n, n).diagonal().setConstant(-omega_c);
    return a;
}

}  // namespace mgc
