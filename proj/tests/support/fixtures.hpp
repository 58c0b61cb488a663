#pragma once

#include <vector>

#include "mgc/graph.hpp"
#include "mgc/model.hpp"
#include "mgc/scenario.hpp"
#include "mgc/spectral.hpp"

namespace fixtures {

// Two DGUs, one line; D = I and communication equal to the electrical Laplacian.
inline mgc::CoupledModel two_node(double resistance = 1.0, mgc::PrimaryMode mode = mgc::PrimaryMode::UnitGain,
                                  double omega_c = mgc::kDefaultOmegaC) {
    mgc::ElectricalNetwork el({1, 2}, {{1, 2, resistance, 1e-6}});
    auto comm = mgc::comm_from_electrical(el, 1.0);
    return mgc::CoupledModel::assemble(std::move(el), std::move(comm), mgc::ScalingMatrix::identity(2), mode, omega_c);
}

// Seven-DGU network with every line closed and rated-current scaling.
inline mgc::CoupledModel seven_dgu(mgc::PrimaryMode mode = mgc::PrimaryMode::FirstOrder) {
    auto sc = mgc::builtin_stage_scenario();
    sc.settings.mode = mode;
    return mgc::full_grid(sc).model();
}

inline Eigen::VectorXd vec(std::initializer_list<double> xs) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) v(i++) = x;
    return v;
}

}  // namespace fixtures
