#pragma once

#include <cstddef>

#include <Eigen/Dense>

#include "mgc/graph.hpp"
#include "mgc/spectral.hpp"

namespace mgc {

/// How the primary voltage loops are abstracted.
enum class PrimaryMode { UnitGain, FirstOrder };

/// Default primary-loop bandwidth, rad/s.
inline constexpr double kDefaultOmegaC = 2.0 * 3.14159265358979323846 * 100.0;

/// Closed-loop system assembled from the two graphs and the current scaling.
/// Immutable once built.
struct CoupledModel {
    ElectricalNetwork electrical;
    CommNetwork communication;
    ScalingMatrix scaling;
    PrimaryMode mode = PrimaryMode::UnitGain;
    double omega_c = kDefaultOmegaC;

    Eigen::MatrixXd incidence;    // B_el
    Eigen::VectorXd conductance;  // diag(W)
    Eigen::MatrixXd m;            // electrical Laplacian
    Eigen::MatrixXd l;            // k_I * communication Laplacian
    Eigen::MatrixXd q;            // L D M
    Eigen::MatrixXd ld;           // L D

    static CoupledModel assemble(ElectricalNetwork electrical, CommNetwork communication, ScalingMatrix scaling,
                                 PrimaryMode mode = PrimaryMode::UnitGain, double omega_c = kDefaultOmegaC);

    [[nodiscard]] std::size_t size() const noexcept { return electrical.size(); }
    [[nodiscard]] SpectralReport analyze() const;
};

/// The 2N x 2N matrix [[0, -Q], [w_c I, -w_c I]] of the first-order closed loop.
[[nodiscard]] Eigen::MatrixXd first_order_system_matrix(const Eigen::MatrixXd& q, double omega_c);

}  // namespace mgc
